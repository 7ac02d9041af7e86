"""
시나리오 실행 라우터

JSON 본문 또는 업로드한 시나리오 파일을 실행하고 RunReport를 돌려준다.
실행은 CPU 위주이므로 동기 핸들러로 두어 스레드 풀에서 처리되게 한다.
"""
import logging

from fastapi import APIRouter, File, UploadFile

from app.core.errors import InputError
from app.models import RunResponse, Scenario
from app.runner import EXIT_INPUT_ERROR, parse_scenario_text, run_scenario

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/runs", tags=["runs"])


def execute(scenario: Scenario) -> RunResponse:
    """시나리오를 실행하고 CLI와 같은 종료 코드를 담아 응답을 만듭니다.

    Args:
        scenario (Scenario): 검증된 시나리오

    Returns:
        RunResponse: 성공 시 보고서, 입력 오류 시 error와 exit_code 1
    """
    try:
        outcome = run_scenario(scenario)
    except InputError as e:
        logger.info("rejected scenario: %s", e)
        return RunResponse(success=False, error=str(e), exit_code=EXIT_INPUT_ERROR)
    return RunResponse(success=True, report=outcome.report, exit_code=outcome.exit_code)


@router.post("", response_model=RunResponse)
def run_json(scenario: Scenario) -> RunResponse:
    """JSON 본문으로 받은 시나리오를 실행"""
    return execute(scenario)


@router.post("/upload", response_model=RunResponse)
def run_upload(file: UploadFile = File(...)) -> RunResponse:
    """업로드한 시나리오 파일을 CLI와 같은 방식으로 읽어 실행

    Args:
        file (UploadFile): JSON 시나리오 파일

    Returns:
        RunResponse: 실행 결과
    """
    try:
        scenario = parse_scenario_text(file.file.read(), file.filename or "<upload>")
    except InputError as e:
        return RunResponse(success=False, error=str(e), exit_code=EXIT_INPUT_ERROR)
    return execute(scenario)
