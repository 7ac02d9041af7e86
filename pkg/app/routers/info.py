"""
historylab API 정보 라우터

API의 엔드포인트 목록과 내장 시나리오 이름을 반환한다.
"""

from typing import Any
from fastapi import APIRouter

from app.analyser.scenarios import list_scenarios
from app.core import settings
from app.models.scenario import ALL_TASKS

router = APIRouter(prefix="/api", tags=["info"])


@router.get("/")
async def api_info() -> dict[str, Any]:
    """API 정보를 반환

    API의 제목, 버전, 사용 가능한 엔드포인트, 작업 이름, 내장 시나리오 이름을 반환합니다.
    """
    return {
        "title": settings.app_name,
        "version": settings.version,
        "description": "Run history-space analyser scenarios and their numerical checks",
        "endpoints": {
            "GET /api/scenarios": "List built-in scenarios",
            "POST /api/runs": "Run a scenario given as JSON",
            "POST /api/runs/upload": "Run an uploaded scenario file",
        },
        "tasks": list(ALL_TASKS),
        "scenarios": [info.name for info in list_scenarios()],
    }
