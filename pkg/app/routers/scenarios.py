"""내장 시나리오 목록 라우터"""
from fastapi import APIRouter

from app.analyser.scenarios import list_scenarios
from app.models import ScenarioEntry

router = APIRouter(prefix="/api/scenarios", tags=["scenarios"])


@router.get("", response_model=list[ScenarioEntry])
async def get_scenarios() -> list[ScenarioEntry]:
    """이름 순으로 정렬된 내장 시나리오 목록을 반환합니다."""
    return [
        ScenarioEntry(name=info.name, description=info.description, topic=info.topic,
                      anchor=info.anchor, params=dict(info.params))
        for info in list_scenarios()
    ]
