"""
historylab API

FastAPI 애플리케이션. 시나리오 목록 조회와 시나리오 실행(요청/응답)만 제공한다.
"""
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.core import settings
from app.core.log import setup_logging
from app.routers import info_router, runs_router, scenarios_router

setup_logging()

app = FastAPI(
    title=settings.app_name,
    version=settings.version,
    description="Run history-space analyser scenarios and report their numerical checks",
)
"""FastAPI 애플리케이션 인스턴스를 생성"""

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(info_router)
app.include_router(scenarios_router)
app.include_router(runs_router)


@app.get("/health")
async def health_check() -> dict[str, str]:
    """헬스 체크 엔드포인트.
    Returns:
        dict[str, str]: 상태와 버전 정보를 담은 딕셔너리
    """
    return {"status": "healthy", "version": settings.version}
