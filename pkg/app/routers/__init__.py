from .info import router as info_router
from .runs import router as runs_router
from .scenarios import router as scenarios_router

__all__ = ["info_router", "runs_router", "scenarios_router"]
