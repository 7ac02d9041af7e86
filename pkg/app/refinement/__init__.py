from .events import RefinedEvent, refine_event
from .theorem import check_refinement_theorem

__all__ = ["RefinedEvent", "check_refinement_theorem", "refine_event"]
