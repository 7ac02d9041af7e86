"""사건의 세분 A → A′"""
import itertools
from dataclasses import dataclass

from app.analyser import RefinementMap
from app.core.errors import InvalidEventError
from app.histories.space import Event, History, HistorySpace


@dataclass(frozen=True)
class RefinedEvent:
    parent_event: Event
    child_event: Event


def refine_event(rm: RefinementMap, event: Event) -> RefinedEvent:
    """A′ = {ω′ : 어떤 ω ∈ A 에 대해 모든 부모 시간 t 에서 ω′(t) ∈ Γ′_{ω(t)}(t)}

    부모에 없는 자식 시간의 라벨은 제한하지 않습니다.

    Raises:
        InvalidEventError: 부모 history 공간의 사건이 아닌 경우
        RefinementError: 세분 사상에 없는 라벨
    """
    parent_space = HistorySpace.from_analyser(rm.parent)
    if event.space != parent_space:
        raise InvalidEventError(f"event {event.label()} is not an event of the parent history space")
    child_space = HistorySpace.from_analyser(rm.child)
    positions = {t: i for i, t in enumerate(parent_space.times)}

    histories: set[History] = set()
    for history in event.histories:
        allowed = []
        for t, labels in zip(child_space.times, child_space.labels_per_time):
            if t in positions:
                kids = rm.children(t, history[positions[t]])
                allowed.append([label for label in labels if label in kids])
            else:
                allowed.append(list(labels))
        histories.update(itertools.product(*allowed))
    name = f"{event.name}′" if event.name else None
    return RefinedEvent(event, Event(child_space, frozenset(histories), name))
