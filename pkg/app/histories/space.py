"""
유한 history 공간 Ω = ×_{t∈S} Γ(t) 와 사건(Event).

history ω는 시간 순서대로 나열한 라벨 튜플이다. 유한 Ω에서는 모든 부분집합이 사건이다.
"""
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

from app.analyser import Analyser, TimeLike, canonical_time
from app.core.errors import InvalidEventError, UnknownLabelError, UnknownTimeError

History = tuple[str, ...]


@dataclass(frozen=True)
class HistorySpace:
    times: tuple[str, ...]
    labels_per_time: tuple[tuple[str, ...], ...]

    @classmethod
    def from_analyser(cls, an: Analyser) -> "HistorySpace":
        return cls(an.times, tuple(an.labels(t) for t in an.times))

    @property
    def size(self) -> int:
        count = 1
        for labels in self.labels_per_time:
            count *= len(labels)
        return count

    def histories(self) -> Iterator[History]:
        """모든 ω를 사전식(라벨 인덱스) 순서로 나열"""
        return itertools.product(*self.labels_per_time)

    def time_index(self, t: TimeLike) -> int:
        key = canonical_time(t)
        try:
            return self.times.index(key)
        except ValueError as e:
            raise UnknownTimeError(f"unknown time {key}; history times are {list(self.times)}") from e

    def labels(self, t: TimeLike) -> tuple[str, ...]:
        return self.labels_per_time[self.time_index(t)]

    def contains(self, history: History) -> bool:
        return len(history) == len(self.times) and all(
            label in labels for label, labels in zip(history, self.labels_per_time))

    def assignment(self, history: History) -> dict[str, str]:
        return dict(zip(self.times, history))

    def history_index(self, history: History) -> tuple[int, ...]:
        return tuple(labels.index(label) for label, labels in zip(history, self.labels_per_time))


@dataclass(frozen=True)
class Event:
    """Ω의 부분집합 A"""

    space: HistorySpace
    histories: frozenset[History]
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        bad = [h for h in self.histories if not self.space.contains(h)]
        if bad:
            raise InvalidEventError(f"histories {sorted(bad)[:3]} are not in the history space")

    @classmethod
    def explicit(cls, space: HistorySpace, histories: Iterable[Iterable[str]],
                 name: Optional[str] = None) -> "Event":
        return cls(space, frozenset(tuple(str(a) for a in h) for h in histories), name)

    @classmethod
    def cylinder(cls, space: HistorySpace, constraints: Mapping[TimeLike, Iterable[str]],
                 name: Optional[str] = None) -> "Event":
        """{ω : ω(t) ∈ G_t for each constrained t} 형태의 사건

        Raises:
            InvalidEventError: 시간이나 라벨이 공간에 없는 경우
        """
        allowed = [set(labels) for labels in space.labels_per_time]
        for raw_time, labels in constraints.items():
            try:
                index = space.time_index(raw_time)
            except UnknownTimeError as e:
                raise InvalidEventError(str(e)) from e
            chosen = {str(a) for a in labels}
            unknown = chosen.difference(space.labels_per_time[index])
            if unknown:
                raise InvalidEventError(
                    f"labels {sorted(unknown)} are not in Γ({space.times[index]})")
            allowed[index] &= chosen
        ordered = [[a for a in labels if a in keep] for labels, keep in zip(space.labels_per_time, allowed)]
        return cls(space, frozenset(itertools.product(*ordered)), name)

    @classmethod
    def everything(cls, space: HistorySpace, name: Optional[str] = "Omega") -> "Event":
        return cls(space, frozenset(space.histories()), name)

    @classmethod
    def empty(cls, space: HistorySpace, name: Optional[str] = "empty") -> "Event":
        return cls(space, frozenset(), name)

    def _same_space(self, other: "Event") -> None:
        if other.space != self.space:
            raise InvalidEventError("events belong to different history spaces")

    def complement(self) -> "Event":
        rest = frozenset(h for h in self.space.histories() if h not in self.histories)
        return Event(self.space, rest, f"not({self.name})" if self.name else None)

    def union(self, other: "Event") -> "Event":
        self._same_space(other)
        return Event(self.space, self.histories | other.histories)

    def intersection(self, other: "Event") -> "Event":
        self._same_space(other)
        return Event(self.space, self.histories & other.histories)

    def issubset(self, other: "Event") -> bool:
        self._same_space(other)
        return self.histories <= other.histories

    def isdisjoint(self, other: "Event") -> bool:
        self._same_space(other)
        return self.histories.isdisjoint(other.histories)

    def sorted_histories(self) -> list[History]:
        return sorted(self.histories, key=self.space.history_index)

    def label(self) -> str:
        return self.name or f"<{len(self.histories)} histories>"

    def __len__(self) -> int:
        return len(self.histories)

    def __contains__(self, history: object) -> bool:
        return history in self.histories


def single_time_events(space: HistorySpace) -> list[Event]:
    """모든 단일 시간 원통 사건 X_t = a"""
    return [
        Event.cylinder(space, {t: [a]}, name=f"X_{t}={a}")
        for t, labels in zip(space.times, space.labels_per_time)
        for a in labels
    ]


def check_label(space: HistorySpace, t: TimeLike, label: str) -> None:
    if str(label) not in space.labels(t):
        raise UnknownLabelError(f"unknown label {label!r} at time {canonical_time(t)}")
