"""
항등 분할(Partition)과 analyser π 모델.

Partition은 라벨이 붙은 사영들의 묶음으로 합이 I이고 서로 직교한다.
Analyser는 유한한 시간 집합 S의 각 시간마다 Partition을 하나씩 가진다.
시간 라벨은 정규화된 10진 문자열로 비교한다(부동소수 허용오차로 비교하지 않는다).
"""
import logging
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from app.core.config import Tolerances, tolerances_for
from app.core.errors import DimensionMismatchError, InputError, PartitionError, UnknownLabelError, UnknownTimeError
from app.linalg import CMatrix, Projector, operator_norm

logger = logging.getLogger(__name__)

TimeLike = Union[int, float, str, Decimal]


def canonical_time(value: TimeLike) -> str:
    """시간 값을 정규화된 10진 문자열로 변환합니다.

    1, 1.0, "1.00" 은 모두 "1" 이 되고 0.5 는 "0.5" 가 됩니다.

    Raises:
        UnknownTimeError: 숫자로 해석할 수 없는 값인 경우
    """
    try:
        number = Decimal(value.strip()) if isinstance(value, str) else Decimal(str(value))
    except (InvalidOperation, ValueError, TypeError) as e:
        raise UnknownTimeError(f"time label {value!r} is not a number") from e
    if not number.is_finite():
        raise UnknownTimeError(f"time label {value!r} is not finite")
    if number == 0:
        return "0"
    return format(number.normalize(), "f")


def time_value(label: TimeLike) -> float:
    return float(Decimal(canonical_time(label)))


@dataclass(frozen=True, eq=False)
class Partition:
    """하나의 시간에서의 항등 분할 {p_a : a ∈ Γ}"""

    labels: tuple[str, ...]
    """불투명한 라벨 문자열 목록 Γ"""
    cells: tuple[Projector, ...]
    """라벨 순서와 같은 순서의 셀 사영"""

    @property
    def dim(self) -> int:
        return self.cells[0].dim

    def cell(self, label: str) -> Projector:
        try:
            return self.cells[self.labels.index(str(label))]
        except ValueError as e:
            raise UnknownLabelError(f"unknown label {label!r}; expected one of {list(self.labels)}") from e

    def index(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError as e:
            raise UnknownLabelError(f"unknown label {label!r}") from e

    def items(self) -> Iterable[tuple[str, Projector]]:
        return zip(self.labels, self.cells)

    def __len__(self) -> int:
        return len(self.labels)


def validate_partition(cells: Union[Sequence[Projector], Mapping[str, Projector]],
                       labels: Optional[Sequence[str]] = None,
                       tol: Optional[Tolerances] = None,
                       time: Optional[str] = None) -> Partition:
    """셀 목록이 항등 분할을 이루는지 검증합니다.

    직교성은 가정하지 않고 ||p_a p_b|| 로 다시 확인한 뒤, 합이 I 인지 확인합니다.
    라벨이 없으면 "1", "2", ... 를 붙입니다.

    Args:
        cells: 셀 사영 목록 또는 라벨 → 사영 매핑
        labels (Optional[Sequence[str]], optional): 라벨 목록. Defaults to None.
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.
        time (Optional[str], optional): 오류 메시지에 쓸 시간 라벨. Defaults to None.

    Raises:
        PartitionError: 셀이 겹치거나 합이 I가 아닌 경우

    Returns:
        Partition: 검증된 분할
    """
    where = f" at time {time}" if time is not None else ""
    if isinstance(cells, Mapping):
        labels = [str(label) for label in cells.keys()]
        cells = list(cells.values())
    cells = list(cells)
    if not cells:
        raise PartitionError(f"partition has no cells{where}")
    labels = [str(label) for label in labels] if labels is not None else [str(i + 1) for i in range(len(cells))]
    if len(labels) != len(cells):
        raise PartitionError(f"partition has {len(cells)} cells but {len(labels)} labels{where}")
    if len(set(labels)) != len(labels):
        raise PartitionError(f"partition labels are not distinct{where}")
    dims = {cell.dim for cell in cells}
    if len(dims) != 1:
        raise DimensionMismatchError(f"partition cells have different dimensions {sorted(dims)}{where}")
    dim = dims.pop()
    tol = tolerances_for(dim, tol)

    for i, first in enumerate(cells):
        for j in range(i + 1, len(cells)):
            overlap = operator_norm(first.matrix @ cells[j].matrix)
            if overlap > tol.op:
                raise PartitionError(
                    f"partition cells overlap{where}: ||p_{labels[i]} p_{labels[j]}|| = {overlap:.3e}")

    deviation = operator_norm(sum(cell.matrix for cell in cells) - np.eye(dim))
    if deviation > tol.op:
        raise PartitionError(f"partition cells do not sum to the identity{where} (deviation {deviation:.3e})")
    return Partition(tuple(labels), tuple(cells))


@dataclass(frozen=True, eq=False)
class Analyser:
    """analyser π = {p^t_a : t ∈ S, a ∈ Γ(t)}

    times는 수치 순서로 정렬된 정규화 시간 라벨이며 partitions는 시간 라벨로 색인된다.
    Heisenberg 구성에서 만들어진 경우 생성자 H와 기준 분할을 함께 보관한다.
    """

    times: tuple[str, ...]
    partitions: Mapping[str, Partition]
    hamiltonian: Optional[CMatrix] = field(default=None, repr=False)
    base: Optional[Partition] = field(default=None, repr=False)

    @classmethod
    def build(cls, partitions: Mapping[TimeLike, Partition],
              hamiltonian: Optional[CMatrix] = None,
              base: Optional[Partition] = None) -> "Analyser":
        """시간 → 분할 매핑으로 Analyser를 만듭니다.

        Raises:
            InputError: 시간이 비어 있거나 정규화 후 중복되는 경우
            DimensionMismatchError: 분할들의 차원이 다른 경우
        """
        if not partitions:
            raise InputError("an analyser needs at least one time")
        canonical: dict[str, Partition] = {}
        for raw_time, partition in partitions.items():
            key = canonical_time(raw_time)
            if key in canonical:
                raise InputError(f"duplicate time label {key}")
            canonical[key] = partition
        dims = {p.dim for p in canonical.values()}
        if len(dims) != 1:
            raise DimensionMismatchError(f"partitions have different dimensions {sorted(dims)}")
        times = tuple(sorted(canonical, key=time_value))
        ordered = {t: canonical[t] for t in times}
        return cls(times, MappingProxyType(ordered), hamiltonian, base)

    @property
    def dim(self) -> int:
        return self.partitions[self.times[0]].dim

    def partition(self, t: TimeLike) -> Partition:
        key = canonical_time(t)
        if key not in self.partitions:
            raise UnknownTimeError(f"unknown time {key}; analyser times are {list(self.times)}")
        return self.partitions[key]

    def labels(self, t: TimeLike) -> tuple[str, ...]:
        return self.partition(t).labels

    def cell(self, t: TimeLike, label: str) -> Projector:
        return self.partition(t).cell(label)

    def time_index(self, t: TimeLike) -> int:
        key = canonical_time(t)
        if key not in self.partitions:
            raise UnknownTimeError(f"unknown time {key}")
        return self.times.index(key)

    @property
    def history_count(self) -> int:
        count = 1
        for t in self.times:
            count *= len(self.partitions[t])
        return count

    def restrict(self, keep_times: Iterable[TimeLike]) -> "Analyser":
        """일부 시간만 남긴 analyser π(D)"""
        keys = [canonical_time(t) for t in keep_times]
        return Analyser.build({t: self.partition(t) for t in keys})

    def describe(self) -> dict[str, Any]:
        return {
            "dim": self.dim,
            "times": list(self.times),
            "labels": {t: list(self.partitions[t].labels) for t in self.times},
            "histories": self.history_count,
        }
