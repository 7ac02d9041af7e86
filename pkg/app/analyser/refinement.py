"""
analyser의 세분(refinement)과 병합(coarsening).

RefinementMap은 부모 analyser의 각 (t, a) 셀을 자식 라벨 집합 Γ'_a(t)로 보내며
부모 셀 p^t_a 는 자식 셀들의 합과 같다. coarsen은 같은 타입을 역할을 바꿔 돌려준다.
"""
import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

import numpy as np

from app.core.config import Tolerances, tolerances_for
from app.core.errors import InputError, RefinementError, UnknownLabelError
from app.linalg import Projector, operator_norm
from .partition import Analyser, Partition, TimeLike, canonical_time, validate_partition

logger = logging.getLogger(__name__)

CellKey = tuple[str, str]


@dataclass(frozen=True, eq=False)
class RefinementMap:
    """부모 π 와 그 세분 π′, 그리고 셀 사상 (t, a) → Γ'_a(t)"""

    parent: Analyser
    child: Analyser
    cell_map: Mapping[CellKey, frozenset[str]]

    def children(self, t: TimeLike, label: str) -> frozenset[str]:
        key = (canonical_time(t), str(label))
        if key not in self.cell_map:
            raise RefinementError(f"label {label!r} at time {key[0]} is outside the refinement cell map")
        return self.cell_map[key]

    def parent_label(self, t: TimeLike, child_label: str) -> str:
        time = canonical_time(t)
        for (cell_time, label), kids in self.cell_map.items():
            if cell_time == time and child_label in kids:
                return label
        raise UnknownLabelError(f"child label {child_label!r} at time {time} has no parent cell")

    @property
    def extra_times(self) -> tuple[str, ...]:
        return tuple(t for t in self.child.times if t not in self.parent.partitions)


def validate_refinement(parent: Analyser, child: Analyser, cell_map: Mapping[CellKey, Iterable[str]],
                        tol: Optional[Tolerances] = None) -> RefinementMap:
    """세분 관계의 모든 불변식을 확인하고 RefinementMap을 만듭니다.

    Raises:
        RefinementError: 시간 포함 관계, Γ'_a(t) 분할, 셀 합 조건 중 하나라도 어긋나는 경우
    """
    tol = tolerances_for(parent.dim, tol)
    if parent.dim != child.dim:
        raise RefinementError("parent and child analysers act on different dimensions")
    missing = [t for t in parent.times if t not in child.partitions]
    if missing:
        raise RefinementError(f"child analyser is missing parent times {missing}")

    frozen_map: dict[CellKey, frozenset[str]] = {}
    for t in parent.times:
        child_partition = child.partitions[t]
        covered: list[str] = []
        for label, cell in parent.partitions[t].items():
            kids = frozenset(str(k) for k in cell_map.get((t, label), ()))
            if not kids:
                raise RefinementError(f"cell {label!r} at time {t} has no child labels")
            unknown = kids.difference(child_partition.labels)
            if unknown:
                raise RefinementError(f"child labels {sorted(unknown)} at time {t} do not exist")
            total = sum(child_partition.cell(k).matrix for k in kids)
            deviation = operator_norm(total - cell.matrix)
            if deviation > tol.op:
                raise RefinementError(
                    f"child cells {sorted(kids)} at time {t} do not sum to parent cell {label!r} "
                    f"(deviation {deviation:.3e})")
            covered.extend(kids)
            frozen_map[(t, label)] = kids
        if sorted(covered) != sorted(child_partition.labels):
            raise RefinementError(f"child label groups at time {t} do not partition Γ'({t})")
    return RefinementMap(parent, child, MappingProxyType(frozen_map))


def refine(parent: Analyser,
           cell_splits: Optional[Mapping[tuple[TimeLike, str], Mapping[str, Projector]]] = None,
           extra_times: Optional[Mapping[TimeLike, Partition]] = None,
           tol: Optional[Tolerances] = None) -> RefinementMap:
    """셀을 쪼개고 시간을 추가해 세분을 만듭니다.

    나누지 않은 셀은 같은 라벨로 자식에 그대로 남습니다.

    Args:
        parent (Analyser): 부모 analyser π
        cell_splits: (t, a) → {자식 라벨: 사영} 하위 분할
        extra_times: 추가할 시간 → 분할
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

    Raises:
        RefinementError: 하위 분할의 합이 부모 셀과 다르거나 시간이 겹치는 경우

    Returns:
        RefinementMap: 부모 → 자식 세분 사상
    """
    tol = tolerances_for(parent.dim, tol)
    splits = {(canonical_time(t), str(a)): dict(sub) for (t, a), sub in (cell_splits or {}).items()}
    for (t, a) in splits:
        parent.cell(t, a)

    partitions: dict[str, Partition] = {}
    cell_map: dict[CellKey, list[str]] = {}
    for t in parent.times:
        labels: list[str] = []
        cells: list[Projector] = []
        for label, cell in parent.partitions[t].items():
            sub = splits.get((t, label))
            if not sub:
                labels.append(label)
                cells.append(cell)
                cell_map[(t, label)] = [label]
                continue
            deviation = operator_norm(sum(p.matrix for p in sub.values()) - cell.matrix)
            if deviation > tol.op:
                raise RefinementError(
                    f"sub-partition of cell {label!r} at time {t} does not sum to the parent cell "
                    f"(deviation {deviation:.3e})")
            for kid, projector in sub.items():
                labels.append(str(kid))
                cells.append(projector)
            cell_map[(t, label)] = [str(kid) for kid in sub]
        try:
            partitions[t] = validate_partition(cells, labels, tol, t)
        except InputError as e:
            raise RefinementError(f"refined partition at time {t} is invalid: {e}") from e

    for raw_time, partition in (extra_times or {}).items():
        key = canonical_time(raw_time)
        if key in partitions:
            raise RefinementError(f"extra time {key} already belongs to the parent analyser")
        partitions[key] = partition

    child = Analyser.build(partitions)
    logger.debug("refined analyser: %d -> %d times", len(parent.times), len(child.times))
    return validate_refinement(parent, child, cell_map, tol)


def coarsen(parent: Analyser,
            label_merge: Optional[Mapping[TimeLike, Mapping[str, Iterable[str]]]] = None,
            keep_times: Optional[Iterable[TimeLike]] = None,
            tol: Optional[Tolerances] = None) -> RefinementMap:
    """라벨을 병합하고 일부 시간만 남겨 병합 analyser를 만듭니다.

    반환값의 parent가 새로 만든 병합 analyser이고 child가 입력 analyser입니다.

    Args:
        parent (Analyser): 병합할 analyser
        label_merge: 시간 → {새 라벨: 기존 라벨 목록}. 지정하지 않은 시간은 그대로 둔다.
        keep_times: 남길 시간. Defaults to 전체 S.
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

    Raises:
        RefinementError: 그룹이 Γ(t)를 분할하지 않거나 keep_times가 S의 부분집합이 아닌 경우

    Returns:
        RefinementMap: 병합 analyser → 입력 analyser
    """
    tol = tolerances_for(parent.dim, tol)
    keep = [canonical_time(t) for t in keep_times] if keep_times is not None else list(parent.times)
    unknown = [t for t in keep if t not in parent.partitions]
    if unknown:
        raise RefinementError(f"keep_times {unknown} are not times of the analyser")
    merges = {canonical_time(t): groups for t, groups in (label_merge or {}).items()}
    dropped = [t for t in merges if t not in keep]
    if dropped:
        raise RefinementError(f"label merges given for dropped times {dropped}")

    partitions: dict[str, Partition] = {}
    cell_map: dict[CellKey, list[str]] = {}
    for t in keep:
        fine = parent.partitions[t]
        groups = merges.get(t) or {label: [label] for label in fine.labels}
        grouped = [str(label) for members in groups.values() for label in members]
        if sorted(grouped) != sorted(fine.labels):
            raise RefinementError(f"invalid grouping at time {t}: groups must partition {list(fine.labels)}")
        labels = [str(new) for new in groups]
        cells = [
            Projector.from_matrix(np.sum([fine.cell(m).matrix for m in members], axis=0), tol)
            for members in groups.values()
        ]
        partitions[t] = validate_partition(cells, labels, tol, t)
        for new, members in groups.items():
            cell_map[(t, str(new))] = [str(m) for m in members]

    coarse = Analyser.build(partitions)
    return validate_refinement(coarse, parent, cell_map, tol)


def compose(outer: RefinementMap, inner: RefinementMap, tol: Optional[Tolerances] = None) -> RefinementMap:
    """π ← π′ ← π″ 를 π ← π″ 로 합성합니다.

    Raises:
        RefinementError: outer.child 와 inner.parent 가 같은 analyser가 아닌 경우
    """
    if not analysers_equivalent(outer.child, inner.parent, tol):
        raise RefinementError("refinements do not chain: outer child differs from inner parent")
    cell_map: dict[CellKey, set[str]] = {}
    for (t, label), mids in outer.cell_map.items():
        cell_map[(t, label)] = {kid for mid in mids for kid in inner.children(t, mid)}
    return validate_refinement(outer.parent, inner.child, cell_map, tol)


def analysers_equivalent(first: Analyser, second: Analyser, tol: Optional[Tolerances] = None) -> bool:
    """시간, 라벨, 셀 사영이 모두 같으면 True"""
    if first is second:
        return True
    if first.times != second.times or first.dim != second.dim:
        return False
    tol = tolerances_for(first.dim, tol)
    for t in first.times:
        a, b = first.partitions[t], second.partitions[t]
        if a.labels != b.labels:
            return False
        if any(operator_norm(p.matrix - q.matrix) > tol.op for p, q in zip(a.cells, b.cells)):
            return False
    return True
