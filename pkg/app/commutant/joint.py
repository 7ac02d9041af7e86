"""결합 history 사영 p^{t_1..t_k}_{a_1..a_k} = ∧ p^{t_i}_{a_i}"""
from dataclasses import dataclass
from typing import Mapping, Optional

from app.analyser import Analyser, TimeLike, canonical_time
from app.core.config import Tolerances, tolerances_for
from app.linalg import Projector, meet


@dataclass(frozen=True, eq=False)
class JointProjector:
    time_labels: tuple[str, ...]
    cell_labels: tuple[str, ...]
    projector: Projector

    @property
    def assignment(self) -> dict[str, str]:
        return dict(zip(self.time_labels, self.cell_labels))

    @property
    def is_zero(self) -> bool:
        return self.projector.is_zero


def ordered_assignment(an: Analyser, assignment: Mapping[TimeLike, str]) -> list[tuple[str, str]]:
    """assignment를 시간 순서로 정렬하고 시간과 라벨을 검증합니다."""
    pairs = [(canonical_time(t), str(a)) for t, a in assignment.items()]
    for t, a in pairs:
        an.cell(t, a)
    return sorted(pairs, key=lambda pair: an.time_index(pair[0]))


def joint_projector(an: Analyser, assignment: Mapping[TimeLike, str],
                    tol: Optional[Tolerances] = None) -> JointProjector:
    """시간 순서대로 셀 사영의 meet을 반복해 결합 사영을 계산합니다.

    중간 meet이 0이 되면 나머지를 계산하지 않습니다. 빈 assignment는 I 입니다.

    Args:
        an (Analyser): analyser π
        assignment (Mapping[TimeLike, str]): 시간 → 라벨
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

    Raises:
        UnknownTimeError: analyser에 없는 시간
        UnknownLabelError: Γ(t)에 없는 라벨

    Returns:
        JointProjector: 결합 사영
    """
    tol = tolerances_for(an.dim, tol)
    pairs = ordered_assignment(an, assignment)
    result = Projector.identity(an.dim)
    for index, (t, a) in enumerate(pairs):
        cell = an.cell(t, a)
        result = cell if index == 0 else meet(result, cell, tol)
        if result.is_zero:
            result = Projector.zero(an.dim)
            break
    return JointProjector(tuple(t for t, _ in pairs), tuple(a for _, a in pairs), result)
