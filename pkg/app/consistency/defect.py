"""
일관성 결손(defect)과 예외적 두 시간 측도.

결손 연산자 Σ_a p^s_a p^t_b (I − p^s_a) 가 0인 것은 두 시간의 분할이 교환하는 것과 동치이다.
"""
import itertools
import logging
from typing import Optional

import numpy as np

from app.analyser import Analyser, TimeLike, canonical_time, time_value
from app.core.config import Tolerances, tolerances_for
from app.core.errors import InputError, NumericalCheckError, StateNotInCellError
from app.linalg import CVector, commutator_norm, operator_norm
from app.histories.measure import normalized_state
from app.models.report import CheckResult, DefectEntry, DefectReport

logger = logging.getLogger(__name__)

DEFECT_BOUND = 2.0


def consistency_defect(an: Analyser, s: TimeLike, t: TimeLike, b: str) -> float:
    """||Σ_a p^s_a p^t_b (I − p^s_a)||

    Raises:
        InputError: s < t 가 아닌 경우
        UnknownTimeError, UnknownLabelError: 시간이나 라벨이 없는 경우
    """
    if not time_value(s) < time_value(t):
        raise InputError(f"consistency defect needs s < t, got s={canonical_time(s)}, t={canonical_time(t)}")
    q = an.cell(t, b).matrix
    identity = np.eye(an.dim)
    total = np.zeros_like(q)
    for _, cell in an.partition(s).items():
        p = cell.matrix
        total += p @ q @ (identity - p)
    return operator_norm(total)


def additivity_residual(an: Analyser, s: TimeLike, t: TimeLike, b: str, phi: CVector,
                        tol: Optional[Tolerances] = None) -> float:
    """|Σ_a ||p^t_b p^s_a φ̂||² − ||p^t_b φ̂||²|

    Raises:
        ZeroStateError: φ = 0
    """
    tol = tolerances_for(an.dim, tol)
    phi_hat = normalized_state(an.dim, phi, tol)
    q = an.cell(t, b)
    split = sum(float(np.linalg.norm(q.apply(cell.apply(phi_hat))) ** 2) for _, cell in an.partition(s).items())
    return abs(split - float(np.linalg.norm(q.apply(phi_hat)) ** 2))


def exceptional_two_time_measure(an: Analyser, s: TimeLike, t: TimeLike, phi: CVector, c: str,
                                 tol: Optional[Tolerances] = None) -> dict[tuple[str, str], float]:
    """φ ∈ Range(p^s_c) 일 때 두 시간 확률표 P(X_s=a, X_t=b) = ||p^t_b φ̂||² δ_{a,c}

    표의 합이 1인지, 두 Born 주변 확률을 재현하는지 확인합니다.

    Raises:
        StateNotInCellError: φ 가 p^s_c 의 치역에 없는 경우
        NumericalCheckError: 합 또는 주변 확률 항등식이 tol_prob 이상 어긋나는 경우
    """
    tol = tolerances_for(an.dim, tol)
    phi_hat = normalized_state(an.dim, phi, tol)
    cell = an.cell(s, c)
    residual = float(np.linalg.norm(phi_hat - cell.apply(phi_hat)))
    if residual >= tol.vec:
        raise StateNotInCellError(f"state is not in the range of cell {c!r} at time {canonical_time(s)} "
                                  f"(residual {residual:.3e})")
    later = {b: float(np.linalg.norm(p.apply(phi_hat)) ** 2) for b, p in an.partition(t).items()}
    earlier = {a: float(np.linalg.norm(p.apply(phi_hat)) ** 2) for a, p in an.partition(s).items()}
    table = {(a, b): (later[b] if a == str(c) else 0.0) for a in earlier for b in later}

    worst = abs(sum(table.values()) - 1.0)
    for a, born in earlier.items():
        worst = max(worst, abs(sum(table[(a, b)] for b in later) - born))
    for b, born in later.items():
        worst = max(worst, abs(sum(table[(a, b)] for a in earlier) - born))
    if worst > tol.prob:
        raise NumericalCheckError(f"two-time table misses its Born marginals by {worst:.3e}")
    return table


def defect_report(an: Analyser, tol: Optional[Tolerances] = None) -> DefectReport:
    """모든 s < t 와 b 에 대한 결손, 최대 교환자, 판정을 모읍니다."""
    tol = tolerances_for(an.dim, tol)
    entries: list[DefectEntry] = []
    max_commutator = 0.0
    agree = True
    for s, t in itertools.combinations(an.times, 2):
        pair_defect = 0.0
        for b in an.labels(t):
            value = consistency_defect(an, s, t, b)
            entries.append(DefectEntry(s=s, t=t, b=b, defect=value))
            pair_defect = max(pair_defect, value)
        pair_commutator = max(
            commutator_norm(p, q)
            for _, p in an.partition(s).items()
            for _, q in an.partition(t).items()
        )
        max_commutator = max(max_commutator, pair_commutator)
        agree &= (pair_defect < tol.op) == (pair_commutator < tol.op)

    max_defect = max((entry.defect for entry in entries), default=0.0)
    commuting = max_defect < tol.op and max_commutator < tol.op
    logger.debug("defect report: max defect %.3e, max commutator %.3e", max_defect, max_commutator)
    return DefectReport(
        entries=entries,
        max_defect=max_defect,
        max_commutator=max_commutator,
        verdict="commuting" if commuting else "non-commuting",
        checks=[
            CheckResult.of("defect norm bounded by 2", max(0.0, max_defect - DEFECT_BOUND), tol.op),
            CheckResult.flag("zero defect iff commuting, per time pair", agree),
        ],
    )
