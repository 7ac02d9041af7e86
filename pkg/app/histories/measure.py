"""
Born 경로 측도 P_φ 와 사건 확률, 조건부 확률, collapse 사슬.

P_φ(ω) = ||p_ω φ̂||² 를 모든 ω에 대해 미리 계산해 둔다(|Ω| 는 예산 안에 있다).
확률 항등식(두 Born 형태, P(A) = ||p_A φ̂||², 조건부 공식)은 계산할 때마다 함께 확인한다.
"""
import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from app.analyser import Analyser, TimeLike, canonical_time, coarsen, time_value
from app.commutant import CommutantDecomposition, compute_commutant, joint_projector
from app.core.config import Tolerances, tolerances_for
from app.core.errors import InputError, NullEventError, NumericalCheckError, StateNotInCommutantError
from app.linalg import CVector, StateVector, as_vector, normalize
from app.linalg.types import check_same_dim
from .space import Event, History, HistorySpace

logger = logging.getLogger(__name__)

Assignment = Union[Mapping[TimeLike, str], Sequence[tuple[TimeLike, str]]]


@dataclass(frozen=True, eq=False)
class PathMeasure:
    analyser: Analyser
    decomposition: CommutantDecomposition
    state: StateVector
    """정규화된 φ̂"""
    probabilities: Mapping[History, float]
    tol: Tolerances

    @property
    def space(self) -> HistorySpace:
        return self.decomposition.space

    def probability(self, history: History) -> float:
        return self.probabilities[tuple(history)]

    def total(self) -> float:
        return float(sum(self.probabilities.values()))

    def support(self) -> list[History]:
        """P(ω) > tol_prob 인 history"""
        return [h for h, p in self.probabilities.items() if p > self.tol.prob]


@dataclass(frozen=True)
class CollapseChain:
    probability: float
    states: tuple[StateVector, ...]
    """각 단계 이후 재정규화된 상태"""
    steps: tuple[float, ...]
    """단계별 조건부 확률 ||p φ_{i−1}||²"""

    @property
    def truncated(self) -> bool:
        return len(self.states) < len(self.steps)


def normalized_state(dim: int, phi: CVector, tol: Tolerances) -> StateVector:
    vec = as_vector(phi)
    check_same_dim(vec.size, dim)
    return normalize(vec, tol.vec)


def require_in_commutant(dec: CommutantDecomposition, phi_hat: StateVector, tol: Tolerances) -> None:
    """φ̂ ∈ H_π 확인

    Raises:
        StateNotInCommutantError: ||φ̂ − p_π φ̂|| >= tol_vec
    """
    residual = dec.h_pi.residual(phi_hat)
    if residual >= tol.vec:
        raise StateNotInCommutantError(
            f"state is not in H_pi (residual {residual:.3e}, dim H_pi = {dec.h_pi.k})")


def build_path_measure(an: Analyser, dec: CommutantDecomposition, phi: CVector,
                       tol: Optional[Tolerances] = None) -> PathMeasure:
    """P_φ 를 모든 history에 대해 계산합니다.

    Args:
        an (Analyser): analyser π
        dec (CommutantDecomposition): an의 분해
        phi (CVector): H_π 안의 0이 아닌 상태
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

    Raises:
        ZeroStateError: φ = 0
        StateNotInCommutantError: φ ∉ H_π
        NumericalCheckError: 전체 질량이 1에서 tol_prob 이상 벗어난 경우

    Returns:
        PathMeasure: 경로 측도
    """
    tol = tolerances_for(an.dim, tol)
    phi_hat = normalized_state(an.dim, phi, tol)
    require_in_commutant(dec, phi_hat, tol)
    probabilities: dict[History, float] = {}
    for history in dec.space.histories():
        entry = dec.joint_table.get(history)
        probabilities[history] = (
            float(np.linalg.norm(entry.projector.apply(phi_hat)) ** 2) if entry is not None else 0.0)
    total = sum(probabilities.values())
    if abs(total - 1.0) > tol.prob:
        raise NumericalCheckError(f"path measure total mass {total!r} differs from 1")
    logger.debug("path measure over %d histories, support %d", len(probabilities),
                 sum(p > tol.prob for p in probabilities.values()))
    return PathMeasure(an, dec, phi_hat, MappingProxyType(probabilities), tol)


def _ordered(an: Analyser, assignment: Assignment) -> list[tuple[str, str]]:
    items = assignment.items() if isinstance(assignment, Mapping) else assignment
    pairs = [(canonical_time(t), str(a)) for t, a in items]
    for t, a in pairs:
        an.cell(t, a)
    return sorted(pairs, key=lambda pair: an.time_index(pair[0]))


def born_forms(an: Analyser, phi: CVector, assignment: Assignment,
               tol: Optional[Tolerances] = None) -> tuple[float, float]:
    """(||p^{t_1..t_k}_{a_1..a_k} φ̂||², ||p^{t_k}_{a_k} ⋯ p^{t_1}_{a_1} φ̂||²)"""
    tol = tolerances_for(an.dim, tol)
    phi_hat = normalized_state(an.dim, phi, tol)
    pairs = _ordered(an, assignment)
    meet_form = float(np.linalg.norm(joint_projector(an, dict(pairs), tol).projector.apply(phi_hat)) ** 2)
    vec = phi_hat
    for t, a in pairs:
        vec = an.cell(t, a).apply(vec)
    return meet_form, float(np.linalg.norm(vec) ** 2)


def path_probability(an: Analyser, dec: CommutantDecomposition, phi: CVector, assignment: Assignment,
                     tol: Optional[Tolerances] = None) -> float:
    """Born 확률을 meet 형태와 시간 순서 곱 형태로 모두 계산하고 meet 형태를 반환합니다.

    Raises:
        StateNotInCommutantError: φ ∉ H_π
        NumericalCheckError: 두 형태가 tol_prob 이상 다른 경우
    """
    tol = tolerances_for(an.dim, tol)
    require_in_commutant(dec, normalized_state(an.dim, phi, tol), tol)
    meet_form, product_form = born_forms(an, phi, assignment, tol)
    if abs(meet_form - product_form) > tol.prob:
        raise NumericalCheckError(
            f"Born forms disagree: meet {meet_form!r} vs ordered product {product_form!r}")
    return meet_form


def collapse_chain(an: Analyser, phi: CVector, ordered_assignment: Assignment,
                   tol: Optional[Tolerances] = None) -> CollapseChain:
    """교과서식 collapse 사슬 ||p^{t_k}φ̂_{k−1}||² ⋯ ||p^{t_1}φ̂_0||² 를 계산합니다.

    φ 는 H_π 안에 있을 필요가 없습니다. 중간 상태가 0이 되면 확률 0과 잘린 사슬을 반환합니다.

    Raises:
        ZeroStateError: φ = 0
        InputError: 시간이 엄격히 증가하지 않는 경우
    """
    tol = tolerances_for(an.dim, tol)
    current = normalized_state(an.dim, phi, tol)
    items = list(ordered_assignment.items()) if isinstance(ordered_assignment, Mapping) else list(ordered_assignment)
    if isinstance(ordered_assignment, Mapping):
        items.sort(key=lambda pair: time_value(pair[0]))
    values = [time_value(t) for t, _ in items]
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InputError("collapse chain times must be strictly increasing")

    probability = 1.0
    states: list[StateVector] = []
    steps: list[float] = []
    for t, a in items:
        projected = an.cell(t, a).apply(current)
        norm = float(np.linalg.norm(projected))
        steps.append(norm ** 2)
        if norm < tol.vec:
            return CollapseChain(0.0, tuple(states), tuple(steps))
        probability *= norm ** 2
        current = projected / norm
        states.append(current)
    return CollapseChain(probability, tuple(states), tuple(steps))


def event_probability(pm: PathMeasure, event: Event) -> float:
    """Σ_{ω∈A} P(ω) 를 반환하고 ||p_A φ̂||² 와 일치하는지 확인합니다.

    Raises:
        InvalidEventError: 다른 history 공간의 사건
        NumericalCheckError: 두 값이 tol_prob 이상 다른 경우
    """
    pm.decomposition.check_event(event)
    total = float(sum(pm.probabilities[h] for h in event.histories))
    projected = pm.decomposition.event_projector(event).apply(pm.state)
    direct = float(np.linalg.norm(projected) ** 2)
    if abs(total - direct) > pm.tol.prob:
        raise NumericalCheckError(
            f"P({event.label()}) disagrees: history sum {total!r} vs ||p_A phi||^2 {direct!r}")
    return total


def conditional_from_measure(pm: PathMeasure, given: Event, target: Event) -> float:
    """P(B | A) = P(A∩B)/P(A) 를 반환하고 p_A φ 로 만든 측도의 P(B) 와 비교합니다.

    Raises:
        NullEventError: P(A) <= tol_prob
        NumericalCheckError: 두 계산이 tol_prob 이상 다른 경우
    """
    p_given = event_probability(pm, given)
    if p_given <= pm.tol.prob:
        raise NullEventError(f"cannot condition on null event {given.label()} (P = {p_given:.3e})")
    value = event_probability(pm, given.intersection(target)) / p_given
    projected = pm.decomposition.event_projector(given).apply(pm.state)
    fresh = build_path_measure(pm.analyser, pm.decomposition, projected, pm.tol)
    direct = event_probability(fresh, target)
    if abs(value - direct) > pm.tol.prob:
        raise NumericalCheckError(
            f"conditional formula disagrees for {target.label()} | {given.label()}: {value!r} vs {direct!r}")
    return value


def conditional_probability(an: Analyser, dec: CommutantDecomposition, phi: CVector, given: Event,
                            target: Event, tol: Optional[Tolerances] = None) -> float:
    """P_φ(B | A) (A가 given, B가 target)"""
    return conditional_from_measure(build_path_measure(an, dec, phi, tol), given, target)


def unnormalized_measure(dec: CommutantDecomposition, phi: CVector, event: Event) -> float:
    """M_φ(A) = ||p_A φ||² (φ 를 정규화하지 않는다)"""
    vec = as_vector(phi)
    check_same_dim(vec.size, dec.dim)
    return float(np.linalg.norm(dec.event_projector(event).apply(vec)) ** 2)


def marginal_consistency_residual(an: Analyser, dec: CommutantDecomposition, phi: CVector, t: TimeLike,
                                  tol: Optional[Tolerances] = None) -> float:
    """시간 t의 라벨에 대해 경로 측도를 합한 값과 t를 지운 analyser의 경로 측도의 최대 차이

    S = {t} 이면 전체 질량과 1의 차이를 반환합니다.
    """
    tol = tolerances_for(an.dim, tol)
    pm = build_path_measure(an, dec, phi, tol)
    removed = canonical_time(t)
    drop = an.time_index(removed)
    keep = [s for s in an.times if s != removed]
    if not keep:
        return abs(pm.total() - 1.0)

    coarse = coarsen(an, keep_times=keep, tol=tol).parent
    coarse_pm = build_path_measure(coarse, compute_commutant(coarse, tol=tol), phi, tol)
    summed: dict[History, float] = {}
    for history, p in pm.probabilities.items():
        key = history[:drop] + history[drop + 1:]
        summed[key] = summed.get(key, 0.0) + p
    return max(abs(summed[h] - coarse_pm.probability(h)) for h in coarse_pm.probabilities)
