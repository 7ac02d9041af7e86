"""사건 PVM 공리, 확실성 판정, null 사건 σ-ideal 검증"""
import itertools
import logging
from typing import Optional, Sequence

import numpy as np

from app.analyser import Analyser
from app.commutant import CommutantDecomposition
from app.core.config import Tolerances, tolerances_for
from app.linalg import CVector, as_vector, complement, operator_norm
from app.models.report import CheckResult, SigmaIdealReport
from .measure import PathMeasure, event_probability
from .space import Event

logger = logging.getLogger(__name__)


def pvm_axiom_checks(dec: CommutantDecomposition, first: Event, second: Event,
                     tol: Optional[Tolerances] = None) -> list[CheckResult]:
    """두 사건에 대해 PVM 공리를 확인합니다 (H_π 위의 항등 사영은 p_π)."""
    tol = tolerances_for(dec.dim, tol)
    space = dec.space
    p = dec.event_projector
    p_a, p_b = p(first).matrix, p(second).matrix
    both = first.intersection(second)
    p_ab = p(both).matrix
    only_a = Event(space, first.histories - second.histories)
    p_only = p(only_a).matrix
    p_pi = dec.p_pi.matrix
    name = f"{first.label()}, {second.label()}"
    return [
        CheckResult.of("p_empty = 0", operator_norm(p(Event.empty(space)).matrix), tol.op),
        CheckResult.of("p_Omega = p_pi", operator_norm(p(Event.everything(space)).matrix - p_pi), tol.op),
        CheckResult.of(f"additivity p_(A∪B) = p_(A\\B) + p_B [{name}]",
                       operator_norm(p(first.union(second)).matrix - p_only - p_b), tol.op),
        CheckResult.of(f"complement p_A + p_Ac = p_pi [{name}]",
                       operator_norm(p_a + p(first.complement()).matrix - p_pi), tol.op),
        CheckResult.of(f"disjoint events orthogonal [{name}]", operator_norm(p_only @ p_b), tol.op),
        CheckResult.of(f"monotone p_A p_(A∩B) = p_(A∩B) [{name}]", operator_norm(p_a @ p_ab - p_ab), tol.op),
        CheckResult.of(f"multiplicative p_(A∩B) = p_A p_B [{name}]", operator_norm(p_ab - p_a @ p_b), tol.op),
    ]


def certainty_checks(an: Analyser, dec: CommutantDecomposition, event: Event,
                     tol: Optional[Tolerances] = None) -> list[CheckResult]:
    """H_A 의 상태는 A를 확률 1로, H_A^⊥ 의 상태는 (φ_π ≠ 0 이면) 확률 0으로 갖는지 확인합니다."""
    tol = tolerances_for(an.dim, tol)
    projector = dec.event_projector(event)
    h_a = projector.subspace
    certain = 0.0
    for vec in h_a.basis.T:
        certain = max(certain, abs(float(np.linalg.norm(projector.apply(vec)) ** 2) - 1.0))
    impossible = 0.0
    for vec in complement(h_a).basis.T:
        phi_pi = dec.p_pi.apply(vec)
        norm = float(np.linalg.norm(phi_pi))
        if norm < tol.vec:
            continue
        impossible = max(impossible, float(np.linalg.norm(projector.apply(phi_pi / norm)) ** 2))
    name = event.label()
    return [
        CheckResult.of(f"states in H_A have P(A) = 1 [{name}]", certain, tol.prob),
        CheckResult.of(f"states orthogonal to H_A have P(A) = 0 [{name}]", impossible, tol.prob),
    ]


def is_pattern(dec: CommutantDecomposition, psi: CVector, event: Event,
               tol: Optional[Tolerances] = None) -> bool:
    """p_A Ψ ≠ 0 이면 A는 Ψ의 패턴이다."""
    tol = tolerances_for(dec.dim, tol)
    return float(np.linalg.norm(dec.event_projector(event).apply(as_vector(psi)))) >= tol.vec


def sigma_ideal_checks(pm: PathMeasure, events: Sequence[Event]) -> SigmaIdealReport:
    """null 사건이 부분집합, 유한 합집합, 교집합에 대해 닫혀 있는지 확인합니다."""
    tol = pm.tol
    space = pm.space
    candidates = [Event.empty(space)] + list(events)
    null = [event for event in candidates if event_probability(pm, event) <= tol.prob]

    subset_worst = 0.0
    for event in null:
        for history in event.histories:
            subset_worst = max(subset_worst, pm.probability(history))
        for other in events:
            if other.issubset(event):
                subset_worst = max(subset_worst, event_probability(pm, other))
    union_worst = 0.0
    for first, second in itertools.combinations(null, 2):
        union_worst = max(union_worst, event_probability(pm, first.union(second)))
    meet_worst = 0.0
    for event in null:
        for other in events:
            meet_worst = max(meet_worst, event_probability(pm, event.intersection(other)))
    logger.debug("sigma ideal: %d of %d events are null", len(null), len(candidates))
    return SigmaIdealReport(
        null_events=[event.label() for event in null],
        checks=[
            CheckResult.of("subsets of null events are null", subset_worst, tol.prob),
            CheckResult.of("unions of null events are null", union_worst, tol.prob),
            CheckResult.of("intersections with a null event are null", meet_worst, tol.prob),
        ],
    )
