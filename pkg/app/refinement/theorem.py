"""
세분 정리 p_{A′} = p_A p_{π′} = p_{π′} p_A 의 검증.

연산자 형태와 부분공간 형태(H_{A′} = H_A ∩ H_{π′})를 모두 확인하고,
H_{π′} ⊆ H_π 와 사건 세분의 집합 항등식도 함께 확인한다.
"""
import itertools
import logging
from typing import Optional, Sequence

import numpy as np

from app.analyser import RefinementMap
from app.commutant import CommutantDecomposition, compute_commutant
from app.core.config import Tolerances, tolerances_for
from app.histories.logic import is_pattern
from app.histories.space import Event
from app.linalg import CVector, as_vector, intersect, operator_norm, subspace_distance
from app.models.report import CheckResult, RefinementReport
from .events import refine_event

logger = logging.getLogger(__name__)


def check_refinement_theorem(rm: RefinementMap, events: Sequence[Event], phi: Optional[CVector] = None,
                             parent_dec: Optional[CommutantDecomposition] = None,
                             child_dec: Optional[CommutantDecomposition] = None,
                             tol: Optional[Tolerances] = None) -> RefinementReport:
    """사건마다 세분 정리를 확인한 보고서를 만듭니다.

    phi 가 주어지고 p_{π′}φ = φ 이면 P_φ(A′) = P_φ(A) 와 패턴 동치도 확인합니다.

    Args:
        rm (RefinementMap): 세분 π → π′
        events (Sequence[Event]): 부모 history 공간의 사건들
        phi (Optional[CVector], optional): 확률 보존을 확인할 상태. Defaults to None.
        parent_dec (Optional[CommutantDecomposition], optional): π의 분해. Defaults to None.
        child_dec (Optional[CommutantDecomposition], optional): π′의 분해. Defaults to None.
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

    Returns:
        RefinementReport: 검증 결과
    """
    tol = tolerances_for(rm.parent.dim, tol)
    parent_dec = parent_dec if parent_dec is not None else compute_commutant(rm.parent, tol=tol)
    child_dec = child_dec if child_dec is not None else compute_commutant(rm.child, tol=tol)
    p_child = child_dec.p_pi.matrix

    operator_worst, commute_worst, subspace_worst = 0.0, 0.0, 0.0
    algebra_ok = True
    refined = [refine_event(rm, event) for event in events]
    for item in refined:
        p_a = parent_dec.event_projector(item.parent_event)
        p_a_child = child_dec.event_projector(item.child_event)
        operator_worst = max(operator_worst, operator_norm(p_a_child.matrix - p_a.matrix @ p_child))
        commute_worst = max(commute_worst, operator_norm(p_a.matrix @ p_child - p_child @ p_a.matrix))
        subspace_worst = max(subspace_worst, subspace_distance(
            p_a_child.subspace, intersect(p_a.subspace, child_dec.h_pi, tol)))
        rest = refine_event(rm, item.parent_event.complement()).child_event
        algebra_ok &= rest.histories == item.child_event.complement().histories
    for first, second in itertools.combinations(refined, 2):
        joined = refine_event(rm, first.parent_event.union(second.parent_event)).child_event
        algebra_ok &= joined.histories == (first.child_event.histories | second.child_event.histories)

    inclusion = operator_norm(child_dec.h_pi.basis - parent_dec.p_pi.matrix @ child_dec.h_pi.basis) \
        if child_dec.h_pi.k else 0.0
    checks = [
        CheckResult.of("p_A′ = p_A p_pi′", operator_worst, tol.op),
        CheckResult.of("p_A p_pi′ = p_pi′ p_A", commute_worst, tol.op),
        CheckResult.of("H_A′ = H_A ∩ H_pi′", subspace_worst, tol.op),
        CheckResult.of("H_pi′ ⊆ H_pi", inclusion, tol.op),
        CheckResult.flag("event refinement respects complements and unions", algebra_ok),
    ]

    if phi is not None:
        state = as_vector(phi)
        drift = float(np.linalg.norm(state - child_dec.p_pi.apply(state)))
        if drift < tol.vec * max(1.0, float(np.linalg.norm(state))):
            norm_sq = float(np.linalg.norm(state) ** 2)
            prob_worst = 0.0
            patterns_ok = True
            for item in refined:
                before = float(np.linalg.norm(parent_dec.event_projector(item.parent_event).apply(state)) ** 2)
                after = float(np.linalg.norm(child_dec.event_projector(item.child_event).apply(state)) ** 2)
                prob_worst = max(prob_worst, abs(after - before) / norm_sq)
                patterns_ok &= is_pattern(parent_dec, state, item.parent_event, tol) == \
                    is_pattern(child_dec, state, item.child_event, tol)
            checks += [
                CheckResult.of("P(A′) = P(A) for a state in H_pi′", prob_worst, tol.prob),
                CheckResult.flag("A′ is a pattern iff A is a pattern", patterns_ok),
            ]
        else:
            checks.append(CheckResult.flag(
                "probability preservation skipped", True,
                detail=f"state is not in H_pi′ (residual {drift:.3e})"))

    logger.debug("refinement theorem over %d events: worst operator residual %.3e",
                 len(events), operator_worst)
    return RefinementReport(
        parent_times=list(rm.parent.times),
        child_times=list(rm.child.times),
        events=[event.label() for event in events],
        checks=checks,
    )
