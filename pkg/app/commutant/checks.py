"""
H_π 의 동치 특성화와 사건 부분공간 정리의 수치 검증.

모든 함수는 예외 대신 CheckResult 목록이나 잔차를 돌려준다.
"""
import logging
from typing import Optional

import numpy as np

from app.analyser import Analyser, TimeLike, shift_analyser, time_value
from app.core.config import Tolerances, tolerances_for
from app.histories.space import Event, History
from app.linalg import (
    CMatrix,
    Subspace,
    complement,
    hermitian_evolution,
    intersect,
    operator_norm,
    subspace_distance,
)
from app.models.report import CheckResult
from .decomposition import CommutantDecomposition, compute_commutant
from .kernels import fa_kernel

logger = logging.getLogger(__name__)


def ordered_product(an: Analyser, history: History, order: Optional[list[int]] = None) -> CMatrix:
    """p^{t_k}_{a_k} ⋯ p^{t_1}_{a_1} (order가 주어지면 그 순서로 오른쪽부터 곱한다)"""
    product = np.eye(an.dim, dtype=np.complex128)
    indices = order if order is not None else range(len(an.times))
    for i in indices:
        product = an.cell(an.times[i], history[i]).matrix @ product
    return product


def check_hpi_characterizations(an: Analyser, dec: CommutantDecomposition, n_perms: int = 5,
                                seed: int = 0, tol: Optional[Tolerances] = None) -> list[CheckResult]:
    """H_π = H_π′ = H_π″ = N^⊥ 를 H_π 기저 벡터에서 확인합니다.

    (i) 시간 순서 곱이 결합 사영과 같은지, (ii) 곱의 순서를 무작위로 바꿔도 같은지,
    (iii) H_π 와 N^⊥ 의 거리를 잽니다. H_π 가 0이면 (i), (ii)는 자명하게 통과합니다.

    Args:
        an (Analyser): analyser π
        dec (CommutantDecomposition): an에 대해 계산된 분해
        n_perms (int, optional): history마다 시도할 순열 수. Defaults to 5.
        seed (int, optional): 순열 난수 seed. Defaults to 0.
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

    Returns:
        list[CheckResult]: 검증 결과
    """
    tol = tolerances_for(an.dim, tol)
    rng = np.random.default_rng(seed)
    basis = dec.h_pi.basis
    ordered_residual = 0.0
    permuted_residual = 0.0
    if dec.h_pi.k:
        for history in dec.space.histories():
            product = ordered_product(an, history) @ basis
            ordered_residual = max(ordered_residual,
                                   operator_norm(product - dec.joint(history).matrix @ basis))
            for _ in range(n_perms if len(an.times) > 1 else 0):
                order = [int(i) for i in rng.permutation(len(an.times))]
                permuted = ordered_product(an, history, order) @ basis
                permuted_residual = max(permuted_residual, operator_norm(permuted - product))

    joint_sum = dec.event_projector(Event.everything(dec.space)).matrix
    return [
        CheckResult.of("ordered product equals joint projector on H_pi", ordered_residual, tol.op),
        CheckResult.of("reordered products agree on H_pi", permuted_residual, tol.op),
        CheckResult.of("H_pi equals the orthogonal complement of N",
                       subspace_distance(dec.h_pi, complement(dec.n_space)), tol.op),
        CheckResult.of("sum of joint projectors is idempotent",
                       operator_norm(joint_sum @ joint_sum - joint_sum), tol.op),
        CheckResult.flag("dim H_pi + dim N equals ambient dim", dec.h_pi.k + dec.n_space.k == an.dim),
    ]


def theorem_two_checks(an: Analyser, dec: CommutantDecomposition, event: Event,
                       tol: Optional[Tolerances] = None) -> list[CheckResult]:
    """사건 A에 대해 H_A = F_A^⊥, H_A = F_{Aᶜ} ∩ H_π 와 H_A ⊕ H_{Aᶜ} ⊕ N 분해를 확인합니다."""
    tol = tolerances_for(an.dim, tol)
    rest = event.complement()
    h_a = dec.event_projector(event).subspace
    h_rest = dec.event_projector(rest).subspace
    f_a = fa_kernel(an, event, dec, tol)
    f_rest = fa_kernel(an, rest, dec, tol)

    p_a, p_rest, p_n = h_a.projector.matrix, h_rest.projector.matrix, dec.n_space.projector.matrix
    overlap = max(operator_norm(p_a @ p_rest), operator_norm(p_a @ p_n), operator_norm(p_rest @ p_n))
    name = event.label()
    return [
        CheckResult.of(f"H_A = complement(F_A) [{name}]", subspace_distance(h_a, complement(f_a)), tol.op),
        CheckResult.of(f"H_A = F_Ac ∩ H_pi [{name}]",
                       subspace_distance(h_a, intersect(f_rest, dec.h_pi, tol)), tol.op),
        CheckResult.flag(f"dim H_A + dim H_Ac + dim N = dim [{name}]",
                         h_a.k + h_rest.k + dec.n_space.k == an.dim),
        CheckResult.of(f"H_A, H_Ac, N mutually orthogonal [{name}]", overlap, tol.op),
    ]


def projection_invariance_residual(an: Analyser, dec: CommutantDecomposition) -> float:
    """max ||[p_π, p]|| over every cell projector and every nonzero joint projector"""
    p_pi = dec.p_pi.matrix
    residual = 0.0
    cells = [cell.matrix for t in an.times for _, cell in an.partition(t).items()]
    joints = [jp.projector.matrix for jp in dec.joint_table.values()]
    for matrix in cells + joints:
        residual = max(residual, operator_norm(p_pi @ matrix - matrix @ p_pi))
    return residual


def shift_covariance_residual(an: Analyser, shift: TimeLike, tol: Optional[Tolerances] = None) -> float:
    """U_s 가 H_{π(S+s)} 를 H_{π(S)} 로 보내는지와 곱의 군 항등식을 확인합니다.

    p^{t_1}⋯p^{t_k} U_s = U_s p^{t_1+s}⋯p^{t_k+s} 의 최대 잔차와
    부분공간 거리 중 큰 값을 돌려줍니다.

    Raises:
        InputError: Heisenberg analyser가 아닌 경우
    """
    tol = tolerances_for(an.dim, tol)
    shifted = shift_analyser(an, shift, tol)
    unitary = hermitian_evolution(an.hamiltonian, time_value(shift), tol)
    original = compute_commutant(an, tol=tol)
    moved = compute_commutant(shifted, tol=tol)

    residual = subspace_distance(Subspace(unitary @ moved.h_pi.basis), original.h_pi)
    for history in original.space.histories():
        lhs = ordered_product(an, history) @ unitary
        rhs = unitary @ ordered_product(shifted, history)
        residual = max(residual, operator_norm(lhs - rhs))
    logger.debug("shift covariance residual %.3e for shift %s", residual, shift)
    return residual
