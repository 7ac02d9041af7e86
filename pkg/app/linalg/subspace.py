"""
부분공간 연산 모듈.

정규직교화, meet(치역의 교집합), 직교여공간, 부분공간 거리, 단조 사영 사슬을 제공한다.
랭크 판정은 dim * eps * 최대 특이값 규칙을 따르며 시나리오에서 재정의할 수 있다.
"""
import logging
from typing import Optional, Sequence

import numpy as np
from scipy import linalg as sla

from app.core.config import Tolerances, settings, tolerances_for
from app.core.errors import InputError, NonNestedChainError
from .projector import Projector, Subspace
from .types import CMatrix, CVector, as_vector, check_same_dim, operator_norm

logger = logging.getLogger(__name__)


def _rank_threshold(singular_values: np.ndarray, shape: tuple, tol_rank: Optional[float]) -> float:
    if tol_rank is not None:
        return tol_rank
    if singular_values.size == 0:
        return settings.rank_floor
    eps = np.finfo(np.float64).eps
    return max(max(shape) * eps * float(singular_values.max()), settings.rank_floor)


def orthonormalize(vectors: Sequence[CVector], tol_rank: Optional[float] = None) -> Subspace:
    """벡터들이 생성하는 공간의 정규직교 기저를 구합니다.

    SVD로 수치 랭크를 판정하며, 선형 종속인 입력은 tol_rank 기준으로 제거됩니다.

    Args:
        vectors (Sequence[CVector]): 같은 차원의 벡터 목록
        tol_rank (Optional[float], optional): 랭크 판정 임계값. Defaults to None.

    Raises:
        InputError: 벡터가 하나도 없는 경우
        DimensionMismatchError: 벡터 차원이 서로 다른 경우

    Returns:
        Subspace: 같은 공간을 생성하는 정규직교 기저
    """
    vecs = [as_vector(v) for v in vectors]
    if not vecs:
        raise InputError("orthonormalize needs at least one vector")
    check_same_dim(*(v.size for v in vecs))
    return span_of_columns(np.column_stack(vecs), tol_rank)


def span_of_columns(matrix: CMatrix, tol_rank: Optional[float] = None) -> Subspace:
    """행렬 열공간의 정규직교 기저 (scipy.linalg.orth와 같은 방식, 절대 임계값 허용)"""
    dim = matrix.shape[0]
    if matrix.shape[1] == 0:
        return Subspace.zero(dim)
    u, s, _ = sla.svd(matrix, full_matrices=False)
    threshold = _rank_threshold(s, matrix.shape, tol_rank)
    rank = int(np.sum(s > threshold))
    return Subspace(u[:, :rank])


def range_of_psd(matrix: CMatrix, threshold: float) -> Subspace:
    """양반정치 Hermitian 행렬에서 고유값이 threshold보다 큰 고유벡터들의 span"""
    eigvals, eigvecs = sla.eigh(matrix)
    return Subspace(eigvecs[:, eigvals > threshold])


def kernel_of_psd(matrix: CMatrix, threshold: float) -> Subspace:
    """양반정치 Hermitian 행렬에서 고유값이 threshold보다 작은 고유벡터들의 span"""
    eigvals, eigvecs = sla.eigh(matrix)
    return Subspace(eigvecs[:, eigvals < threshold])


def meet(p: Projector, q: Projector, tol: Optional[Tolerances] = None) -> Projector:
    """Range(p) ∩ Range(q) 위로의 사영을 계산합니다.

    (I−p)+(I−q)는 양반정치이고 그 커널이 정확히 두 치역의 교집합이므로,
    고유값이 tol_meet 미만인 고유벡터들의 span을 취합니다.

    Args:
        p (Projector): 첫 번째 사영
        q (Projector): 두 번째 사영
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

    Raises:
        DimensionMismatchError: 차원이 다른 경우

    Returns:
        Projector: meet(p, q)
    """
    dim = check_same_dim(p.dim, q.dim)
    if p.is_zero or q.is_zero:
        return Projector.zero(dim)
    tol = tolerances_for(dim, tol)
    identity = np.eye(dim)
    gap = (identity - p.matrix) + (identity - q.matrix)
    return kernel_of_psd(0.5 * (gap + gap.conj().T), tol.meet).projector


def meet_all(projectors: Sequence[Projector], tol: Optional[Tolerances] = None) -> Projector:
    """여러 사영의 meet. 중간 결과가 0이면 바로 0을 반환한다."""
    if not projectors:
        raise InputError("meet_all needs at least one projector")
    result = projectors[0]
    for proj in projectors[1:]:
        if result.is_zero:
            break
        result = meet(result, proj, tol)
    return result


def intersect(s1: Subspace, s2: Subspace, tol: Optional[Tolerances] = None) -> Subspace:
    """두 부분공간의 교집합"""
    return meet(s1.projector, s2.projector, tol).subspace


def complement(s: Subspace) -> Subspace:
    """직교여공간. s와 직교하며 차원의 합은 주변 차원과 같다."""
    if s.k == 0:
        return Subspace.full(s.dim)
    if s.k == s.dim:
        return Subspace.zero(s.dim)
    u, _, _ = sla.svd(s.basis, full_matrices=True)
    return Subspace(u[:, s.k:])


def subspace_distance(s1: Subspace, s2: Subspace) -> float:
    """두 사영의 차이의 연산자 노름. 같은 부분공간이면 0이다."""
    check_same_dim(s1.dim, s2.dim)
    return operator_norm(s1.projector.matrix - s2.projector.matrix)


def contains(big: Subspace, small: Subspace, tol: Optional[Tolerances] = None) -> bool:
    """small ⊆ big 여부 (멤버십 잔차 < tol_op)"""
    dim = check_same_dim(big.dim, small.dim)
    if small.k == 0:
        return True
    tol = tolerances_for(dim, tol)
    leftover = small.basis - big.projector.matrix @ small.basis
    return operator_norm(leftover) < tol.op


def commutator_norm(p: Projector, q: Projector) -> float:
    """||pq − qp||"""
    check_same_dim(p.dim, q.dim)
    return operator_norm(p.matrix @ q.matrix - q.matrix @ p.matrix)


def commutes(p: Projector, q: Projector, tol: Optional[Tolerances] = None) -> bool:
    tol = tolerances_for(p.dim, tol)
    return commutator_norm(p, q) < tol.op


def leaves_invariant(p: Projector, s: Subspace, tol: Optional[Tolerances] = None) -> bool:
    """p·S ⊆ S 여부"""
    dim = check_same_dim(p.dim, s.dim)
    if s.k == 0:
        return True
    tol = tolerances_for(dim, tol)
    image = p.matrix @ s.basis
    return operator_norm(image - s.projector.matrix @ image) < tol.op


def infimum_norm(family: Sequence[Subspace], phi: CVector, tol: Optional[Tolerances] = None) -> float:
    """유한 가족의 교집합 위로 사영한 φ의 노름"""
    if not family:
        raise InputError("infimum_norm needs a non-empty family")
    projector = meet_all([s.projector for s in family], tol)
    return float(np.linalg.norm(projector.apply(as_vector(phi))))


def monotone_projector_limit(chain: Sequence[Subspace], phi: CVector,
                             tol: Optional[Tolerances] = None) -> list[CVector]:
    """단조 사슬의 각 사영 p_i 를 φ에 적용한 결과를 반환합니다.

    사슬은 모두 증가하거나 모두 감소해야 합니다(같은 부분공간이 이어지는 것은 허용).

    Args:
        chain (Sequence[Subspace]): 중첩된 부분공간 목록
        phi (CVector): 적용할 벡터
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

    Raises:
        NonNestedChainError: 사슬이 증가도 감소도 아닌 경우

    Returns:
        list[CVector]: p_i φ 목록
    """
    if not chain:
        return []
    phi = as_vector(phi)
    check_same_dim(phi.size, *(s.dim for s in chain))
    pairs = list(zip(chain, chain[1:]))
    increasing = all(contains(nxt, cur, tol) for cur, nxt in pairs)
    decreasing = all(contains(cur, nxt, tol) for cur, nxt in pairs)
    if not (increasing or decreasing):
        raise NonNestedChainError("subspace chain is neither increasing nor decreasing")
    logger.debug("projector chain of length %d (%s)", len(chain),
                 "increasing" if increasing else "decreasing")
    return [s.projector.apply(phi) for s in chain]
