"""사건 A의 커널 F_A 와 균일 커널 N_A 멤버십"""
import itertools
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.analyser import Analyser
from app.core.config import Tolerances, settings, tolerances_for
from app.core.errors import BudgetExceededError
from app.histories.space import Event
from app.linalg import CVector, Subspace, as_vector, kernel_of_psd
from app.linalg.types import check_same_dim
from .decomposition import CommutantDecomposition, compute_commutant
from .joint import joint_projector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NaWitness:
    member: bool
    times: Optional[tuple[str, ...]] = None
    """φ를 A의 모든 history에서 소멸시키는 첫 시간 부분집합"""

    def __bool__(self) -> bool:
        return self.member


def fa_kernel(an: Analyser, event: Event, dec: Optional[CommutantDecomposition] = None,
              tol: Optional[Tolerances] = None) -> Subspace:
    """F_A = Kernel(Σ_{ω∈A} p_ω)

    F_∅ 는 전체 공간, F_Ω 는 N 이다.
    """
    dec = dec if dec is not None else compute_commutant(an, tol=tol)
    operator = dec.event_projector(event).matrix
    return kernel_of_psd(0.5 * (operator + operator.conj().T), 0.5)


def na_member(an: Analyser, event: Event, phi: CVector, max_times: Optional[int] = None,
              tol: Optional[Tolerances] = None) -> NaWitness:
    """φ ∈ N_A 인지 시간 부분집합을 크기 순으로 탐색해 판정합니다.

    N_A = {φ : 어떤 T ⊆ S 에 대해 모든 ω∈A 에서 p^T_{ω|T} φ = 0}

    Args:
        an (Analyser): analyser π
        event (Event): 사건 A
        phi (CVector): 상태 φ
        max_times (Optional[int], optional): |S| 상한. Defaults to settings.na_max_times.
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

    Raises:
        BudgetExceededError: |S| 가 상한을 넘는 경우

    Returns:
        NaWitness: 멤버십과 찾은 시간 부분집합
    """
    limit = settings.na_max_times if max_times is None else max_times
    if len(an.times) > limit:
        raise BudgetExceededError(f"N_A search needs |S| <= {limit}, got {len(an.times)}")
    phi = as_vector(phi)
    check_same_dim(phi.size, an.dim)
    tol = tolerances_for(an.dim, tol)
    histories = event.sorted_histories()
    cache: dict[tuple[tuple[str, str], ...], float] = {}

    def annihilated(times: tuple[str, ...]) -> bool:
        indices = [event.space.time_index(t) for t in times]
        for history in histories:
            key = tuple((t, history[i]) for t, i in zip(times, indices))
            if key not in cache:
                jp = joint_projector(an, dict(key), tol)
                cache[key] = float(np.linalg.norm(jp.projector.apply(phi)))
            if cache[key] >= tol.vec:
                return False
        return True

    for size in range(len(an.times) + 1):
        for subset in itertools.combinations(an.times, size):
            if annihilated(subset):
                logger.debug("N_A witness found with times %s", subset)
                return NaWitness(True, subset)
    return NaWitness(False)
