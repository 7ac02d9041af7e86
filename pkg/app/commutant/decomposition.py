"""
교환 부분공간 H_π 와 null 공간 N 의 계산.

Ω를 시간 순서 깊이 우선으로 순회하며 결합 사영을 만든다. 중간 meet이 0이면
그 아래 부분 트리는 모두 0이므로 건너뛴다. 서로 다른 완전 history의 결합 사영은
서로 직교하므로 합 Σ_ω p_ω 는 사영이고, H_π 는 그 치역, N 은 그 커널이다.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Optional

import numpy as np

from app.analyser import Analyser
from app.core.config import Tolerances, settings, tolerances_for
from app.core.errors import BudgetExceededError, InvalidEventError
from app.histories.space import Event, History, HistorySpace
from app.linalg import Projector, Subspace, kernel_of_psd, meet, range_of_psd
from app.linalg.types import frozen
from .joint import JointProjector

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CommutantDecomposition:
    h_pi: Subspace
    n_space: Subspace
    joint_table: Mapping[History, JointProjector]
    """0이 아닌 결합 사영만 담는다. 순서는 라벨 인덱스 사전식."""
    space: HistorySpace

    @property
    def dim(self) -> int:
        return self.h_pi.dim

    @property
    def p_pi(self) -> Projector:
        return self.h_pi.projector

    def joint(self, history: History) -> Projector:
        entry = self.joint_table.get(tuple(history))
        return entry.projector if entry is not None else Projector.zero(self.dim)

    def check_event(self, event: Event) -> None:
        if event.space != self.space:
            raise InvalidEventError(f"event {event.label()} is not an event of this history space")

    def event_projector(self, event: Event) -> Projector:
        """p_A = Σ_{ω∈A} p_ω (서로 직교하는 사영의 합)"""
        self.check_event(event)
        matrix = np.zeros((self.dim, self.dim), dtype=np.complex128)
        rank = 0
        for history in event.histories:
            entry = self.joint_table.get(history)
            if entry is not None:
                matrix += entry.projector.matrix
                rank += entry.projector.rank
        return Projector(frozen(matrix), rank)


def _expand(an: Analyser, prefix: tuple[str, ...], current: Projector, tol: Tolerances,
            out: list[JointProjector], stats: dict[str, int]) -> None:
    level = len(prefix)
    if level == len(an.times):
        out.append(JointProjector(an.times, prefix, current))
        return
    t = an.times[level]
    for label, cell in an.partition(t).items():
        nxt = cell if level == 0 else meet(current, cell, tol)
        if nxt.is_zero:
            stats["pruned"] += 1
            continue
        _expand(an, prefix + (label,), nxt, tol, out, stats)


def _branch(an: Analyser, label: str, tol: Tolerances) -> tuple[list[JointProjector], int]:
    out: list[JointProjector] = []
    stats = {"pruned": 0}
    cell = an.cell(an.times[0], label)
    if cell.is_zero:
        return out, 1
    _expand(an, (label,), cell, tol, out, stats)
    return out, stats["pruned"]


def compute_commutant(an: Analyser, budget: Optional[int] = None, threads: Optional[int] = None,
                      tol: Optional[Tolerances] = None) -> CommutantDecomposition:
    """H_π, N, 결합 사영 표를 계산합니다.

    threads > 1 이면 첫 시간의 라벨별 부분 트리를 병렬로 계산하고 라벨 순서대로 합칩니다.

    Args:
        an (Analyser): analyser π
        budget (Optional[int], optional): |Ω| 상한. Defaults to settings.budget.
        threads (Optional[int], optional): 작업 스레드 수. Defaults to settings.threads.
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

    Raises:
        BudgetExceededError: |Ω| 가 budget을 넘는 경우

    Returns:
        CommutantDecomposition: H_π, N, 결합 사영 표
    """
    budget = settings.budget if budget is None else budget
    threads = settings.threads if threads is None else threads
    tol = tolerances_for(an.dim, tol)
    size = an.history_count
    if size > budget:
        raise BudgetExceededError(f"|Ω| = {size} exceeds the enumeration budget {budget}")

    started = time.perf_counter()
    first_labels = an.labels(an.times[0])
    if threads > 1 and len(first_labels) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda label: _branch(an, label, tol), first_labels))
    else:
        results = [_branch(an, label, tol) for label in first_labels]
    joints = [jp for branch, _ in results for jp in branch]
    pruned = sum(count for _, count in results)

    total = np.zeros((an.dim, an.dim), dtype=np.complex128)
    for jp in joints:
        total += jp.projector.matrix
    total = 0.5 * (total + total.conj().T)
    h_pi = range_of_psd(total, 0.5)
    n_space = kernel_of_psd(total, 0.5)
    logger.debug("commutant: |Ω|=%d nonzero=%d pruned=%d dim H_pi=%d (%.3fs)",
                 size, len(joints), pruned, h_pi.k, time.perf_counter() - started)
    table = MappingProxyType({jp.cell_labels: jp for jp in joints})
    return CommutantDecomposition(h_pi, n_space, table, HistorySpace.from_analyser(an))


def event_subspace(an: Analyser, dec: CommutantDecomposition, event: Event) -> Subspace:
    """H_A = ⊕_{ω∈A} H_ω

    Raises:
        InvalidEventError: 다른 history 공간의 사건인 경우
    """
    if dec.space != HistorySpace.from_analyser(an):
        raise InvalidEventError("decomposition was computed for a different analyser")
    return dec.event_projector(event).subspace
