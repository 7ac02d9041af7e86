"""
무작위 analyser 생성기.

commuting analyser는 모든 시간이 하나의 유니터리 V의 열들을 나눠 가지며(공통 고유기저),
generic analyser는 시간마다 독립적인 Haar 유니터리를 사용한다.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.stats import unitary_group

from app.core.config import Tolerances
from app.core.errors import InputError
from app.linalg import CMatrix, CVector, Projector, Subspace
from .partition import Analyser, Partition, validate_partition

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RandomAnalyser:
    """생성된 analyser와 그 구성 재료 (세분 생성에 사용)"""

    analyser: Analyser
    bases: tuple[CMatrix, ...]
    """시간마다 셀을 만든 유니터리 (commuting이면 모두 같다)"""
    groups: tuple[tuple[tuple[int, ...], ...], ...]
    """시간마다, 셀마다 사용한 기저 열 인덱스"""


def haar_unitary(dim: int, rng: np.random.Generator) -> CMatrix:
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return np.asarray(unitary_group.rvs(dim, random_state=rng), dtype=np.complex128)


def random_groups(dim: int, n_cells: int, rng: np.random.Generator) -> tuple[tuple[int, ...], ...]:
    """0..dim-1 을 비어 있지 않은 n_cells 개의 그룹으로 무작위 분할"""
    if not 1 <= n_cells <= dim:
        raise InputError(f"cannot split dimension {dim} into {n_cells} non-empty cells")
    order = rng.permutation(dim)
    cuts = np.sort(rng.choice(np.arange(1, dim), size=n_cells - 1, replace=False)) if n_cells > 1 else []
    return tuple(tuple(sorted(int(i) for i in chunk)) for chunk in np.split(order, cuts))


def cell_from_columns(basis: CMatrix, columns: Sequence[int]) -> Projector:
    return Subspace(basis[:, list(columns)]).projector


def _build(dim: int, n_times: int, n_cells: Sequence[int] | int, rng: np.random.Generator,
           shared: bool, tol: Optional[Tolerances]) -> RandomAnalyser:
    counts = [n_cells] * n_times if isinstance(n_cells, int) else list(n_cells)
    if len(counts) != n_times:
        raise InputError("n_cells must give one count per time")
    common = haar_unitary(dim, rng) if shared else None
    partitions: dict[str, Partition] = {}
    bases, all_groups = [], []
    for index, count in enumerate(counts):
        basis = common if shared else haar_unitary(dim, rng)
        groups = random_groups(dim, count, rng)
        cells = [cell_from_columns(basis, group) for group in groups]
        time = str(index)
        partitions[time] = validate_partition(cells, tol=tol, time=time)
        bases.append(basis)
        all_groups.append(groups)
    logger.debug("random %s analyser: dim=%d times=%d cells=%s",
                 "commuting" if shared else "generic", dim, n_times, counts)
    return RandomAnalyser(Analyser.build(partitions), tuple(bases), tuple(all_groups))


def random_commuting_analyser(dim: int, n_times: int, n_cells: Sequence[int] | int,
                              rng: np.random.Generator, tol: Optional[Tolerances] = None) -> RandomAnalyser:
    """공통 고유기저에서 만든, 모든 셀이 서로 교환하는 analyser

    Args:
        dim (int): 차원
        n_times (int): 시간 수 |S| (시간 라벨은 "0", "1", ...)
        n_cells: 시간별 셀 수 또는 공통 셀 수
        rng (np.random.Generator): 난수 생성기
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

    Returns:
        RandomAnalyser: analyser와 구성 재료
    """
    return _build(dim, n_times, n_cells, rng, True, tol)


def random_generic_analyser(dim: int, n_times: int, n_cells: Sequence[int] | int,
                            rng: np.random.Generator, tol: Optional[Tolerances] = None) -> RandomAnalyser:
    """시간마다 독립적인 Haar 유니터리로 만든 analyser (일반적으로 교환하지 않음)"""
    return _build(dim, n_times, n_cells, rng, False, tol)


def random_binary_splits(generated: RandomAnalyser, rng: np.random.Generator,
                         probability: float = 1.0) -> dict[tuple[str, str], dict[str, Projector]]:
    """랭크 2 이상인 셀을 같은 기저 안에서 둘로 나누는 refine()용 cell_splits

    자식 라벨은 "<a>.1", "<a>.2" 이다. 공통 기저를 유지하므로 commuting analyser의 세분도 교환한다.
    """
    splits: dict[tuple[str, str], dict[str, Projector]] = {}
    an = generated.analyser
    for t, basis, groups in zip(an.times, generated.bases, generated.groups):
        for label, group in zip(an.labels(t), groups):
            if len(group) < 2 or rng.random() > probability:
                continue
            order = list(rng.permutation(group))
            cut = int(rng.integers(1, len(group)))
            splits[(t, label)] = {
                f"{label}.1": cell_from_columns(basis, order[:cut]),
                f"{label}.2": cell_from_columns(basis, order[cut:]),
            }
    return splits


def random_state(dim: int, rng: np.random.Generator) -> CVector:
    """정규화된 복소 가우시안 벡터"""
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def random_state_in(subspace: Subspace, rng: np.random.Generator) -> CVector:
    """부분공간 안의 정규화된 무작위 벡터

    Raises:
        InputError: 부분공간이 0인 경우
    """
    if subspace.k == 0:
        raise InputError("cannot draw a state from the zero subspace")
    return subspace.basis @ random_state(subspace.k, rng)
