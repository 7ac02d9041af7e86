"""Heisenberg 그림의 analyser: p^t_a = U_{−t} p_a U_t"""
import logging
from typing import Optional, Sequence

from app.core.config import Tolerances
from app.core.errors import InputError
from app.linalg import CMatrix, Projector, as_matrix, hermitian_evolution
from .partition import Analyser, Partition, TimeLike, canonical_time, time_value, validate_partition

logger = logging.getLogger(__name__)


def conjugate_partition(partition: Partition, unitary: CMatrix,
                        tol: Optional[Tolerances] = None, time: Optional[str] = None) -> Partition:
    """각 셀을 U†·p·U 로 바꾼 분할을 만들고 다시 검증합니다."""
    u = as_matrix(unitary)
    cells = [Projector.from_matrix(u.conj().T @ cell.matrix @ u, tol) for cell in partition.cells]
    return validate_partition(cells, partition.labels, tol, time)


def heisenberg_analyser(base: Partition, hamiltonian: CMatrix, times: Sequence[TimeLike],
                        tol: Optional[Tolerances] = None) -> Analyser:
    """기준 분할을 각 시간의 유니터리로 켤레 변환한 analyser를 만듭니다.

    U_{−t} = U_t† 이므로 p^t_a = U_t† p_a U_t 이며, 켤레 변환 후 분할 조건을 다시 검증합니다.

    Args:
        base (Partition): 시간 0의 분할
        hamiltonian (CMatrix): Hermitian 생성자 H
        times (Sequence[TimeLike]): 시간 목록 S
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

    Returns:
        Analyser: 생성자와 기준 분할을 보관하는 analyser
    """
    if not times:
        raise InputError("heisenberg_analyser needs at least one time")
    h = as_matrix(hamiltonian)
    partitions = {}
    for t in times:
        key = canonical_time(t)
        unitary = hermitian_evolution(h, time_value(key), tol)
        partitions[key] = conjugate_partition(base, unitary, tol, key)
    logger.debug("heisenberg analyser over %d times in dimension %d", len(partitions), base.dim)
    return Analyser.build(partitions, hamiltonian=h, base=base)


def shift_analyser(analyser: Analyser, shift: TimeLike, tol: Optional[Tolerances] = None) -> Analyser:
    """시간 집합을 S + s 로 옮긴 Heisenberg analyser

    Raises:
        InputError: analyser가 생성자와 기준 분할을 갖고 있지 않은 경우
    """
    if analyser.hamiltonian is None or analyser.base is None:
        raise InputError("only Heisenberg analysers can be shifted in time")
    s = time_value(shift)
    return heisenberg_analyser(analyser.base, analyser.hamiltonian,
                               [time_value(t) + s for t in analyser.times], tol)
