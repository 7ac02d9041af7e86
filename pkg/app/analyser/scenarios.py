"""
이름으로 접근하는 내장 시나리오 생성기.

각 생성기는 파라미터 매핑을 받아 (Analyser, 상태 φ) 쌍을 만든다.
파라미터 값은 JSON 값이거나 CLI의 key=value 문자열일 수 있으므로 기본값의 타입으로 변환한다.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, NamedTuple, Optional

import numpy as np

from app.core.config import Tolerances
from app.core.errors import UnknownScenarioError
from app.linalg import CMatrix, Projector, StateVector, basis_vector
from .heisenberg import heisenberg_analyser
from .partition import Analyser, Partition, validate_partition

logger = logging.getLogger(__name__)

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)


class ScenarioInstance(NamedTuple):
    analyser: Analyser
    state: StateVector


@dataclass(frozen=True)
class ScenarioInfo:
    """내장 시나리오의 이름, 한 줄 설명, 주제, 출처 예제, 기본 파라미터"""

    name: str
    description: str
    topic: str
    anchor: str
    """시나리오가 재현하는 구성 (예: rotated-qubit example)"""
    params: Mapping[str, Any] = field(default_factory=dict)
    builder: Optional[Callable[..., ScenarioInstance]] = field(default=None, repr=False, compare=False)


def diagonal_partition(masks: Mapping[str, list[int]] | list[list[int]], tol: Optional[Tolerances] = None,
                       time: Optional[str] = None) -> Partition:
    """0/1 대각 마스크 목록으로 분할을 만듭니다."""
    if isinstance(masks, Mapping):
        return validate_partition({label: Projector.diagonal(mask) for label, mask in masks.items()},
                                  tol=tol, time=time)
    return validate_partition([Projector.diagonal(mask) for mask in masks], tol=tol, time=time)


def ring_laplacian(n: int, hopping: float = 1.0) -> CMatrix:
    """주기 경계의 이산 라플라시안 hopping·(2I − S − S†)"""
    shift = np.roll(np.eye(n, dtype=np.complex128), 1, axis=0)
    return hopping * (2.0 * np.eye(n, dtype=np.complex128) - shift - shift.conj().T)


def gaussian_packet(n: int, center: float, width: float, momentum: float = 0.0) -> StateVector:
    """고리 위의 가우시안 파동 묶음 (주기 거리 사용, 정규화됨)"""
    sites = np.arange(n)
    distance = np.minimum(np.abs(sites - center), n - np.abs(sites - center))
    packet = np.exp(-0.5 * (distance / width) ** 2) * np.exp(1j * momentum * sites)
    return (packet / np.linalg.norm(packet)).astype(np.complex128)


def build_q2(tol: Optional[Tolerances] = None) -> ScenarioInstance:
    base = diagonal_partition({"+": [1, 0], "-": [0, 1]}, tol)
    analyser = heisenberg_analyser(base, (math.pi / 4) * SIGMA_Y, [0, 1], tol)
    return ScenarioInstance(analyser, basis_vector(2, 0))


def build_d4(tol: Optional[Tolerances] = None) -> ScenarioInstance:
    partitions = {
        "0": diagonal_partition({"1": [1, 1, 0, 0], "2": [0, 0, 1, 1]}, tol, "0"),
        "1": diagonal_partition({"1": [1, 0, 1, 0], "2": [0, 1, 0, 1]}, tol, "1"),
    }
    return ScenarioInstance(Analyser.build(partitions), np.full(4, 0.5, dtype=np.complex128))


def build_tri(levels: int = 2, tol: Optional[Tolerances] = None) -> ScenarioInstance:
    if levels < 1:
        raise UnknownScenarioError(f"TRI9 levels must be >= 1, got {levels}")
    dim = 3 ** levels
    partitions = {}
    for t in range(1, levels + 1):
        inner = 3 ** (levels - t)
        mask = [1] * inner + [0] * (dim - inner)
        partitions[str(t)] = diagonal_partition({"1": mask, "2": [1 - m for m in mask]}, tol, str(t))
    state = np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128)
    return ScenarioInstance(Analyser.build(partitions), state)


def build_static(K: int = 2, p: float = 0.7, tol: Optional[Tolerances] = None) -> ScenarioInstance:
    if K < 1:
        raise UnknownScenarioError(f"STATIC K must be >= 1, got {K}")
    if not 0.0 <= p <= 1.0:
        raise UnknownScenarioError(f"STATIC p must lie in [0, 1], got {p}")
    base = diagonal_partition({"1": [1, 0], "2": [0, 1]}, tol)
    analyser = heisenberg_analyser(base, np.zeros((2, 2)), list(range(1, K + 1)), tol)
    return ScenarioInstance(analyser, np.array([math.sqrt(p), math.sqrt(1.0 - p)], dtype=np.complex128))


def build_pgrid(n: int = 8, times: tuple[float, ...] = (0.0, 0.5, 1.0), hopping: float = 1.0,
                width: float = 1.0, tol: Optional[Tolerances] = None) -> ScenarioInstance:
    if n < 4 or n % 2:
        raise UnknownScenarioError(f"PGRID n must be even and >= 4, got {n}")
    if width <= 0:
        raise UnknownScenarioError(f"PGRID width must be positive, got {width}")
    half = n // 2
    base = diagonal_partition({"L": [1] * half + [0] * half, "R": [0] * half + [1] * half}, tol)
    analyser = heisenberg_analyser(base, ring_laplacian(n, hopping), list(times), tol)
    return ScenarioInstance(analyser, gaussian_packet(n, (half - 1) / 2.0, width))


SCENARIOS: dict[str, ScenarioInfo] = {
    info.name: info
    for info in (
        ScenarioInfo("Q2", "qubit, sigma_z cells then the 45-degree rotated cells; empty commutation subspace",
                     "heisenberg-evolution", "rotated-qubit example", {}, build_q2),
        ScenarioInfo("D4", "two commuting diagonal two-cell partitions on C^4, uniform state",
                     "commuting-cells", "commuting diagonal cells example", {}, build_d4),
        ScenarioInfo("TRI9", "triadically nested cells, P(X_t = 1) = 3^-t",
                     "nested-cells", "triadic nesting example", {"levels": 2}, build_tri),
        ScenarioInfo("STATIC", "H = 0, the same partition at K times, state (sqrt p, sqrt(1-p))",
                     "heisenberg-evolution", "static Hamiltonian example", {"K": 2, "p": 0.7}, build_static),
        ScenarioInfo("PGRID", "ring of n sites with the discrete Laplacian, two half-ring position cells",
                     "position-cells", "lattice position cells example",
                     {"n": 8, "times": (0.0, 0.5, 1.0), "hopping": 1.0, "width": 1.0},
                     build_pgrid),
    )
}


def coerce_param(name: str, raw: Any, default: Any) -> Any:
    """파라미터 값을 기본값의 타입으로 변환합니다.

    Raises:
        UnknownScenarioError: 변환할 수 없는 값인 경우
    """
    try:
        if isinstance(default, bool):
            return raw if isinstance(raw, bool) else str(raw).lower() in ("1", "true", "yes")
        if isinstance(default, int):
            if isinstance(raw, float) and not raw.is_integer():
                raise ValueError("not an integer")
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        if isinstance(default, tuple):
            items = raw.split(",") if isinstance(raw, str) else list(raw)
            return tuple(float(item) for item in items)
    except (TypeError, ValueError) as e:
        raise UnknownScenarioError(f"invalid value {raw!r} for parameter {name!r}") from e
    return raw


def resolve_params(name: str, params: Optional[Mapping[str, Any]] = None) -> dict[str, Any]:
    """기본 파라미터에 사용자 값을 덮어써 완전한 파라미터 매핑을 만듭니다."""
    info = get_scenario_info(name)
    unknown = set(params or {}).difference(info.params)
    if unknown:
        raise UnknownScenarioError(
            f"scenario {info.name} does not take parameters {sorted(unknown)}; expected {sorted(info.params)}")
    resolved = dict(info.params)
    for key, raw in (params or {}).items():
        resolved[key] = coerce_param(key, raw, info.params[key])
    return resolved


def get_scenario_info(name: str) -> ScenarioInfo:
    key = str(name).upper()
    if key not in SCENARIOS:
        raise UnknownScenarioError(f"unknown scenario {name!r}; built-ins are {sorted(SCENARIOS)}")
    return SCENARIOS[key]


def scenario(name: str, params: Optional[Mapping[str, Any]] = None,
             tol: Optional[Tolerances] = None) -> ScenarioInstance:
    """내장 시나리오를 생성합니다.

    Args:
        name (str): Q2, D4, TRI9, STATIC, PGRID 중 하나 (대소문자 무시)
        params (Optional[Mapping[str, Any]], optional): 시나리오 파라미터. Defaults to None.
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

    Raises:
        UnknownScenarioError: 이름이 없거나 파라미터가 잘못된 경우

    Returns:
        ScenarioInstance: (analyser, 상태) 쌍
    """
    info = get_scenario_info(name)
    resolved = resolve_params(info.name, params)
    logger.debug("building scenario %s with %s", info.name, resolved)
    return info.builder(**resolved, tol=tol)


def list_scenarios() -> list[ScenarioInfo]:
    """이름 순으로 정렬된 내장 시나리오 목록"""
    return [SCENARIOS[name] for name in sorted(SCENARIOS)]
