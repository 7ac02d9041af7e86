"""
궤적 표본 추출.

sample_exact는 시간 순서 곱(collapse 사슬)으로 접두사 트리를 만든 뒤 각 궤적을
시간 순서대로 조건부 추출한다. φ ∈ H_π 이면 이 연쇄 법칙은 P_φ 와 정확히 같다.
sample_independent는 시간마다 Born 주변 확률에서 독립적으로 추출한다.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

import numpy as np

from app.analyser import Analyser, Partition
from app.core.config import settings, tolerances_for
from app.core.errors import DegenerateMeasureError, InputError, MissingLabelError
from app.histories.measure import PathMeasure, normalized_state
from app.linalg import CVector
from .rng import BLOCK, CounterRNG

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Trajectory:
    index: int
    times: tuple[str, ...]
    labels: tuple[str, ...]
    points: Optional[tuple[tuple[float, ...], ...]] = None

    def label_at(self, t: str) -> str:
        return self.labels[self.times.index(t)]


@dataclass(frozen=True)
class ConfigMap:
    """라벨 a → 구성 공간의 점 x(a). regions는 "x(a) ∈ R_a" 에 대한 메타데이터이다."""

    points: Mapping[str, tuple[float, ...]]
    regions: Mapping[str, str] = field(default_factory=dict)

    def point(self, label: str) -> tuple[float, ...]:
        if label not in self.points:
            raise MissingLabelError(f"configuration map has no point for label {label!r}")
        return self.points[label]

    @classmethod
    def from_mapping(cls, points: Mapping[str, Any], regions: Optional[Mapping[str, str]] = None) -> "ConfigMap":
        converted = {
            str(label): tuple(float(x) for x in np.atleast_1d(np.asarray(value, dtype=float)))
            for label, value in points.items()
        }
        return cls(converted, dict(regions or {}))

    @classmethod
    def index_map(cls, an: Analyser) -> "ConfigMap":
        """라벨 → Γ(t) 안의 인덱스 (처음 나타나는 시간 기준)"""
        points: dict[str, tuple[float, ...]] = {}
        for t in an.times:
            for index, label in enumerate(an.labels(t)):
                points.setdefault(label, (float(index),))
        return cls(points, {label: f"label index {int(x[0])}" for label, x in points.items()})

    @classmethod
    def centroids(cls, partition: Partition) -> "ConfigMap":
        """라벨 → 셀 대각 성분의 무게중심 (위치 셀이면 셀 중심 사이트)"""
        sites = np.arange(partition.dim, dtype=float)
        points, regions = {}, {}
        for label, cell in partition.items():
            weights = np.real(np.diag(cell.matrix))
            total = float(weights.sum())
            centre = float(weights @ sites / total) if total > 0 else float("nan")
            points[label] = (centre,)
            regions[label] = f"cell {label} (rank {cell.rank})"
        return cls(points, regions)


@dataclass(frozen=True)
class _Level:
    cumulative: np.ndarray
    """(노드 수, |Γ(t)|) 정규화된 누적 조건부 확률"""
    children: np.ndarray
    """(노드 수, |Γ(t)|) 다음 단계 노드 인덱스 (불가능한 자식은 -1)"""


def _prefix_tree(pm: PathMeasure) -> list[_Level]:
    an, tol = pm.analyser, pm.tol
    vectors = [pm.state]
    levels: list[_Level] = []
    for t in an.times:
        partition = an.partition(t)
        width = len(partition)
        cumulative = np.zeros((len(vectors), width))
        children = np.full((len(vectors), width), -1, dtype=np.int64)
        next_vectors: list[CVector] = []
        for node, vec in enumerate(vectors):
            parent_mass = float(np.linalg.norm(vec) ** 2)
            weights = np.zeros(width)
            for j, (_, cell) in enumerate(partition.items()):
                child = cell.apply(vec)
                if np.linalg.norm(child) < tol.vec:
                    continue
                weights[j] = float(np.linalg.norm(child) ** 2) / parent_mass
                children[node, j] = len(next_vectors)
                next_vectors.append(child)
            running = np.cumsum(weights)
            if running[-1] <= 0:
                raise DegenerateMeasureError(f"prefix at time {t} has no continuation")
            cumulative[node] = running / running[-1]
        levels.append(_Level(cumulative, children))
        vectors = next_vectors
    logger.debug("prefix tree with %d leaves over %d times", len(vectors), len(an.times))
    return levels


def _chunks(n: int, threads: int) -> list[tuple[int, int]]:
    if threads <= 1:
        return [(0, n)]
    size = max(BLOCK, -(-n // threads // BLOCK) * BLOCK)
    return [(start, min(size, n - start)) for start in range(0, n, size)]


def _run(n: int, threads: int, work) -> list[np.ndarray]:
    chunks = _chunks(n, threads)
    if len(chunks) == 1:
        return [work(*chunks[0])]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda chunk: work(*chunk), chunks))


def _to_trajectories(an: Analyser, choices: np.ndarray) -> list[Trajectory]:
    label_table = [an.labels(t) for t in an.times]
    return [
        Trajectory(i, an.times, tuple(label_table[k][j] for k, j in enumerate(row)))
        for i, row in enumerate(choices.tolist())
    ]


def _check_count(n: int) -> None:
    if n < 1:
        raise InputError(f"number of trajectories must be >= 1, got {n}")


def sample_exact(pm: PathMeasure, n: int, seed: Optional[int] = None,
                 threads: Optional[int] = None) -> list[Trajectory]:
    """P_φ 에서 완전한 history를 독립적으로 n개 추출합니다.

    Args:
        pm (PathMeasure): 경로 측도
        n (int): 궤적 수
        seed (Optional[int], optional): seed. Defaults to settings.default_seed.
        threads (Optional[int], optional): 작업 스레드 수. Defaults to settings.threads.

    Raises:
        DegenerateMeasureError: 전체 질량이 tol_prob 미만인 경우

    Returns:
        list[Trajectory]: 인덱스 순서의 궤적 목록
    """
    _check_count(n)
    if pm.total() < pm.tol.prob:
        raise DegenerateMeasureError("path measure has no mass")
    rng = CounterRNG(settings.default_seed if seed is None else seed)
    levels = _prefix_tree(pm)
    width = len(levels)

    def work(start: int, count: int) -> np.ndarray:
        u = rng.uniforms(start, count, width)
        nodes = np.zeros(count, dtype=np.int64)
        choices = np.zeros((count, width), dtype=np.int64)
        for k, level in enumerate(levels):
            rows = level.cumulative[nodes]
            picked = np.minimum(np.sum(rows <= u[:, k:k + 1], axis=1), rows.shape[1] - 1)
            choices[:, k] = picked
            nodes = level.children[nodes, picked]
        return choices

    choices = np.vstack(_run(n, settings.threads if threads is None else threads, work))
    return _to_trajectories(pm.analyser, choices)


def sample_independent(an: Analyser, phi: CVector, n: int, seed: Optional[int] = None,
                       threads: Optional[int] = None) -> list[Trajectory]:
    """시간마다 P(X_t = a) = ||p^t_a φ̂||² 에서 독립적으로 라벨을 추출합니다.

    단일 시간 주변 분포는 sample_exact와 같지만 결합 분포는 일반적으로 다릅니다.

    Raises:
        ZeroStateError: φ = 0
    """
    _check_count(n)
    tol = tolerances_for(an.dim, None)
    phi_hat = normalized_state(an.dim, phi, tol)
    rng = CounterRNG(settings.default_seed if seed is None else seed)
    cumulative = []
    for t in an.times:
        weights = np.array([float(np.linalg.norm(cell.apply(phi_hat)) ** 2) for _, cell in an.partition(t).items()])
        running = np.cumsum(weights)
        cumulative.append(running / running[-1])
    width = len(cumulative)

    def work(start: int, count: int) -> np.ndarray:
        u = rng.uniforms(start, count, width)
        choices = np.zeros((count, width), dtype=np.int64)
        for k, running in enumerate(cumulative):
            choices[:, k] = np.minimum(np.sum(running[None, :] <= u[:, k:k + 1], axis=1), running.size - 1)
        return choices

    choices = np.vstack(_run(n, settings.threads if threads is None else threads, work))
    return _to_trajectories(an, choices)


def to_configuration(trajs: Sequence[Trajectory], cmap: ConfigMap) -> list[Trajectory]:
    """각 궤적에 x_t = x(ω_t) 를 붙입니다. 라벨은 바뀌지 않습니다.

    Raises:
        MissingLabelError: 구성 사상에 없는 라벨이 있는 경우
    """
    return [
        Trajectory(traj.index, traj.times, traj.labels, tuple(cmap.point(a) for a in traj.labels))
        for traj in trajs
    ]
