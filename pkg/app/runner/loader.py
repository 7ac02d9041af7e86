"""
시나리오 읽기와 구체화(materialize).

시나리오 파일(JSON)을 읽어 Scenario 모델로 검증하고, analyser, 상태, 사건, 관측량,
세분 사상으로 바꾼다. 여기서 나는 오류는 모두 InputError 계열이다.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
from pydantic import ValidationError

from app.analyser import (
    Analyser,
    Partition,
    RefinementMap,
    canonical_time,
    conjugate_partition,
    heisenberg_analyser,
    refine,
    scenario as builtin_scenario,
    time_value,
    validate_partition,
)
from app.analyser.scenarios import SCENARIOS, resolve_params, ring_laplacian
from app.core.config import Settings, Tolerances
from app.core.errors import DimensionMismatchError, InputError, ScenarioParseError, ZeroStateError
from app.histories import Event, HistorySpace, single_time_events
from app.linalg import CMatrix, Projector, StateVector, as_matrix, hermitian_evolution, span_of_columns
from app.models.scenario import CellSpec, ComplexNumber, HamiltonianSpec, ObservableSpec, Scenario

logger = logging.getLogger(__name__)


@dataclass
class Materialized:
    """실행 준비가 끝난 시나리오"""

    scenario: Scenario
    analyser: Analyser
    state: StateVector
    events: list[Event]
    observables: list[ObservableSpec]
    refinement: RefinementMap
    settings: Settings
    tol: Tolerances
    params: dict[str, Any] = field(default_factory=dict)


def format_validation_error(error: ValidationError) -> str:
    """pydantic 오류를 '점으로 이은 필드 경로: 메시지' 목록으로 만듭니다."""
    parts = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "<root>"
        parts.append(f"{location}: {item['msg']}")
    return "; ".join(parts)


def parse_scenario_text(text: Union[str, bytes], source: str = "<scenario>") -> Scenario:
    """JSON 텍스트를 Scenario로 검증합니다.

    Raises:
        ScenarioParseError: JSON 문법 오류(줄/열 포함) 또는 스키마 오류(필드 경로 포함)
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"{source}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    try:
        return Scenario.model_validate(raw)
    except ValidationError as e:
        raise ScenarioParseError(f"{source}: {format_validation_error(e)}") from e


def load_scenario(reference: Union[str, Path]) -> Scenario:
    """파일 경로 또는 내장 시나리오 이름에서 Scenario를 만듭니다.

    Raises:
        ScenarioParseError: 파일을 읽을 수 없거나 이름도 경로도 아닌 경우
    """
    path = Path(reference)
    if path.is_file():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ScenarioParseError(f"cannot read scenario file {path}: {e}") from e
        return parse_scenario_text(text, str(path))
    if str(reference).upper() in SCENARIOS:
        return Scenario(builtin=str(reference).upper())
    raise ScenarioParseError(f"{reference!r} is neither a scenario file nor a built-in scenario name")


def effective_settings(base: Settings, scenario: Scenario, tol: Optional[float] = None,
                       budget: Optional[int] = None, threads: Optional[int] = None) -> Settings:
    """시나리오의 허용오차/예산과 CLI 플래그를 설정 사본에 반영합니다."""
    update: dict[str, Any] = {}
    if scenario.tolerances is not None:
        spec = scenario.tolerances
        mapping = {"op_scale": "tol_op_scale", "vec_scale": "tol_vec_scale", "prob": "tol_prob",
                   "meet_scale": "tol_meet_scale", "rank": "tol_rank", "override": "tol_override"}
        for key, target in mapping.items():
            value = getattr(spec, key)
            if value is not None:
                update[target] = value
    if scenario.budget is not None:
        update["budget"] = scenario.budget
    if tol is not None:
        update["tol_override"] = tol
    if budget is not None:
        update["budget"] = budget
    if threads is not None:
        update["threads"] = threads
    return base.model_copy(update=update)


def to_complex(value: ComplexNumber) -> complex:
    if isinstance(value, tuple):
        return complex(value[0], value[1])
    return complex(value)


def complex_vector(values: list[ComplexNumber]) -> np.ndarray:
    return np.array([to_complex(v) for v in values], dtype=np.complex128)


def complex_matrix(rows: list[list[ComplexNumber]]) -> CMatrix:
    lengths = {len(row) for row in rows}
    if len(lengths) != 1:
        raise DimensionMismatchError("matrix rows have different lengths")
    return as_matrix([[to_complex(v) for v in row] for row in rows])


def build_cell(spec: CellSpec, dim: int, tol: Tolerances, where: str) -> Projector:
    """CellSpec을 사영으로 바꿉니다.

    Raises:
        DimensionMismatchError: 좌표나 벡터, 행렬의 크기가 차원과 맞지 않는 경우
        NotAProjectorError: matrix가 사영이 아닌 경우
    """
    if spec.indices is not None:
        bad = [i for i in spec.indices if not 0 <= i < dim]
        if bad:
            raise DimensionMismatchError(f"{where}: indices {bad} are outside 0..{dim - 1}")
        mask = np.zeros(dim)
        mask[list(spec.indices)] = 1.0
        return Projector.diagonal(mask)
    if spec.vectors is not None:
        vectors = [complex_vector(v) for v in spec.vectors]
        if any(v.size != dim for v in vectors):
            raise DimensionMismatchError(f"{where}: cell vectors must have length {dim}")
        if not vectors:
            return Projector.zero(dim)
        return span_of_columns(np.column_stack(vectors), tol.rank).projector
    matrix = complex_matrix(spec.matrix)
    if matrix.shape[0] != dim:
        raise DimensionMismatchError(f"{where}: cell matrix has size {matrix.shape[0]}, expected {dim}")
    return Projector.from_matrix(matrix, tol)


def build_partition(cells: dict[str, CellSpec], dim: int, tol: Tolerances, time: Optional[str] = None) -> Partition:
    where = f"time {time}" if time is not None else "base partition"
    projectors = {label: build_cell(spec, dim, tol, f"{where}, cell {label}") for label, spec in cells.items()}
    return validate_partition(projectors, tol=tol, time=time)


def build_hamiltonian(spec: HamiltonianSpec, dim: int) -> CMatrix:
    if spec.kind == "zero":
        return np.zeros((dim, dim), dtype=np.complex128)
    if spec.kind == "laplacian":
        matrix = ring_laplacian(dim, spec.hopping)
        if not spec.periodic and dim > 2:
            matrix[0, dim - 1] = matrix[dim - 1, 0] = 0.0
            matrix[0, 0] = matrix[dim - 1, dim - 1] = spec.hopping
        return matrix
    matrix = complex_matrix(spec.data)
    if matrix.shape[0] != dim:
        raise DimensionMismatchError(f"hamiltonian has size {matrix.shape[0]}, expected {dim}")
    return matrix


def build_state(values: list[ComplexNumber], dim: int) -> StateVector:
    state = complex_vector(values)
    if state.size != dim:
        raise DimensionMismatchError(f"state has length {state.size}, expected {dim}")
    if not np.all(np.isfinite(state)):
        raise InputError("state has non-finite entries")
    if np.linalg.norm(state) == 0.0:
        raise ZeroStateError("state vector is zero")
    return state


def build_events(scenario: Scenario, space: HistorySpace) -> list[Event]:
    """명시된 사건 목록. 없으면 모든 단일 시간 원통 사건"""
    if not scenario.events:
        return single_time_events(space)
    names = [spec.name for spec in scenario.events]
    if len(set(names)) != len(names):
        raise InputError("event names must be unique")
    events = []
    for spec in scenario.events:
        if spec.constraints is not None:
            events.append(Event.cylinder(space, spec.constraints, name=spec.name))
        else:
            events.append(Event.explicit(space, spec.histories, name=spec.name))
    return events


def default_refinement(name: Optional[str], an: Analyser, tol: Tolerances) -> RefinementMap:
    """D4는 rank-1 분할, Heisenberg analyser는 마지막 시간 + 1 추가, 그 밖에는 항등 세분"""
    if name == "D4":
        first = an.times[0]
        splits = {}
        for label, cell in an.partition(first).items():
            coordinates = [i for i in range(an.dim) if cell.matrix[i, i].real > 0.5]
            splits[(first, label)] = {
                f"{label}.{k + 1}": Projector.diagonal([1.0 if i == j else 0.0 for i in range(an.dim)])
                for k, j in enumerate(coordinates)
            }
        return refine(an, splits, tol=tol)
    if an.hamiltonian is not None and an.base is not None:
        extra = canonical_time(time_value(an.times[-1]) + 1)
        unitary = hermitian_evolution(an.hamiltonian, time_value(extra), tol)
        return refine(an, extra_times={extra: conjugate_partition(an.base, unitary, tol, extra)}, tol=tol)
    return refine(an, tol=tol)


def build_refinement(scenario: Scenario, an: Analyser, tol: Tolerances) -> RefinementMap:
    spec = scenario.refinement
    if spec is None:
        return default_refinement(scenario.builtin.upper() if scenario.builtin else None, an, tol)
    splits = {}
    for split in spec.splits:
        t = canonical_time(split.time)
        splits[(t, split.label)] = {
            label: build_cell(cell, an.dim, tol, f"refinement split at time {t}, cell {label}")
            for label, cell in split.cells.items()
        }
    extra: dict[str, Partition] = {}
    for raw_time, cells in spec.extra_times.items():
        key = canonical_time(raw_time)
        extra[key] = build_partition(cells, an.dim, tol, key)
    if spec.heisenberg_extra_times:
        if an.hamiltonian is None or an.base is None:
            raise InputError("heisenberg_extra_times need a Heisenberg scenario")
        for raw_time in spec.heisenberg_extra_times:
            key = canonical_time(raw_time)
            unitary = hermitian_evolution(an.hamiltonian, time_value(key), tol)
            extra[key] = conjugate_partition(an.base, unitary, tol, key)
    return refine(an, splits, extra, tol)


def json_safe(value: Any) -> Any:
    if isinstance(value, tuple):
        return [json_safe(v) for v in value]
    if isinstance(value, list):
        return [json_safe(v) for v in value]
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    return value


def materialize(scenario: Scenario, settings: Settings) -> Materialized:
    """Scenario를 실행 가능한 객체들로 바꿉니다.

    Raises:
        InputError: 시나리오 내용이 잘못된 경우 (분할, 차원, 상태, 사건, 세분)
    """
    params: dict[str, Any] = {}
    if scenario.builtin is not None:
        params = resolve_params(scenario.builtin, scenario.params)
        # built-ins are exact constructions; validate them with the default tolerances
        instance = builtin_scenario(scenario.builtin, params)
        analyser, state = instance.analyser, instance.state
        tol = settings.tolerances(analyser.dim)
    else:
        dim = scenario.dimension
        tol = settings.tolerances(dim)
        state = build_state(scenario.state, dim)
        if scenario.heisenberg:
            base = build_partition(scenario.base_partition, dim, tol)
            analyser = heisenberg_analyser(base, build_hamiltonian(scenario.hamiltonian, dim), scenario.times, tol)
        else:
            partitions = {
                canonical_time(t): build_partition(cells, dim, tol, canonical_time(t))
                for t, cells in scenario.partitions.items()
            }
            if scenario.times is not None:
                listed = sorted(canonical_time(t) for t in scenario.times)
                if listed != sorted(partitions):
                    raise InputError(f"times {listed} do not match partition times {sorted(partitions)}")
            analyser = Analyser.build(partitions)

    space = HistorySpace.from_analyser(analyser)
    events = build_events(scenario, space)
    refinement = build_refinement(scenario, analyser, tol)
    logger.info("materialized scenario %s: dim=%d times=%s |Ω|=%d",
                scenario.name or scenario.builtin or "<explicit>", analyser.dim, list(analyser.times), space.size)
    return Materialized(scenario, analyser, state, events, list(scenario.observables), refinement,
                        settings, tol, json_safe(params))
