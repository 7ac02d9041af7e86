"""
시나리오 파일 데이터 모델.

시나리오는 내장 생성기 이름(builtin + params)이거나 차원, 상태, 시간, 분할을 직접 적은 블록이다.
복소수는 [re, im] 쌍 또는 실수로 적는다. 모든 모델은 알 수 없는 키를 오류로 처리한다.
"""
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

ComplexNumber = Union[float, tuple[float, float]]
TimeValue = Union[float, str]
TaskName = Literal["commutant", "probabilities", "conditional", "observables", "sample", "defect", "refine", "logic"]

ALL_TASKS: tuple[str, ...] = (
    "commutant", "probabilities", "conditional", "observables", "sample", "defect", "refine", "logic",
)


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class HamiltonianSpec(StrictModel):
    """시간 발전 생성자 H"""

    kind: Literal["zero", "dense", "laplacian"]
    """zero: H = 0, dense: data 행렬, laplacian: 고리(또는 사슬) 이산 라플라시안"""

    data: Optional[list[list[ComplexNumber]]] = None
    """dense일 때의 행렬 성분"""

    hopping: float = 1.0
    """laplacian의 결합 세기"""

    periodic: bool = True
    """laplacian 주기 경계 여부"""

    @model_validator(mode="after")
    def _data_matches_kind(self) -> "HamiltonianSpec":
        if self.kind == "dense" and self.data is None:
            raise ValueError("dense hamiltonian needs data")
        if self.kind != "dense" and self.data is not None:
            raise ValueError(f"{self.kind} hamiltonian takes no data")
        return self


class CellSpec(StrictModel):
    """하나의 셀 사영. indices, vectors, matrix 중 정확히 하나를 적는다."""

    indices: Optional[list[int]] = None
    """좌표 부분집합 (대각 사영)"""

    vectors: Optional[list[list[ComplexNumber]]] = None
    """치역을 생성하는 벡터들"""

    matrix: Optional[list[list[ComplexNumber]]] = None
    """사영 행렬 자체"""

    @model_validator(mode="after")
    def _exactly_one(self) -> "CellSpec":
        given = [name for name in ("indices", "vectors", "matrix") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError(f"a cell needs exactly one of indices, vectors, matrix (got {given or 'none'})")
        return self


class EventSpec(StrictModel):
    """이름 붙은 사건. 원통 제약(시간 → 허용 라벨) 또는 history 목록"""

    name: str
    constraints: Optional[dict[str, list[str]]] = None
    histories: Optional[list[list[str]]] = None

    @model_validator(mode="after")
    def _one_form(self) -> "EventSpec":
        if (self.constraints is None) == (self.histories is None):
            raise ValueError(f"event {self.name!r} needs exactly one of constraints, histories")
        return self


class ObservableEntry(StrictModel):
    history: list[str]
    value: float


class ObservableSpec(StrictModel):
    """f 의 명시적 표. table 또는 (at_time, label_values) 로 적는다."""

    name: str
    table: Optional[list[ObservableEntry]] = None
    at_time: Optional[TimeValue] = None
    label_values: Optional[dict[str, float]] = None

    @model_validator(mode="after")
    def _one_form(self) -> "ObservableSpec":
        by_label = self.at_time is not None or self.label_values is not None
        if (self.table is None) == (not by_label):
            raise ValueError(f"observable {self.name!r} needs either table or at_time with label_values")
        if by_label and (self.at_time is None or self.label_values is None):
            raise ValueError(f"observable {self.name!r} needs both at_time and label_values")
        return self


class ConditionalSpec(StrictModel):
    """P(target | given) 요청 (사건 이름으로 참조)"""

    given: str
    target: str


class SampleSpec(StrictModel):
    n: int = Field(default=10000, ge=1)
    seed: Optional[int] = Field(default=None, ge=0)
    sampler: Literal["exact", "independent", "both"] = "both"
    pairs: Optional[list[tuple[TimeValue, TimeValue]]] = None
    config: Literal["index", "centroid", "none"] = "index"
    """궤적에 붙일 구성 공간 점: 라벨 인덱스, 첫 시간 셀의 중심, 없음"""


class SplitSpec(StrictModel):
    time: TimeValue
    label: str
    cells: dict[str, CellSpec]


class RefinementSpec(StrictModel):
    splits: list[SplitSpec] = Field(default_factory=list)
    extra_times: dict[str, dict[str, CellSpec]] = Field(default_factory=dict)
    """추가 시간 → 라벨 → 셀"""
    heisenberg_extra_times: list[TimeValue] = Field(default_factory=list)
    """Heisenberg 시나리오에서 기준 분할을 켤레 변환해 추가할 시간"""


class ToleranceSpec(StrictModel):
    op_scale: Optional[float] = Field(default=None, gt=0)
    vec_scale: Optional[float] = Field(default=None, gt=0)
    prob: Optional[float] = Field(default=None, gt=0)
    meet_scale: Optional[float] = Field(default=None, gt=0)
    rank: Optional[float] = Field(default=None, gt=0)
    override: Optional[float] = Field(default=None, gt=0)
    """op, vec, prob 허용오차를 모두 대신하는 값"""


class Scenario(StrictModel):
    """실행할 시나리오 전체"""

    name: Optional[str] = None
    builtin: Optional[str] = None
    """내장 시나리오 이름 (Q2, D4, TRI9, STATIC, PGRID)"""
    params: dict[str, Any] = Field(default_factory=dict)

    dimension: Optional[int] = Field(default=None, ge=1)
    hamiltonian: Optional[HamiltonianSpec] = None
    state: Optional[list[ComplexNumber]] = None
    times: Optional[list[TimeValue]] = None
    partitions: Optional[dict[str, dict[str, CellSpec]]] = None
    """시간 → 라벨 → 셀"""
    base_partition: Optional[dict[str, CellSpec]] = None
    heisenberg: bool = False

    events: list[EventSpec] = Field(default_factory=list)
    observables: list[ObservableSpec] = Field(default_factory=list)
    conditionals: list[ConditionalSpec] = Field(default_factory=list)
    tasks: list[TaskName] = Field(default_factory=lambda: list(ALL_TASKS))
    sample: Optional[SampleSpec] = None
    refinement: Optional[RefinementSpec] = None
    tolerances: Optional[ToleranceSpec] = None
    budget: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _source(self) -> "Scenario":
        if self.builtin is not None:
            explicit = [name for name in ("dimension", "hamiltonian", "state", "times", "partitions", "base_partition")
                        if getattr(self, name) is not None]
            if explicit:
                raise ValueError(f"builtin scenarios take no explicit fields, got {explicit}")
            return self
        if self.params:
            raise ValueError("params are only valid with builtin")
        if self.dimension is None or self.state is None:
            raise ValueError("explicit scenarios need dimension and state")
        if self.heisenberg:
            if self.base_partition is None or self.times is None or self.hamiltonian is None:
                raise ValueError("heisenberg scenarios need base_partition, times and hamiltonian")
            if self.partitions is not None:
                raise ValueError("heisenberg scenarios take base_partition, not partitions")
        elif self.partitions is None:
            raise ValueError("explicit scenarios need partitions (or heisenberg with base_partition)")
        return self
