"""실행 보고서 데이터 모델"""
from typing import Any, Literal, Optional

from pydantic import BaseModel, Field


class CheckResult(BaseModel):
    """하나의 수치 검증 결과를 정의한다."""

    name: str
    """검증 항목 이름"""

    residual: float
    """측정된 잔차 (불리언 검증이면 통과 시 0, 실패 시 1)"""

    tolerance: float
    """비교에 사용한 허용오차"""

    passed: bool
    """residual < tolerance 여부"""

    detail: Optional[str] = None

    @classmethod
    def of(cls, name: str, residual: float, tolerance: float, detail: Optional[str] = None) -> "CheckResult":
        residual = float(residual)
        return cls(name=name, residual=residual, tolerance=float(tolerance),
                   passed=bool(residual < tolerance), detail=detail)

    @classmethod
    def flag(cls, name: str, ok: bool, detail: Optional[str] = None) -> "CheckResult":
        return cls(name=name, residual=0.0 if ok else 1.0, tolerance=0.5, passed=bool(ok), detail=detail)


class HpiReport(BaseModel):
    """교환 부분공간 계산 결과"""

    ambient_dim: int
    dim_h_pi: int
    dim_n: int
    histories_total: int
    histories_nonzero: int
    checks: list[CheckResult] = Field(default_factory=list)


class DefectEntry(BaseModel):
    s: str
    t: str
    b: str
    defect: float
    """||Σ_a p^s_a p^t_b (I − p^s_a)||"""


class DefectReport(BaseModel):
    """시간 쌍별 일관성 결손(defect)과 교환자 진단"""

    entries: list[DefectEntry] = Field(default_factory=list)
    max_defect: float = 0.0
    max_commutator: float = 0.0
    verdict: Literal["commuting", "non-commuting"] = "commuting"
    checks: list[CheckResult] = Field(default_factory=list)


class AgreementStat(BaseModel):
    s: str
    t: str
    frequency: float
    """X_s 와 X_t 의 라벨이 같은 궤적의 비율"""
    stderr: float
    """이항 표준오차 √(f(1−f)/n)"""


class SampleReport(BaseModel):
    """궤적 표본 통계"""

    sampler: Literal["exact", "independent"]
    n_paths: int
    rng_seed: int
    empirical_event_freqs: dict[str, float] = Field(default_factory=dict)
    record_correlation: list[AgreementStat] = Field(default_factory=list)
    label_freqs: dict[str, dict[str, float]] = Field(default_factory=dict)
    """시간 → 라벨 → 경험적 빈도"""


class RefinementReport(BaseModel):
    """세분 정리 검증 결과"""

    parent_times: list[str]
    child_times: list[str]
    events: list[str] = Field(default_factory=list)
    checks: list[CheckResult] = Field(default_factory=list)


class SigmaIdealReport(BaseModel):
    """null 사건 모임의 σ-ideal 성질 검증 결과"""

    null_events: list[str] = Field(default_factory=list)
    checks: list[CheckResult] = Field(default_factory=list)


class TaskResult(BaseModel):
    """하나의 작업(task) 실행 결과"""

    task: str
    passed: bool
    wall_clock: float = 0.0
    """초 단위 실행 시간"""
    data: dict[str, Any] = Field(default_factory=dict)
    checks: list[CheckResult] = Field(default_factory=list)
    error: Optional[str] = None
    """전제 조건 위반 또는 수치 검증 실패 메시지"""


class RunReport(BaseModel):
    """시나리오 한 번 실행의 전체 보고서"""

    version: str
    scenario: dict[str, Any]
    """재실행 가능한 시나리오 사본 (유효 seed, 허용오차, 예산 포함)"""
    analyser: dict[str, Any]
    tasks: list[TaskResult] = Field(default_factory=list)
    passed: bool = True
    max_residuals: dict[str, float] = Field(default_factory=dict)
    """작업별 최대 잔차"""


class RunResponse(BaseModel):
    """HTTP 실행 응답"""

    success: bool
    """입력이 유효하고 실행이 끝났는지 여부"""

    report: Optional[RunReport] = None
    """실행 보고서. 입력 오류인 경우 None이다."""

    error: Optional[str] = None
    """입력 오류 메시지"""

    exit_code: int = 0
    """CLI와 같은 종료 코드 (0 통과, 1 입력 오류, 2 검증 실패)"""


class ScenarioEntry(BaseModel):
    """내장 시나리오 목록 항목"""

    name: str
    description: str
    topic: str
    anchor: str
    params: dict[str, Any] = Field(default_factory=dict)
