from .report import (
    AgreementStat,
    CheckResult,
    DefectEntry,
    DefectReport,
    HpiReport,
    RefinementReport,
    RunReport,
    RunResponse,
    SampleReport,
    ScenarioEntry,
    SigmaIdealReport,
    TaskResult,
)
from .scenario import (
    ALL_TASKS,
    CellSpec,
    ConditionalSpec,
    EventSpec,
    HamiltonianSpec,
    ObservableSpec,
    RefinementSpec,
    SampleSpec,
    Scenario,
    SplitSpec,
    ToleranceSpec,
)

__all__ = [
    "ALL_TASKS",
    "AgreementStat",
    "CellSpec",
    "CheckResult",
    "ConditionalSpec",
    "DefectEntry",
    "DefectReport",
    "EventSpec",
    "HamiltonianSpec",
    "HpiReport",
    "ObservableSpec",
    "RefinementReport",
    "RefinementSpec",
    "RunReport",
    "RunResponse",
    "SampleReport",
    "SampleSpec",
    "Scenario",
    "ScenarioEntry",
    "SigmaIdealReport",
    "SplitSpec",
    "TaskResult",
    "ToleranceSpec",
]
