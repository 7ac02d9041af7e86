"""
실험실 전체에서 사용하는 예외 계층입니다.

입력 오류(InputError)는 CLI에서 종료 코드 1, 전제 조건 위반(PreconditionError)과
수치 검증 실패(NumericalCheckError)는 종료 코드 2로 매핑됩니다.
"""


class LabError(Exception):
    """모든 실험실 예외의 기반 클래스"""


class InputError(LabError, ValueError):
    """호출자 입력 또는 시나리오 파일의 오류"""


class DimensionMismatchError(InputError):
    """피연산자의 차원이 서로 다름"""


class NotAProjectorError(InputError):
    """행렬이 Hermitian idempotent 조건을 만족하지 않음"""


class NonHermitianError(InputError):
    """생성자(Hamiltonian)가 Hermitian이 아님"""


class NonNestedChainError(InputError):
    """부분공간 사슬이 단조(증가 또는 감소)가 아님"""


class ZeroStateError(InputError):
    """0 벡터가 상태로 주어짐"""


class PartitionError(InputError):
    """셀들이 항등 분할(partition of identity)을 이루지 않음"""


class UnknownTimeError(InputError):
    """analyser에 없는 시간 라벨"""


class UnknownLabelError(InputError):
    """해당 시간의 Γ(t)에 없는 라벨"""


class RefinementError(InputError):
    """잘못된 세분(refinement) 또는 병합(coarsening) 정의"""


class InvalidEventError(InputError):
    """다른 history 공간의 사건이거나 형식이 잘못된 사건"""


class UnknownScenarioError(InputError):
    """내장 시나리오 이름이 없거나 파라미터가 잘못됨"""


class ScenarioParseError(InputError):
    """시나리오 파일 파싱 또는 스키마 검증 실패"""


class BudgetExceededError(InputError):
    """|Ω| 또는 시간 부분집합 탐색이 허용 예산을 초과함"""


class MissingLabelError(InputError):
    """구성 공간 사상(ConfigMap)에 라벨이 없음"""


class NullEventError(InputError):
    """확률 0 사건에 대한 조건부 확률"""


class PreconditionError(LabError, ValueError):
    """수치적으로 연산의 전제 조건이 성립하지 않음"""


class StateNotInCommutantError(PreconditionError):
    """상태가 교환 부분공간 H_π에 속하지 않음"""


class StateNotInCellError(PreconditionError):
    """상태가 지정된 셀의 치역에 속하지 않음"""


class DegenerateMeasureError(PreconditionError):
    """경로 측도의 전체 질량이 0에 가까움"""


class NumericalCheckError(LabError, ArithmeticError):
    """연산이 내부적으로 확인하는 항등식이 허용오차를 넘어 어긋남"""
