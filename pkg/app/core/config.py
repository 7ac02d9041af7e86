"""
history-space 실험실의 설정 정보입니다.

이 모듈은 Pydantic의 BaseSettings를 사용하여 애플리케이션 설정을 정의하고,
기본값과 환경 변수(HISTORYLAB_ 접두사) 지원을 제공합니다.
수치 허용오차(tolerance)는 모두 이 설정에서 차원(dim)에 맞춰 파생됩니다.
"""
import math
from dataclasses import dataclass
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


@dataclass(frozen=True)
class Tolerances:
    """하나의 차원에 대해 계산된 허용오차 묶음입니다."""

    op: float
    """연산자 잔차(Hermitian, idempotent, 행렬 항등식) 허용오차"""
    vec: float
    """벡터가 0인지 판정하는 노름 허용오차"""
    prob: float
    """확률 합과 확률 항등식 허용오차"""
    meet: float
    """meet 계산 시 (I-p)+(I-q)의 0 고유값 판정 임계값"""
    rank: Optional[float] = None
    """수치 랭크 판정 임계값. None이면 dim * eps * 최대 특이값을 사용"""


class Settings(BaseSettings):
    """애플리케이션 설정 구성입니다.

    이 클래스는 모든 애플리케이션 설정을 기본값과 함께 정의합니다.
    설정은 환경 변수를 통해 재정의할 수 있습니다.
    """
    model_config = SettingsConfigDict(env_file=".env", env_prefix="HISTORYLAB_", extra="ignore")

    app_name: str = "historylab"
    version: str = "0.1.0"
    host: str = "0.0.0.0"
    port: int = 8001
    debug: bool = False
    log_level: str = "WARNING"

    tol_op_scale: float = 1e-10
    tol_vec_scale: float = 1e-9
    tol_prob: float = 1e-10
    tol_meet_scale: float = 1e-9
    tol_rank: Optional[float] = None
    tol_override: Optional[float] = None
    """설정되면 op, vec, prob 허용오차를 모두 이 값으로 바꾼다 (CLI --tol)"""
    rank_floor: float = 1e-14

    budget: int = 65536
    na_max_times: int = 12
    threads: int = 1
    default_seed: int = 20240917
    default_samples: int = 10000
    max_conditional_pairs: int = 64

    def tolerances(self, dim: int) -> Tolerances:
        """주어진 차원에 대한 허용오차를 계산합니다.

        Args:
            dim (int): 힐베르트 공간의 차원

        Returns:
            Tolerances: tol_op = scale * dim, tol_vec = scale * sqrt(dim) 규칙으로 계산된 허용오차
        """
        dim = max(int(dim), 1)
        if self.tol_override is not None:
            return Tolerances(op=self.tol_override, vec=self.tol_override, prob=self.tol_override,
                              meet=self.tol_meet_scale * dim, rank=self.tol_rank)
        return Tolerances(
            op=self.tol_op_scale * dim,
            vec=self.tol_vec_scale * math.sqrt(dim),
            prob=self.tol_prob,
            meet=self.tol_meet_scale * dim,
            rank=self.tol_rank,
        )


settings = Settings()


def tolerances_for(dim: int, tol: Optional[Tolerances] = None) -> Tolerances:
    """명시된 허용오차가 없으면 전역 설정에서 파생합니다."""
    return tol if tol is not None else settings.tolerances(dim)
