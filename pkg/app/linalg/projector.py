"""
사영(Projector)과 부분공간(Subspace) 타입.

Subspace는 정규직교 기저 행렬(dim x k)로, Projector는 Hermitian idempotent 행렬로 표현한다.
k = 0 인 기저는 0 부분공간을 뜻하며, 양의 폭을 가진 0 행렬로 표현하지 않는다.
두 타입 모두 생성 후 변경되지 않는다.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from scipy import linalg as sla

from app.core.config import Tolerances, tolerances_for
from app.core.errors import DimensionMismatchError, NotAProjectorError
from .types import CMatrix, CVector, as_matrix, frozen


@dataclass(frozen=True, eq=False)
class Subspace:
    """C^dim의 부분공간. basis 열들은 정규직교한다."""

    basis: CMatrix
    """dim x k 정규직교 기저 행렬"""

    def __post_init__(self) -> None:
        basis = np.array(self.basis, dtype=np.complex128)
        if basis.ndim != 2 or basis.shape[0] == 0:
            raise DimensionMismatchError(f"subspace basis must be dim x k, got shape {basis.shape}")
        object.__setattr__(self, "basis", frozen(basis))

    @property
    def dim(self) -> int:
        """주변 공간(ambient space)의 차원"""
        return self.basis.shape[0]

    @property
    def k(self) -> int:
        """부분공간의 차원"""
        return self.basis.shape[1]

    @classmethod
    def zero(cls, dim: int) -> "Subspace":
        return cls(np.zeros((dim, 0), dtype=np.complex128))

    @classmethod
    def full(cls, dim: int) -> "Subspace":
        return cls(np.eye(dim, dtype=np.complex128))

    @cached_property
    def projector(self) -> "Projector":
        """이 부분공간 위로의 사영 B·B†"""
        matrix = self.basis @ self.basis.conj().T
        return Projector(frozen(0.5 * (matrix + matrix.conj().T)), self.k)

    def orthonormality_residual(self) -> float:
        """||B†B − I||_F"""
        gram = self.basis.conj().T @ self.basis
        return float(np.linalg.norm(gram - np.eye(self.k)))

    def residual(self, vector: CVector) -> float:
        """벡터에서 이 부분공간 성분을 뺀 나머지의 노름"""
        return float(np.linalg.norm(vector - self.basis @ (self.basis.conj().T @ vector)))

    def contains_vector(self, vector: CVector, tol: Optional[Tolerances] = None) -> bool:
        tol = tolerances_for(self.dim, tol)
        return self.residual(vector) < tol.vec


@dataclass(frozen=True, eq=False)
class Projector:
    """Hermitian idempotent 행렬과 그 랭크"""

    matrix: CMatrix
    rank: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_matrix(cls, values, tol: Optional[Tolerances] = None) -> "Projector":
        """행렬을 검증하여 Projector를 만듭니다.

        Hermitian 잔차와 idempotent 잔차를 tol_op 기준으로 확인하고,
        랭크는 trace를 반올림한 값으로 정합니다.

        Args:
            values: dim x dim 행렬
            tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

        Raises:
            NotAProjectorError: Hermitian 또는 idempotent 조건을 위반한 경우

        Returns:
            Projector: 검증된 사영
        """
        matrix = as_matrix(values)
        tol = tolerances_for(matrix.shape[0], tol)
        herm = float(np.linalg.norm(matrix - matrix.conj().T))
        if herm >= tol.op:
            raise NotAProjectorError(f"matrix is not Hermitian (residual {herm:.3e})")
        matrix = 0.5 * (matrix + matrix.conj().T)
        idem = float(np.linalg.norm(matrix @ matrix - matrix))
        if idem >= tol.op:
            raise NotAProjectorError(f"matrix is not idempotent (residual {idem:.3e})")
        trace = float(np.trace(matrix).real)
        rank = int(round(trace))
        if abs(trace - rank) >= max(tol.op, 1e-6):
            raise NotAProjectorError(f"projector trace {trace} is not an integer")
        return cls(frozen(matrix), rank)

    @classmethod
    def zero(cls, dim: int) -> "Projector":
        return cls(frozen(np.zeros((dim, dim), dtype=np.complex128)), 0)

    @classmethod
    def identity(cls, dim: int) -> "Projector":
        return cls(frozen(np.eye(dim, dtype=np.complex128)), dim)

    @classmethod
    def diagonal(cls, mask) -> "Projector":
        """0/1 대각 성분으로 좌표 사영을 만듭니다."""
        diag = np.asarray(mask, dtype=float)
        if not np.all((diag == 0.0) | (diag == 1.0)):
            raise NotAProjectorError("diagonal projector entries must be 0 or 1")
        return cls(frozen(np.diag(diag).astype(np.complex128)), int(diag.sum()))

    @cached_property
    def subspace(self) -> Subspace:
        """치역(range)의 정규직교 기저. 고유값 1/2를 기준으로 나눈다."""
        if self.rank == 0:
            return Subspace.zero(self.dim)
        eigvals, eigvecs = sla.eigh(self.matrix)
        return Subspace(eigvecs[:, eigvals > 0.5])

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    def apply(self, vector: CVector) -> CVector:
        return self.matrix @ vector

    def hermitian_residual(self) -> float:
        return float(np.linalg.norm(self.matrix - self.matrix.conj().T))

    def idempotent_residual(self) -> float:
        return float(np.linalg.norm(self.matrix @ self.matrix - self.matrix))
