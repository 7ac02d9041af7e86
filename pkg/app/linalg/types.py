"""복소 벡터/행렬 타입과 기본 변환 함수"""
from typing import Any

import numpy as np
import numpy.typing as npt
from scipy import linalg as sla

from app.core.errors import DimensionMismatchError, InputError, ZeroStateError

CVector = npt.NDArray[np.complex128]
"""C^d의 원소 (상태 φ, ψ, Ψ)"""

CMatrix = npt.NDArray[np.complex128]
"""dim x dim 복소 행렬 (U_t, H, Q_f 등)"""

StateVector = CVector


def frozen(array: np.ndarray) -> np.ndarray:
    """배열을 읽기 전용으로 만들어 반환합니다."""
    array.setflags(write=False)
    return array


def as_vector(values: Any) -> CVector:
    """입력을 유한한 1차원 complex128 배열로 변환합니다.

    Raises:
        InputError: 비어 있거나 1차원이 아니거나 유한하지 않은 값이 있는 경우
    """
    vec = np.array(values, dtype=np.complex128)
    if vec.ndim != 1 or vec.size == 0:
        raise InputError(f"expected a non-empty vector, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise InputError("vector has non-finite entries")
    return vec


def as_matrix(values: Any) -> CMatrix:
    """입력을 유한한 정사각 complex128 행렬로 변환합니다.

    Raises:
        InputError: 정사각 행렬이 아니거나 유한하지 않은 값이 있는 경우
    """
    mat = np.array(values, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
        raise InputError(f"expected a square matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise InputError("matrix has non-finite entries")
    return mat


def normalize(phi: CVector, tol_vec: float = 0.0) -> CVector:
    """φ̂ = φ / ||φ|| 를 반환합니다.

    Raises:
        ZeroStateError: ||φ|| <= tol_vec 인 경우
    """
    norm = float(np.linalg.norm(phi))
    if norm <= tol_vec or norm == 0.0:
        raise ZeroStateError("state vector is zero")
    return phi / norm


def operator_norm(matrix: np.ndarray) -> float:
    """최대 특이값(연산자 노름)"""
    if matrix.size == 0:
        return 0.0
    return float(sla.norm(matrix, 2))


def check_same_dim(*dims: int) -> int:
    """모든 차원이 같은지 확인하고 그 값을 반환합니다."""
    if len(set(dims)) != 1:
        raise DimensionMismatchError(f"dimension mismatch: {sorted(set(dims))}")
    return dims[0]


def basis_vector(dim: int, index: int) -> CVector:
    """표준 기저 벡터 e_index"""
    vec = np.zeros(dim, dtype=np.complex128)
    vec[index] = 1.0
    return vec
