"""Hermitian 생성자에 의한 유니터리 시간 발전 U_t = exp(−itH)"""
from typing import Optional

import numpy as np
from scipy import linalg as sla

from app.core.config import Tolerances, tolerances_for
from app.core.errors import NonHermitianError
from .types import CMatrix, as_matrix, operator_norm


def hermitian_evolution(hamiltonian: CMatrix, t: float, tol: Optional[Tolerances] = None) -> CMatrix:
    """고유분해 H = VΛV† 로 U_t = V·exp(−itΛ)·V† 를 계산합니다.

    Args:
        hamiltonian (CMatrix): Hermitian 생성자
        t (float): 시간
        tol (Optional[Tolerances], optional): 허용오차. Defaults to None.

    Raises:
        NonHermitianError: ||H − H†|| >= tol_op 인 경우

    Returns:
        CMatrix: 유니터리 U_t
    """
    h = as_matrix(hamiltonian)
    tol = tolerances_for(h.shape[0], tol)
    residual = operator_norm(h - h.conj().T)
    if residual >= tol.op:
        raise NonHermitianError(f"generator is not Hermitian (residual {residual:.3e})")
    eigvals, eigvecs = sla.eigh(0.5 * (h + h.conj().T))
    return (eigvecs * np.exp(-1j * float(t) * eigvals)) @ eigvecs.conj().T


def unitarity_residual(u: CMatrix) -> float:
    """||U†U − I||"""
    return operator_norm(u.conj().T @ u - np.eye(u.shape[0]))


def group_law_residual(hamiltonian: CMatrix, t: float, s: float) -> float:
    """||U_{t+s} − U_t·U_s||"""
    return operator_norm(hermitian_evolution(hamiltonian, t + s)
                         - hermitian_evolution(hamiltonian, t) @ hermitian_evolution(hamiltonian, s))
