"""
관측량 Q_f = Σ_ω f(ω) p_ω.

f 는 Ω 전체에서 정의된 명시적 표(또는 history를 받는 함수)로 주어진다.
"""
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Union

import numpy as np

from app.analyser import Analyser, TimeLike
from app.commutant import CommutantDecomposition
from app.core.config import Tolerances, tolerances_for
from app.core.errors import InputError
from app.linalg import CMatrix, CVector, Projector, operator_norm
from app.linalg.types import frozen
from .measure import PathMeasure, normalized_state
from .space import Event, History

ValueTable = Union[Mapping[History, float], Callable[[History], float]]


@dataclass(frozen=True, eq=False)
class Observable:
    values: Mapping[History, float]
    operator: CMatrix
    decomposition: CommutantDecomposition

    @property
    def restricted(self) -> CMatrix:
        """H_π 좌표에서의 Q_f (B† Q_f B)"""
        basis = self.decomposition.h_pi.basis
        return basis.conj().T @ self.operator @ basis

    def expectation(self, phi: CVector, tol: Optional[Tolerances] = None) -> float:
        """⟨φ̂, Q_f φ̂⟩"""
        tol = tolerances_for(self.decomposition.dim, tol)
        phi_hat = normalized_state(self.decomposition.dim, phi, tol)
        return float(np.vdot(phi_hat, self.operator @ phi_hat).real)

    def spectral_projector(self, allowed: Iterable[float]) -> Projector:
        """p_{f ∈ B}"""
        chosen = set(float(v) for v in allowed)
        space = self.decomposition.space
        event = Event(space, frozenset(h for h, v in self.values.items() if v in chosen))
        return self.decomposition.event_projector(event)

    def spectrum(self) -> list[float]:
        """결합 사영이 0이 아닌 history 위에서 f 가 갖는 값들"""
        return sorted({self.values[h] for h in self.decomposition.joint_table})


def observable(an: Analyser, dec: CommutantDecomposition, f: ValueTable) -> Observable:
    """Q_f 를 만듭니다.

    Raises:
        InputError: f 가 어떤 history에서 정의되지 않았거나 실수가 아닌 경우
    """
    values: dict[History, float] = {}
    for history in dec.space.histories():
        try:
            raw = f(history) if callable(f) else f[history]
            values[history] = float(raw)
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"observable is not defined on history {history}") from e
        if not np.isfinite(values[history]):
            raise InputError(f"observable value on history {history} is not finite")
    operator = np.zeros((an.dim, an.dim), dtype=np.complex128)
    for history, entry in dec.joint_table.items():
        operator += values[history] * entry.projector.matrix
    return Observable(values, frozen(0.5 * (operator + operator.conj().T)), dec)


def label_index_observable(an: Analyser, dec: CommutantDecomposition, t: TimeLike) -> Observable:
    """f(ω) = Γ(t) 안에서 ω(t) 의 인덱스"""
    position = dec.space.time_index(t)
    labels = dec.space.labels_per_time[position]
    return observable(an, dec, lambda history: labels.index(history[position]))


def expectation_residual(obs: Observable, pm: PathMeasure) -> float:
    """|Σ_ω f(ω) P_φ(ω) − ⟨φ̂, Q_f φ̂⟩|"""
    integral = sum(obs.values[h] * p for h, p in pm.probabilities.items())
    return abs(integral - obs.expectation(pm.state, pm.tol))


def restricted_commutator_norm(first: Observable, second: Observable) -> float:
    """H_π 위로 제한한 ||[Q_f, Q_g]||"""
    a, b = first.restricted, second.restricted
    return operator_norm(a @ b - b @ a)
