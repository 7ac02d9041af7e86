from .evolution import group_law_residual, hermitian_evolution, unitarity_residual
from .projector import Projector, Subspace
from .subspace import (
    commutator_norm,
    commutes,
    complement,
    contains,
    infimum_norm,
    intersect,
    kernel_of_psd,
    leaves_invariant,
    meet,
    meet_all,
    monotone_projector_limit,
    orthonormalize,
    range_of_psd,
    span_of_columns,
    subspace_distance,
)
from .types import (
    CMatrix,
    CVector,
    StateVector,
    as_matrix,
    as_vector,
    basis_vector,
    normalize,
    operator_norm,
)

__all__ = [
    "CMatrix",
    "CVector",
    "Projector",
    "StateVector",
    "Subspace",
    "as_matrix",
    "as_vector",
    "basis_vector",
    "commutator_norm",
    "commutes",
    "complement",
    "contains",
    "group_law_residual",
    "hermitian_evolution",
    "infimum_norm",
    "intersect",
    "kernel_of_psd",
    "leaves_invariant",
    "meet",
    "meet_all",
    "monotone_projector_limit",
    "normalize",
    "operator_norm",
    "orthonormalize",
    "range_of_psd",
    "span_of_columns",
    "subspace_distance",
    "unitarity_residual",
]
