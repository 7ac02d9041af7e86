from .checks import (
    check_hpi_characterizations,
    ordered_product,
    projection_invariance_residual,
    shift_covariance_residual,
    theorem_two_checks,
)
from .decomposition import CommutantDecomposition, compute_commutant, event_subspace
from .joint import JointProjector, joint_projector
from .kernels import NaWitness, fa_kernel, na_member

__all__ = [
    "CommutantDecomposition",
    "JointProjector",
    "NaWitness",
    "check_hpi_characterizations",
    "compute_commutant",
    "event_subspace",
    "fa_kernel",
    "joint_projector",
    "na_member",
    "ordered_product",
    "projection_invariance_residual",
    "shift_covariance_residual",
    "theorem_two_checks",
]
