"""Closed-form spectral decomposition of symmetric 3x3 tensors.

Eigenvalues, eigenprojections, and their derivatives come from the Lode-angle
trigonometric solution rather than an iterative solver, with explicit handling
of double and triple eigenvalue coincidences.  On top of that sit isotropic
tensor functions with exact consistent tangents, the logarithmic strain of a
deformation gradient, and stress reconstruction from invariant-space return
maps.
"""

__version__ = "0.1.0"

from .errors import (
    BranchError,
    ConditioningWarning,
    ContractError,
    ConvergenceError,
    DegeneracyError,
    KinematicsError,
    MapDomainError,
    SpectensError,
)
from .isofunc import (
    InvariantMapValues,
    ScalarEigenMap,
    apply_distinct,
    apply_double,
    apply_triple,
    check_scalar_map,
    cube_map,
    double_exp_map,
    half_log_map,
    identity_map,
    isotropic_function,
    scalar_map_invariants,
    square_map,
)
from .logstrain import (
    LogStrainResult,
    TangentCheckReport,
    left_cauchy_green,
    log_strain,
    log_strain_from_b,
    log_strain_tangent_check,
)
from .plasticity import (
    InvariantReturnMap,
    StrainPredictorInvariants,
    StressInvariants,
    consistent_tangent,
    linear_elastic_map,
    predictor_invariants,
    reconstruct_stress,
    stress_invariants,
    verify_return_map,
    vonmises_demo_map,
)
from .spectral import (
    DEFAULT_TOLS,
    ClassifyTols,
    MultTag,
    Multiplicity,
    Spectrum,
    classify,
    eigenbasis_distinct,
    eigenbasis_double,
    eigenvalues,
    spectrum,
    spin,
)
from .tensor_core import (
    IDENTITY2,
    IDENTITY4,
    IXI,
    ZERO2,
    InvariantSet,
    SymTensor2,
    SymTensor4,
    adjugate,
    d2_I3,
    dJ3_ds,
    ddot,
    det,
    deviator,
    dtheta_dT,
    dyad,
    invariants,
    norm,
    sym_kron,
    sym_square,
)

__all__ = [name for name in dir() if not name.startswith("_")]
