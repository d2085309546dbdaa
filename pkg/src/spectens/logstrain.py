"""Hencky (logarithmic) strain eps = ln(B)/2 from the deformation gradient,
with the exact material tangent d(eps)/dB on every multiplicity branch."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import oracle
from .errors import KinematicsError
from .isofunc import (
    InvariantMapValues,
    apply_distinct,
    apply_double,
    half_log_map,
    scalar_map_invariants,
)
from .spectral import DEFAULT_TOLS, ClassifyTols, MultTag, Multiplicity, spectrum
from .tensor_core import IDENTITY2, IDENTITY4, SymTensor2, SymTensor4, norm

# Relative floor on the smallest stretch: below this the tensor logarithm is
# numerically meaningless even though the eigenvalue may still be positive.
SPD_RATIO_FLOOR = 1e-14

_HALF_LOG = half_log_map()


def left_cauchy_green(f) -> SymTensor2:
    """B = F F^T from a deformation gradient given as a flat row-major
    9-sequence or a 3x3 nested sequence.  Rejects det F <= 0."""
    if len(f) == 9:
        rows = [[float(f[0]), float(f[1]), float(f[2])],
                [float(f[3]), float(f[4]), float(f[5])],
                [float(f[6]), float(f[7]), float(f[8])]]
    elif len(f) == 3:
        rows = [[float(x) for x in row] for row in f]
        if any(len(row) != 3 for row in rows):
            raise KinematicsError("deformation gradient must be 3x3 or flat length 9")
    else:
        raise KinematicsError("deformation gradient must be 3x3 or flat length 9")
    det = (rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
           - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
           + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]))
    if not det > 0.0:
        raise KinematicsError(f"deformation gradient has det = {det!r}, expected > 0")

    def bb(i, j):
        return rows[i][0] * rows[j][0] + rows[i][1] * rows[j][1] + rows[i][2] * rows[j][2]

    return SymTensor2(bb(0, 0), bb(1, 1), bb(2, 2), bb(0, 1), bb(0, 2), bb(1, 2))


@dataclass(frozen=True, slots=True)
class LogStrainResult:
    b: SymTensor2
    eps: SymTensor2
    deps_db: SymTensor4
    branch: Multiplicity


def _double_invariant_map(i1b: float, qb: float, sgn: int) -> InvariantMapValues:
    """Invariant form of the half-log map at a double coincidence, written
    directly in (I1B, qB).

    The partials reduce to 1/(6 lam) combinations of the two stretches: the
    diagonal ones are (1/lam_hat + 2/lam_rep)/6 and (1/lam_rep + 2/lam_hat)/6,
    and both cross partials share the numerator 3 qB.  Note the denominators:
    (4 s qB - 2 I1B) throughout, never (s qB - 2 I1B).
    """
    s = float(sgn)
    lam_hat = (i1b - 2.0 * s * qb) / 3.0
    lam_rep = (i1b + s * qb) / 3.0
    if lam_hat <= 0.0 or lam_rep <= 0.0:
        raise KinematicsError("log strain requires positive principal stretches")
    den = (i1b + s * qb) * (4.0 * s * qb - 2.0 * i1b)
    return InvariantMapValues(
        i1s=0.5 * math.log(lam_hat) + math.log(lam_rep),
        qs=0.5 * s * math.log(lam_rep / lam_hat),
        di1s_di1t=3.0 * (s * qb - i1b) / den,
        di1s_dqt=3.0 * qb / ((2.0 * s * qb - i1b) * (i1b + s * qb)),
        dqs_di1t=3.0 * qb / den,
        dqs_dqt=-3.0 * i1b / den,
    )


def log_strain_from_b(b: SymTensor2,
                      tols: ClassifyTols = DEFAULT_TOLS) -> LogStrainResult:
    """eps = ln(B)/2 and d(eps)/dB for a left Cauchy-Green tensor B."""
    sp = spectrum(b, tols)
    if sp.lam[0] <= 0.0 or sp.lam[2] <= SPD_RATIO_FLOOR * sp.lam[0]:
        raise KinematicsError(
            f"B has principal stretches {sp.lam!r}; log strain needs a "
            "positive, non-degenerate spectrum")
    if sp.mult.tag is MultTag.TRIPLE:
        lam = sp.inv.i1 / 3.0
        eps = (0.5 * math.log(lam)) * IDENTITY2
        deps = SymTensor4((0.5 / lam) * IDENTITY4.m)
    elif sp.mult.tag is MultTag.DISTINCT:
        eps, deps = apply_distinct(b, sp, _HALF_LOG)
    else:
        qb = math.sqrt(3.0 * sp.inv.j2)
        mv = _double_invariant_map(sp.inv.i1, qb, sp.mult.theta_sign)
        eps, deps = apply_double(b, sp, mv)
    return LogStrainResult(b=b, eps=eps, deps_db=deps, branch=sp.mult)


def log_strain(f) -> LogStrainResult:
    """Hencky strain of a deformation gradient: ln(F F^T)/2 with tangent."""
    return log_strain_from_b(left_cauchy_green(f))


@dataclass(frozen=True, slots=True)
class TangentCheckReport:
    branch: Multiplicity
    h: float
    max_rel_error: float


def log_strain_tangent_check(f, h: float = 1e-6) -> TangentCheckReport:
    """Compare the analytic d(eps)/dB against central finite differences on B.

    Returns the relative Frobenius error; near a coincidence the differenced
    branch may differ from the evaluation branch, which is the interesting
    regime for this check.
    """
    b = left_cauchy_green(f)
    res = log_strain_from_b(b)
    step = h * max(1.0, norm(b))
    fd = oracle.fd_tensor_derivative(lambda x: log_strain_from_b(x).eps, b, step)
    num = math.sqrt(sum((x - y) ** 2 for x, y in zip(fd.as_list(), res.deps_db.as_list())))
    den = math.sqrt(sum(x * x for x in res.deps_db.as_list()))
    return TangentCheckReport(branch=res.branch, h=step, max_rel_error=num / den)
