"""Closed-form eigenvalues, multiplicity classification, eigenbases, spins."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import BranchError, DegeneracyError
from .tensor_core import (
    IDENTITY2,
    IDENTITY4,
    IXI,
    TAU_ABS,
    TAU_GAP,
    TAU_REL,
    InvariantSet,
    SymTensor2,
    SymTensor4,
    d2_I3,
    deviator,
    dyad,
    invariants,
    norm,
    sym_square,
)

_TWO_THIRDS_PI = 2.0 * math.pi / 3.0
_EPS = 2.220446049250313e-16


class MultTag(Enum):
    DISTINCT = "distinct"
    DOUBLE_HIGH_UNIQUE = "double_high_unique"
    DOUBLE_LOW_UNIQUE = "double_low_unique"
    TRIPLE = "triple"


@dataclass(frozen=True, slots=True)
class Multiplicity:
    """Eigenvalue coincidence pattern, decided purely from gaps.

    unique_index is the position of the non-repeated eigenvalue in the
    descending triple: 0 when the low pair is repeated, 2 when the high
    pair is repeated, None otherwise.
    """

    tag: MultTag
    unique_index: int | None = None

    @property
    def theta_sign(self) -> int:
        """+1 on the theta = +pi/6 branch (repeated high pair, lone low
        eigenvalue), -1 on theta = -pi/6 (repeated low pair, lone high)."""
        if self.tag is MultTag.DOUBLE_HIGH_UNIQUE:
            return -1
        if self.tag is MultTag.DOUBLE_LOW_UNIQUE:
            return 1
        raise BranchError("theta sign is defined only for double coincidence")


@dataclass(frozen=True, slots=True)
class ClassifyTols:
    """Coincidence thresholds: triple when the full spread falls below
    tau_abs + tau_rel*scale, double when one gap falls below tau_gap times
    the spread."""

    tau_abs: float = TAU_ABS
    tau_rel: float = TAU_REL
    tau_gap: float = TAU_GAP


DEFAULT_TOLS = ClassifyTols()


@dataclass(frozen=True, slots=True)
class Spectrum:
    """Ordered eigenvalues, their angles, classification, and eigenbases."""

    lam: tuple[float, float, float]
    beta: tuple[float, float, float]
    mult: Multiplicity
    bases: tuple[SymTensor2, SymTensor2, SymTensor2]
    inv: InvariantSet


def eigenvalues(inv: InvariantSet) -> tuple[float, float, float]:
    """Closed-form eigenvalues lam_i = I1/3 + (2/sqrt(3)) sqrt(J2) sin(beta_i),
    descending.

    Descending order is a theorem for theta in [-pi/6, pi/6]; roundoff can
    invert an exact tie by one ulp, which the final clamp repairs.
    """
    r = 2.0 / math.sqrt(3.0) * math.sqrt(inv.j2)
    third = inv.i1 / 3.0
    l1 = third + r * math.sin(inv.theta + _TWO_THIRDS_PI)
    l2 = third + r * math.sin(inv.theta)
    l3 = third + r * math.sin(inv.theta - _TWO_THIRDS_PI)
    slack = 1e-12 * (abs(l1) + abs(l2) + abs(l3)) + 1e-300
    assert l1 - l2 >= -slack and l2 - l3 >= -slack
    l2 = min(l2, l1)
    l3 = min(l3, l2)
    return (l1, l2, l3)


def classify(lam: tuple[float, float, float], scale: float,
             tols: ClassifyTols = DEFAULT_TOLS) -> Multiplicity:
    """Multiplicity from eigenvalue gaps; scale is the source tensor norm."""
    l1, l2, l3 = lam
    spread = l1 - l3
    if spread <= tols.tau_abs + tols.tau_rel * scale:
        return Multiplicity(MultTag.TRIPLE)
    if l2 - l3 <= tols.tau_gap * spread:
        return Multiplicity(MultTag.DOUBLE_HIGH_UNIQUE, 0)
    if l1 - l2 <= tols.tau_gap * spread:
        return Multiplicity(MultTag.DOUBLE_LOW_UNIQUE, 2)
    return Multiplicity(MultTag.DISTINCT)


def _distinct_basis(s: SymTensor2, ssq: SymTensor2, j2: float, li: float) -> SymTensor2:
    """Basis from the deviatoric numerator (s.s + li s + (li^2 - J2) I) / (3 li^2 - J2)
    with li the deviatoric eigenvalue lam_i - I1/3.

    Algebraically identical to the adjugate form lam_i((lam_i - I1) I + T) + adj(T)
    over the same denominator J2 (4 sin^2(beta_i) - 1), but free of the
    volumetric cancellation that form suffers near coincident eigenvalues.
    """
    den = 3.0 * li * li - j2
    if abs(den) <= 16.0 * _EPS * (j2 + 3.0 * li * li):
        raise BranchError("eigenbasis denominator vanished: repeated eigenvalue")
    c = li * li - j2
    return SymTensor2(
        (ssq.xx + li * s.xx + c) / den,
        (ssq.yy + li * s.yy + c) / den,
        (ssq.zz + li * s.zz + c) / den,
        (ssq.xy + li * s.xy) / den,
        (ssq.xz + li * s.xz) / den,
        (ssq.yz + li * s.yz) / den,
    )


def eigenbasis_distinct(t: SymTensor2, inv: InvariantSet, i: int,
                        lambda_i: float, beta_i: float) -> SymTensor2:
    """Eigenbasis N_i for a simple eigenvalue of a tensor with distinct spectrum."""
    if i not in (0, 1, 2):
        raise BranchError(f"eigenvalue index must be 0, 1 or 2, got {i}")
    li = lambda_i - inv.i1 / 3.0
    # beta_i and lambda_i must describe the same eigenvalue: the denominator
    # J2 (4 sin^2(beta_i) - 1) then equals 3 li^2 - J2.
    assert abs(inv.j2 * (4.0 * math.sin(beta_i) ** 2 - 1.0) - (3.0 * li * li - inv.j2)) \
        <= 1e-6 * (inv.j2 + 3.0 * li * li) + 1e-300
    s = deviator(t)
    return _distinct_basis(s, sym_square(s), inv.j2, li)


def eigenbasis_double(t: SymTensor2, inv: InvariantSet,
                      tols: ClassifyTols = DEFAULT_TOLS) -> tuple[SymTensor2, SymTensor2]:
    """(N_hat, N_rep) for a double coincidence: the basis of the lone
    eigenvalue and the shared basis of the repeated pair.

    The deviatoric part of N_hat is -sign * dev(t)/q with q = sqrt(3 J2) and
    the sign taken from the classified branch, never from floating theta.
    """
    lam = eigenvalues(inv)
    mult = classify(lam, norm(t), tols)
    if mult.tag is MultTag.TRIPLE:
        raise BranchError("triple coincidence has no distinguished basis")
    if mult.tag is MultTag.DISTINCT:
        raise BranchError("eigenvalues are distinct; use the simple-eigenvalue basis")
    sgn = float(mult.theta_sign)
    q = math.sqrt(3.0 * inv.j2)
    dev = deviator(t)
    third = 1.0 / 3.0
    f = -sgn / q
    n_hat = SymTensor2(third + f * dev.xx, third + f * dev.yy, third + f * dev.zz,
                       f * dev.xy, f * dev.xz, f * dev.yz)
    n_rep = SymTensor2(0.5 * (1.0 - n_hat.xx), 0.5 * (1.0 - n_hat.yy),
                       0.5 * (1.0 - n_hat.zz), -0.5 * n_hat.xy,
                       -0.5 * n_hat.xz, -0.5 * n_hat.yz)
    return n_hat, n_rep


_THIRD_I = SymTensor2(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0, 0.0, 0.0)


def spectrum(t: SymTensor2, tols: ClassifyTols = DEFAULT_TOLS) -> Spectrum:
    """Full spectral decomposition with branch dispatch."""
    inv = invariants(t)
    lam = eigenvalues(inv)
    mult = classify(lam, norm(t), tols)
    beta = (inv.theta + _TWO_THIRDS_PI, inv.theta, inv.theta - _TWO_THIRDS_PI)
    if mult.tag is MultTag.DISTINCT:
        s = deviator(t)
        ssq = sym_square(s)
        third = inv.i1 / 3.0
        bases = tuple(_distinct_basis(s, ssq, inv.j2, l - third) for l in lam)
    elif mult.tag is MultTag.TRIPLE:
        bases = (_THIRD_I, _THIRD_I, _THIRD_I)
    else:
        n_hat, n_rep = eigenbasis_double(t, inv, tols)
        if mult.unique_index == 0:
            bases = (n_hat, n_rep, n_rep)
        else:
            bases = (n_rep, n_rep, n_hat)
    return Spectrum(lam, beta, mult, bases, inv)


def spin(t: SymTensor2, sp: Spectrum, i: int) -> SymTensor4:
    """Derivative dN_i/dT of the eigenbasis of a simple eigenvalue.

    Defined for every index in the distinct case and only for the lone
    eigenvalue in the double case; never for a repeated eigenvalue.
    """
    mult = sp.mult
    if mult.tag is MultTag.TRIPLE:
        raise DegeneracyError("spin undefined: every eigenvalue is repeated")
    if mult.tag is not MultTag.DISTINCT and i != mult.unique_index:
        raise DegeneracyError("spin undefined for a repeated eigenvalue")
    if i not in (0, 1, 2):
        raise BranchError(f"eigenvalue index must be 0, 1 or 2, got {i}")
    j2 = sp.inv.j2
    i1 = sp.inv.i1
    sb = math.sin(sp.beta[i])
    den = j2 * (4.0 * sb * sb - 1.0)
    lam_i = sp.lam[i]
    n = sp.bases[i]
    m = (-4.0 * math.sqrt(3.0 * j2) * sb * dyad(n, n).m
         + (2.0 * lam_i - i1) * (dyad(n, IDENTITY2).m + dyad(IDENTITY2, n).m)
         + (dyad(n, t).m + dyad(t, n).m)
         + lam_i * (IDENTITY4.m - IXI.m)
         + d2_I3(t).m) * (1.0 / den)
    return SymTensor4(m)
