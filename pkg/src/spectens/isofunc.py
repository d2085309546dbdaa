"""Isotropic tensor functions S = sum eta(lam_i) N_i with exact tangents
dS/dT in all three eigenvalue-multiplicity regimes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import BranchError, ContractError, MapDomainError
from .spectral import DEFAULT_TOLS, ClassifyTols, MultTag, Spectrum, spectrum, spin
from .tensor_core import (
    IDENTITY2,
    IDENTITY4,
    IXI,
    SymTensor2,
    SymTensor4,
    deviator,
    dyad,
    sym_kron,
)


@dataclass(frozen=True, slots=True)
class ScalarEigenMap:
    """Scalar eigenvalue map eta with derivative, acting separately on each
    eigenvalue.  domain is an open interval; evaluators must be pure."""

    eval: Callable[[float], float]
    deriv: Callable[[float], float]
    domain: tuple[float, float] = (-math.inf, math.inf)

    def contains(self, lam: float) -> bool:
        return self.domain[0] < lam < self.domain[1]


def identity_map() -> ScalarEigenMap:
    return ScalarEigenMap(lambda x: x, lambda x: 1.0)


def half_log_map() -> ScalarEigenMap:
    """eta = ln(lam)/2, the logarithmic-strain kernel; domain lam > 0."""
    return ScalarEigenMap(lambda x: 0.5 * math.log(x), lambda x: 0.5 / x, (0.0, math.inf))


def square_map() -> ScalarEigenMap:
    return ScalarEigenMap(lambda x: x * x, lambda x: 2.0 * x)


def cube_map() -> ScalarEigenMap:
    return ScalarEigenMap(lambda x: x * x * x, lambda x: 3.0 * x * x)


def double_exp_map() -> ScalarEigenMap:
    """eta = exp(2 lam), the inverse of the logarithmic-strain kernel."""
    return ScalarEigenMap(lambda x: math.exp(2.0 * x), lambda x: 2.0 * math.exp(2.0 * x))


def check_scalar_map(f: ScalarEigenMap, samples, tol: float = 1e-6) -> None:
    """Self-consistency gate: deriv must match central differences of eval."""
    for lam in samples:
        h = 1e-6 * max(1.0, abs(lam))
        if not (f.contains(lam - h) and f.contains(lam + h)):
            continue
        fd = (f.eval(lam + h) - f.eval(lam - h)) / (2.0 * h)
        d = f.deriv(lam)
        if abs(fd - d) > tol * max(1.0, abs(d)):
            raise ContractError(
                f"scalar map derivative {d!r} disagrees with finite differences "
                f"{fd!r} at lam = {lam!r}")


@dataclass(frozen=True, slots=True)
class InvariantMapValues:
    """The degenerate branches see the map only through (I1S, qS) and their
    four partials in (I1T, qT); theta carries no information there."""

    i1s: float
    qs: float
    di1s_di1t: float
    di1s_dqt: float
    dqs_di1t: float
    dqs_dqt: float


def scalar_map_invariants(f: ScalarEigenMap, i1t: float, qt: float,
                          sign: int) -> InvariantMapValues:
    """Chain rule through the coincident eigenvalues lam_hat = (I1T - 2 s qT)/3
    (lone) and lam_rep = (I1T + s qT)/3 (repeated), s = theta sign.

    With qt = 0 this degenerates cleanly to the triple point."""
    s = float(sign)
    lam_hat = (i1t - 2.0 * s * qt) / 3.0
    lam_rep = (i1t + s * qt) / 3.0
    for lam in (lam_hat, lam_rep):
        if not f.contains(lam):
            raise MapDomainError(f"eigenvalue {lam!r} outside map domain {f.domain}")
    e_hat = f.eval(lam_hat)
    e_rep = f.eval(lam_rep)
    d_hat = f.deriv(lam_hat)
    d_rep = f.deriv(lam_rep)
    return InvariantMapValues(
        i1s=e_hat + 2.0 * e_rep,
        qs=s * (e_rep - e_hat),
        di1s_di1t=(d_hat + 2.0 * d_rep) / 3.0,
        di1s_dqt=2.0 * s * (d_rep - d_hat) / 3.0,
        dqs_di1t=s * (d_rep - d_hat) / 3.0,
        dqs_dqt=(d_rep + 2.0 * d_hat) / 3.0,
    )


def apply_distinct(t: SymTensor2, sp: Spectrum,
                   f: ScalarEigenMap) -> tuple[SymTensor2, SymTensor4]:
    """Evaluate S and dS/dT over a distinct spectrum.

    Assembly is anchored at the middle eigenvalue: sum(N_i) = I and
    sum(dN_i/dT) = 0 hold exactly, so only eigenvalue *differences* multiply
    the two bases and spins whose conditioning degrades near coincidence.
    """
    if sp.mult.tag is not MultTag.DISTINCT:
        raise BranchError(f"distinct-branch evaluation on {sp.mult.tag.value} input")
    for lam in sp.lam:
        if not f.contains(lam):
            raise MapDomainError(f"eigenvalue {lam!r} outside map domain {f.domain}")
    e = [f.eval(lam) for lam in sp.lam]
    d = [f.deriv(lam) for lam in sp.lam]
    n1, n2, n3 = sp.bases
    s_out = e[1] * IDENTITY2 + (e[0] - e[1]) * n1 + (e[2] - e[1]) * n3
    m = (d[0] * dyad(n1, n1).m + d[1] * dyad(n2, n2).m + d[2] * dyad(n3, n3).m
         + (e[0] - e[1]) * spin(t, sp, 0).m
         + (e[2] - e[1]) * spin(t, sp, 2).m)
    return s_out, SymTensor4(m)


def apply_double(t: SymTensor2, sp: Spectrum,
                 mv: InvariantMapValues) -> tuple[SymTensor2, SymTensor4]:
    """Evaluate S and dS/dT at a double coincidence from invariant map values.

    S = (I1S/3) I + (qS/qT) dev(t) plus an in-pair term.  The tangent carries
    the four partials on the volumetric/deviatoric axes plus the same in-pair
    structure: perturbations that split the repeated pair see the map respond
    with slope d eta/d lam|rep = 2 dI1S/dI1T - dqS/dqT, while the (I1, q)
    axes alone only encode qS/qT there; the difference acts through the
    traceless projector pair D -> P.D.P - (P:D) P/2, P = I - N_hat.  It
    vanishes for affine maps.

    The value-level in-pair term is identically zero at an exact coincidence;
    it matters because classification admits tensors whose pair is split by
    up to the gap tolerance, and without it the evaluation would respond to
    that residual anisotropy with the wrong slope, breaking finite-difference
    consistency and continuity against the generic branch.
    """
    if sp.mult.tag not in (MultTag.DOUBLE_HIGH_UNIQUE, MultTag.DOUBLE_LOW_UNIQUE):
        raise BranchError(f"double-branch evaluation on {sp.mult.tag.value} input")
    sgn = float(sp.mult.theta_sign)
    qt = math.sqrt(3.0 * sp.inv.j2)
    dev = deviator(t)
    n_hat_d = (-sgn / qt) * dev
    ratio = mv.qs / qt
    p_pair = SymTensor2(2.0 / 3.0 - n_hat_d.xx, 2.0 / 3.0 - n_hat_d.yy,
                        2.0 / 3.0 - n_hat_d.zz, -n_hat_d.xy, -n_hat_d.xz,
                        -n_hat_d.yz)
    pair_slope = 2.0 * mv.di1s_di1t - mv.dqs_dqt
    in_pair = SymTensor4(sym_kron(p_pair, p_pair).m - 0.5 * dyad(p_pair, p_pair).m)
    # The projector pair is built from the actual deviator, which itself
    # carries the residual anisotropy; that inflates the extracted in-pair
    # part by 4/3 to first order, hence the 3/4.
    s_out = ((mv.i1s / 3.0) * IDENTITY2 + ratio * dev
             + 0.75 * (pair_slope - ratio) * in_pair.apply(dev))
    m = ((mv.di1s_di1t / 3.0) * IXI.m
         + ratio * (IDENTITY4.m - IXI.m / 3.0)
         + 1.5 * (mv.dqs_dqt - ratio) * dyad(n_hat_d, n_hat_d).m
         - sgn * 0.5 * mv.di1s_dqt * dyad(IDENTITY2, n_hat_d).m
         - sgn * mv.dqs_di1t * dyad(n_hat_d, IDENTITY2).m
         + (pair_slope - ratio) * in_pair.m)
    return s_out, SymTensor4(m)


def apply_triple(t: SymTensor2, sp: Spectrum,
                 mv: InvariantMapValues) -> tuple[SymTensor2, SymTensor4]:
    """Evaluate S and dS/dT at a triple coincidence: S = (I1S/3) I and the
    tangent is the isotropic pair (dI1S/dI1T, dqS/dqT) on (I x I)/3 and the
    deviatoric identity."""
    if sp.mult.tag is not MultTag.TRIPLE:
        raise BranchError(f"triple-branch evaluation on {sp.mult.tag.value} input")
    s_out = (mv.i1s / 3.0) * IDENTITY2
    m = (mv.di1s_di1t / 3.0) * IXI.m + mv.dqs_dqt * (IDENTITY4.m - IXI.m / 3.0)
    return s_out, SymTensor4(m)


def isotropic_function(t: SymTensor2, f: ScalarEigenMap,
                       tols: ClassifyTols = DEFAULT_TOLS) -> tuple[SymTensor2, SymTensor4]:
    """Classify t, then evaluate S and its exact tangent on the right branch."""
    sp = spectrum(t, tols)
    if sp.mult.tag is MultTag.DISTINCT:
        return apply_distinct(t, sp, f)
    if sp.mult.tag is MultTag.TRIPLE:
        mv = scalar_map_invariants(f, sp.inv.i1, 0.0, 1)
        return apply_triple(t, sp, mv)
    qt = math.sqrt(3.0 * sp.inv.j2)
    mv = scalar_map_invariants(f, sp.inv.i1, qt, sp.mult.theta_sign)
    return apply_double(t, sp, mv)
