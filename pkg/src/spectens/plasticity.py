"""Stress reconstruction from invariant-space return maps.

A return map sends the strain-predictor invariants (eps_v, eps_q, theta_eps)
to stress invariants (p, q, theta_sigma).  Reconstruction rebuilds the full
stress tensor on the predictor's eigenbasis; the consistent tangent
d(sigma)/d(eps) follows by the chain rule through eigenvalues, basis spins,
and the Lode-angle gradient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import ContractError
from .spectral import DEFAULT_TOLS, ClassifyTols, MultTag, Spectrum, spectrum, spin
from .tensor_core import (
    IDENTITY2,
    IDENTITY4,
    IXI,
    SymTensor2,
    SymTensor4,
    deviator,
    dtheta_dT,
    dyad,
    invariants,
)

ThreeVec = tuple[float, float, float]


@dataclass(frozen=True, slots=True)
class StrainPredictorInvariants:
    """Volumetric strain eps_v = tr(eps), deviatoric magnitude
    eps_q = 2 sqrt(J2/3), and the Lode angle of the strain predictor."""

    eps_v: float
    eps_q: float
    theta_eps: float
    theta_defined: bool


@dataclass(frozen=True, slots=True)
class StressInvariants:
    """Mean stress p = I1/3, deviatoric magnitude q = sqrt(3 J2), Lode angle."""

    p: float
    q: float
    theta_sigma: float


@dataclass(frozen=True, slots=True)
class InvariantReturnMap:
    """Invariant-space constitutive map.  Each scalar takes
    (eps_v, eps_q, theta_eps); each gradient returns the partials in that
    same order.  q must be nonnegative on the admissible domain."""

    p: Callable[[float, float, float], float]
    q: Callable[[float, float, float], float]
    theta_sigma: Callable[[float, float, float], float]
    grad_p: Callable[[float, float, float], ThreeVec]
    grad_q: Callable[[float, float, float], ThreeVec]
    grad_theta_sigma: Callable[[float, float, float], ThreeVec]


def predictor_invariants(eps: SymTensor2) -> StrainPredictorInvariants:
    inv = invariants(eps)
    return StrainPredictorInvariants(
        eps_v=inv.i1,
        eps_q=2.0 * math.sqrt(inv.j2 / 3.0),
        theta_eps=inv.theta,
        theta_defined=inv.theta_defined,
    )


def stress_invariants(sig: SymTensor2) -> StressInvariants:
    inv = invariants(sig)
    return StressInvariants(p=inv.i1 / 3.0, q=math.sqrt(3.0 * inv.j2),
                            theta_sigma=inv.theta)


def _map_values(rm: InvariantReturnMap, args: tuple[float, float, float]):
    p = rm.p(*args)
    q = rm.q(*args)
    if q < 0.0:
        raise ContractError(f"return map produced q = {q!r} < 0 at {args!r}")
    return p, q


def reconstruct_stress(eps_star: SymTensor2, rm: InvariantReturnMap,
                       tols: ClassifyTols = DEFAULT_TOLS) -> SymTensor2:
    """sigma(eps_star) on the branch picked by the predictor's multiplicity.

    Distinct: the three principal stresses p + (2/3) q sin(beta_sigma_i) are
    placed on the predictor's eigenbases (anchored at the middle one).
    Double/Triple: theta carries no information, so the stress deviator is
    taken parallel to the strain deviator and theta_sigma is not consulted.
    """
    sp = spectrum(eps_star, tols)
    pred = predictor_invariants(eps_star)
    if sp.mult.tag is MultTag.TRIPLE:
        p = rm.p(pred.eps_v, 0.0, 0.0)
        return p * IDENTITY2
    args = (pred.eps_v, pred.eps_q, pred.theta_eps)
    p, q = _map_values(rm, args)
    if sp.mult.tag is not MultTag.DISTINCT:
        return p * IDENTITY2 + (2.0 * q / (3.0 * pred.eps_q)) * deviator(eps_star)
    th = rm.theta_sigma(*args)
    sig = [p + (2.0 / 3.0) * q * math.sin(th + shift)
           for shift in (2.0 * math.pi / 3.0, 0.0, -2.0 * math.pi / 3.0)]
    n1, _, n3 = sp.bases
    return sig[1] * IDENTITY2 + (sig[0] - sig[1]) * n1 + (sig[2] - sig[1]) * n3


def _distinct_tangent(eps_star: SymTensor2, sp: Spectrum,
                      pred: StrainPredictorInvariants,
                      rm: InvariantReturnMap) -> SymTensor4:
    args = (pred.eps_v, pred.eps_q, pred.theta_eps)
    p, q = _map_values(rm, args)
    th = rm.theta_sigma(*args)
    gp = rm.grad_p(*args)
    gq = rm.grad_q(*args)
    gth = rm.grad_theta_sigma(*args)
    shifts = (2.0 * math.pi / 3.0, 0.0, -2.0 * math.pi / 3.0)
    sig = [p + (2.0 / 3.0) * q * math.sin(th + sh) for sh in shifts]

    # Gradients of the predictor invariants themselves.
    d_ev = IDENTITY2
    d_eq = (2.0 / (3.0 * pred.eps_q)) * deviator(eps_star)
    d_th = dtheta_dT(eps_star, sp.inv)

    m = ((sig[0] - sig[1]) * spin(eps_star, sp, 0).m
         + (sig[2] - sig[1]) * spin(eps_star, sp, 2).m)
    for i, sh in enumerate(shifts):
        sin_b = math.sin(th + sh)
        cos_b = math.cos(th + sh)
        # d(sigma_i)/d(x) for x in (eps_v, eps_q, theta_eps).
        coeff = [gp[k] + (2.0 / 3.0) * (gq[k] * sin_b + q * cos_b * gth[k])
                 for k in range(3)]
        g_i = coeff[0] * d_ev + coeff[1] * d_eq + coeff[2] * d_th
        m = m + dyad(sp.bases[i], g_i).m
    return SymTensor4(m)


def consistent_tangent(eps_star: SymTensor2, rm: InvariantReturnMap,
                       tols: ClassifyTols = DEFAULT_TOLS) -> SymTensor4:
    """Exact d(sigma)/d(eps_star) of reconstruct_stress at eps_star.

    On the Double and Triple branches the theta partials of the map are
    ignored by construction: there the reconstruction never consults
    theta_sigma, and in-pair perturbations are carried by the q/eps_q and
    identity terms.
    """
    sp = spectrum(eps_star, tols)
    pred = predictor_invariants(eps_star)
    if sp.mult.tag is MultTag.TRIPLE:
        gp = rm.grad_p(pred.eps_v, 0.0, 0.0)
        gq = rm.grad_q(pred.eps_v, 0.0, 0.0)
        m = gp[0] * IXI.m + (2.0 / 3.0) * gq[1] * (IDENTITY4.m - IXI.m / 3.0)
        return SymTensor4(m)
    if sp.mult.tag is MultTag.DISTINCT:
        return _distinct_tangent(eps_star, sp, pred, rm)
    args = (pred.eps_v, pred.eps_q, pred.theta_eps)
    _, q = _map_values(rm, args)
    gp = rm.grad_p(*args)
    gq = rm.grad_q(*args)
    e = deviator(eps_star)
    f = 2.0 / (3.0 * pred.eps_q)
    m = (gp[0] * IXI.m
         + f * (gp[1] * dyad(IDENTITY2, e).m
                + gq[0] * dyad(e, IDENTITY2).m
                + f * (gq[1] - q / pred.eps_q) * dyad(e, e).m
                + q * (IDENTITY4.m - IXI.m / 3.0)))
    return SymTensor4(m)


def linear_elastic_map(bulk: float, shear: float) -> InvariantReturnMap:
    """p = K eps_v, q = 3 G eps_q, theta_sigma = theta_eps: the invariant form
    of isotropic linear elasticity."""
    if bulk <= 0.0 or shear <= 0.0:
        raise ContractError("elastic moduli must be positive")
    return InvariantReturnMap(
        p=lambda ev, eq, th: bulk * ev,
        q=lambda ev, eq, th: 3.0 * shear * eq,
        theta_sigma=lambda ev, eq, th: th,
        grad_p=lambda ev, eq, th: (bulk, 0.0, 0.0),
        grad_q=lambda ev, eq, th: (0.0, 3.0 * shear, 0.0),
        grad_theta_sigma=lambda ev, eq, th: (0.0, 0.0, 1.0),
    )


def vonmises_demo_map(bulk: float, shear: float, yield_q: float) -> InvariantReturnMap:
    """Radial-return von Mises map: elastic below q_y, q capped at q_y above.
    At the yield tie 3 G eps_q == q_y the plastic branch wins."""
    if bulk <= 0.0 or shear <= 0.0 or yield_q <= 0.0:
        raise ContractError("demo map parameters must be positive")

    def q_fn(ev, eq, th):
        return min(3.0 * shear * eq, yield_q)

    def grad_q_fn(ev, eq, th):
        if 3.0 * shear * eq >= yield_q:
            return (0.0, 0.0, 0.0)
        return (0.0, 3.0 * shear, 0.0)

    return InvariantReturnMap(
        p=lambda ev, eq, th: bulk * ev,
        q=q_fn,
        theta_sigma=lambda ev, eq, th: th,
        grad_p=lambda ev, eq, th: (bulk, 0.0, 0.0),
        grad_q=grad_q_fn,
        grad_theta_sigma=lambda ev, eq, th: (0.0, 0.0, 1.0),
    )


def verify_return_map(rm: InvariantReturnMap, points, tol: float = 1e-6) -> None:
    """Gate a user map before trusting its gradients.

    At every point, all nine declared partials must match finite differences
    of the scalars (forward differences on the eps_q axis when a central
    stencil would cross eps_q < 0).  Additionally, at eps_q = 0 the map must
    decouple volume from shear: dp/d(eps_q) = dq/d(eps_v) = 0, or a purely
    volumetric state would not produce a purely volumetric stress.
    """
    scalars = ((rm.p, rm.grad_p, "p"), (rm.q, rm.grad_q, "q"),
               (rm.theta_sigma, rm.grad_theta_sigma, "theta_sigma"))
    for pt in points:
        ev, eq, th = (float(x) for x in pt)
        for fn, grad, name in scalars:
            g = grad(ev, eq, th)
            for axis in range(3):
                x0 = (ev, eq, th)[axis]
                h = 1e-6 * max(1.0, abs(x0))
                lo = [ev, eq, th]
                hi = [ev, eq, th]
                if axis == 1 and eq - h < 0.0:
                    hi[1] = eq + h
                    fd = (fn(*hi) - fn(ev, eq, th)) / h
                else:
                    lo[axis] = x0 - h
                    hi[axis] = x0 + h
                    fd = (fn(*hi) - fn(*lo)) / (2.0 * h)
                if abs(fd - g[axis]) > tol * max(1.0, abs(g[axis])):
                    raise ContractError(
                        f"return map {name} gradient component {axis} is "
                        f"{g[axis]!r} but finite differences give {fd!r} at "
                        f"{(ev, eq, th)!r}")
        gp0 = rm.grad_p(ev, 0.0, 0.0)
        gq0 = rm.grad_q(ev, 0.0, 0.0)
        if abs(gp0[1]) > tol or abs(gq0[0]) > tol:
            raise ContractError(
                "return map couples volume and shear at eps_q = 0: "
                f"dp/deps_q = {gp0[1]!r}, dq/deps_v = {gq0[0]!r}")
