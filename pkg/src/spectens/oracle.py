"""Independent verification machinery: an iterative eigensolver and
finite-difference differentiators.

Everything here exists to check the closed-form routines from the outside;
nothing in this module is used on the production evaluation path.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from .errors import ConvergenceError
from .tensor_core import WEIGHTS, SymTensor2, SymTensor4, norm

_MAX_SWEEPS = 50
_OFF_TARGET_REL = 1e-13


class EigenPair(NamedTuple):
    value: float
    vector: tuple[float, float, float]


def _off_norm(a) -> float:
    return math.sqrt(2.0 * (a[0][1] ** 2 + a[0][2] ** 2 + a[1][2] ** 2))


def _rotate(a, v, p: int, q: int) -> None:
    """One classical Jacobi rotation zeroing a[p][q], accumulated into v."""
    apq = a[p][q]
    if apq == 0.0:
        return
    tau = (a[q][q] - a[p][p]) / (2.0 * apq)
    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    app, aqq = a[p][p], a[q][q]
    a[p][p] = app - t * apq
    a[q][q] = aqq + t * apq
    a[p][q] = a[q][p] = 0.0
    r = 3 - p - q  # the remaining index
    arp, arq = a[r][p], a[r][q]
    a[r][p] = a[p][r] = c * arp - s * arq
    a[r][q] = a[q][r] = s * arp + c * arq
    for i in range(3):
        vip, viq = v[i][p], v[i][q]
        v[i][p] = c * vip - s * viq
        v[i][q] = s * vip + c * viq


def jacobi_eigen(t: SymTensor2) -> tuple[EigenPair, EigenPair, EigenPair]:
    """Eigenpairs by cyclic Jacobi rotations, descending by value.

    Converges for any symmetric input; raises ConvergenceError if the
    off-diagonal norm is still above 1e-13*||t|| after 50 sweeps.
    """
    a = [list(row) for row in t.to_matrix()]
    v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    target = _OFF_TARGET_REL * norm(t)
    for _ in range(_MAX_SWEEPS):
        if _off_norm(a) <= target:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            _rotate(a, v, p, q)
    else:
        if _off_norm(a) > target:
            raise ConvergenceError(
                f"Jacobi failed to converge in {_MAX_SWEEPS} sweeps; "
                f"off-diagonal norm {_off_norm(a):.3e}")
    pairs = [EigenPair(a[k][k], (v[0][k], v[1][k], v[2][k])) for k in range(3)]
    pairs.sort(key=lambda pr: pr.value, reverse=True)
    return (pairs[0], pairs[1], pairs[2])


def projector(pair: EigenPair) -> SymTensor2:
    """Rank-one basis n x n of an eigenpair (sign-free by construction)."""
    n0, n1, n2 = pair.vector
    return SymTensor2(n0 * n0, n1 * n1, n2 * n2, n0 * n1, n0 * n2, n1 * n2)


def _unit_perturbation(slot: int, h: float) -> SymTensor2:
    comps = [0.0] * 6
    comps[slot] = h
    # A shear slot perturbs both off-diagonal positions of the represented
    # tensor; the weight division in the callers accounts for it.
    return SymTensor2(*comps)


def fd_tensor_derivative(f: Callable[[SymTensor2], SymTensor2],
                         t: SymTensor2, h: float | None = None) -> SymTensor4:
    """Central-difference derivative of a tensor-valued map under the
    library contraction convention.

    Default step is 1e-6*max(1, ||t||).
    """
    if h is None:
        h = 1e-6 * max(1.0, norm(t))
    cols = np.empty((6, 6))
    for b in range(6):
        delta = _unit_perturbation(b, h)
        hi = f(t + delta)
        lo = f(t - delta)
        den = 2.0 * h * WEIGHTS[b]
        cols[:, b] = [(u - l) / den for u, l in zip(hi.as_tuple(), lo.as_tuple())]
    return SymTensor4(cols)


def fd_invariant_gradient(f: Callable[[SymTensor2], float],
                          t: SymTensor2, h: float | None = None) -> SymTensor2:
    """Central-difference gradient of a scalar invariant, same convention."""
    if h is None:
        h = 1e-6 * max(1.0, norm(t))
    comps = []
    for b in range(6):
        delta = _unit_perturbation(b, h)
        comps.append((f(t + delta) - f(t - delta)) / (2.0 * h * WEIGHTS[b]))
    return SymTensor2(*comps)
