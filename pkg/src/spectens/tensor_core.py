"""Symmetric second/fourth-order tensor values, their algebra, and invariants.

Component storage order is fixed as (11, 22, 33, 12, 13, 23); each shear
component is stored once, so every double contraction weights the shear
slots by 2.  Fourth-order tensors are 6x6 arrays acting on that 6-vector
with the shear doubling absorbed into the contraction, not into the stored
entries (the stored identity has diagonal (1, 1, 1, 1/2, 1/2, 1/2)).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConditioningWarning, ContractError, DegeneracyError

WEIGHTS = (1.0, 1.0, 1.0, 2.0, 2.0, 2.0)

# Eigenvalue-coincidence floors shared by the multiplicity classification,
# the theta-undefined flag, and the degenerate-formula guards.
TAU_ABS = 1e-12
TAU_REL = 1e-10
TAU_GAP = 1e-7

# |cos 3*theta| below this is treated as a repeated eigenvalue for the
# purposes of the theta gradient.
COS3THETA_FLOOR = 1e-8

# Pre-clamp excess of |sin 3*theta| beyond 1 that triggers a warning.
_CLAMP_WARN_EXCESS = 1e-8


@dataclass(frozen=True, slots=True)
class SymTensor2:
    """Symmetric second-order 3x3 tensor; off-diagonal entries stored once."""

    xx: float
    yy: float
    zz: float
    xy: float
    xz: float
    yz: float

    @classmethod
    def from_seq(cls, seq) -> "SymTensor2":
        vals = tuple(float(x) for x in seq)
        if len(vals) != 6:
            raise ContractError(f"expected 6 components (11,22,33,12,13,23), got {len(vals)}")
        return cls(*vals)

    @classmethod
    def from_matrix(cls, m) -> "SymTensor2":
        """Build from a 3x3 array-like, symmetrizing the off-diagonal part."""
        return cls(
            float(m[0][0]), float(m[1][1]), float(m[2][2]),
            0.5 * (float(m[0][1]) + float(m[1][0])),
            0.5 * (float(m[0][2]) + float(m[2][0])),
            0.5 * (float(m[1][2]) + float(m[2][1])),
        )

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.xx, self.yy, self.zz, self.xy, self.xz, self.yz)

    def to_matrix(self) -> list[list[float]]:
        return [
            [self.xx, self.xy, self.xz],
            [self.xy, self.yy, self.yz],
            [self.xz, self.yz, self.zz],
        ]

    def trace(self) -> float:
        return self.xx + self.yy + self.zz

    def __add__(self, o: "SymTensor2") -> "SymTensor2":
        return SymTensor2(self.xx + o.xx, self.yy + o.yy, self.zz + o.zz,
                          self.xy + o.xy, self.xz + o.xz, self.yz + o.yz)

    def __sub__(self, o: "SymTensor2") -> "SymTensor2":
        return SymTensor2(self.xx - o.xx, self.yy - o.yy, self.zz - o.zz,
                          self.xy - o.xy, self.xz - o.xz, self.yz - o.yz)

    def __neg__(self) -> "SymTensor2":
        return SymTensor2(-self.xx, -self.yy, -self.zz, -self.xy, -self.xz, -self.yz)

    def __mul__(self, a: float) -> "SymTensor2":
        a = float(a)
        return SymTensor2(a * self.xx, a * self.yy, a * self.zz,
                          a * self.xy, a * self.xz, a * self.yz)

    __rmul__ = __mul__


IDENTITY2 = SymTensor2(1.0, 1.0, 1.0, 0.0, 0.0, 0.0)
ZERO2 = SymTensor2(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def ddot(a: SymTensor2, b: SymTensor2) -> float:
    """Double contraction a:b with shear terms counted twice."""
    return (a.xx * b.xx + a.yy * b.yy + a.zz * b.zz
            + 2.0 * (a.xy * b.xy + a.xz * b.xz + a.yz * b.yz))


def norm(t: SymTensor2) -> float:
    """Frobenius norm of the full 3x3 tensor."""
    return math.sqrt(ddot(t, t))


def deviator(t: SymTensor2) -> SymTensor2:
    m = t.trace() / 3.0
    return SymTensor2(t.xx - m, t.yy - m, t.zz - m, t.xy, t.xz, t.yz)


def sym_square(t: SymTensor2) -> SymTensor2:
    """t.t, which is symmetric whenever t is."""
    return SymTensor2(
        t.xx * t.xx + t.xy * t.xy + t.xz * t.xz,
        t.xy * t.xy + t.yy * t.yy + t.yz * t.yz,
        t.xz * t.xz + t.yz * t.yz + t.zz * t.zz,
        t.xx * t.xy + t.xy * t.yy + t.xz * t.yz,
        t.xx * t.xz + t.xy * t.yz + t.xz * t.zz,
        t.xy * t.xz + t.yy * t.yz + t.yz * t.zz,
    )


def det(t: SymTensor2) -> float:
    return (t.xx * (t.yy * t.zz - t.yz * t.yz)
            - t.xy * (t.xy * t.zz - t.yz * t.xz)
            + t.xz * (t.xy * t.yz - t.yy * t.xz))


def adjugate(t: SymTensor2) -> SymTensor2:
    """Adjugate (transposed cofactors); equals det(t) t^-1 when t is invertible."""
    return SymTensor2(
        t.yy * t.zz - t.yz * t.yz,
        t.xx * t.zz - t.xz * t.xz,
        t.xx * t.yy - t.xy * t.xy,
        t.xz * t.yz - t.xy * t.zz,
        t.xy * t.yz - t.xz * t.yy,
        t.xy * t.xz - t.yz * t.xx,
    )


@dataclass(frozen=True, slots=True)
class InvariantSet:
    """Principal invariants of a tensor and of its deviator.

    theta is the Lode angle in [-pi/6, pi/6]; when J2 sits below the
    coincidence floor it is reported as 0.0 with theta_defined False.
    """

    i1: float
    i2: float
    i3: float
    j2: float
    j3: float
    theta: float
    theta_defined: bool


def invariants(t: SymTensor2) -> InvariantSet:
    """All six invariants; the arcsin argument for theta is clamped to [-1, 1].

    A pre-clamp excess beyond 1e-8 signals ConditioningWarning: that much
    overshoot cannot come from roundoff near a repeated eigenvalue alone.
    """
    i1 = t.trace()
    i2 = (t.xx * t.yy + t.yy * t.zz + t.zz * t.xx
          - t.xy * t.xy - t.xz * t.xz - t.yz * t.yz)
    i3 = det(t)
    s = deviator(t)
    j2 = (0.5 * (s.xx * s.xx + s.yy * s.yy + s.zz * s.zz)
          + s.xy * s.xy + s.xz * s.xz + s.yz * s.yz)
    j3 = det(s)
    sqrt_j2 = math.sqrt(j2)
    if sqrt_j2 <= 0.5 * (TAU_ABS + TAU_REL * norm(t)):
        return InvariantSet(i1, i2, i3, j2, j3, 0.0, False)
    arg = -0.5 * math.sqrt(27.0) * j3 / (j2 * sqrt_j2)
    if abs(arg) > 1.0:
        if abs(arg) - 1.0 > _CLAMP_WARN_EXCESS:
            warnings.warn(
                f"sin(3 theta) argument {arg!r} exceeds [-1, 1] by {abs(arg) - 1.0:.3e}",
                ConditioningWarning, stacklevel=2)
        arg = math.copysign(1.0, arg)
    return InvariantSet(i1, i2, i3, j2, j3, math.asin(arg) / 3.0, True)


def dJ3_ds(s: SymTensor2) -> SymTensor2:
    """Gradient of det(s) for a deviatoric s; equals adjugate(s)."""
    tr = s.trace()
    if abs(tr) > 1e-12 * norm(s):
        raise ContractError(f"dJ3_ds requires a deviatoric tensor; trace is {tr!r}")
    return adjugate(s)


def dtheta_dT(t: SymTensor2, inv: InvariantSet) -> SymTensor2:
    """Gradient of the Lode angle; undefined at J2 = 0 and theta = +/-pi/6."""
    if not inv.theta_defined or inv.j2 <= 0.0:
        raise DegeneracyError("theta gradient undefined: J2 is below the coincidence floor")
    cos3t = math.cos(3.0 * inv.theta)
    if abs(cos3t) <= COS3THETA_FLOOR:
        raise DegeneracyError(
            "theta gradient undefined at a repeated eigenvalue (theta = +/-pi/6)")
    s = deviator(t)
    adj_s = adjugate(s)
    sqrt_j2 = math.sqrt(inv.j2)
    c_adj = math.sqrt(3.0) / (2.0 * inv.j2 * sqrt_j2)
    c_eye = math.sqrt(3.0) / (6.0 * sqrt_j2)
    c_dev = math.sin(3.0 * inv.theta) / (2.0 * inv.j2)
    g = -1.0 / cos3t
    return SymTensor2(
        g * (c_adj * adj_s.xx + c_eye + c_dev * s.xx),
        g * (c_adj * adj_s.yy + c_eye + c_dev * s.yy),
        g * (c_adj * adj_s.zz + c_eye + c_dev * s.zz),
        g * (c_adj * adj_s.xy + c_dev * s.xy),
        g * (c_adj * adj_s.xz + c_dev * s.xz),
        g * (c_adj * adj_s.yz + c_dev * s.yz),
    )


class SymTensor4:
    """Fourth-order tensor with minor symmetries stored as a 6x6 array.

    Stored entries are plain component products, e.g. dyad(a, b) stores
    a[i]*b[j]; apply() supplies the shear doubling of the contraction.
    Major symmetry of the tensor is symmetry of the stored matrix.
    """

    __slots__ = ("m",)

    def __init__(self, m):
        arr = np.array(m, dtype=float, copy=True)
        if arr.shape != (6, 6):
            raise ContractError(f"expected a 6x6 array, got shape {arr.shape}")
        arr.flags.writeable = False
        self.m = arr

    def apply(self, v: SymTensor2) -> SymTensor2:
        w = (v.xx, v.yy, v.zz, 2.0 * v.xy, 2.0 * v.xz, 2.0 * v.yz)
        out = self.m @ np.array(w)
        return SymTensor2(float(out[0]), float(out[1]), float(out[2]),
                          float(out[3]), float(out[4]), float(out[5]))

    def as_list(self) -> list[float]:
        return [float(x) for x in self.m.ravel()]

    def transpose(self) -> "SymTensor4":
        return SymTensor4(self.m.T)

    def __add__(self, o: "SymTensor4") -> "SymTensor4":
        return SymTensor4(self.m + o.m)

    def __sub__(self, o: "SymTensor4") -> "SymTensor4":
        return SymTensor4(self.m - o.m)

    def __neg__(self) -> "SymTensor4":
        return SymTensor4(-self.m)

    def __mul__(self, a: float) -> "SymTensor4":
        return SymTensor4(self.m * float(a))

    __rmul__ = __mul__


def dyad(a: SymTensor2, b: SymTensor2) -> SymTensor4:
    """(a x b) : c = (b : c) a."""
    return SymTensor4(np.outer(a.as_tuple(), b.as_tuple()))


_BASIS_MATRICES = tuple(
    np.array(m, dtype=float)
    for m in (
        [[1, 0, 0], [0, 0, 0], [0, 0, 0]],
        [[0, 0, 0], [0, 1, 0], [0, 0, 0]],
        [[0, 0, 0], [0, 0, 0], [0, 0, 1]],
        [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
        [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
        [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
    )
)


def sym_kron(a: SymTensor2, b: SymTensor2) -> SymTensor4:
    """Symmetrized dyad: sym_kron(a, b) : d = (a.d.b + b.d.a) / 2."""
    am = np.array(a.to_matrix())
    bm = np.array(b.to_matrix())
    cols = np.empty((6, 6))
    for k, e in enumerate(_BASIS_MATRICES):
        k3 = 0.5 * (am @ e @ bm + bm @ e @ am)
        cols[:, k] = (k3[0, 0], k3[1, 1], k3[2, 2], k3[0, 1], k3[0, 2], k3[1, 2])
        cols[:, k] /= WEIGHTS[k]
    return SymTensor4(cols)


IDENTITY4 = SymTensor4(np.diag([1.0, 1.0, 1.0, 0.5, 0.5, 0.5]))
IXI = dyad(IDENTITY2, IDENTITY2)


def d2_I3(t: SymTensor2) -> SymTensor4:
    """Second derivative of det(t): d -> t.d + d.t - tr(d) t - I1 d + (I1 tr(d) - t:d) I."""
    i1 = t.trace()
    m = (2.0 * sym_kron(t, IDENTITY2).m
         - dyad(t, IDENTITY2).m - dyad(IDENTITY2, t).m
         + i1 * (IXI.m - IDENTITY4.m))
    return SymTensor4(m)
