"""Hencky strain: kinematics guards, closed-form values, and tangent checks."""

import math

import numpy as np
import pytest

from spectens import (
    IDENTITY4,
    KinematicsError,
    MultTag,
    SymTensor2,
    double_exp_map,
    half_log_map,
    isotropic_function,
    left_cauchy_green,
    log_strain,
    log_strain_from_b,
    log_strain_tangent_check,
    norm,
    scalar_map_invariants,
)
from spectens.logstrain import _double_invariant_map

from util import make_with_eigs, rand_rotation, rel2, rel4, rotate


def test_left_cauchy_green_diagonal():
    b = left_cauchy_green([2.0, 0, 0, 0, 3.0, 0, 0, 0, 4.0])
    assert b.as_tuple() == (4.0, 9.0, 16.0, 0.0, 0.0, 0.0)
    nested = left_cauchy_green([[2.0, 0, 0], [0, 3.0, 0], [0, 0, 4.0]])
    assert nested.as_tuple() == b.as_tuple()


def test_left_cauchy_green_shear():
    # F = I + e1 (x) e2 gives B with a single off-diagonal coupling.
    b = left_cauchy_green([1.0, 1.0, 0, 0, 1.0, 0, 0, 0, 1.0])
    assert b.as_tuple() == (2.0, 1.0, 1.0, 1.0, 0.0, 0.0)


def test_left_cauchy_green_rejects_bad_input():
    with pytest.raises(KinematicsError):
        left_cauchy_green([1.0] * 8)
    with pytest.raises(KinematicsError):
        left_cauchy_green([[1.0, 0], [0, 1.0], [0, 0]])
    with pytest.raises(KinematicsError):
        left_cauchy_green([-1.0, 0, 0, 0, 1.0, 0, 0, 0, 1.0])
    with pytest.raises(KinematicsError):
        left_cauchy_green([0.0, 0, 0, 0, 1.0, 0, 0, 0, 1.0])


def test_log_strain_distinct_diagonal():
    res = log_strain([2.0, 0, 0, 0, 0.5, 0, 0, 0, 1.0])
    assert res.branch.tag is MultTag.DISTINCT
    want = (math.log(2.0), -math.log(2.0), 0.0)
    for got, expect in zip(res.eps.as_tuple(), want + (0.0, 0.0, 0.0)):
        assert got == pytest.approx(expect, abs=1e-14)


def test_log_strain_double_diagonal():
    res = log_strain_from_b(SymTensor2(4.0, 1.0, 1.0, 0.0, 0.0, 0.0))
    assert res.branch.tag is MultTag.DOUBLE_HIGH_UNIQUE
    want = (math.log(2.0), 0.0, 0.0, 0.0, 0.0, 0.0)
    for got, expect in zip(res.eps.as_tuple(), want):
        assert got == pytest.approx(expect, abs=1e-14)


def test_log_strain_pure_rotation_scaled():
    rng = np.random.default_rng(3)
    r = rand_rotation(rng)
    f = (2.0 * r).reshape(-1)
    res = log_strain(list(f))
    assert res.branch.tag is MultTag.TRIPLE
    assert rel2(res.eps, math.log(2.0) * SymTensor2(1, 1, 1, 0, 0, 0)) < 1e-14
    assert rel4(res.deps_db, IDENTITY4 * 0.125) < 1e-14


def test_log_strain_rejects_near_singular():
    with pytest.raises(KinematicsError):
        log_strain([1.0, 0, 0, 0, 1.0, 0, 0, 0, 1e-9])


def test_round_trip_exp_recovers_b():
    rng = np.random.default_rng(11)
    expm = double_exp_map()
    for _ in range(200):
        r1, r2 = rand_rotation(rng), rand_rotation(rng)
        stretch = np.exp(rng.uniform(math.log(0.3), math.log(3.0), size=3))
        f = r1 @ np.diag(stretch) @ r2
        res = log_strain(list(f.reshape(-1)))
        back, _ = isotropic_function(res.eps, expm)
        assert rel2(back, res.b) < 1e-9


def test_right_rotation_leaves_strain_unchanged():
    rng = np.random.default_rng(12)
    for _ in range(50):
        f = rng.standard_normal((3, 3))
        if np.linalg.det(f) <= 0:
            f[0] = -f[0]
        q = rand_rotation(rng)
        a = log_strain(list(f.reshape(-1)))
        b = log_strain(list((f @ q).reshape(-1)))
        assert rel2(b.eps, a.eps, floor=1.0) < 1e-12


def test_left_rotation_rotates_strain():
    rng = np.random.default_rng(13)
    for _ in range(50):
        f = rng.standard_normal((3, 3))
        if np.linalg.det(f) <= 0:
            f[0] = -f[0]
        q = rand_rotation(rng)
        a = log_strain(list(f.reshape(-1)))
        b = log_strain(list((q @ f).reshape(-1)))
        assert rel2(b.eps, rotate(a.eps, q), floor=1.0) < 1e-11


def test_trace_equals_log_det():
    rng = np.random.default_rng(14)
    for _ in range(200):
        f = rng.standard_normal((3, 3))
        det = np.linalg.det(f)
        if det < 0:
            f[0], det = -f[0], -det
        if det < 1e-3:
            continue
        res = log_strain(list(f.reshape(-1)))
        assert abs(res.eps.trace() - math.log(det)) < 1e-10 * max(1.0, norm(res.eps))


def test_double_invariant_map_matches_generic_chain():
    halflog = half_log_map()
    for i1b, qb, sgn in [(6.0, 3.0, -1), (8.0, 3.0, 1), (2.9, 0.35, -1),
                         (11.0, 2.0, 1), (0.9, 0.2, -1)]:
        ours = _double_invariant_map(i1b, qb, sgn)
        generic = scalar_map_invariants(halflog, i1b, qb, sgn)
        for field in ("i1s", "qs", "di1s_di1t", "di1s_dqt", "dqs_di1t", "dqs_dqt"):
            assert getattr(ours, field) == pytest.approx(
                getattr(generic, field), rel=1e-10, abs=1e-12), field


def test_double_invariant_map_partials_match_fd():
    h = 1e-7
    for i1b, qb, sgn in [(6.0, 3.0, -1), (5.0, 1.2, 1), (3.3, 0.8, -1)]:
        mv = _double_invariant_map(i1b, qb, sgn)
        d_i1 = _double_invariant_map(i1b + h, qb, sgn), _double_invariant_map(i1b - h, qb, sgn)
        d_q = _double_invariant_map(i1b, qb + h, sgn), _double_invariant_map(i1b, qb - h, sgn)
        assert mv.di1s_di1t == pytest.approx((d_i1[0].i1s - d_i1[1].i1s) / (2 * h), rel=1e-6)
        assert mv.dqs_di1t == pytest.approx((d_i1[0].qs - d_i1[1].qs) / (2 * h), rel=1e-6)
        assert mv.di1s_dqt == pytest.approx((d_q[0].i1s - d_q[1].i1s) / (2 * h), rel=1e-6)
        assert mv.dqs_dqt == pytest.approx((d_q[0].qs - d_q[1].qs) / (2 * h), rel=1e-6)


def test_double_invariant_map_rejects_nonpositive_stretch():
    # i1b = 2, qb = 4, sgn = +1 puts lam_hat at -2.
    with pytest.raises(KinematicsError):
        _double_invariant_map(2.0, 4.0, 1)


def test_tangent_check_random():
    rng = np.random.default_rng(21)
    for _ in range(25):
        f = rng.standard_normal((3, 3))
        if np.linalg.det(f) <= 0:
            f[0] = -f[0]
        if abs(np.linalg.det(f)) < 0.05:
            continue
        rep = log_strain_tangent_check(list(f.reshape(-1)))
        assert rep.max_rel_error < 1e-4


def test_tangent_check_identity():
    rep = log_strain_tangent_check([1.0, 0, 0, 0, 1.0, 0, 0, 0, 1.0])
    assert rep.branch.tag is MultTag.TRIPLE
    assert rep.max_rel_error < 1e-6


def test_tangent_check_near_and_at_double():
    rng = np.random.default_rng(22)
    for split in (1e-4, 0.0):
        worst = 0.0
        for _ in range(20):
            r = rand_rotation(rng)
            stretch = np.sqrt([4.0, 1.0 + split, 1.0 - split / 2.0])
            f = r @ np.diag(stretch)
            rep = log_strain_tangent_check(list(f.reshape(-1)))
            worst = max(worst, rep.max_rel_error)
        assert worst < (1e-3 if split else 1e-4)


def test_tangent_check_double_low_pair():
    # Repeated pair above the unique value exercises the other sign branch.
    rng = np.random.default_rng(23)
    worst = 0.0
    for _ in range(20):
        b = make_with_eigs(rng, (2.25, 2.25, 0.25))
        res = log_strain_from_b(b)
        assert res.branch.tag is MultTag.DOUBLE_LOW_UNIQUE
        f = _sqrt_factor(b)
        rep = log_strain_tangent_check(f)
        worst = max(worst, rep.max_rel_error)
    assert worst < 1e-4


def _sqrt_factor(b):
    """Symmetric square root of an SPD tensor, as a flat-9 gradient."""
    w, v = np.linalg.eigh(np.array(b.to_matrix()))
    m = v @ np.diag(np.sqrt(w)) @ v.T
    return list(m.reshape(-1))
