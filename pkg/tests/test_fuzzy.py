"""Fuzzy-number arithmetic, level sets, and the sup metric."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

import fuzzfrac as ff
from fuzzfrac.errors import (
    HukuharaNotExist,
    LambdaOutOfRange,
    NegativeScalar,
    NegativeSpread,
)

from helpers import d_inf_triangular_oracle, random_fuzzy

U0 = (2.0, 2.0, 2.0)
U1 = (3.0, 1.0, 1.0)
U2 = (5.0, 3.0, 3.0)


def tri(params, grid=10):
    return ff.make_triangular(*params, grid_size=grid)


# ---------------------------------------------------------------------------
# construction and level sets


def test_triangular_profile_lines():
    u = tri(U0)
    # lo(lam) = 2*lam, hi(lam) = 4 - 2*lam
    assert np.allclose(u.lo, 2 * u.levels)
    assert np.allclose(u.hi, 4 - 2 * u.levels)
    assert u.lo[0] == 0 and u.hi[0] == 4
    assert u.lo[-1] == u.hi[-1] == 2


def test_triangular_zero_spread_is_crisp():
    u = ff.make_triangular(5, 0, 0, grid_size=10)
    assert np.all(u.lo == 5) and np.all(u.hi == 5)


def test_triangular_midlevel_cut():
    cut = ff.level(tri((3, 1, 1)), 0.5)
    assert cut.lo == pytest.approx(2.5) and cut.hi == pytest.approx(3.5)


def test_negative_spread_rejected():
    with pytest.raises(NegativeSpread):
        ff.make_triangular(1, -0.5, 1)


def test_level_examples():
    assert ff.level(tri(U0), 0) == ff.Interval(0, 4)
    assert ff.level(tri(U2), 1) == ff.Interval(5, 5)
    cut = ff.level(tri(U1), 0.25)
    assert cut.lo == pytest.approx(2.25) and cut.hi == pytest.approx(3.75)


def test_level_out_of_range():
    with pytest.raises(LambdaOutOfRange):
        ff.level(tri(U0), 1.5)
    with pytest.raises(LambdaOutOfRange):
        ff.len_level(tri(U0), -0.1)


def test_len_level():
    assert ff.len_level(ff.crisp(5), 0.3) == 0
    assert ff.len_level(tri(U2), 0) == pytest.approx(6)
    assert ff.len_level(tri(U2), 0.5) == pytest.approx(3)


def test_from_breakpoints_trapezoid():
    u = ff.from_breakpoints([(0, 1, 6), (1, 2, 4)], grid_size=8)
    assert ff.level(u, 0) == ff.Interval(1, 6)
    assert ff.level(u, 1) == ff.Interval(2, 4)
    assert ff.level(u, 0.5).lo == pytest.approx(1.5)


def test_from_breakpoints_requires_full_range():
    with pytest.raises(ValueError):
        ff.from_breakpoints([(0.2, 0, 1), (1, 0, 0)])


# ---------------------------------------------------------------------------
# arithmetic


def test_add_identity():
    u = tri(U1)
    assert ff.d_inf(ff.add(u, ff.fuzzy_zero(10)), u) == 0


def test_add_triangulars():
    out = ff.add(tri(U0), tri(U1))
    assert ff.d_inf(out, tri(U2)) <= 1e-15


def test_add_crisp():
    assert ff.d_inf(ff.add(ff.crisp(1), ff.crisp(2)), ff.crisp(3)) == 0


def test_add_mismatched_grids_resamples():
    a = ff.make_triangular(*U0, grid_size=10)
    b = ff.make_triangular(*U1, grid_size=16)
    out = ff.add(a, b)
    assert ff.d_inf(out, ff.make_triangular(*U2, grid_size=80)) <= 1e-12


def test_scale_examples():
    u = tri(U0)
    assert ff.d_inf(ff.scale(0, u), ff.fuzzy_zero(10)) == 0
    assert ff.d_inf(ff.scale(0.3, u), tri((0.6, 0.6, 0.6))) <= 1e-15
    assert ff.d_inf(ff.scale(1, u), u) == 0


def test_scale_negative_rejected():
    with pytest.raises(NegativeScalar):
        ff.scale(-0.1, tri(U0))


def test_hukuhara_self_is_zero():
    u = tri(U1)
    assert ff.d_inf(ff.hukuhara_diff(u, u), ff.fuzzy_zero(10)) == 0


def test_hukuhara_example():
    u = tri(U0)
    w = ff.hukuhara_diff(u, ff.scale(0.3, u))
    assert ff.d_inf(w, tri((1.4, 1.4, 1.4))) <= 1e-15


def test_hukuhara_nonexistent_reports_level():
    # candidate left endpoint (2+lam) - (2+3lam) = -2lam decreases
    with pytest.raises(HukuharaNotExist) as info:
        ff.hukuhara_diff(tri(U1), tri(U2))
    assert info.value.lam is not None


# ---------------------------------------------------------------------------
# metric


def test_d_inf_examples():
    u0, u1 = tri(U0), tri(U1)
    assert ff.d_inf(u0, u0) == 0
    assert ff.d_inf(u0, u1) == pytest.approx(d_inf_triangular_oracle(U0, U1))
    assert ff.d_inf(u0, u1) == pytest.approx(2.0)
    assert ff.d_inf(ff.crisp(5), ff.fuzzy_zero()) == 5


def test_d_inf_separates_distinct_profiles():
    rng = np.random.default_rng(41)
    for _ in range(100):
        u, v = random_fuzzy(rng, 8), random_fuzzy(rng, 8)
        d = ff.d_inf(u, v)
        identical = np.array_equal(u.lo, v.lo) and np.array_equal(u.hi, v.hi)
        assert (d == 0) == identical


def test_d_inf_matches_oracle_random():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = (rng.uniform(-5, 5), rng.uniform(0, 3), rng.uniform(0, 3))
        b = (rng.uniform(-5, 5), rng.uniform(0, 3), rng.uniform(0, 3))
        got = ff.d_inf(ff.make_triangular(*a), ff.make_triangular(*b))
        assert got == pytest.approx(d_inf_triangular_oracle(a, b), abs=1e-10)


# ---------------------------------------------------------------------------
# property tests

finite = dict(allow_nan=False, allow_infinity=False)
centers = st.floats(min_value=-10, max_value=10, **finite)
spreads = st.floats(min_value=0, max_value=5, **finite)
scalars = st.floats(min_value=0, max_value=3, **finite)
triangulars = st.builds(
    ff.make_triangular,
    centers,
    spreads,
    spreads,
    st.sampled_from([4, 10, 16]),
)


@given(triangulars, triangulars)
def test_add_preserves_invariants(u, v):
    ff.add(u, v)  # constructor enforces the invariants


@given(scalars, triangulars)
def test_scale_preserves_invariants(a, u):
    ff.scale(a, u)


@given(triangulars, triangulars)
def test_hukuhara_round_trip(v, w):
    u = ff.add(v, w)
    got = ff.hukuhara_diff(u, v)
    assert ff.d_inf(ff.add(v, got), u) <= 1e-12


@given(triangulars, triangulars)
def test_metric_symmetry(u, v):
    assert abs(ff.d_inf(u, v) - ff.d_inf(v, u)) <= 1e-12


@given(triangulars, triangulars, triangulars)
def test_metric_triangle_inequality(u, v, w):
    assert ff.d_inf(u, w) <= ff.d_inf(u, v) + ff.d_inf(v, w) + 1e-12


@given(triangulars, triangulars, scalars)
def test_metric_scale_homogeneity(u, v, a):
    lhs = ff.d_inf(ff.scale(a, u), ff.scale(a, v))
    assert abs(lhs - a * ff.d_inf(u, v)) <= 1e-12 * max(1.0, a)


@given(triangulars, triangulars, triangulars)
def test_metric_translation_invariance(u, v, w):
    lhs = ff.d_inf(ff.add(u, w), ff.add(v, w))
    assert abs(lhs - ff.d_inf(u, v)) <= 1e-12


def test_mixed_shapes_random_ops():
    rng = np.random.default_rng(11)
    zero = ff.fuzzy_zero(16)
    for _ in range(200):
        u, v = random_fuzzy(rng), random_fuzzy(rng)
        s = ff.add(u, v)
        assert ff.d_inf(s, u) <= ff.d_inf(v, zero) + 1e-12
        ff.scale(rng.uniform(0, 2), s)
