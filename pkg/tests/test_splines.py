import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splinellt import knots, splines
from splinellt.errors import DuplicateKnots, PrecisionLoss

# values frozen from a 50-digit direct evaluation of the partial-fraction sum
CHEB5_B_AT_03 = 0.16341026289513260153
CHEB5_S1_AT_01 = 0.35950584109472236364
EQ6_B_AT_M025 = 0.14846851204581197585
EQ6_S2_AT_02 = 0.34566276575411198754
EQ6_DD_EXP = 0.0084330847834005358491


def test_truncated_power_conventions():
    assert splines.truncated_power(1.0, 0.0, 2) == 1.0
    assert splines.truncated_power(0.0, 1.0, 3) == 0.0
    # boundary: (t - t)_+^0 = 0, not 1
    assert splines.truncated_power(0.5, 0.5, 0) == 0.0
    with pytest.raises(ValueError):
        splines.truncated_power(1.0, 0.0, -1)


def test_n2_indicator_value():
    kv = knots.family("equispaced", 2)
    v = 1 / math.sqrt(2)
    assert splines.bspline_naive(kv, 0.0, 0) == pytest.approx(v, abs=1e-15)
    assert splines.bspline_stable(kv, 0.0) == pytest.approx(v, abs=1e-15)


def test_n3_exactness_seed():
    kv = knots.family("equispaced", 3)
    v = 1 / math.sqrt(2)
    assert abs(splines.bspline_naive(kv, 0.0, 0) - v) <= 1e-12
    assert abs(splines.bspline_stable(kv, 0.0) - v) <= 1e-12


def test_frozen_values():
    cheb5 = knots.family("chebyshev", 5)
    assert splines.bspline_stable(cheb5, 0.3) == pytest.approx(CHEB5_B_AT_03, rel=1e-13)
    assert splines.bspline_naive(cheb5, 0.1, 1) == pytest.approx(CHEB5_S1_AT_01, rel=1e-13)
    eq6 = knots.family("equispaced", 6)
    assert splines.bspline_stable(eq6, -0.25) == pytest.approx(EQ6_B_AT_M025, rel=1e-13)
    assert splines.bspline_naive(eq6, 0.2, 2) == pytest.approx(EQ6_S2_AT_02, rel=1e-13)


def test_stable_derivative_matches_exponent_reduction():
    # S_r(t) = (-1)^r B^(r)(t) / (n-2)(n-3)...(n-1-r), both sides exact routes
    kv = knots.family("uniform_random", 9, seed=8)
    n = kv.n
    for r in (1, 2, 3):
        fall = math.prod(n - 2 - i for i in range(r))
        for t in (-0.4, 0.05, 0.3):
            naive = splines.bspline_naive(kv, t, r)
            stable = (-1) ** r * splines.bspline_stable_deriv(kv, t, r) / fall
            assert stable == pytest.approx(naive, rel=1e-11, abs=1e-13)


def test_bspline_scaled_matches_naive():
    kv = knots.family("chebyshev", 7)
    for r in (0, 1, 2):
        for t in (-2.0, 0.0, 1.5):
            assert splines.bspline_scaled(kv, t, r) == pytest.approx(
                splines.bspline_naive(kv, t / kv.n, r), rel=1e-11, abs=1e-14
            )


def test_support_and_positivity():
    kv = knots.family("clustered", 10, seed=0)
    lo, hi = kv.xs[0], kv.xs[-1]
    ts = np.linspace(lo, hi, 101)[1:-1]
    vals = splines.bspline_stable(kv, ts)
    assert np.all(vals > 0)
    assert splines.bspline_stable(kv, lo - 1e-9) == 0.0
    assert splines.bspline_stable(kv, hi + 1e-9) == 0.0
    assert splines.bspline_stable(kv, hi + 5.0) == 0.0


def test_vectorized_matches_scalar():
    kv = knots.family("equispaced", 12)
    ts = np.linspace(-0.8, 0.8, 17)
    vec = splines.bspline_stable_deriv(kv, ts, 2)
    scal = np.array([splines.bspline_stable_deriv(kv, float(t), 2) for t in ts])
    # batched and scalar paths may sum in different orders; allow 1-ulp drift
    np.testing.assert_allclose(vec, scal, rtol=1e-14, atol=1e-300)


def test_normalization_all_families():
    for kind in knots.FAMILIES:
        for n in range(2, 21):
            kv = knots.family(kind, n, seed=3)
            assert (n - 1) * splines.integrate_bspline(kv) == pytest.approx(1.0, abs=1e-8)


def test_oracle_refuses_large_n():
    kv = knots.family("equispaced", 25)
    with pytest.raises(PrecisionLoss):
        splines.bspline_naive(kv, 0.0, 0)


def test_derivative_order_bounds():
    kv = knots.family("equispaced", 5)
    with pytest.raises(ValueError):
        splines.bspline_naive(kv, 0.0, 4)
    with pytest.raises(ValueError):
        splines.bspline_stable_deriv(kv, 0.0, 7)


def test_divided_difference_polynomials():
    nodes = [0.0, 0.5, 1.25, 2.0, 3.5]
    # degree below order -> 0; monic of matching degree -> leading coefficient
    assert splines.divided_difference([(x, x**3) for x in nodes]) == pytest.approx(0.0, abs=1e-12)
    assert splines.divided_difference([(x, x**4) for x in nodes]) == pytest.approx(1.0, rel=1e-12)
    assert splines.divided_difference(
        [(x, 2 * x**4 + x - 7) for x in nodes]
    ) == pytest.approx(2.0, rel=1e-11)


def test_divided_difference_exp_frozen():
    kv = knots.family("equispaced", 6)
    dd = splines.divided_difference([(x, math.exp(x)) for x in kv.xs])
    assert dd == pytest.approx(EQ6_DD_EXP, rel=1e-12)


def test_divided_difference_duplicate_nodes():
    with pytest.raises(DuplicateKnots):
        splines.divided_difference([(0.0, 1.0), (0.0, 2.0), (1.0, 3.0)])


@given(n=st.integers(3, 16), seed=st.integers(0, 10**4))
@settings(max_examples=30, deadline=None)
def test_stable_agrees_with_oracle(n, seed):
    kv = knots.family("uniform_random", n, seed)
    rng = np.random.default_rng(seed)
    for t in rng.uniform(kv.xs[0], kv.xs[-1], size=5):
        o = splines.bspline_naive(kv, float(t), 0)
        s = splines.bspline_stable(kv, float(t))
        assert s == pytest.approx(o, rel=1e-10, abs=1e-13)
