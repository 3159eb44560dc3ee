import math

import numpy as np
import pytest

from splinellt import knots, montecarlo


def test_streams_deterministic_and_disjoint():
    a = montecarlo.rng_stream(123).random(10)
    b = montecarlo.rng_stream(123).random(10)
    c = montecarlo.rng_stream(123, stream=1).random(10)
    d = montecarlo.rng_stream(124).random(10)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_exp_moments():
    draws = montecarlo.sample_exp_vector(10**6, montecarlo.rng_stream(0))
    assert np.all(draws >= 0)
    assert draws.mean() == pytest.approx(1.0, abs=5e-3)
    assert draws.var(ddof=1) == pytest.approx(1.0, abs=2e-2)


def test_simplex_point():
    rng = montecarlo.rng_stream(5)
    s = montecarlo.sample_simplex(6, rng)
    assert s.shape == (6,)
    assert np.all(s > 0)
    assert s.sum() == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError):
        montecarlo.sample_simplex(1, rng)


def test_projection_samples_chunk_invariant():
    # chunked accumulation is fixed-order: same stream regardless of N split
    kv = knots.family("uniform_random", 5, seed=9)
    big = montecarlo.simplex_projection_samples(kv, 70000, seed=3)
    small = montecarlo.simplex_projection_samples(kv, 70000, seed=3)
    np.testing.assert_array_equal(big, small)
    assert np.all(np.abs(big) <= np.max(np.abs(kv.xs)) + 1e-12)


def test_mc_char_at_zero():
    kv = knots.family("equispaced", 6)
    c, s = montecarlo.mc_char_simplex(kv, 0.0, 1000, seed=1)
    assert c.mean == 1.0 and c.std_error == 0.0
    assert s.mean == 0.0
    assert c.n_samples == 1000 and c.seed == 1
    with pytest.raises(ValueError):
        montecarlo.mc_char_simplex(kv, 0.0, 1, seed=1)


def test_mc_char_gaussian_limit():
    kv = knots.family("equispaced", 64)
    xi = 1.0
    c, s = montecarlo.mc_char_simplex(kv, xi, 2 * 10**5, seed=11)
    # bias is O(m^3); at n=64 that is ~0.1, noise ~1e-3
    assert abs(c.mean - math.exp(-xi * xi / 2)) < 0.05
    assert abs(s.mean) < 0.02


def test_histogram_counts_and_density():
    kv = knots.family("uniform_random", 6, seed=4)
    hist = montecarlo.mc_pdf_Q(kv, 10**5, montecarlo.default_grid(), seed=2)
    assert hist.counts.sum() <= 10**5
    area = np.multiply.outer(np.diff(hist.edges1), np.diff(hist.edges2))
    mass = float((hist.density * area).sum())
    assert 0.97 < mass <= 1.0 + 1e-12
    assert np.all(hist.std_error >= 0)


def test_density_histogram_matches_spline():
    kv = knots.family("equispaced", 8)
    dev, kept = montecarlo.density_histogram_check(kv, 5 * 10**5, seed=1)
    assert kept > 10
    assert dev <= 4.0


def test_divided_difference_mc_exact_zero_for_low_degree():
    # f = x^{n-2} has vanishing (n-1)-th derivative: the estimate is exactly 0
    kv = knots.family("uniform_random", 8, seed=5)
    est = montecarlo.mc_divided_difference(
        kv, lambda t: np.zeros_like(t), 10**4, seed=1
    )
    assert est.mean == 0.0


def test_divided_difference_mc_exp():
    from splinellt.splines import divided_difference

    kv = knots.family("uniform_random", 8, seed=5)
    exact = divided_difference([(x, math.exp(x)) for x in kv.xs])
    est = montecarlo.mc_divided_difference(kv, np.exp, 2 * 10**5, seed=1)
    assert abs(est.mean - exact) <= 4 * est.std_error
