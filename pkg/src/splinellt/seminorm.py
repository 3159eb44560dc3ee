"""Grid approximation of weighted-sup seminorms of approximation errors.

The seminorm ||f||_{p,q} = sup_t |t|^p |d^q f(t)| is approximated on a
finite grid [-T, T] with step h.  Derivatives on the spline side come from
exact exponent reduction (never finite differences in t); derivatives in
xi for the Laguerre-sum comparison are taken by mpmath's extended-precision
numerical differentiation.
"""

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .errors import OrderTooHigh
from .knots import KnotVector
from .montecarlo import simplex_projection_samples
from .specfun import corollary3_sum, corollary3_sum_mp, hermite, hermite_function
from .splines import _falling, bspline_stable_deriv


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid spanning [-T, T] with step h."""

    T: float
    h: float

    def __post_init__(self):
        if self.T < 8:
            raise ValueError("T >= 8 required")
        if not 0 < self.h <= 0.05:
            raise ValueError("0 < h <= 0.05 required")

    def points(self) -> np.ndarray:
        return np.arange(-self.T, self.T + self.h / 2, self.h)

    def points_avoiding(self, kv: KnotVector) -> np.ndarray:
        """Grid points, nudged off exact knot images n*x_k by h/10."""
        ts = self.points()
        images = kv.n * kv.xs
        for im in images:
            hit = np.abs(ts - im) < self.h * 1e-9
            ts = np.where(hit, ts + self.h / 10, ts)
        return ts


@dataclass(frozen=True)
class SeminormResult:
    p: int
    q: int
    r: int
    value: float
    argmax_t: float
    grid: object
    noise_floor: float | None = None


def default_grid(n: int, h: float = 0.05) -> GridSpec:
    """T = max(8, n): beyond |t| = n the spline term vanishes identically."""
    return GridSpec(T=float(max(8, n)), h=h)


def _weighted_sup(ts, diffs, p, q, r, grid, noise_floor=None) -> SeminormResult:
    weights = np.abs(ts) ** p if p > 0 else np.ones_like(ts)
    vals = weights * np.abs(diffs)
    best = float(vals.max())
    # tie-break: among near-maximal points prefer the smallest |t|
    cand = np.flatnonzero(vals >= best * (1 - 1e-12))
    arg = float(ts[cand[np.argmin(np.abs(ts[cand]))]])
    return SeminormResult(
        p=p, q=q, r=r, value=best, argmax_t=arg, grid=grid, noise_floor=noise_floor
    )


def _spline_side(kv: KnotVector, ts: np.ndarray, q: int, r: int) -> np.ndarray:
    """d^q/dt^q of the exponent-reduced sum S_r(t/n), all algebraically exact.

    Uses S_r(s) = (-1)^r B^{(r)}(s) / (n-2)^(falling r), so one stable
    derivative evaluation of order r+q covers every (q, r)."""
    n = kv.n
    d = bspline_stable_deriv(kv, ts / n, r + q)
    return (-1) ** r * d / (n**q * _falling(n - 2, r))


def theorem1_error(kv: KnotVector, p: int, q: int, grid: GridSpec) -> SeminormResult:
    """sup |t|^p |d^q (Gaussian pdf - rescaled spline)| on the grid."""
    if q > kv.n - 4:
        raise OrderTooHigh(f"q <= n-4 required (q={q}, n={kv.n})")
    if p + q > 8:
        raise ValueError("p + q <= 8 required")
    ts = grid.points_avoiding(kv)
    gauss = (-1) ** q * hermite_function(q, ts)
    spline = _spline_side(kv, ts, q, 0)
    return _weighted_sup(ts, gauss - spline, p, q, 0, grid)


def corollary2_error(
    kv: KnotVector, p: int, q: int, r: int, grid: GridSpec
) -> SeminormResult:
    """Hermite-function target vs the exponent-reduced spline sum."""
    if q + r > kv.n - 4:
        raise OrderTooHigh(f"q + r <= n-4 required (q={q}, r={r}, n={kv.n})")
    ts = grid.points_avoiding(kv)
    herm = (-1) ** q * hermite_function(q + r, ts)
    spline = _spline_side(kv, ts, q, r)
    return _weighted_sup(ts, herm - spline, p, q, r, grid)


def corollary3_error(
    kv: KnotVector, p: int, q: int, r: int, xi_grid
) -> SeminormResult:
    """Laguerre sum vs He_r(xi) e^{-xi^2/2} in the xi variable.

    d^q in xi is numerical (mpmath, extended precision); the target side is
    differentiated exactly through the Hermite ladder.
    """
    if r > 4:
        raise ValueError("r <= 4 required")
    if q > 2:
        raise ValueError("q <= 2 required")
    xis = np.asarray(xi_grid, dtype=float)
    diffs = np.empty(xis.size, dtype=complex)
    for i, xi in enumerate(xis):
        if q == 0:
            s = corollary3_sum(kv, r, float(xi))
        else:
            with mp.workdps(40):
                s = complex(
                    mp.diff(
                        lambda z: corollary3_sum_mp(kv, r, z),
                        mp.mpf(float(xi)),
                        q,
                    )
                )
        target = (-1) ** q * hermite(q + r, float(xi)) * math.exp(-xi * xi / 2)
        diffs[i] = s - target
    return _weighted_sup(xis, diffs, p, q, r, xis)


def corollary4_error(
    kv: KnotVector, p: int, q: int, xi_grid, N: int, seed: int
):
    """MC cosine/sine means of simplex projections vs the Gaussian transform.

    Only q = 0 is supported (differentiating MC means is out of scope).
    Returns (cos SeminormResult, sin SeminormResult); each carries the MC
    noise floor max_xi 4 * SE * |xi|^p.
    """
    if q != 0:
        raise ValueError("q = 0 required")
    if N < 10**5:
        raise ValueError("N >= 1e5 required")
    xis = np.asarray(xi_grid, dtype=float)
    proj = simplex_projection_samples(kv, N, seed)
    cos_diffs = np.empty(xis.size)
    sin_diffs = np.empty(xis.size)
    floors_c = np.empty(xis.size)
    floors_s = np.empty(xis.size)
    w = np.abs(xis) ** p if p > 0 else np.ones_like(xis)
    for i, xi in enumerate(xis):
        u = kv.n * xi * proj
        c, s = np.cos(u), np.sin(u)
        cos_diffs[i] = c.mean() - math.exp(-xi * xi / 2)
        sin_diffs[i] = s.mean()
        floors_c[i] = 4 * c.std(ddof=1) / math.sqrt(N) * w[i]
        floors_s[i] = 4 * s.std(ddof=1) / math.sqrt(N) * w[i]
    cos_res = _weighted_sup(xis, cos_diffs, p, q, 0, xis, float(floors_c.max()))
    sin_res = _weighted_sup(xis, sin_diffs, p, q, 0, xis, float(floors_s.max()))
    return cos_res, sin_res
