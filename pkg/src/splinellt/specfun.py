"""Special functions: probabilists' Hermite, generalized Laguerre with
arbitrary (typically negative integer) parameter, terminating 2F0, and the
oscillatory Laguerre sum that the Fourier transform of the rescaled spline
collapses to.

Laguerre coefficients are built from running products only; the parameter
alpha = -n-r+1 sits exactly on the gamma-function poles, so no gamma calls
appear anywhere here.
"""

import math

import mpmath as mp
import numpy as np

from .errors import PrecisionLoss
from .knots import KnotVector
from .splines import ORACLE_DPS, ORACLE_MAX_N, _wprime_mp

XI_MIN = 0.05


def hermite(r: int, t):
    """Probabilists' Hermite polynomial He_r by the three-term recursion."""
    if r < 0:
        raise ValueError("degree must be >= 0")
    t = np.asarray(t, dtype=float) if np.ndim(t) else t
    h_prev, h = 1.0, None
    if r == 0:
        return t * 0 + 1.0 if np.ndim(t) else 1.0
    h = t
    for k in range(1, r):
        h, h_prev = t * h - k * h_prev, h
    return h


def hermite_function(r: int, t):
    """(2 pi)^{-1/2} He_r(t) e^{-t^2/2} = (-1)^r d^r/dt^r of the Gaussian pdf."""
    t = np.asarray(t, dtype=float) if np.ndim(t) else float(t)
    return hermite(r, t) * np.exp(-np.square(t) / 2) / math.sqrt(2 * math.pi)


def laguerre(r: int, alpha, x):
    """Generalized Laguerre L_r^{(alpha)}(x) by its terminating series.

    Valid for every real alpha, including alpha < -1.  Works elementwise on
    mpmath types because the coefficients are plain Python numbers.
    """
    if r < 0:
        raise ValueError("degree must be >= 0")
    total = 0
    for j in range(r + 1):
        binom = math.prod(alpha + i for i in range(j + 1, r + 1)) / math.factorial(
            r - j
        )
        total += (-1) ** j / math.factorial(j) * binom * x**j
    return total


def hyp2f0(r: int, a, z):
    """Terminating 2F0(-r, a; z): r+1 terms of rising factorials."""
    if r < 0:
        raise ValueError("r must be >= 0")
    total = 0
    for j in range(r + 1):
        rising_neg_r = math.prod(-r + i for i in range(j))
        rising_a = math.prod(a + i for i in range(j))
        total += rising_neg_r * rising_a * z**j / math.factorial(j)
    return total


def wprime(kv: KnotVector, k: int) -> float:
    """prod_{j != k} (x_k - x_j), computed in extended precision."""
    with mp.workdps(ORACLE_DPS):
        xs = [mp.mpf(float(x)) for x in kv.xs]
        return float(_wprime_mp(xs, k))


def _check_c3_args(kv, r):
    if r > 6:
        raise ValueError("r <= 6 required")
    if kv.n > ORACLE_MAX_N:
        raise PrecisionLoss(f"extended-precision sum limited to n <= {ORACLE_MAX_N}")


def _c3_prefactor(n, r):
    return (
        mp.factorial(n - 2)
        * mp.factorial(r)
        * (-1) ** r
        * mp.mpc(0, 1) ** (n - 1)
        / mp.mpf(n) ** (n - 2)
    )


def corollary3_sum_mp(kv: KnotVector, r: int, xi, xi_min: float = XI_MIN):
    """mpmath-valued version of corollary3_sum; keeps the extended digits.

    Needed by callers that go on to difference the result in xi.
    """
    _check_c3_args(kv, r)
    if abs(xi) < xi_min:
        return _corollary3_quadrature_mp(kv, r, xi)
    n = kv.n
    with mp.workdps(ORACLE_DPS):
        xs = [mp.mpf(float(x)) for x in kv.xs]
        xim = mp.mpf(xi)
        total = mp.mpc(0)
        biggest = mp.mpf(0)
        for k in range(n):
            term = (
                mp.e ** (mp.mpc(0, -1) * n * xim * xs[k])
                * laguerre(r, -n - r + 1, mp.mpc(0, 1) * n * xim * xs[k])
                / _wprime_mp(xs, k)
            )
            total += term
            biggest = max(biggest, abs(term))
        err = biggest * mp.mpf(10) ** (2 - ORACLE_DPS)
        if abs(total) > 0 and err > mp.mpf("1e-10") * abs(total):
            raise PrecisionLoss("cancellation across knots exceeds certified accuracy")
        return _c3_prefactor(n, r) / xim ** (n + r - 1) * total


def corollary3_sum(kv: KnotVector, r: int, xi: float, xi_min: float = XI_MIN) -> complex:
    """The Laguerre-weighted exponential sum approximating He_r(xi) e^{-xi^2/2}.

    C_{r,n} / xi^{n+r-1} * sum_k e^{-i n xi x_k} L_r^{(-n-r+1)}(i n xi x_k) / W'(x_k)
    with C_{r,n} = (-1)^r (n-2)! r! i^{n-1} / n^{n-2}, which equals the
    Fourier transform of t -> (it)^r B(t/n).  Below |xi| = xi_min the
    removable singularity is handled by the equivalent oscillatory-moment
    quadrature (see corollary3_quadrature).
    """
    return complex(corollary3_sum_mp(kv, r, float(xi), xi_min))


def corollary3_sum_2f0(kv: KnotVector, r: int, xi: float) -> complex:
    """Same quantity through the derivative route and the terminating 2F0.

    The 2F0 argument 1/(n xi x_k) is rearranged into a polynomial in x_k so
    that knots at (or near) zero cost nothing.
    """
    _check_c3_args(kv, r)
    if xi == 0:
        raise ValueError("the 2F0 route needs xi != 0")
    n = kv.n
    with mp.workdps(ORACLE_DPS):
        xs = [mp.mpf(float(x)) for x in kv.xs]
        xim = mp.mpf(float(xi))
        total = mp.mpc(0)
        for k in range(n):
            poly = mp.mpf(0)
            for j in range(r + 1):
                cj = (
                    math.prod(-r + i for i in range(j))
                    * math.prod(n - 1 + i for i in range(j))
                    / math.factorial(j)
                )
                poly += cj * (mp.mpc(0, -1) * n * xim) ** (-j) * xs[k] ** (r - j)
            total += mp.e ** (mp.mpc(0, -1) * n * xim * xs[k]) * poly / _wprime_mp(xs, k)
        pref = (
            (-1) ** r
            * mp.factorial(n - 2)
            * mp.mpc(0, 1) ** (n - 1)
            / mp.mpf(n) ** (n - 2)
        )
        val = pref * xim ** (-(n - 1)) * (mp.mpc(0, -1) * n) ** r * total
        return complex(val)


def _bspline_scaled_mp(xs, n, t):
    """B(t/n) as an mpmath scalar; xs are mpf knots of the current context."""
    s = t / n
    e = n - 2
    total = mp.mpf(0)
    for k in range(n):
        if xs[k] > s:
            num = (xs[k] - s) ** e if e > 0 else mp.mpf(1)
            total += num / _wprime_mp(xs, k)
    return total


def _corollary3_quadrature_mp(kv: KnotVector, r: int, xi):
    n = kv.n
    with mp.workdps(40):
        xs = [mp.mpf(float(x)) for x in kv.xs]
        xim = mp.mpf(xi)

        def f(t):
            return (
                (mp.mpc(0, 1) * t) ** r
                * _bspline_scaled_mp(xs, n, t)
                * mp.e ** (mp.mpc(0, -1) * t * xim)
            )

        pts = [n * x for x in xs]
        return mp.quad(f, pts)


def corollary3_quadrature(kv: KnotVector, r: int, xi: float) -> complex:
    """Oracle route: integral of (i t)^r B(t/n) e^{-i t xi} dt in mpmath.

    Equals corollary3_sum identically (Fourier transform of the r-th
    moment-weighted rescaled spline); finite at xi = 0.
    """
    _check_c3_args(kv, r)
    return complex(_corollary3_quadrature_mp(kv, r, float(xi)))
