"""B-spline evaluation on arbitrary knots.

Two routes are provided for the same function

    B(t) = sum_k (x_k - t)_+^{n-2} / prod_{j != k} (x_k - x_j):

* ``bspline_naive`` evaluates the sum literally in extended precision
  (mpmath).  The terms cancel catastrophically -- their magnitudes grow
  like the divided-difference condition number -- so this path is an
  oracle only and refuses n > 24.
* ``bspline_stable`` evaluates the identical spline through the
  triangular Cox-de Boor recursion in plain doubles, which involves only
  convex combinations and is safe for large n.

Derivatives are never taken numerically: exponent reduction in the naive
sum and coefficient differencing in the stable recursion are both exact.
"""

import math

import mpmath as mp
import numpy as np

from .errors import DuplicateKnots, PrecisionLoss
from .knots import KnotVector

ORACLE_DPS = 140
ORACLE_MAX_N = 24


def truncated_power(x: float, t: float, e: int) -> float:
    """(x - t)_+^e with the boundary convention (t - t)_+^0 = 0."""
    if e < 0:
        raise ValueError("exponent must be >= 0")
    if x > t:
        return float((x - t) ** e)
    return 0.0


def _wprime_mp(xs, k):
    p = mp.mpf(1)
    for j, xj in enumerate(xs):
        if j != k:
            p *= xs[k] - xj
    return p


def bspline_naive(kv: KnotVector, t: float, r: int = 0) -> float:
    """Extended-precision oracle for the explicit partial-fraction sum.

    Returns sum_k (x_k - t)_+^{n-2-r} / W'(x_k) rounded to double.  Raises
    PrecisionLoss when the internal error estimate (largest term times the
    working epsilon) exceeds 1e-10 of the result, or when n > 24.
    """
    n = kv.n
    if not 0 <= r <= n - 2:
        raise ValueError(f"need 0 <= r <= n-2, got r={r}, n={n}")
    if n > ORACLE_MAX_N:
        raise PrecisionLoss(f"oracle limited to n <= {ORACLE_MAX_N}, got n={n}")
    e = n - 2 - r
    with mp.workdps(ORACLE_DPS):
        xs = [mp.mpf(float(x)) for x in kv.xs]
        tm = mp.mpf(float(t))
        total = mp.mpf(0)
        biggest = mp.mpf(0)
        for k in range(n):
            if xs[k] > tm:
                num = (xs[k] - tm) ** e if e > 0 else mp.mpf(1)
            else:
                continue
            term = num / _wprime_mp(xs, k)
            total += term
            biggest = max(biggest, abs(term))
        if biggest == 0:
            return 0.0
        err = biggest * mp.mpf(10) ** (2 - ORACLE_DPS)
        if abs(total) > 0 and err > mp.mpf("1e-10") * abs(total):
            raise PrecisionLoss(
                f"cancellation too severe at n={n}: est rel err {float(err / abs(total)):.2e}"
            )
        return float(total)


def _basis(xs: np.ndarray, ts: np.ndarray, order: int) -> np.ndarray:
    """All B-spline basis functions N_{i,order} on the given knots.

    Order counts spanned knot gaps: N_{i,1} is the indicator of
    [x_i, x_{i+1}).  Returns shape (n - order, len(ts)).
    """
    n = xs.size
    B = np.zeros((n - 1, ts.size))
    for i in range(n - 1):
        B[i] = (xs[i] <= ts) & (ts < xs[i + 1])
    for m in range(2, order + 1):
        nb = n - m
        new = np.empty((nb, ts.size))
        for i in range(nb):
            new[i] = (ts - xs[i]) / (xs[i + m - 1] - xs[i]) * B[i] + (
                xs[i + m] - ts
            ) / (xs[i + m] - xs[i + 1]) * B[i + 1]
        B = new
    return B


def _deriv_coeffs(xs: np.ndarray, q: int):
    """Coefficients expressing d^q/dt^q N_{1,n-1} over order n-1-q basis."""
    m = xs.size - 1
    coeffs = np.array([1.0])
    for _ in range(q):
        new = np.zeros(coeffs.size + 1)
        for i, ci in enumerate(coeffs):
            new[i] += (m - 1) * ci / (xs[i + m - 1] - xs[i])
            new[i + 1] -= (m - 1) * ci / (xs[i + m] - xs[i + 1])
        coeffs = new
        m -= 1
    return coeffs, m


def bspline_stable_deriv(kv: KnotVector, t, q: int = 0):
    """q-th derivative of B via the de Boor derivative recursion (doubles).

    Accepts a scalar or an array of evaluation points.
    """
    if not 0 <= q <= kv.n - 2:
        raise ValueError(f"need 0 <= q <= n-2, got q={q}, n={kv.n}")
    xs = kv.xs
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    coeffs, order = _deriv_coeffs(xs, q)
    basis = _basis(xs, ts, order)
    vals = coeffs @ basis[: coeffs.size]
    vals = vals / (xs[-1] - xs[0])
    if np.isscalar(t) or np.ndim(t) == 0:
        return float(vals[0])
    return vals


def bspline_stable(kv: KnotVector, t):
    """B(t) by the stable recursion; matches the oracle to 1e-10 relative."""
    return bspline_stable_deriv(kv, t, 0)


def _falling(a: int, r: int) -> int:
    return math.prod(a - i for i in range(r)) if r > 0 else 1


def bspline_scaled(kv: KnotVector, t, r: int = 0):
    """sum_k (x_k - t/n)_+^{n-2-r} / W'(x_k), the rescaled comparand.

    Uses the exact identity with the r-th derivative of B, so the stable
    double-precision path serves every exponent reduction.
    """
    n = kv.n
    if not 0 <= r <= n - 2:
        raise ValueError(f"need 0 <= r <= n-2, got r={r}, n={n}")
    s = np.asarray(t, dtype=float) / n
    val = bspline_stable_deriv(kv, s, r)
    return (-1) ** r * val / _falling(n - 2, r)


def divided_difference(pairs, order: int | None = None) -> float:
    """Divided difference of tabulated values by the recursive triangle.

    ``pairs`` is a sequence of (node, value); ``order`` defaults to using
    all of them (order = len - 1).
    """
    if order is None:
        order = len(pairs) - 1
    pts = list(pairs)[: order + 1]
    nodes = [float(p[0]) for p in pts]
    if len(set(nodes)) != len(nodes):
        raise DuplicateKnots("divided difference needs distinct nodes")
    col = [float(p[1]) for p in pts]
    for step in range(1, len(pts)):
        col = [
            (col[i + 1] - col[i]) / (nodes[i + step] - nodes[i])
            for i in range(len(col) - 1)
        ]
    return col[0]


def integrate_bspline(kv: KnotVector) -> float:
    """Integral of B over its support, by knot-aligned Gauss-Legendre.

    On each knot interval B is a polynomial of degree n-2, so a rule with
    ceil((n-1)/2) + 1 nodes per panel integrates it exactly.
    """
    n_nodes = (kv.n - 1) // 2 + 2
    gl_x, gl_w = np.polynomial.legendre.leggauss(n_nodes)
    total = 0.0
    for a, b in zip(kv.xs[:-1], kv.xs[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        ts = mid + half * gl_x
        total += half * float(gl_w @ bspline_stable_deriv(kv, ts, 0))
    return total
