"""Independent reference computations shared by the test modules.

Nothing here imports the algorithmic code paths it is used to check; the
oracles re-derive each quantity from its definition by brute force.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

INF = math.inf

GRID_POINTS = 100_000


def beta_direct(t, delta, sigma):
    """The stitched boundary written out term by term."""
    x = max(2.0 * t * sigma**2, math.e)
    return 1.7 * math.sqrt((sigma**2 * math.log(math.log(x)) + 0.72 * math.log(5.2 / delta)) / t)


def first_t_scan(pred, limit=10**7):
    """Smallest t >= 1 with pred(t), by linear scan."""
    for t in range(1, limit + 1):
        if pred(t):
            return t
    raise AssertionError("scan limit reached")


def grid(lo, hi, n=GRID_POINTS):
    pts = np.linspace(lo, hi, n)
    pts[0], pts[-1] = lo, hi
    return pts


def grid_image(fn, lo, hi, n=GRID_POINTS):
    """min/max of a vectorized function sampled on an evenly spaced grid."""
    values = fn(grid(lo, hi, n))
    return float(values.min()), float(values.max())


def linear_eval(coeff):
    return lambda x: coeff * x


def indicator_eval(pieces):
    """``pieces`` are ``(lo, hi, lo_closed, hi_closed)`` tuples."""

    def fn(x):
        inside = np.zeros(x.shape, dtype=bool)
        for lo, hi, lc, hc in pieces:
            left = x >= lo if lc else x > lo
            right = x <= hi if hc else x < hi
            inside |= left & right
        return np.where(inside, 1.0, -INF)

    return fn


def piecewise_eval(breakpoints, pieces):
    """Affine ``(slope, intercept)`` pieces on ``(-inf, b0), [b0, b1), ...``."""
    slopes = np.array([p[0] for p in pieces])
    intercepts = np.array([p[1] for p in pieces])

    def fn(x):
        j = np.searchsorted(np.asarray(breakpoints, dtype=float), x, side="right")
        return slopes[j] * x + intercepts[j]

    return fn


def ext_add_all(values, lower):
    """Extended-real sum where the bound-side infinity dominates."""
    if lower and -INF in values:
        return -INF
    if not lower and INF in values:
        return INF
    return math.fsum(values)


def subset_sum(mu, members):
    return math.fsum(mu[i] for i in members)


def indicator_sum(mu, members, contains):
    """Sum of indicator values; ``contains(i, x)`` tests membership of x in C_i."""
    total = 0.0
    for i in members:
        if not contains(i, mu[i]):
            return -INF
        total += 1.0
    return total


def k_subsets(n, k):
    return [tuple(c) for c in combinations(range(n), k)]


def all_subsets(n):
    return [tuple(c) for r in range(n + 1) for c in combinations(range(n), r)]


def binomial_slack(p, n):
    return p + 3.0 * math.sqrt(p * (1.0 - p) / n)


# Random instances.  These return plain tuples so that the tests build the
# library objects themselves and the evaluators above stay independent.


def spaced_points(rng, k, lo=-5.0, hi=5.0, gap=0.05):
    while True:
        pts = sorted(rng.uniform(lo, hi) for _ in range(k))
        if all(q - p >= gap for p, q in zip(pts, pts[1:])):
            return pts


def random_indicator_pieces(rng):
    k = rng.randint(1, 3)
    pts = spaced_points(rng, 2 * k)
    if rng.random() < 0.2:
        pts[0] = -INF
    if rng.random() < 0.2:
        pts[-1] = INF
    pieces = []
    for j in range(k):
        lo, hi = pts[2 * j], pts[2 * j + 1]
        pieces.append((lo, hi, math.isfinite(lo) and rng.random() < 0.5, math.isfinite(hi) and rng.random() < 0.5))
    return pieces


def pieces_to_text(pieces):
    def fmt(x):
        return "inf" if x == INF else "-inf" if x == -INF else repr(x)

    return " | ".join(
        f"{'[' if lc else '('}{fmt(lo)}, {fmt(hi)}{']' if hc else ')'}" for lo, hi, lc, hc in pieces
    )


def random_piecewise(rng):
    breakpoints = spaced_points(rng, rng.randint(0, 4))
    pieces = [(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(len(breakpoints) + 1)]
    return breakpoints, pieces


def random_interval(rng, span=6.0, max_len=4.0):
    lo = rng.uniform(-span, span)
    length = 0.0 if rng.random() < 0.05 else rng.uniform(0.0, max_len)
    return lo, lo + length
