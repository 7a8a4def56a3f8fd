"""Stitched sub-Gaussian boundary and running-intersection confidence sequences."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .extreal import INF, NEG_INF, ExtInterval

BETA_SCALE = 1.7
LOG_SCALE = 0.72
DELTA_SCALE = 5.2


def _check_delta_sigma(delta: float, sigma: float) -> None:
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not sigma > 0.0 or not math.isfinite(sigma):
        raise ValueError(f"sigma must be positive and finite, got {sigma}")


def stitched_beta(t: int, delta: float, sigma: float) -> float:
    """Polynomial stitched boundary at sample size ``t``.

    The iterated logarithm is evaluated at ``max(2 t sigma^2, e)`` so the
    boundary is real and positive for every ``t >= 1``.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    _check_delta_sigma(delta, sigma)
    var = sigma * sigma
    loglog = math.log(math.log(max(2.0 * t * var, math.e)))
    return BETA_SCALE * math.sqrt((var * loglog + LOG_SCALE * math.log(DELTA_SCALE / delta)) / t)


def monotone_tail_start(delta: float, sigma: float) -> int:
    """Smallest integer ``T0`` such that ``stitched_beta`` is nonincreasing on ``t >= T0``.

    Writing ``x = 2 t sigma^2``, the squared boundary is decreasing in ``t``
    exactly where ``sigma^2 / ln x - sigma^2 ln ln x - c <= 0``; the left side
    is decreasing in ``x``, so the tail starts at its root.
    """
    _check_delta_sigma(delta, sigma)
    var = sigma * sigma
    c = LOG_SCALE * math.log(DELTA_SCALE / delta)

    def slope_sign(x: float) -> float:
        lx = math.log(x)
        return var / lx - var * math.log(lx) - c

    if slope_sign(math.e) <= 0.0:
        return 1
    lo, hi = math.e, 2.0 * math.e
    while slope_sign(hi) > 0.0:
        lo, hi = hi, 2.0 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if slope_sign(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return max(1, math.ceil(hi / (2.0 * var)))


def invert_beta(width: float, delta: float, sigma: float, strict: bool = False) -> int:
    """Smallest ``t >= 1`` with ``stitched_beta(t) <= width`` (``<`` when ``strict``).

    Points before the monotone tail are scanned directly; the tail is
    bracketed by doubling and then bisected.
    """
    if not width > 0.0:
        raise ValueError(f"width must be positive, got {width}")
    if width == INF:
        return 1

    def ok(t: int) -> bool:
        b = stitched_beta(t, delta, sigma)
        return b < width if strict else b <= width

    tail = monotone_tail_start(delta, sigma)
    for t in range(1, tail):
        if ok(t):
            return t
    if ok(tail):
        return tail
    lo, hi = tail, 2 * tail
    while not ok(hi):
        lo, hi = hi, 2 * hi
    # invariant: not ok(lo), ok(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class BoundaryParams:
    sigma: float
    delta_total: float
    n_source: int

    def __post_init__(self):
        _check_delta_sigma(self.delta_total, self.sigma)
        if self.n_source < 1:
            raise ValueError(f"n_source must be >= 1, got {self.n_source}")

    @property
    def per_arm_delta(self) -> float:
        return self.delta_total / (2 * self.n_source)

    def beta(self, t: int) -> float:
        return stitched_beta(t, self.per_arm_delta, self.sigma)


@dataclass(frozen=True)
class ArmConfidenceState:
    """Confidence sequence for one source arm.

    ``collapsed`` records that the running intersection became empty at
    some update, which can only happen when the true mean has already left
    the sequence.  The bounds are then pinned to a single point inside the
    previous interval so that they stay nested.
    """

    pulls: int = 0
    total: float = 0.0
    lcb: float = NEG_INF
    ucb: float = INF
    collapsed: bool = False

    @property
    def mean(self) -> float:
        if self.pulls == 0:
            raise ValueError("no samples yet")
        return self.total / self.pulls

    @property
    def interval(self) -> ExtInterval:
        return ExtInterval(self.lcb, self.ucb)


def cs_update(state: ArmConfidenceState, sample: float, params: BoundaryParams) -> ArmConfidenceState:
    if not math.isfinite(sample):
        raise ValueError(f"sample must be finite, got {sample}")
    pulls = state.pulls + 1
    total = state.total + sample
    mean = total / pulls
    radius = params.beta(pulls)
    lcb = max(state.lcb, mean - radius)
    ucb = min(state.ucb, mean + radius)
    collapsed = state.collapsed
    if lcb > ucb:
        point = min(max(0.5 * (lcb + ucb), state.lcb), state.ucb)
        lcb = ucb = point
        collapsed = True
    return ArmConfidenceState(pulls, total, lcb, ucb, collapsed)
