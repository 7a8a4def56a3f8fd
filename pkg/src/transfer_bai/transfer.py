"""Additive transfer functions and the target confidence sequences they induce.

A transfer function maps source means to target means through a grid of
one-dimensional components, ``nu[a] = sum_i f[a][i](mu[i])``.  Every
component kind supports exact interval images, which is what makes the
target bounds valid whenever the source bounds are.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Sequence, Union

from .extreal import INF, NEG_INF, ExtInterval, ext_sub, ext_sum_lower, ext_sum_upper, format_extreal, parse_extreal


# ---------------------------------------------------------------------------
# Property sets: finite unions of intervals with declared endpoint types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SetInterval:
    lo: float
    hi: float
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoints must not be NaN")
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")
        # infinite endpoints are never members
        if math.isinf(self.lo):
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(self.hi):
            object.__setattr__(self, "hi_closed", False)

    @property
    def is_empty(self) -> bool:
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    def contains(self, x: float) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{format_extreal(self.lo)}, {format_extreal(self.hi)}{right}"


_INTERVAL_RE = re.compile(r"^\s*([\[(])\s*([^,]+?)\s*,\s*([^\])]+?)\s*([\])])\s*$")


class PropertySet:
    """A subset of the real line given as a union of disjoint intervals.

    Overlapping or touching pieces are merged on construction, so each
    stored piece is a maximal connected component.

    >>> PropertySet.parse("(0, 1] | (1, inf)")
    PropertySet('(0.0, inf)')
    """

    def __init__(self, pieces: Sequence[SetInterval] = ()):
        self.pieces: tuple[SetInterval, ...] = _normalize(pieces)

    @classmethod
    def parse(cls, text: str) -> PropertySet:
        text = text.strip()
        if text.lower() in ("", "empty", "{}"):
            return cls(())
        if text.lower() in ("r", "reals", "all"):
            return cls((SetInterval(NEG_INF, INF),))
        pieces = []
        for part in text.split("|"):
            m = _INTERVAL_RE.match(part)
            if m is None:
                raise ValueError(f"cannot parse interval {part.strip()!r}")
            left, lo, hi, right = m.groups()
            pieces.append(SetInterval(parse_extreal(lo), parse_extreal(hi), left == "[", right == "]"))
        return cls(pieces)

    @classmethod
    def above(cls, theta: float) -> PropertySet:
        return cls((SetInterval(theta, INF),))

    def __eq__(self, other) -> bool:
        return isinstance(other, PropertySet) and self.pieces == other.pieces

    def __hash__(self) -> int:
        return hash(self.pieces)

    def __str__(self) -> str:
        return " | ".join(str(p) for p in self.pieces) if self.pieces else "empty"

    def __repr__(self) -> str:
        return f"PropertySet({str(self)!r})"

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    @property
    def is_real_line(self) -> bool:
        return len(self.pieces) == 1 and self.pieces[0].lo == NEG_INF and self.pieces[0].hi == INF

    def contains(self, x: float) -> bool:
        return any(p.contains(x) for p in self.pieces)

    def __contains__(self, x: float) -> bool:
        return self.contains(x)

    def contains_closed(self, lo: float, hi: float) -> bool:
        """True iff ``[lo, hi]`` lies inside the set."""
        return any(p.contains(lo) and p.contains(hi) for p in self.pieces)

    def meets_closed(self, lo: float, hi: float) -> bool:
        """True iff ``[lo, hi]`` shares at least one point with the set."""
        probe = SetInterval(lo, hi, True, True)
        return any(_intersects(p, probe) for p in self.pieces)

    def complement(self) -> PropertySet:
        gaps = []
        cursor, cursor_closed = NEG_INF, False
        for p in self.pieces:
            gaps.append(SetInterval(cursor, p.lo, cursor_closed, not p.lo_closed))
            cursor, cursor_closed = p.hi, not p.hi_closed
        gaps.append(SetInterval(cursor, INF, cursor_closed, False))
        return PropertySet([g for g in gaps if not g.is_empty])

    def boundary_points(self) -> list[float]:
        pts = set()
        for p in self.pieces:
            pts.update(v for v in (p.lo, p.hi) if math.isfinite(v))
        return sorted(pts)

    def component_of(self, x: float) -> SetInterval:
        """The maximal interval of this set or of its complement that holds ``x``."""
        source = self if self.contains(x) else self.complement()
        for p in source.pieces:
            if p.contains(x):
                return p
        raise AssertionError("unreachable: the set and its complement cover the line")

    def margin(self, x: float) -> float:
        """Distance from ``x`` to the other side (``inf`` when nothing is on the other side)."""
        piece = self.component_of(x)
        return min(x - piece.lo, piece.hi - x)


def _intersects(a: SetInterval, b: SetInterval) -> bool:
    lo = max(a.lo, b.lo)
    hi = min(a.hi, b.hi)
    if lo < hi:
        return True
    if lo > hi:
        return False
    return a.contains(lo) and b.contains(lo)


def _normalize(pieces: Sequence[SetInterval]) -> tuple[SetInterval, ...]:
    items = sorted((p for p in pieces if not p.is_empty), key=lambda p: (p.lo, not p.lo_closed))
    merged: list[SetInterval] = []
    for p in items:
        if merged:
            cur = merged[-1]
            touching = p.lo < cur.hi or (p.lo == cur.hi and (cur.hi_closed or p.lo_closed))
            if touching:
                if p.hi > cur.hi:
                    hi, hi_closed = p.hi, p.hi_closed
                elif p.hi == cur.hi:
                    hi, hi_closed = cur.hi, cur.hi_closed or p.hi_closed
                else:
                    hi, hi_closed = cur.hi, cur.hi_closed
                lo_closed = cur.lo_closed or (p.lo == cur.lo and p.lo_closed)
                merged[-1] = SetInterval(cur.lo, hi, lo_closed, hi_closed)
                continue
        merged.append(p)
    return tuple(merged)


# ---------------------------------------------------------------------------
# Component functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Zero:
    def __call__(self, x: float) -> float:
        return 0.0

    def image(self, lo: float, hi: float) -> tuple[float, float]:
        return 0.0, 0.0

    def global_image(self) -> tuple[float, float]:
        return 0.0, 0.0

    def breakpoints(self) -> list[float]:
        return []


@dataclass(frozen=True)
class Linear:
    coeff: float

    def __post_init__(self):
        if not math.isfinite(self.coeff):
            raise ValueError(f"linear coefficient must be finite, got {self.coeff}")

    def __call__(self, x: float) -> float:
        return self.coeff * x

    def image(self, lo: float, hi: float) -> tuple[float, float]:
        a, b = self.coeff * lo, self.coeff * hi
        return (a, b) if a <= b else (b, a)

    def global_image(self) -> tuple[float, float]:
        return (0.0, 0.0) if self.coeff == 0 else (NEG_INF, INF)

    def breakpoints(self) -> list[float]:
        return []


@dataclass(frozen=True)
class Indicator:
    """1 on the property set, ``-inf`` off it."""

    region: PropertySet

    def __call__(self, x: float) -> float:
        return 1.0 if self.region.contains(x) else NEG_INF

    def image(self, lo: float, hi: float) -> tuple[float, float]:
        low = 1.0 if self.region.contains_closed(lo, hi) else NEG_INF
        high = 1.0 if self.region.meets_closed(lo, hi) else NEG_INF
        return low, high

    def global_image(self) -> tuple[float, float]:
        low = 1.0 if self.region.is_real_line else NEG_INF
        high = NEG_INF if self.region.is_empty else 1.0
        return low, high

    def breakpoints(self) -> list[float]:
        return self.region.boundary_points()


@dataclass(frozen=True)
class Affine:
    slope: float
    intercept: float = 0.0

    def __call__(self, x: float) -> float:
        if self.slope == 0:
            return self.intercept
        return self.slope * x + self.intercept


@dataclass(frozen=True)
class PiecewiseMonotone:
    """Affine pieces on ``(-inf, b0), [b0, b1), ..., [b_last, inf)``.

    Jumps are allowed at breakpoints; images report infima and suprema, so
    a one-sided limit at an excluded endpoint counts.
    """

    breakpoints_: tuple[float, ...]
    pieces: tuple[Affine, ...]

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints_)
        if any(not math.isfinite(b) for b in bps):
            raise ValueError("breakpoints must be finite")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(self.pieces) != len(bps) + 1:
            raise ValueError(f"need {len(bps) + 1} pieces for {len(bps)} breakpoints, got {len(self.pieces)}")
        for piece in self.pieces:
            if not (math.isfinite(piece.slope) and math.isfinite(piece.intercept)):
                raise ValueError("piece coefficients must be finite")
        object.__setattr__(self, "breakpoints_", bps)
        object.__setattr__(self, "pieces", tuple(self.pieces))

    def _domain(self, j: int) -> tuple[float, float]:
        left = self.breakpoints_[j - 1] if j > 0 else NEG_INF
        right = self.breakpoints_[j] if j < len(self.breakpoints_) else INF
        return left, right

    def __call__(self, x: float) -> float:
        for j, piece in enumerate(self.pieces):
            left, right = self._domain(j)
            if left <= x < right or (right == INF and x == INF):
                return piece(x)
        return self.pieces[0](x)  # x == -inf

    def image(self, lo: float, hi: float) -> tuple[float, float]:
        values = []
        for j, piece in enumerate(self.pieces):
            left, right = self._domain(j)
            if left <= hi and lo < right:
                values.append(piece(max(lo, left)))
                values.append(piece(min(hi, right)))
        return min(values), max(values)

    def global_image(self) -> tuple[float, float]:
        return self.image(NEG_INF, INF)

    def breakpoints(self) -> list[float]:
        return list(self.breakpoints_)


Component = Union[Zero, Linear, Indicator, PiecewiseMonotone]


def is_constant(component: Component) -> bool:
    lo, hi = component.global_image()
    return lo == hi


def component_interval_image(component: Component, interval: ExtInterval) -> ExtInterval:
    """Exact ``[inf f, sup f]`` of a component over a finite closed interval."""
    if not interval.is_finite:
        raise ValueError(f"interval image needs finite endpoints, got {interval}")
    return ExtInterval(*component.image(interval.lo, interval.hi))


def _image_or_global(component: Component, lo: float, hi: float) -> tuple[float, float]:
    if math.isinf(lo) or math.isinf(hi):
        return component.global_image()
    return component.image(lo, hi)


# ---------------------------------------------------------------------------
# Transfer function
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransferFunction:
    components: tuple[tuple[Component, ...], ...]
    labels: tuple[str, ...] | None = None
    _support: tuple[tuple[tuple[int, Component], ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        grid = tuple(tuple(row) for row in self.components)
        if not grid or not grid[0]:
            raise ValueError("transfer function needs at least one target and one source")
        width = len(grid[0])
        for a, row in enumerate(grid):
            if len(row) != width:
                raise ValueError(f"row {a} has {len(row)} components, expected {width}")
        object.__setattr__(self, "components", grid)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != len(grid):
                raise ValueError(f"{len(labels)} labels for {len(grid)} targets")
            object.__setattr__(self, "labels", labels)
        support = tuple(tuple((i, c) for i, c in enumerate(row) if not isinstance(c, Zero)) for row in grid)
        object.__setattr__(self, "_support", support)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[float]], labels=None) -> TransferFunction:
        rows = [[Zero() if float(c) == 0 else Linear(float(c)) for c in row] for row in matrix]
        return cls(rows, labels)

    @property
    def n_target(self) -> int:
        return len(self.components)

    @property
    def n_source(self) -> int:
        return len(self.components[0])

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels is not None else str(a + 1)

    def component(self, a: int, i: int) -> Component:
        if not 0 <= a < self.n_target:
            raise IndexError(f"target index {a} out of range")
        if not 0 <= i < self.n_source:
            raise IndexError(f"source index {i} out of range")
        return self.components[a][i]

    def sparsity(self, a: int) -> int:
        if not 0 <= a < self.n_target:
            raise IndexError(f"target index {a} out of range")
        return sum(1 for c in self.components[a] if not is_constant(c))

    def target_means(self, mu: Sequence[float]) -> list[float]:
        if len(mu) != self.n_source:
            raise ValueError(f"expected {self.n_source} source means, got {len(mu)}")
        out = []
        for row in self.components:
            values = [c(m) for c, m in zip(row, mu)]
            out.append(ext_sum_lower(values))
        return out

    def bounds(self, lcbs: Sequence[float], ucbs: Sequence[float]) -> tuple[list[float], list[float]]:
        """Target lower and upper bounds from source bound vectors."""
        lows, highs = [], []
        for row in self._support:
            lo_terms, hi_terms = [], []
            for i, comp in row:
                lo, hi = _image_or_global(comp, lcbs[i], ucbs[i])
                lo_terms.append(lo)
                hi_terms.append(hi)
            lows.append(ext_sum_lower(lo_terms))
            highs.append(ext_sum_upper(hi_terms))
        return lows, highs

    def lengths(self, a: int, lcbs: Sequence[float], ucbs: Sequence[float]) -> list[float]:
        """Per-source uncertainty contributed to target ``a``."""
        out = [0.0] * self.n_source
        for i, comp in self._support[a]:
            lo, hi = _image_or_global(comp, lcbs[i], ucbs[i])
            out[i] = ext_sub(hi, lo)
        return out


def target_bounds(tf: TransferFunction, source_cis: Sequence[ExtInterval]) -> list[ExtInterval]:
    if len(source_cis) != tf.n_source:
        raise ValueError(f"expected {tf.n_source} source intervals, got {len(source_cis)}")
    lows, highs = tf.bounds([ci.lo for ci in source_cis], [ci.hi for ci in source_cis])
    return [ExtInterval(lo, hi) for lo, hi in zip(lows, highs)]


def uncertainty_length(tf: TransferFunction, a: int, i: int, ci: ExtInterval) -> float:
    lo, hi = _image_or_global(tf.component(a, i), ci.lo, ci.hi)
    return ext_sub(hi, lo)


def sparsity(tf: TransferFunction, a: int) -> int:
    return tf.sparsity(a)
