"""Extended-real scalars and closed intervals.

Extended reals are plain Python floats restricted to finite values and
``±inf``; NaN is rejected wherever a value enters the library.  The only
non-standard rule is subtraction, where ``inf - inf`` and ``-inf - (-inf)``
are defined to be 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INF = math.inf
NEG_INF = -math.inf


def check_extreal(x: float, name: str = "value") -> float:
    x = float(x)
    if math.isnan(x):
        raise ValueError(f"{name} must not be NaN")
    return x


def ext_sub(x: float, y: float) -> float:
    """Return ``x - y`` with the convention that equal infinities cancel to 0."""
    if math.isinf(x) and x == y:
        return 0.0
    return x - y


def ext_sum_lower(values) -> float:
    """Sum where a ``-inf`` term dominates any ``+inf`` term (lower bounds)."""
    terms = list(values)
    if any(v == NEG_INF for v in terms):
        return NEG_INF
    return math.fsum(terms) if all(math.isfinite(v) for v in terms) else INF


def ext_sum_upper(values) -> float:
    """Sum where a ``+inf`` term dominates any ``-inf`` term (upper bounds)."""
    terms = list(values)
    if any(v == INF for v in terms):
        return INF
    return math.fsum(terms) if all(math.isfinite(v) for v in terms) else NEG_INF


def parse_extreal(text: str) -> float:
    """Parse ``"inf"``, ``"-inf"``, ``"+inf"`` or a decimal literal."""
    s = text.strip().lower()
    if s in ("inf", "+inf", "infinity", "+infinity"):
        return INF
    if s in ("-inf", "-infinity"):
        return NEG_INF
    try:
        value = float(s)
    except ValueError:
        raise ValueError(f"not an extended real: {text!r}") from None
    if math.isnan(value):
        raise ValueError(f"not an extended real: {text!r}")
    return value


def format_extreal(x: float) -> str:
    if x == INF:
        return "inf"
    if x == NEG_INF:
        return "-inf"
    return repr(float(x))


@dataclass(frozen=True)
class ExtInterval:
    """Closed interval ``[lo, hi]`` over the extended reals."""

    lo: float
    hi: float

    def __post_init__(self):
        lo = check_extreal(self.lo, "lo")
        hi = check_extreal(self.hi, "hi")
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> float:
        return ext_sub(self.hi, self.lo)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def __contains__(self, x: float) -> bool:
        return self.contains(x)

    def issubset(self, other: ExtInterval) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def __str__(self) -> str:
        return f"[{format_extreal(self.lo)}, {format_extreal(self.hi)}]"


REAL_LINE = ExtInterval(NEG_INF, INF)


def interval_length(interval: ExtInterval) -> float:
    return interval.length
