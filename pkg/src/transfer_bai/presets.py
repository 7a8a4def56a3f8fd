"""Reductions of classical pure-exploration problems to additive transfer instances.

Subset-indexed targets are enumerated explicitly and labelled with their
1-based source indices, e.g. ``"{1,3}"``.  Source indices in the API are
0-based; labels are 1-based for readability.

For indicator-based presets, a true source mean sitting exactly on the
boundary of its property set gives a zero margin and the sample-complexity
bounds become vacuous; the library cannot detect this from samples alone.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

from .transfer import Indicator, Linear, PropertySet, TransferFunction, Zero

TOPK_CAP = 10_000
THRESHOLDING_MAX_SOURCES = 15


def subset_label(members: Sequence[int]) -> str:
    return "{" + ",".join(str(i + 1) for i in sorted(members)) + "}"


def _check_subsets(n: int, subsets: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    out = []
    for s in subsets:
        members = tuple(sorted(int(i) for i in s))
        if len(set(members)) != len(members):
            raise ValueError(f"subset {subset_label(members)} repeats a source")
        if any(not 0 <= i < n for i in members):
            raise ValueError(f"subset {list(s)} has indices outside 0..{n - 1}")
        out.append(members)
    return out


def make_bai(n: int) -> TransferFunction:
    if n < 2:
        raise ValueError(f"best-arm identification needs n >= 2, got {n}")
    rows = [[Linear(1.0) if a == i else Zero() for i in range(n)] for a in range(n)]
    return TransferFunction(rows, [str(a + 1) for a in range(n)])


def make_cpe(n: int, decision_class: Sequence[Sequence[int]]) -> TransferFunction:
    """One target per member of ``decision_class`` with mean equal to the subset sum."""
    subsets = _check_subsets(n, decision_class)
    if len(subsets) < 2:
        raise ValueError("decision class needs at least two subsets")
    if len(set(subsets)) != len(subsets):
        raise ValueError("decision class contains duplicate subsets")
    rows = [[Linear(1.0) if i in members else Zero() for i in range(n)] for members in subsets]
    return TransferFunction(rows, [subset_label(m) for m in subsets])


def make_topk(n: int, k: int, cap: int = TOPK_CAP) -> TransferFunction:
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= K < n, got K={k}, n={n}")
    count = math.comb(n, k)
    if count > cap:
        raise ValueError(f"C({n}, {k}) = {count} targets exceeds the cap of {cap}")
    return make_cpe(n, list(itertools.combinations(range(n), k)))


def make_property_testing(
    property_sets: Sequence[PropertySet],
    membership_sets: Sequence[Sequence[int]],
) -> TransferFunction:
    """Targets ``nu_M = sum_{i in M} 1_{C_i}(mu_i)``; the algorithm must run with epsilon = 0."""
    n = len(property_sets)
    if n == 0:
        raise ValueError("need at least one property set")
    if not membership_sets:
        raise ValueError("need at least one membership set")
    subsets = _check_subsets(n, membership_sets)
    if len(set(subsets)) != len(subsets):
        raise ValueError("membership sets contain duplicates")
    indicators = [Indicator(c) for c in property_sets]
    rows = [[indicators[i] if i in members else Zero() for i in range(n)] for members in subsets]
    return TransferFunction(rows, [subset_label(m) for m in subsets])


def power_set(n: int) -> list[tuple[int, ...]]:
    return [s for k in range(n + 1) for s in itertools.combinations(range(n), k)]


def make_thresholding(n: int, theta: float, max_sources: int = THRESHOLDING_MAX_SOURCES) -> TransferFunction:
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n > max_sources:
        raise ValueError(f"thresholding enumerates 2^n targets; n={n} exceeds the limit of {max_sources}")
    if not math.isfinite(theta):
        raise ValueError(f"threshold must be finite, got {theta}")
    return make_property_testing([PropertySet.above(theta)] * n, power_set(n))


def requires_zero_epsilon(tf: TransferFunction) -> bool:
    return any(isinstance(c, Indicator) for row in tf.components for c in row)
