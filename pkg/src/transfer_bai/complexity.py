"""Instance-dependent sample-complexity bounds for T-LUCB.

All quantities here use the true means, so they are diagnostics for the
harness and never inputs to an algorithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .confidence import invert_beta, monotone_tail_start, stitched_beta
from .extreal import INF, ext_sub
from .transfer import Component, Indicator, Linear, PropertySet, TransferFunction, is_constant

UNBOUNDED = INF
_SEARCH_LIMIT = 1 << 62


def nu_bar(nu: Sequence[float]) -> float:
    """Midpoint of the two largest target means (extended-real aware)."""
    if len(nu) < 2:
        raise ValueError("need at least two target means")
    top, second = sorted(nu, reverse=True)[:2]
    return 0.5 * (top + second)


def target_gap(nu_mid: float, nu_a: float, epsilon: float) -> float:
    return max(abs(ext_sub(nu_mid, nu_a)), epsilon / 2.0)


def complexity_length(tf: TransferFunction, a: int, i: int, t: int, x: float, delta_effective: float, sigma: float = 1.0) -> float:
    """Spread of component ``(a, i)`` over ``[x, x + 2 beta(t)]``."""
    width = 2.0 * stitched_beta(t, delta_effective, sigma)
    lo, hi = tf.component(a, i).image(x, x + width)
    return ext_sub(hi, lo)


def _sup_length(component: Component, mu_i: float, width: float) -> float:
    """Exact sup over windows ``[x, x + width]`` with ``x`` in ``[mu_i - width, mu_i]``.

    The spread only changes where a window endpoint crosses a breakpoint,
    so it suffices to evaluate at those crossings, the range ends and the
    midpoints between them.  Between crossings the spread is convex in
    ``x`` for affine pieces, so the sup sits at a cell end.
    """
    lo_x, hi_x = mu_i - width, mu_i
    xs = {lo_x, hi_x}
    for b in component.breakpoints():
        for x in (b, b - width):
            if lo_x <= x <= hi_x:
                xs.add(x)
    xs = sorted(xs)
    xs += [0.5 * (p + q) for p, q in zip(xs, xs[1:])]
    best = 0.0
    for x in xs:
        lo, hi = component.image(x, x + width)
        best = max(best, ext_sub(hi, lo))
    return best


def _threshold(tf: TransferFunction, a: int, nu: Sequence[float], epsilon: float) -> float:
    s = tf.sparsity(a)
    gap = target_gap(nu_bar(nu), nu[a], epsilon)
    return INF if s == 0 else gap / s


def tau_search(
    component: Component, mu_i: float, threshold: float, delta_effective: float, sigma: float
) -> float:
    """First ``t`` where the worst-case spread drops strictly below ``threshold``.

    Scans the non-monotone head of the boundary, then brackets by doubling
    and bisects on the tail, where the condition is monotone in ``t``.
    Returns ``inf`` if no ``t`` below the search limit qualifies.
    """

    def ok(t: int) -> bool:
        width = 2.0 * stitched_beta(t, delta_effective, sigma)
        return _sup_length(component, mu_i, width) < threshold

    tail = monotone_tail_start(delta_effective, sigma)
    for t in range(1, tail + 1):
        if ok(t):
            return t
    lo, hi = tail, 2 * tail
    while not ok(hi):
        if hi >= _SEARCH_LIMIT:
            return UNBOUNDED
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _tau_indicator_closed(region: PropertySet, mu_i: float, delta_effective: float, sigma: float) -> float:
    # Every window of width 2*beta holding mu_i must stay in the piece of C
    # (or of its complement) containing mu_i; a side whose endpoint belongs
    # to that piece may be touched, otherwise the inequality is strict.
    piece = region.component_of(mu_i)
    taus = []
    for dist, closed in ((mu_i - piece.lo, piece.lo_closed), (piece.hi - mu_i, piece.hi_closed)):
        if dist == INF:
            taus.append(1)
        elif dist <= 0:
            return UNBOUNDED
        else:
            taus.append(invert_beta(dist / 2.0, delta_effective, sigma, strict=not closed))
    return max(taus)


def tau_closed_form(
    component: Component, mu_i: float, threshold: float, delta_effective: float, sigma: float
) -> float:
    if is_constant(component):
        return 1 if threshold > 0 else UNBOUNDED
    if threshold <= 0:
        return UNBOUNDED
    if isinstance(component, Linear):
        if threshold == INF:
            return 1
        return invert_beta(threshold / (2.0 * abs(component.coeff)), delta_effective, sigma, strict=True)
    if isinstance(component, Indicator):
        return _tau_indicator_closed(component.region, mu_i, delta_effective, sigma)
    raise TypeError(f"no closed form for {type(component).__name__}")


def tau_target_source(
    tf: TransferFunction,
    a: int,
    i: int,
    mu: Sequence[float],
    nu: Sequence[float],
    epsilon: float,
    delta_effective: float,
    sigma: float = 1.0,
    method: str = "auto",
) -> float:
    """Pull budget for source ``i`` to settle target ``a``; ``inf`` when unbounded.

    ``method`` is ``"closed"`` (Linear and Indicator only), ``"search"``
    or ``"auto"`` (closed form where one exists).
    """
    component = tf.component(a, i)
    threshold = _threshold(tf, a, nu, epsilon)
    if is_constant(component):
        return 1 if threshold > 0 else UNBOUNDED
    if threshold <= 0:
        return UNBOUNDED
    if method == "auto":
        method = "closed" if isinstance(component, (Linear, Indicator)) else "search"
    if method == "closed":
        return tau_closed_form(component, mu[i], threshold, delta_effective, sigma)
    if method == "search":
        return tau_search(component, mu[i], threshold, delta_effective, sigma)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class ComplexityReport:
    nu: list[float]
    nu_bar: float
    delta_effective: float
    tau_matrix: list[list[float]]
    tau_per_source: list[float]
    theorem2_total: float
    unbounded: bool
    closed_form: dict | None = None

    def to_dict(self) -> dict:
        return {
            "nu": self.nu,
            "nu_bar": self.nu_bar,
            "delta_effective": self.delta_effective,
            "tau_matrix": self.tau_matrix,
            "tau_per_source": self.tau_per_source,
            "theorem2_total": self.theorem2_total,
            "unbounded": self.unbounded,
            "closed_form": self.closed_form,
        }


def theorem2_bound(
    tf: TransferFunction,
    mu: Sequence[float],
    epsilon: float,
    delta: float,
    sigma: float = 1.0,
    raw_delta: bool = False,
    method: str = "auto",
) -> ComplexityReport:
    """Per-pair budgets, per-source maxima and their sum.

    By default the boundary risk is ``delta / (2 n)``, the same split the
    algorithm uses; ``raw_delta=True`` uses ``delta`` itself.
    """
    n = tf.n_source
    delta_eff = delta if raw_delta else delta / (2 * n)
    nu = tf.target_means(mu)
    matrix = [
        [tau_target_source(tf, a, i, mu, nu, epsilon, delta_eff, sigma, method) for i in range(n)]
        for a in range(tf.n_target)
    ]
    per_source = [max(row[i] for row in matrix) for i in range(n)]
    total = sum(per_source)
    return ComplexityReport(
        nu=nu,
        nu_bar=nu_bar(nu),
        delta_effective=delta_eff,
        tau_matrix=matrix,
        tau_per_source=per_source,
        theorem2_total=total,
        unbounded=total == INF,
    )


# ---------------------------------------------------------------------------
# Closed-form hardness quantities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NamedBound:
    name: str
    value: float
    extras: dict = field(default_factory=dict)

    @property
    def unbounded(self) -> bool:
        return self.value == INF

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "unbounded": self.unbounded, **self.extras}


def _inverse_square_sum(numerators: Sequence[float], gaps: Sequence[float]) -> float:
    terms = []
    for num, gap in zip(numerators, gaps):
        if num == 0:
            continue
        if gap == 0:
            return INF
        terms.append(num / (gap * gap))
    return math.fsum(terms)


def property_testing_hardness(property_sets: Sequence[PropertySet], mu: Sequence[float]) -> NamedBound:
    margins = [c.margin(m) for c, m in zip(property_sets, mu)]
    return NamedBound("property_testing", _inverse_square_sum([2.0] * len(mu), margins), {"margins": margins})


def linear_hardness(matrix: Sequence[Sequence[float]], mu: Sequence[float], epsilon: float) -> NamedBound:
    tf = TransferFunction.from_matrix(matrix)
    nu = tf.target_means(mu)
    mid = nu_bar(nu)
    per_source = []
    for i in range(tf.n_source):
        worst = 0.0
        for a in range(tf.n_target):
            coeff = float(matrix[a][i])
            if coeff == 0:
                continue
            gap = target_gap(mid, nu[a], epsilon)
            term = INF if gap == 0 else (tf.sparsity(a) * coeff) ** 2 / gap**2
            worst = max(worst, term)
        per_source.append(worst)
    value = INF if INF in per_source else math.fsum(per_source)
    return NamedBound("linear", value, {"per_source": per_source})


def bai_hardness(mu: Sequence[float]) -> NamedBound:
    ordered = sorted(mu, reverse=True)
    mid = 0.5 * (ordered[0] + ordered[1])
    return NamedBound("bai", _inverse_square_sum([1.0] * len(mu), [mid - m for m in mu]), {"mu_bar": mid})


def thresholding_hardness(mu: Sequence[float], theta: float) -> NamedBound:
    return NamedBound("thresholding", _inverse_square_sum([1.0] * len(mu), [m - theta for m in mu]))


def topk_hardness(mu: Sequence[float], k: int) -> NamedBound:
    if not 1 <= k < len(mu):
        raise ValueError(f"need 1 <= K < n, got K={k}, n={len(mu)}")
    ordered = sorted(mu, reverse=True)
    mid = 0.5 * (ordered[k - 1] + ordered[k])
    gaps = [m - mid for m in mu]
    value = _inverse_square_sum([float(k * k)] * len(mu), gaps)
    unit = _inverse_square_sum([1.0] * len(mu), gaps)
    ratio = value / unit if 0 < unit < INF else math.nan
    return NamedBound("topk", value, {"mu_bar": mid, "k_squared": k * k, "ratio_vs_k1": ratio})


def corollary_bounds(kind: str, **instance) -> NamedBound:
    """Closed-form hardness for a preset kind.

    ``kind`` is one of ``bai``, ``thresholding``, ``topk``,
    ``property_testing`` or ``linear``; keyword arguments carry the
    instance (``mu`` plus ``theta``, ``k``, ``property_sets``, ``matrix``,
    ``epsilon`` as relevant).
    """
    mu = instance["mu"]
    if kind == "bai":
        return bai_hardness(mu)
    if kind == "thresholding":
        return thresholding_hardness(mu, instance["theta"])
    if kind == "topk":
        return topk_hardness(mu, instance["k"])
    if kind == "property_testing":
        return property_testing_hardness(instance["property_sets"], mu)
    if kind == "linear":
        return linear_hardness(instance["matrix"], mu, instance.get("epsilon", 0.0))
    raise ValueError(f"unknown preset kind {kind!r}")
