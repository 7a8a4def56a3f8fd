"""Modified Micro-LUCB baseline.

Sources are chosen from the set of arms whose scaled and shifted
confidence interval covers the target's interval.  That set is empty for
most linear transfers, in which case the sampling rule is undefined and
:class:`EmptyDtilde` is raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .confidence import BoundaryParams
from .env import BanditEnv, Sampler
from .rng import SampleStream
from .tlucb import DEFAULT_MAX_ROUNDS, RunResult, SourceBounds, _candidates
from .transfer import TransferFunction


class EmptyDtilde(RuntimeError):
    def __init__(self, round_index: int, target: int, partial: RunResult | None = None):
        super().__init__(f"no source arm covers target {target} at round {round_index}")
        self.round_index = round_index
        self.target = target
        # source bounds at the failing round, for good-event bookkeeping
        self.partial = partial


@dataclass(frozen=True)
class MicroLucbConfig:
    delta: float
    epsilon: float = 0.0
    sigma: float = 1.0
    max_rounds: int = DEFAULT_MAX_ROUNDS
    seed: int = 0
    scale_shift: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not (self.epsilon >= 0.0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be finite and >= 0, got {self.epsilon}")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.max_rounds < 1:
            raise ValueError(f"max_rounds must be >= 1, got {self.max_rounds}")
        if self.scale_shift is not None:
            pairs = tuple((float(a), float(b)) for a, b in self.scale_shift)
            for i, (a, b) in enumerate(pairs):
                if not (a > 0 and math.isfinite(a) and math.isfinite(b)):
                    raise ValueError(f"scale_shift[{i}] needs a > 0 and finite b, got ({a}, {b})")
            object.__setattr__(self, "scale_shift", pairs)

    def pairs(self, n_source: int) -> tuple[tuple[float, float], ...]:
        if self.scale_shift is None:
            return ((1.0, 0.0),) * n_source
        if len(self.scale_shift) != n_source:
            raise ValueError(f"scale_shift has {len(self.scale_shift)} entries for {n_source} sources")
        return self.scale_shift


def dtilde_set(
    tf: TransferFunction,
    a: int,
    lcb_vec: Sequence[float],
    ucb_vec: Sequence[float],
    scale_shift: Sequence[tuple[float, float]],
) -> list[int]:
    """Sources ``i`` with ``[min f_a, max f_a]`` over the box inside ``[a_i u_i + b_i, a_i v_i + b_i]``."""
    lows, highs = tf.bounds(lcb_vec, ucb_vec)
    lo, hi = lows[a], highs[a]
    return [
        i
        for i, (scale, shift) in enumerate(scale_shift)
        if scale * lcb_vec[i] + shift <= lo and hi <= scale * ucb_vec[i] + shift
    ]


def check_linear_applicability(matrix: Sequence[Sequence[float]]) -> bool:
    """True iff every row has at most one nonzero entry."""
    for row in matrix:
        if any(float(x) < 0 for x in row):
            raise ValueError("matrix entries must be nonnegative")
    return all(sum(1 for x in row if float(x) != 0) <= 1 for row in matrix)


def run_micro_lucb_with_sampler(pull: Sampler, tf: TransferFunction, cfg: MicroLucbConfig) -> RunResult:
    if tf.n_target < 2:
        raise ValueError("Micro-LUCB needs at least two target arms")
    n = tf.n_source
    pairs = cfg.pairs(n)
    src = SourceBounds(BoundaryParams(cfg.sigma, cfg.delta, n))
    for i in range(n):
        src.observe(i, pull(i))

    rounds = 0
    while True:
        lows, highs = tf.bounds(src.lcbs, src.ucbs)
        b, c = _candidates(lows, highs)
        if rounds >= cfg.max_rounds:
            return src.result(rounds, b, True)
        for_b = dtilde_set(tf, b, src.lcbs, src.ucbs, pairs)
        if not for_b:
            raise EmptyDtilde(rounds + 1, b, src.result(rounds, b, False))
        for_c = dtilde_set(tf, c, src.lcbs, src.ucbs, pairs)
        if not for_c:
            raise EmptyDtilde(rounds + 1, c, src.result(rounds, b, False))
        i, j = for_b[0], for_c[0]
        src.observe(i, pull(i))
        src.observe(j, pull(j))
        rounds += 1
        lows, highs = tf.bounds(src.lcbs, src.ucbs)
        if lows[b] + cfg.epsilon >= highs[c]:
            return src.result(rounds, b, False)


def run_micro_lucb(env: BanditEnv, tf: TransferFunction, cfg: MicroLucbConfig) -> RunResult:
    if env.n_source != tf.n_source:
        raise ValueError(f"environment has {env.n_source} arms, transfer expects {tf.n_source}")
    return run_micro_lucb_with_sampler(env.sampler(SampleStream(cfg.seed)), tf, cfg)
