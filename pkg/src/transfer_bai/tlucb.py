"""Transfer LUCB: identify the best target arm while sampling only source arms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .confidence import ArmConfidenceState, BoundaryParams, cs_update
from .env import BanditEnv, Sampler
from .extreal import ExtInterval
from .rng import SampleStream
from .transfer import TransferFunction

DEFAULT_MAX_ROUNDS = 10_000_000


@dataclass(frozen=True)
class TLucbConfig:
    delta: float
    epsilon: float = 0.0
    sigma: float = 1.0
    max_rounds: int = DEFAULT_MAX_ROUNDS
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not (self.epsilon >= 0.0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be finite and >= 0, got {self.epsilon}")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.max_rounds < 1:
            raise ValueError(f"max_rounds must be >= 1, got {self.max_rounds}")


@dataclass
class RunResult:
    rounds: int
    total_pulls: int
    per_arm_pulls: list[int]
    selected: int
    stopped_by_cap: bool
    source_lcb: list[float] = field(default_factory=list)
    source_ucb: list[float] = field(default_factory=list)
    collapsed: list[bool] = field(default_factory=list)

    def good_event(self, mu: Sequence[float]) -> bool:
        """Whether every true source mean stayed inside its confidence sequence.

        The sequences are nested, so checking the final intervals is enough.
        """
        return all(
            not c and lo <= m <= hi
            for m, lo, hi, c in zip(mu, self.source_lcb, self.source_ucb, self.collapsed)
        )


class SourceBounds:
    """Confidence sequences for all source arms plus their bound vectors."""

    def __init__(self, params: BoundaryParams):
        self.params = params
        self.states = [ArmConfidenceState() for _ in range(params.n_source)]
        self.lcbs = [s.lcb for s in self.states]
        self.ucbs = [s.ucb for s in self.states]

    def observe(self, i: int, sample: float) -> None:
        state = cs_update(self.states[i], sample, self.params)
        self.states[i] = state
        self.lcbs[i] = state.lcb
        self.ucbs[i] = state.ucb

    @property
    def pulls(self) -> list[int]:
        return [s.pulls for s in self.states]

    def result(self, rounds: int, selected: int, capped: bool) -> RunResult:
        pulls = self.pulls
        return RunResult(
            rounds=rounds,
            total_pulls=sum(pulls),
            per_arm_pulls=pulls,
            selected=selected,
            stopped_by_cap=capped,
            source_lcb=list(self.lcbs),
            source_ucb=list(self.ucbs),
            collapsed=[s.collapsed for s in self.states],
        )


def argmax_first(values: Sequence[float], exclude: int | None = None) -> int:
    """Index of the largest value; ties go to the lowest index."""
    best, best_val = -1, None
    for k, v in enumerate(values):
        if k == exclude:
            continue
        if best_val is None or v > best_val:
            best, best_val = k, v
    return best


def _candidates(lows: Sequence[float], highs: Sequence[float]) -> tuple[int, int]:
    b = argmax_first(lows)
    return b, argmax_first(highs, exclude=b)


def select_candidates(target_cis: Sequence[ExtInterval]) -> tuple[int, int]:
    """Leader ``B`` (largest lower bound) and challenger ``C`` (largest upper bound among the rest)."""
    if len(target_cis) < 2:
        raise ValueError("need at least two target arms")
    return _candidates([ci.lo for ci in target_cis], [ci.hi for ci in target_cis])


def should_stop(target_cis: Sequence[ExtInterval], b: int, c: int, epsilon: float) -> bool:
    return target_cis[b].lo + epsilon >= target_cis[c].hi


def select_sources(
    tf: TransferFunction, b: int, c: int, source_cis: Sequence[ExtInterval]
) -> tuple[int, int]:
    lcbs = [ci.lo for ci in source_cis]
    ucbs = [ci.hi for ci in source_cis]
    return argmax_first(tf.lengths(b, lcbs, ucbs)), argmax_first(tf.lengths(c, lcbs, ucbs))


def run_with_sampler(
    pull: Sampler,
    tf: TransferFunction,
    cfg: TLucbConfig,
    trace: list | None = None,
) -> RunResult:
    """Run T-LUCB against a pull oracle.

    If ``trace`` is given, ``(B, C, I, J)`` is appended for every sampling
    round.
    """
    if tf.n_target < 2:
        raise ValueError("T-LUCB needs at least two target arms")
    n = tf.n_source
    src = SourceBounds(BoundaryParams(cfg.sigma, cfg.delta, n))
    for i in range(n):
        src.observe(i, pull(i))

    rounds = 0
    while True:
        lows, highs = tf.bounds(src.lcbs, src.ucbs)
        b, c = _candidates(lows, highs)
        if lows[b] + cfg.epsilon >= highs[c]:
            return src.result(rounds, b, False)
        if rounds >= cfg.max_rounds:
            return src.result(rounds, b, True)
        i = argmax_first(tf.lengths(b, src.lcbs, src.ucbs))
        j = argmax_first(tf.lengths(c, src.lcbs, src.ucbs))
        if trace is not None:
            trace.append((b, c, i, j))
        src.observe(i, pull(i))
        src.observe(j, pull(j))
        rounds += 1


def run(env: BanditEnv, tf: TransferFunction, cfg: TLucbConfig, trace: list | None = None) -> RunResult:
    if env.n_source != tf.n_source:
        raise ValueError(f"environment has {env.n_source} arms, transfer expects {tf.n_source}")
    return run_with_sampler(env.sampler(SampleStream(cfg.seed)), tf, cfg, trace)
