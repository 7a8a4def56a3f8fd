"""Seeded Monte Carlo harness for T-LUCB and Micro-LUCB.

Trial ``k`` of a batch draws from a Philox stream keyed by a seed derived
from ``(base_seed, k)``, so a batch is a pure function of its inputs no
matter how trials are spread over worker processes.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .complexity import ComplexityReport, theorem2_bound
from .env import BanditEnv
from .microlucb import EmptyDtilde, MicroLucbConfig, run_micro_lucb
from .rng import trial_seed
from .tlucb import DEFAULT_MAX_ROUNDS, RunResult, TLucbConfig, run
from .transfer import TransferFunction

logger = logging.getLogger(__name__)

ALGORITHMS = ("tlucb", "microlucb")
# absolute slack for roundoff in subset sums when judging epsilon-optimality
OPTIMALITY_ATOL = 1e-12


@dataclass(frozen=True)
class Instance:
    env: BanditEnv
    tf: TransferFunction
    delta: float
    epsilon: float = 0.0
    sigma: float = 1.0
    max_rounds: int = DEFAULT_MAX_ROUNDS
    scale_shift: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.env.n_source != self.tf.n_source:
            raise ValueError(f"environment has {self.env.n_source} arms, transfer expects {self.tf.n_source}")
        self.env.check_subgaussian(self.sigma)

    @property
    def target_means(self) -> list[float]:
        return self.tf.target_means(self.env.means)


def is_eps_optimal(nu: list[float], selected: int, epsilon: float) -> bool:
    return nu[selected] + epsilon >= max(nu) - OPTIMALITY_ATOL


@dataclass
class TrialRecord:
    trial_index: int
    seed: int
    selected: int  # -1 when the run raised EmptyDtilde
    correct: bool
    rounds: int
    total_pulls: int
    per_arm_pulls: list[int]
    good_event_held: bool
    bound_held: bool
    stopped_by_cap: bool = False
    empty_dtilde: bool = False


@dataclass
class TrialBatchResult:
    algorithm: str
    n_trials: int
    base_seed: int
    error_count: int
    good_event_violations: int
    bound_violation_count: int
    empty_dtilde_count: int
    capped_count: int
    mean_total_pulls: float
    median_total_pulls: float
    p95_total_pulls: float
    per_arm_pull_means: list[float]
    trials: list[TrialRecord] = field(default_factory=list, repr=False)

    @property
    def error_rate(self) -> float:
        return self.error_count / self.n_trials

    @property
    def good_event_violation_rate(self) -> float:
        return self.good_event_violations / self.n_trials

    @property
    def bound_violation_rate(self) -> float:
        return self.bound_violation_count / self.n_trials

    def summary(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if k != "trials"}
        out["error_rate"] = self.error_rate
        out["good_event_violation_rate"] = self.good_event_violation_rate
        out["bound_violation_rate"] = self.bound_violation_rate
        return out


def _run_one(instance: Instance, algorithm: str, seed: int) -> tuple[RunResult, bool]:
    if algorithm == "tlucb":
        cfg = TLucbConfig(instance.delta, instance.epsilon, instance.sigma, instance.max_rounds, seed)
        return run(instance.env, instance.tf, cfg), False
    if algorithm == "microlucb":
        cfg = MicroLucbConfig(
            instance.delta, instance.epsilon, instance.sigma, instance.max_rounds, seed, instance.scale_shift
        )
        try:
            return run_micro_lucb(instance.env, instance.tf, cfg), False
        except EmptyDtilde as exc:
            return exc.partial, True
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def run_trial(instance: Instance, algorithm: str, base_seed: int, trial_index: int, bound_total: float) -> TrialRecord:
    seed = trial_seed(base_seed, trial_index)
    result, empty = _run_one(instance, algorithm, seed)
    mu = instance.env.means
    nu = instance.target_means
    stopped = not empty and not result.stopped_by_cap
    return TrialRecord(
        trial_index=trial_index,
        seed=seed,
        selected=-1 if empty else result.selected,
        correct=stopped and is_eps_optimal(nu, result.selected, instance.epsilon),
        rounds=result.rounds,
        total_pulls=result.total_pulls,
        per_arm_pulls=list(result.per_arm_pulls),
        good_event_held=result.good_event(mu),
        bound_held=result.total_pulls <= bound_total + instance.tf.n_source,
        stopped_by_cap=result.stopped_by_cap,
        empty_dtilde=empty,
    )


def _run_chunk(args) -> list[TrialRecord]:
    instance, algorithm, base_seed, indices, bound_total = args
    return [run_trial(instance, algorithm, base_seed, k, bound_total) for k in indices]


def aggregate(algorithm: str, base_seed: int, records: list[TrialRecord]) -> TrialBatchResult:
    records = sorted(records, key=lambda r: r.trial_index)
    pulls = np.array([r.total_pulls for r in records], dtype=float)
    per_arm = np.array([r.per_arm_pulls for r in records], dtype=float)
    return TrialBatchResult(
        algorithm=algorithm,
        n_trials=len(records),
        base_seed=base_seed,
        error_count=sum(not r.correct for r in records),
        good_event_violations=sum(not r.good_event_held for r in records),
        bound_violation_count=sum(not r.bound_held for r in records),
        empty_dtilde_count=sum(r.empty_dtilde for r in records),
        capped_count=sum(r.stopped_by_cap for r in records),
        mean_total_pulls=float(pulls.mean()),
        median_total_pulls=float(np.median(pulls)),
        p95_total_pulls=float(np.percentile(pulls, 95)),
        per_arm_pull_means=[float(x) for x in per_arm.mean(axis=0)],
        trials=records,
    )


def run_batch(
    instance: Instance,
    algorithm: str = "tlucb",
    n_trials: int = 100,
    base_seed: int = 0,
    parallelism: int = 1,
    report: ComplexityReport | None = None,
) -> TrialBatchResult:
    """Run ``n_trials`` independent trials and aggregate them in trial order.

    A trial counts as an error unless it stopped on its own and returned an
    epsilon-optimal target; capped runs and Micro-LUCB runs that hit an
    empty sampling set are errors.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    if report is None:
        report = theorem2_bound(instance.tf, instance.env.means, instance.epsilon, instance.delta, instance.sigma)
    bound_total = report.theorem2_total
    indices = list(range(n_trials))
    if parallelism <= 1:
        records = _run_chunk((instance, algorithm, base_seed, indices, bound_total))
    else:
        chunks = [indices[k::parallelism] for k in range(parallelism)]
        logger.info("running %d trials over %d workers", n_trials, parallelism)
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            parts = pool.map(_run_chunk, [(instance, algorithm, base_seed, c, bound_total) for c in chunks if c])
            records = [r for part in parts for r in part]
    return aggregate(algorithm, base_seed, records)
