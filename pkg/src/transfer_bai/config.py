"""TOML experiment configuration.

A config is one TOML document.  Top-level keys hold the run settings, the
``[instance]`` table describes the problem, and ``[[instance.arms]]``
entries describe the source distributions in order::

    algorithm = "tlucb"          # or "microlucb"
    delta = 0.1
    epsilon = 0.0
    sigma = 1.0
    n_trials = 500
    base_seed = 2024
    max_rounds = 10000000
    parallelism = 1

    [instance]
    kind = "bai"                 # bai | topk | thresholding | cpe |
                                 # property_testing | linear | grid
    [[instance.arms]]
    dist = "gaussian"            # gaussian(mean, sd) | bernoulli(p) | uniform(lo, hi)
    mean = 1.0
    sd = 1.0
    [[instance.arms]]
    dist = "gaussian"
    mean = 0.0

    [microlucb]
    scale_shift = [[1.0, 0.0], [1.0, 0.0]]

    [output]
    dir = "results"

Kind-specific instance keys: ``k`` (topk), ``theta`` (thresholding),
``decision_class`` (cpe, lists of 1-based source indices),
``property_sets`` (one interval-union string per arm, e.g.
``"(0, inf)"``) and ``membership_sets`` (1-based lists or ``"all"``)
for property_testing, ``matrix`` (linear), and ``components`` (grid: rows
of inline tables ``{kind = "zero" | "linear" | "indicator" | "piecewise",
coeff, set, breakpoints, pieces = [[slope, intercept], ...]}``).
TOML's ``inf`` and ``-inf`` literals are accepted wherever a number is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import tomli
import tomli_w

from . import presets
from .env import Arm, BanditEnv, Bernoulli, Gaussian, Uniform
from .sim import ALGORITHMS, Instance
from .tlucb import DEFAULT_MAX_ROUNDS
from .transfer import Affine, Indicator, Linear, PiecewiseMonotone, PropertySet, TransferFunction, Zero

KINDS = ("bai", "topk", "thresholding", "cpe", "property_testing", "linear", "grid")
INDICATOR_KINDS = ("thresholding", "property_testing")


class ConfigError(ValueError):
    def __init__(self, problems: list[str]):
        super().__init__("invalid config:\n" + "\n".join(f"  {p}" for p in problems))
        self.problems = problems


@dataclass(frozen=True)
class ExperimentConfig:
    instance: dict
    algorithm: str = "tlucb"
    delta: float = 0.1
    epsilon: float = 0.0
    sigma: float = 1.0
    n_trials: int = 100
    base_seed: int = 0
    max_rounds: int = DEFAULT_MAX_ROUNDS
    parallelism: int = 1
    scale_shift: tuple[tuple[float, float], ...] | None = None
    output_dir: str | None = None
    # built objects, derived from ``instance``; excluded from equality
    env: BanditEnv = field(default=None, compare=False, repr=False)
    tf: TransferFunction = field(default=None, compare=False, repr=False)

    @property
    def kind(self) -> str:
        return self.instance["kind"]

    def build_instance(self) -> Instance:
        return Instance(self.env, self.tf, self.delta, self.epsilon, self.sigma, self.max_rounds, self.scale_shift)

    def with_overrides(self, **changes) -> ExperimentConfig:
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {
            "algorithm": self.algorithm,
            "delta": self.delta,
            "epsilon": self.epsilon,
            "sigma": self.sigma,
            "n_trials": self.n_trials,
            "base_seed": self.base_seed,
            "max_rounds": self.max_rounds,
            "parallelism": self.parallelism,
            "instance": self.instance,
        }
        if self.scale_shift is not None:
            doc["microlucb"] = {"scale_shift": [list(p) for p in self.scale_shift]}
        if self.output_dir is not None:
            doc["output"] = {"dir": self.output_dir}
        return doc


def dumps(cfg: ExperimentConfig) -> str:
    return tomli_w.dumps(cfg.to_dict())


def load(path: str | Path) -> ExperimentConfig:
    try:
        with open(path, "rb") as fh:
            doc = tomli.load(fh)
    except OSError as exc:
        raise ConfigError([f"cannot read {path}: {exc.strerror}"]) from None
    except tomli.TOMLDecodeError as exc:
        raise ConfigError([f"{path}: {exc}"]) from None
    return from_dict(doc)


def loads(text: str) -> ExperimentConfig:
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError([str(exc)]) from None
    return from_dict(doc)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


class _Checker:
    def __init__(self):
        self.problems: list[str] = []

    def fail(self, path: str, msg: str) -> None:
        self.problems.append(f"{path}: {msg}")

    def number(self, doc: dict, key: str, path: str, default=None, required=False):
        if key not in doc:
            if required:
                self.fail(f"{path}{key}", "is required")
            return default
        value = doc[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(f"{path}{key}", f"must be a number, got {value!r}")
            return default
        if isinstance(value, float) and math.isnan(value):
            self.fail(f"{path}{key}", "must not be nan")
            return default
        return float(value)

    def integer(self, doc: dict, key: str, path: str, default=None, required=False):
        if key not in doc:
            if required:
                self.fail(f"{path}{key}", "is required")
            return default
        value = doc[key]
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail(f"{path}{key}", f"must be an integer, got {value!r}")
            return default
        return value

    def subsets(self, value, path: str, n: int) -> list[tuple[int, ...]] | None:
        if not isinstance(value, list) or not all(isinstance(s, list) for s in value):
            self.fail(path, "must be a list of lists of 1-based source indices")
            return None
        out = []
        for k, s in enumerate(value):
            if not all(isinstance(i, int) and not isinstance(i, bool) and 1 <= i <= n for i in s):
                self.fail(f"{path}[{k}]", f"entries must be integers in 1..{n}")
                return None
            out.append(tuple(i - 1 for i in s))
        return out


def _parse_arm(chk: _Checker, doc: Any, path: str) -> Arm | None:
    if not isinstance(doc, dict):
        chk.fail(path, "must be a table")
        return None
    dist = doc.get("dist", "gaussian")
    try:
        if dist == "gaussian":
            mean = chk.number(doc, "mean", f"{path}.", required=True)
            sd = chk.number(doc, "sd", f"{path}.", default=1.0)
            return None if mean is None else Gaussian(mean, sd)
        if dist == "bernoulli":
            p = chk.number(doc, "p", f"{path}.", required=True)
            return None if p is None else Bernoulli(p)
        if dist == "uniform":
            lo = chk.number(doc, "lo", f"{path}.", required=True)
            hi = chk.number(doc, "hi", f"{path}.", required=True)
            return None if lo is None or hi is None else Uniform(lo, hi)
    except ValueError as exc:
        chk.fail(path, str(exc))
        return None
    chk.fail(f"{path}.dist", f"must be gaussian, bernoulli or uniform, got {dist!r}")
    return None


def _parse_component(chk: _Checker, doc: Any, path: str):
    if not isinstance(doc, dict):
        chk.fail(path, "must be an inline table with a 'kind' key")
        return None
    kind = doc.get("kind")
    try:
        if kind == "zero":
            return Zero()
        if kind == "linear":
            c = chk.number(doc, "coeff", f"{path}.", required=True)
            return None if c is None else (Zero() if c == 0 else Linear(c))
        if kind == "indicator":
            return Indicator(PropertySet.parse(str(doc.get("set", ""))))
        if kind == "piecewise":
            bps = doc.get("breakpoints", [])
            pieces = [Affine(float(s), float(b)) for s, b in doc.get("pieces", [])]
            return PiecewiseMonotone(tuple(bps), tuple(pieces))
    except (ValueError, TypeError) as exc:
        chk.fail(path, str(exc))
        return None
    chk.fail(f"{path}.kind", f"must be zero, linear, indicator or piecewise, got {kind!r}")
    return None


def _build_transfer(chk: _Checker, inst: dict, n: int) -> TransferFunction | None:
    kind = inst.get("kind")
    p = "instance."
    try:
        if kind == "bai":
            return presets.make_bai(n)
        if kind == "topk":
            k = chk.integer(inst, "k", p, required=True)
            return None if k is None else presets.make_topk(n, k)
        if kind == "thresholding":
            theta = chk.number(inst, "theta", p, required=True)
            return None if theta is None else presets.make_thresholding(n, theta)
        if kind == "cpe":
            subsets = chk.subsets(inst.get("decision_class"), f"{p}decision_class", n)
            return None if subsets is None else presets.make_cpe(n, subsets)
        if kind == "property_testing":
            raw_sets = inst.get("property_sets")
            if not isinstance(raw_sets, list) or len(raw_sets) != n:
                chk.fail(f"{p}property_sets", f"must list one interval union per arm ({n})")
                return None
            sets = [PropertySet.parse(str(s)) for s in raw_sets]
            membership = inst.get("membership_sets", "all")
            if membership == "all":
                subsets = presets.power_set(n)
            else:
                subsets = chk.subsets(membership, f"{p}membership_sets", n)
                if subsets is None:
                    return None
            return presets.make_property_testing(sets, subsets)
        if kind == "linear":
            matrix = inst.get("matrix")
            ok = isinstance(matrix, list) and matrix and all(
                isinstance(r, list) and len(r) == n and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in r)
                for r in matrix
            )
            if not ok:
                chk.fail(f"{p}matrix", f"must be a non-empty list of numeric rows of length {n}")
                return None
            return TransferFunction.from_matrix(matrix)
        if kind == "grid":
            rows = inst.get("components")
            if not isinstance(rows, list) or not rows or not all(isinstance(r, list) and len(r) == n for r in rows):
                chk.fail(f"{p}components", f"must be a non-empty list of rows with {n} components each")
                return None
            grid = [[_parse_component(chk, c, f"{p}components[{a}][{i}]") for i, c in enumerate(row)] for a, row in enumerate(rows)]
            if any(c is None for row in grid for c in row):
                return None
            return TransferFunction(grid, inst.get("labels"))
    except ValueError as exc:
        chk.fail(f"{p}{kind}", str(exc))
        return None
    chk.fail(f"{p}kind", f"must be one of {', '.join(KINDS)}, got {kind!r}")
    return None


def from_dict(doc: dict) -> ExperimentConfig:
    chk = _Checker()
    known = {"algorithm", "delta", "epsilon", "sigma", "n_trials", "base_seed", "max_rounds", "parallelism",
             "instance", "microlucb", "output"}
    for key in doc:
        if key not in known:
            chk.fail(key, "unknown key")

    algorithm = doc.get("algorithm", "tlucb")
    if algorithm not in ALGORITHMS:
        chk.fail("algorithm", f"must be one of {', '.join(ALGORITHMS)}, got {algorithm!r}")
    delta = chk.number(doc, "delta", "", required=True)
    if delta is not None and not 0.0 < delta < 1.0:
        chk.fail("delta", f"must lie in (0, 1), got {delta}")
    epsilon = chk.number(doc, "epsilon", "", default=0.0)
    if epsilon is not None and not (0.0 <= epsilon < math.inf):
        chk.fail("epsilon", f"must be finite and >= 0, got {epsilon}")
    sigma = chk.number(doc, "sigma", "", default=1.0)
    if sigma is not None and not (0.0 < sigma < math.inf):
        chk.fail("sigma", f"must be positive and finite, got {sigma}")
    n_trials = chk.integer(doc, "n_trials", "", default=100)
    if n_trials is not None and n_trials < 1:
        chk.fail("n_trials", f"must be >= 1, got {n_trials}")
    base_seed = chk.integer(doc, "base_seed", "", default=0)
    if base_seed is not None and not 0 <= base_seed < 2**64:
        chk.fail("base_seed", "must be a 64-bit unsigned integer")
    max_rounds = chk.integer(doc, "max_rounds", "", default=DEFAULT_MAX_ROUNDS)
    if max_rounds is not None and max_rounds < 1:
        chk.fail("max_rounds", f"must be >= 1, got {max_rounds}")
    parallelism = chk.integer(doc, "parallelism", "", default=1)
    if parallelism is not None and parallelism < 1:
        chk.fail("parallelism", f"must be >= 1, got {parallelism}")

    inst = doc.get("instance")
    env = tf = None
    if not isinstance(inst, dict):
        chk.fail("instance", "table is required")
        inst = {}
    else:
        arms_doc = inst.get("arms")
        if not isinstance(arms_doc, list) or not arms_doc:
            chk.fail("instance.arms", "must list at least one source arm")
        else:
            arms = [_parse_arm(chk, a, f"instance.arms[{k}]") for k, a in enumerate(arms_doc)]
            if all(a is not None for a in arms):
                env = BanditEnv(tuple(arms))
                if sigma is not None:
                    for k, arm in enumerate(arms):
                        if arm.subgaussian_scale > sigma:
                            chk.fail(f"instance.arms[{k}]", f"sub-Gaussian scale {arm.subgaussian_scale} exceeds sigma {sigma}")
                tf = _build_transfer(chk, inst, env.n_source)
                if tf is not None and tf.n_target < 2:
                    chk.fail("instance", "needs at least two target arms")
        if inst.get("kind") in INDICATOR_KINDS or (tf is not None and presets.requires_zero_epsilon(tf)):
            if epsilon:
                chk.fail("epsilon", "must be 0 for indicator (property-testing) instances")

    scale_shift = None
    micro = doc.get("microlucb")
    if micro is not None:
        raw = micro.get("scale_shift") if isinstance(micro, dict) else None
        if raw is not None:
            valid = isinstance(raw, list) and all(
                isinstance(p, list) and len(p) == 2 and all(isinstance(x, (int, float)) for x in p) for p in raw
            )
            if not valid:
                chk.fail("microlucb.scale_shift", "must be a list of [a, b] pairs")
            elif env is not None and len(raw) != env.n_source:
                chk.fail("microlucb.scale_shift", f"needs one pair per source arm ({env.n_source})")
            elif any(not (p[0] > 0 and math.isfinite(p[0]) and math.isfinite(p[1])) for p in raw):
                chk.fail("microlucb.scale_shift", "every a must be positive and every b finite")
            else:
                scale_shift = tuple((float(a), float(b)) for a, b in raw)

    output = doc.get("output", {})
    output_dir = output.get("dir") if isinstance(output, dict) else None

    if chk.problems:
        raise ConfigError(chk.problems)
    return ExperimentConfig(
        instance=inst,
        algorithm=algorithm,
        delta=delta,
        epsilon=epsilon,
        sigma=sigma,
        n_trials=n_trials,
        base_seed=base_seed,
        max_rounds=max_rounds,
        parallelism=parallelism,
        scale_shift=scale_shift,
        output_dir=output_dir,
        env=env,
        tf=tf,
    )
