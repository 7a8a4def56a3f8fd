"""Source-arm distributions and the sampling oracle handed to algorithms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .rng import SampleStream, bernoulli_sample, gaussian_sample, uniform_sample


@dataclass(frozen=True)
class Gaussian:
    mean: float
    sd: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.mean):
            raise ValueError(f"gaussian mean must be finite, got {self.mean}")
        if not (self.sd > 0 and math.isfinite(self.sd)):
            raise ValueError(f"gaussian sd must be positive, got {self.sd}")

    @property
    def subgaussian_scale(self) -> float:
        return self.sd

    def sample(self, stream: SampleStream) -> float:
        return gaussian_sample(stream, self.mean, self.sd)


@dataclass(frozen=True)
class Bernoulli:
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"bernoulli p must lie in [0, 1], got {self.p}")

    @property
    def mean(self) -> float:
        return self.p

    @property
    def subgaussian_scale(self) -> float:
        return 0.5

    def sample(self, stream: SampleStream) -> float:
        return bernoulli_sample(stream, self.p)


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise ValueError(f"uniform needs finite lo < hi, got ({self.lo}, {self.hi})")

    @property
    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def subgaussian_scale(self) -> float:
        return 0.5 * (self.hi - self.lo)

    def sample(self, stream: SampleStream) -> float:
        return uniform_sample(stream, self.lo, self.hi)


Arm = Union[Gaussian, Bernoulli, Uniform]

Sampler = Callable[[int], float]


@dataclass(frozen=True)
class BanditEnv:
    arms: tuple[Arm, ...]

    def __post_init__(self):
        object.__setattr__(self, "arms", tuple(self.arms))
        if not self.arms:
            raise ValueError("environment needs at least one source arm")

    @classmethod
    def gaussian(cls, means: Sequence[float], sd: float = 1.0) -> BanditEnv:
        return cls(tuple(Gaussian(float(m), sd) for m in means))

    @property
    def n_source(self) -> int:
        return len(self.arms)

    @property
    def means(self) -> list[float]:
        return [arm.mean for arm in self.arms]

    def check_subgaussian(self, sigma: float) -> None:
        for i, arm in enumerate(self.arms):
            if arm.subgaussian_scale > sigma:
                raise ValueError(
                    f"arm {i} has sub-Gaussian scale {arm.subgaussian_scale} above the configured sigma {sigma}"
                )

    def sampler(self, stream: SampleStream) -> Sampler:
        """A pull oracle exposing samples only, never the means."""
        arms = self.arms

        def pull(i: int) -> float:
            return arms[i].sample(stream)

        return pull
