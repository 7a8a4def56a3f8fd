"""Counter-based sample streams.

Each stream is a Philox-4x64 generator keyed by ``(seed, index)``; draws
are consumed strictly in order, so results do not depend on how many raw
words are fetched at a time.  Gaussian draws use the inverse normal CDF
from :class:`statistics.NormalDist` (Wichura's AS241 rational
approximation) on a 53-bit uniform, which is deterministic across
platforms.
"""

from __future__ import annotations

import math
from statistics import NormalDist

import numpy as np

_STANDARD_NORMAL = NormalDist()
_MASK64 = (1 << 64) - 1
_BLOCK = 512


def trial_seed(base_seed: int, trial_index: int) -> int:
    """Deterministic 64-bit seed for one trial of a batch."""
    ss = np.random.SeedSequence([base_seed & _MASK64, trial_index & _MASK64])
    return int(ss.generate_state(1, np.uint64)[0])


class SampleStream:
    def __init__(self, seed: int, index: int = 0):
        self.seed = seed
        self.index = index
        key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
        self._gen = np.random.Philox(key=key)
        self._buffer: list[int] = []
        self._pos = 0

    def next_raw(self) -> int:
        if self._pos == len(self._buffer):
            self._buffer = self._gen.random_raw(_BLOCK).tolist()
            self._pos = 0
        x = self._buffer[self._pos]
        self._pos += 1
        return x

    def uniform_open(self) -> float:
        """Uniform on (0, 1), never hitting either endpoint."""
        return ((self.next_raw() >> 11) + 0.5) * 2.0**-53


def gaussian_sample(stream: SampleStream, mean: float, sd: float) -> float:
    if not sd > 0:
        raise ValueError(f"sd must be positive, got {sd}")
    return mean + sd * _STANDARD_NORMAL.inv_cdf(stream.uniform_open())


def bernoulli_sample(stream: SampleStream, p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return 1.0 if stream.uniform_open() < p else 0.0


def uniform_sample(stream: SampleStream, lo: float, hi: float) -> float:
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"need finite lo < hi, got ({lo}, {hi})")
    return lo + (hi - lo) * stream.uniform_open()
