# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np


class LatencyModel(ABC):
    """
    Per-message link delay, in ticks. Sampling draws only from the generator
    it is given so that a seeded run is reproducible.
    """

    @abstractmethod
    def sample(self, rng: np.random.Generator) -> int:
        pass

    @property
    @abstractmethod
    def max_delay(self) -> int:
        pass

    @abstractmethod
    def describe(self) -> str:
        pass


@dataclass(frozen=True)
class FixedLatency(LatencyModel):
    ticks: int

    def __post_init__(self) -> None:
        if self.ticks < 1:
            raise ValueError(f"fixed latency must be at least 1 tick, got {self.ticks}")

    def sample(self, rng: np.random.Generator) -> int:
        return self.ticks

    @property
    def max_delay(self) -> int:
        return self.ticks

    def describe(self) -> str:
        return f"fixed:{self.ticks}"


@dataclass(frozen=True)
class UniformLatency(LatencyModel):
    low: int
    high: int

    def __post_init__(self) -> None:
        if not 1 <= self.low <= self.high:
            raise ValueError(
                f"uniform latency needs 1 <= low <= high, got {self.low}, {self.high}"
            )

    def sample(self, rng: np.random.Generator) -> int:
        return int(rng.integers(self.low, self.high, endpoint=True))

    @property
    def max_delay(self) -> int:
        return self.high

    def describe(self) -> str:
        return f"uniform:{self.low}:{self.high}"


def parse_latency(text: str) -> LatencyModel:
    """Inverse of `describe`: "fixed:5" or "uniform:1:20"."""
    parts = text.split(":")
    try:
        if parts[0] == "fixed" and len(parts) == 2:
            return FixedLatency(int(parts[1]))
        if parts[0] == "uniform" and len(parts) == 3:
            return UniformLatency(int(parts[1]), int(parts[2]))
    except ValueError as e:
        raise ValueError(f"bad latency {text!r}: {e}") from e
    raise ValueError(f"bad latency {text!r}")
