# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from dataclasses import dataclass, field
from enum import Enum

from dili.api.configuration import Configuration, ModuleRecord
from dili.api.coord import Coord, Grid
from dili.api.maneuver import MotionParams
from dili.network.latency_models import LatencyModel, UniformLatency


class ScenarioEventType(Enum):
    SET_OUTPUT = "set-output"
    FAIL = "fail"


@dataclass(frozen=True)
class ScenarioEvent:
    """
    A timed operator event: relocate the output cell or break a module.
    """

    at: int
    type: ScenarioEventType
    output: Coord | None = None
    module: int | None = None

    def __post_init__(self) -> None:
        if self.at < 0:
            raise ValueError("scenario events cannot happen before tick 0")
        if self.type is ScenarioEventType.SET_OUTPUT and self.output is None:
            raise ValueError("set-output needs a cell")
        if self.type is ScenarioEventType.FAIL and self.module is None:
            raise ValueError("fail needs a module id")

    @classmethod
    def set_output(cls, at: int, output: Coord) -> "ScenarioEvent":
        return cls(at, ScenarioEventType.SET_OUTPUT, output=output)

    @classmethod
    def fail(cls, at: int, module: int) -> "ScenarioEvent":
        return cls(at, ScenarioEventType.FAIL, module=module)

    @property
    def value(self) -> str:
        if self.type is ScenarioEventType.SET_OUTPUT:
            return str(self.output)
        return str(self.module)


@dataclass(frozen=True)
class SimParams:
    max_ticks: int = 10_000_000
    round_timeout: int = 10_000
    latency: LatencyModel = field(default_factory=lambda: UniformLatency(1, 20))
    motion: MotionParams = field(default_factory=MotionParams)
    seed: int = 0
    log_messages: bool = False
    scoring: str = "proximity"

    def __post_init__(self) -> None:
        if self.max_ticks <= 0:
            raise ValueError("max_ticks must be positive")
        if self.round_timeout <= 0:
            raise ValueError("round_timeout must be positive")


@dataclass(frozen=True)
class Scenario:
    grid: Grid
    modules: tuple[ModuleRecord, ...]
    params: SimParams = field(default_factory=SimParams)
    events: tuple[ScenarioEvent, ...] = ()

    def __post_init__(self) -> None:
        config = Configuration(self.modules)
        for rec in config:
            if not self.grid.contains(rec.pos):
                raise ValueError(f"module {rec.id} at {rec.pos} is outside the grid")
        ticks = [ev.at for ev in self.events]
        if ticks != sorted(ticks):
            raise ValueError("scenario events must be sorted by tick")
        for ev in self.events:
            if ev.type is ScenarioEventType.FAIL and ev.module not in config:
                raise ValueError(f"fail event names unknown module {ev.module}")
            if ev.output is not None and not self.grid.contains(ev.output):
                raise ValueError(f"set-output {ev.output} is outside the grid")
            if ev.output == self.grid.input:
                raise ValueError("set-output cannot target the input cell")

    @property
    def configuration(self) -> Configuration:
        return Configuration(self.modules)
