# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from dataclasses import dataclass, field

from dili.api.configuration import Configuration
from dili.api.maneuver import LEG_ORDER, Maneuver
from dili.api.scenario import Scenario
from dili.engine.guard import goal_monitor
from dili.lattice.geometry import manhattan
from dili.motion.maneuvers import apply_maneuver, legal_maneuvers


@dataclass
class GreedyResult:
    motions: int | None
    moves: list[Maneuver] = field(default_factory=list)
    final: Configuration | None = None

    @property
    def stalled(self) -> bool:
        return self.motions is None


def greedy_baseline(scenario: Scenario, max_steps: int = 10_000) -> GreedyResult:
    """
    Centralized comparator: repeatedly applies the legal maneuver that most
    reduces the summed distance of all modules to the output, preferring the
    smaller mover id and then leg order E, N, S, W. Stops at the goal or when
    nothing improves, in which case the stalled configuration is returned.
    """
    grid = scenario.grid
    params = scenario.params.motion
    config = scenario.configuration
    moves: list[Maneuver] = []
    motions = 0
    for _ in range(max_steps):
        if goal_monitor(config, grid.input, grid.output):
            return GreedyResult(motions, moves, config)
        best: Maneuver | None = None
        best_key: tuple[int, int, tuple[int, ...]] | None = None
        for rec in config:
            if rec.pos in (grid.input, grid.output):
                continue
            here = manhattan(rec.pos, grid.output)
            for m in legal_maneuvers(config, grid, rec.id, params):
                gain = here - manhattan(m.destination(rec.pos), grid.output)
                if gain <= 0:
                    continue
                key = (-gain, rec.id, tuple(LEG_ORDER.index(d) for d in m.legs))
                if best_key is None or key < best_key:
                    best, best_key = m, key
        if best is None:
            return GreedyResult(None, moves, config)
        config = apply_maneuver(config, best)
        moves.append(best)
        motions += best.motions
    return GreedyResult(None, moves, config)
