# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

"""
Centralized optimal reference. States are sets of occupied cells (modules
are anonymous and alive); an edge is one legal maneuver and costs its number
of legs. Modules standing on the input or output cell never move.
"""

import heapq
import logging
from dataclasses import dataclass, field
from enum import Enum

from dili.api.coord import Coord, Grid
from dili.api.maneuver import Dir, MotionParams
from dili.api.scenario import Scenario
from dili.lattice.connectivity import is_connected, path_exists
from dili.motion.maneuvers import cell_successors

logger: logging.Logger = logging.getLogger(__name__)

State = frozenset[Coord]
Step = tuple[Coord, tuple[Dir, ...]]


class OracleStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SearchBounds:
    max_states: int = 1_000_000
    max_depth: int = 200

    def __post_init__(self) -> None:
        if self.max_states <= 0 or self.max_depth <= 0:
            raise ValueError("search bounds must be positive")


@dataclass(frozen=True)
class OracleResult:
    status: OracleStatus
    motions: int | None = None
    path: list[Step] = field(default_factory=list)
    expanded: int = 0

    def describe(self) -> str:
        if self.status is OracleStatus.OPTIMAL:
            return str(self.motions)
        return self.status.value


def _canonical(state: State) -> tuple[Coord, ...]:
    return tuple(sorted(state))


def _anchors(state: State, grid: Grid) -> list[Coord]:
    return [c for c in (grid.input, grid.output) if c in state]


def _initial(scenario: Scenario) -> State:
    config = scenario.configuration
    if any(not r.alive for r in config):
        raise ValueError("the oracle only handles all-alive configurations")
    if not is_connected(config):
        raise ValueError("initial configuration is not 4-connected")
    return config.cells


def _goal(state: State, grid: Grid) -> bool:
    return path_exists(state, grid.input, grid.output)


def solve(scenario: Scenario, bounds: SearchBounds | None = None) -> OracleResult:
    """
    Uniform-cost search for the fewest motions reaching a state where the
    input and output are joined by occupied cells.
    """
    bounds = bounds or SearchBounds()
    grid = scenario.grid
    rule = scenario.params.motion.slide_rule
    start = _initial(scenario)
    best: dict[State, int] = {start: 0}
    parent: dict[State, tuple[State, Step]] = {}
    frontier: list[tuple[int, tuple[Coord, ...], State]] = [(0, _canonical(start), start)]
    expanded = 0
    truncated = False
    while frontier:
        cost, _, state = heapq.heappop(frontier)
        if cost > best.get(state, cost):
            continue
        if _goal(state, grid):
            return OracleResult(OracleStatus.OPTIMAL, cost, _unwind(parent, state), expanded)
        if expanded >= bounds.max_states:
            truncated = True
            break
        expanded += 1
        for nxt, cell, legs in cell_successors(state, grid, rule, _anchors(state, grid)):
            c = cost + len(legs)
            if c > bounds.max_depth:
                truncated = True
                continue
            if c < best.get(nxt, c + 1):
                best[nxt] = c
                parent[nxt] = (state, (cell, legs))
                heapq.heappush(frontier, (c, _canonical(nxt), nxt))
    status = OracleStatus.UNKNOWN if truncated else OracleStatus.INFEASIBLE
    logger.info(f"search ended {status.value} after {expanded} states")
    return OracleResult(status, None, [], expanded)


def _unwind(parent: dict[State, tuple[State, Step]], state: State) -> list[Step]:
    steps: list[Step] = []
    while state in parent:
        state, step = parent[state]
        steps.append(step)
    steps.reverse()
    return steps


def optimal_motion_count(scenario: Scenario, bounds: SearchBounds | None = None) -> int | None:
    """Minimum number of motions, or None when a bound was hit or no plan exists."""
    return solve(scenario, bounds).motions


def iterative_deepening_motion_count(
    grid: Grid,
    cells: State,
    params: MotionParams | None = None,
    max_depth: int = 30,
) -> int | None:
    """
    Cost-bounded depth-first search with an increasing bound. Independent of
    `solve` apart from the successor function; used to cross-check it.
    """
    rule = (params or MotionParams()).slide_rule
    if not is_connected(cells):
        raise ValueError("initial configuration is not 4-connected")

    def dls(state: State, g: int, limit: int, seen: dict[State, int]) -> bool:
        if _goal(state, grid):
            return True
        if g >= limit:
            return False
        for nxt, _, legs in cell_successors(state, grid, rule, _anchors(state, grid)):
            c = g + len(legs)
            if c > limit or seen.get(nxt, limit + 1) <= c:
                continue
            seen[nxt] = c
            if dls(nxt, c, limit, seen):
                return True
        return False

    for limit in range(max_depth + 1):
        if dls(cells, 0, limit, {cells: 0}):
            return limit
    return None
