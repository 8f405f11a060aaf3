# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from typing import Callable, Iterable, Sequence

from dili.agents.state import AgentState, WindowMap
from dili.api.coord import Coord
from dili.api.maneuver import Dir, LEG_ORDER, Maneuver
from dili.api.message import MoveCommand
from dili.lattice.geometry import manhattan


def assemble_window(state: AgentState) -> WindowMap:
    """The leader's 3x3 domain, read from its own Moore sensing."""
    assert len(state.moore) == 9, "window needs a sensed neighborhood"
    return WindowMap(center=state.pos, cells=state.moore)


def plan_round(
    window: WindowMap,
    goal: Coord,
    origin: Coord,
    epoch: int = 0,
    leader: int = 0,
    maneuvers: Callable[[int], Sequence[Maneuver]] | None = None,
) -> list[MoveCommand]:
    """
    One command per movable module of the window, north row first and west
    to east. Modules sitting on the input or output cell are skipped.

    A failed module is handed to a live window neighbor, tried east, north,
    south then west of it. With `maneuvers` (what each module senses it may
    do) the first neighbor able to carry it closer to the goal is chosen,
    otherwise the first one found. Without any live neighbor the module is
    skipped.
    """
    commands: list[MoveCommand] = []
    for pos, cell in window.items():
        if cell is None or pos in (origin, goal):
            continue
        driver = None
        if not cell.alive:
            driver = _pick_driver(window, pos, cell.id, goal, maneuvers)
            if driver is None:
                continue
        commands.append(
            MoveCommand(
                epoch=epoch,
                seq=len(commands) + 1,
                target=cell.id,
                objective=goal,
                driver=driver,
                leader=leader,
            )
        )
    return commands


def _pick_driver(
    window: WindowMap,
    pos: Coord,
    target: int,
    goal: Coord,
    maneuvers: Callable[[int], Sequence[Maneuver]] | None,
) -> int | None:
    coords = set(window.coords())
    live: list[int] = []
    for d in LEG_ORDER:
        n = d.step(pos)
        if n not in coords:
            continue
        cell = window.at(n)
        if cell is not None and cell.alive:
            live.append(cell.id)
    if not live:
        return None
    if maneuvers is not None:
        options = maneuvers(target)
        for driver in live:
            if best_maneuver(pos, options, goal, driver) is not None:
                return driver
    return live[0]


def _axis_rank(first: Dir, start: Coord, goal: Coord) -> int:
    dx, dy = abs(goal.x - start.x), abs(goal.y - start.y)
    along_x = first.dx != 0
    prefer_x = dx >= dy
    return 0 if along_x == prefer_x else 1


def best_maneuver(
    start: Coord,
    maneuvers: Iterable[Maneuver],
    goal: Coord,
    driver: int | None = None,
) -> Maneuver | None:
    """
    The maneuver that brings a module at `start` closest to `goal`, or None
    if nothing strictly decreases the distance. Ties prefer a first leg
    along the axis with the larger remaining gap (x on equality), then leg
    order E, N, S, W.
    """
    here = manhattan(start, goal)
    best: Maneuver | None = None
    best_key: tuple[int, int, tuple[int, ...]] | None = None
    for m in maneuvers:
        if m.driver != driver:
            continue
        decrease = here - manhattan(m.destination(start), goal)
        if decrease <= 0:
            continue
        key = (
            -decrease,
            _axis_rank(m.legs[0], start, goal),
            tuple(LEG_ORDER.index(d) for d in m.legs),
        )
        if best_key is None or key < best_key:
            best, best_key = m, key
    return best
