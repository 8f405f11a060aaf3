# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

"""
This file contains helpers for unittest creation
"""

from collections import deque
from pathlib import Path
from typing import Iterable

import numpy as np

from dili.api.configuration import Configuration, ModuleRecord, ModuleStatus
from dili.api.coord import Coord, Grid
from dili.api.maneuver import Dir, SlideRule
from dili.api.scenario import Scenario, ScenarioEvent, SimParams

REPO_ROOT: Path = Path(__file__).resolve().parent.parent
SCENARIO_DIR: Path = REPO_ROOT / "scenarios"


def make_config(cells: Iterable[tuple[int, int]], failed: Iterable[int] = ()) -> Configuration:
    """Modules get ids 1..n in the order given; `failed` lists ids."""
    dead = set(failed)
    return Configuration(
        tuple(
            ModuleRecord(
                i + 1,
                Coord(*c),
                ModuleStatus.FAILED if i + 1 in dead else ModuleStatus.ALIVE,
            )
            for i, c in enumerate(cells)
        )
    )


def make_scenario(
    width: int,
    height: int,
    input: tuple[int, int],
    output: tuple[int, int],
    cells: Iterable[tuple[int, int]],
    events: tuple[ScenarioEvent, ...] = (),
    **params: object,
) -> Scenario:
    return Scenario(
        grid=Grid(width, height, Coord(*input), Coord(*output)),
        modules=make_config(cells).modules,
        params=SimParams(**params),  # pyre-ignore[6]
        events=events,
    )


def _connected(cells: frozenset[Coord], diagonal: bool = False) -> bool:
    if len(cells) <= 1:
        return True
    offsets = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    if diagonal:
        offsets += [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    start = next(iter(cells))
    seen = {start}
    todo = deque([start])
    while todo:
        c = todo.popleft()
        for dx, dy in offsets:
            n = Coord(c.x + dx, c.y + dy)
            if n in cells and n not in seen:
                seen.add(n)
                todo.append(n)
    return len(seen) == len(cells)


def _has_flank(others: frozenset[Coord], p: Coord, d: Dir, rule: SlideRule) -> bool:
    q = Coord(p.x + d.dx, p.y + d.dy)
    # sides perpendicular to the leg
    sides = [(0, 1), (0, -1)] if d.dx != 0 else [(1, 0), (-1, 0)]
    for sx, sy in sides:
        beside = [Coord(p.x + sx, p.y + sy) in others, Coord(q.x + sx, q.y + sy) in others]
        if rule is SlideRule.SINGLE_FLANK and any(beside):
            return True
        if rule is SlideRule.DOUBLE_FLANK and all(beside):
            return True
    return False


ALL_LEGS: list[tuple[Dir, ...]] = [(d,) for d in Dir] + [
    (a, b) for a in Dir for b in Dir if a.dx * b.dx + a.dy * b.dy == 0
]


def brute_force_moves(
    config: Configuration, grid: Grid, mover: int, rule: SlideRule
) -> set[tuple[Dir, ...]]:
    """
    Leg sequences a live mover may execute, worked out directly from the
    motion rules with plain set arithmetic. The status of the other modules
    plays no part. Needs at least two modules.
    """
    start = config.record(mover).pos
    others = config.cells - {start}
    out = set()
    for legs in ALL_LEGS:
        pos, ok = start, True
        for d in legs:
            nxt = Coord(pos.x + d.dx, pos.y + d.dy)
            if not grid.contains(nxt) or nxt in others or not _has_flank(others, pos, d, rule):
                ok = False
                break
            pos = nxt
        if not ok:
            continue
        if len(legs) == 2:
            mid = Coord(start.x + legs[0].dx, start.y + legs[0].dy)
            if not _connected(others | {mid}, diagonal=True):
                continue
        if _connected(others | {pos}):
            out.add(legs)
    return out


def connected_shapes(grid: Grid, size: int) -> list[frozenset[Coord]]:
    """Every 4-connected set of `size` cells inside `grid`."""
    cells = [Coord(x, y) for x in range(grid.width) for y in range(grid.height)]
    level = {frozenset([c]) for c in cells}
    for _ in range(size - 1):
        grown = set()
        for shape in level:
            for c in shape:
                for d in Dir:
                    n = d.step(c)
                    if grid.contains(n) and n not in shape:
                        grown.add(shape | {n})
        level = grown
    return sorted(level, key=lambda s: sorted(s))


def random_blob_scenario(
    seed: int, modules: int, width: int, height: int, **params: object
) -> Scenario:
    """
    A connected blob grown from a random input cell, with the output placed
    on some other cell of the grid.
    """
    rng = np.random.default_rng(seed)
    input = Coord(int(rng.integers(width)), int(rng.integers(height)))
    blob = [input]
    taken = {input}
    while len(blob) < modules:
        frontier = sorted(
            {
                n
                for c in blob
                for n in (d.step(c) for d in Dir)
                if 0 <= n.x < width and 0 <= n.y < height and n not in taken
            }
        )
        pick = frontier[int(rng.integers(len(frontier)))]
        blob.append(pick)
        taken.add(pick)
    while True:
        output = Coord(int(rng.integers(width)), int(rng.integers(height)))
        if output != input:
            break
    return make_scenario(
        width, height, input, output, blob, seed=seed, **params
    )
