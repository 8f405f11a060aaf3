# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

"""
Occupancy frames. ASCII is the reference rendering; SVG is a convenience for
looking at longer runs.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import matplotlib
import numpy as np

from dili.api.configuration import Configuration, ModuleStatus
from dili.api.coord import Coord, Grid
from dili.api.scenario import Scenario
from dili.api.trace import TraceEvent, TraceKind

EMPTY = "."
ALIVE = "#"
FAILED = "X"
INPUT = "I"
OUTPUT = "O"
LEADER = "L"
HIGHLIGHT = "*"

_COLORS: dict[str, str] = {
    EMPTY: "white",
    HIGHLIGHT: "lightyellow",
    OUTPUT: "lightgreen",
    INPUT: "lightblue",
    ALIVE: "dimgray",
    FAILED: "firebrick",
    LEADER: "darkorange",
}


@dataclass(frozen=True)
class Overlay:
    """
    Extra marks on a frame: the current leader and a set of cells to
    highlight (drawn only where nothing else is).
    """

    leader: int | None = None
    highlight: frozenset[Coord] = frozenset()


@dataclass(frozen=True)
class Frame:
    index: int
    at: int
    grid: Grid
    config: Configuration
    overlay: Overlay = field(default_factory=Overlay)


def glyph_grid(grid: Grid, config: Configuration, overlay: Overlay | None = None) -> np.ndarray:
    """
    Character array indexed [row, column] with row 0 the northmost row.
    Later paints win, so cells are painted in increasing precedence.
    """
    overlay = overlay or Overlay()
    chars = np.full((grid.height, grid.width), EMPTY, dtype="<U1")

    def paint(c: Coord, glyph: str) -> None:
        chars[grid.height - 1 - c.y, c.x] = glyph

    for c in overlay.highlight:
        if grid.contains(c):
            paint(c, HIGHLIGHT)
    paint(grid.output, OUTPUT)
    paint(grid.input, INPUT)
    for rec in config:
        paint(rec.pos, ALIVE if rec.status is ModuleStatus.ALIVE else FAILED)
    if overlay.leader is not None and overlay.leader in config:
        paint(config.record(overlay.leader).pos, LEADER)
    return chars


def render_ascii(
    scenario: Scenario,
    config: Configuration,
    overlay: Overlay | None = None,
    grid: Grid | None = None,
) -> str:
    """
    Text frame: one line per row, north first. `grid` replaces the scenario's
    grid when the output has moved since the start.
    """
    chars = glyph_grid(grid or scenario.grid, config, overlay)
    return "\n".join("".join(row) for row in chars) + "\n"


def render_svg(
    scenario: Scenario,
    config: Configuration,
    path: str | Path,
    overlay: Overlay | None = None,
    grid: Grid | None = None,
) -> None:
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Rectangle

    g = grid or scenario.grid
    chars = glyph_grid(g, config, overlay)
    fig, ax = plt.subplots(figsize=(max(2.0, g.width * 0.5), max(2.0, g.height * 0.5)))
    for row in range(g.height):
        for x in range(g.width):
            glyph = str(chars[row, x])
            y = g.height - 1 - row
            ax.add_patch(
                Rectangle((x, y), 1, 1, facecolor=_COLORS[glyph], edgecolor="lightgray")
            )
            if glyph in (INPUT, OUTPUT, LEADER):
                ax.text(x + 0.5, y + 0.5, glyph, ha="center", va="center", fontsize=8)
    ax.set_xlim(0, g.width)
    ax.set_ylim(0, g.height)
    ax.set_aspect("equal")
    ax.set_xticks([])
    ax.set_yticks([])
    fig.savefig(str(path), format="svg", bbox_inches="tight")
    plt.close(fig)


def trace_frames(scenario: Scenario, trace: list[TraceEvent], every: int = 1) -> Iterator[Frame]:
    """
    Replays `trace` and yields the initial configuration followed by the
    configuration after every `every`-th committed maneuver.
    """
    if every < 1:
        raise ValueError("every must be at least 1")
    grid = scenario.grid
    config = scenario.configuration
    leader: int | None = None
    yield Frame(0, 0, grid, config)
    committed = 0
    for ev in trace:
        if ev.kind is TraceKind.LEADER:
            leader = ev.as_int("id")
        elif ev.kind is TraceKind.EVENT:
            if ev.raw("type") == "fail":
                config = config.with_status(int(ev.raw("value")), ModuleStatus.FAILED)
            else:
                grid = grid.with_output(ev.as_coord("value"))
        elif ev.kind is TraceKind.MOVE:
            config = config.moved(ev.as_int("mover"), ev.as_coord("to"))
            if ev.as_int("leg") == len(ev.legs()):
                committed += 1
                if committed % every == 0:
                    yield Frame(committed, ev.at, grid, config, Overlay(leader=leader))
