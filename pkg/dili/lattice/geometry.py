# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from dili.api.coord import Coord, Grid

OFFSETS4: tuple[tuple[int, int], ...] = ((1, 0), (0, 1), (-1, 0), (0, -1))
OFFSETS8: tuple[tuple[int, int], ...] = OFFSETS4 + ((1, 1), (-1, 1), (-1, -1), (1, -1))


def manhattan(a: Coord, b: Coord) -> int:
    return abs(a.x - b.x) + abs(a.y - b.y)


def adjacent4(a: Coord, b: Coord) -> bool:
    return manhattan(a, b) == 1


def neighbors4(grid: Grid, c: Coord) -> set[Coord]:
    """
    In-bounds cells sharing a face with `c`.

    Args:
        grid: the lattice the cell lives on.
        c: a cell inside `grid`.
    """
    if not grid.contains(c):
        raise ValueError(f"{c} is outside the {grid.width}x{grid.height} grid")
    out = set()
    for dx, dy in OFFSETS4:
        n = Coord(c.x + dx, c.y + dy)
        if grid.contains(n):
            out.add(n)
    return out


def cell_neighbors(c: Coord, diagonal: bool = False) -> list[Coord]:
    """Unbounded lattice neighbors of `c`."""
    offsets = OFFSETS8 if diagonal else OFFSETS4
    return [Coord(c.x + dx, c.y + dy) for dx, dy in offsets]


def moore_window(center: Coord) -> list[Coord]:
    """
    The 3x3 block around `center` in row-major order, north row first,
    west to east within a row.
    """
    return [
        Coord(center.x + dx, center.y + dy) for dy in (1, 0, -1) for dx in (-1, 0, 1)
    ]


def target_path(input: Coord, output: Coord) -> list[Coord]:
    """Shortest lattice path from input to output, moving along x first."""
    path = [input]
    x, y = input
    step_x = 1 if output.x > x else -1
    while x != output.x:
        x += step_x
        path.append(Coord(x, y))
    step_y = 1 if output.y > y else -1
    while y != output.y:
        y += step_y
        path.append(Coord(x, y))
    return path
