# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from dataclasses import dataclass
from typing import NamedTuple


class Coord(NamedTuple):
    """
    A lattice cell. x grows eastwards, y grows northwards.
    """

    x: int
    y: int

    def __str__(self) -> str:
        return f"{self.x},{self.y}"


@dataclass(frozen=True)
class Grid:
    """
    The conveyor surface: a width x height lattice with an input and an
    output cell that the goal chain must join.
    """

    width: int
    height: int
    input: Coord
    output: Coord

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(
                f"grid dimensions must be positive, got {self.width}x{self.height}"
            )
        if not self.contains(self.input):
            raise ValueError(f"input {self.input} is outside the grid")
        if not self.contains(self.output):
            raise ValueError(f"output {self.output} is outside the grid")
        if self.input == self.output:
            raise ValueError("input and output must be distinct cells")

    def contains(self, c: Coord) -> bool:
        return 0 <= c.x < self.width and 0 <= c.y < self.height

    def with_output(self, output: Coord) -> "Grid":
        return Grid(self.width, self.height, self.input, output)
