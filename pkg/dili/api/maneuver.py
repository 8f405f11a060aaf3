# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

import math
from dataclasses import dataclass
from enum import Enum

from dili.api.coord import Coord


class Dir(Enum):
    E = (1, 0)
    N = (0, 1)
    W = (-1, 0)
    S = (0, -1)

    @property
    def dx(self) -> int:
        return self.value[0]

    @property
    def dy(self) -> int:
        return self.value[1]

    def step(self, c: Coord) -> Coord:
        return Coord(c.x + self.dx, c.y + self.dy)

    def perpendicular(self) -> tuple["Dir", "Dir"]:
        if self.dx != 0:
            return (Dir.N, Dir.S)
        return (Dir.E, Dir.W)

    def is_perpendicular(self, other: "Dir") -> bool:
        return self.dx * other.dx + self.dy * other.dy == 0

    def opposite(self) -> "Dir":
        return Dir((-self.dx, -self.dy))


# tie-break order for legs, used by planners, the greedy baseline and traces
LEG_ORDER: tuple[Dir, ...] = (Dir.E, Dir.N, Dir.S, Dir.W)


def format_legs(legs: tuple[Dir, ...]) -> str:
    return ",".join(d.name for d in legs)


def parse_legs(text: str) -> tuple[Dir, ...]:
    try:
        return tuple(Dir[name] for name in text.split(","))
    except KeyError:
        raise ValueError(f"bad leg list {text!r}") from None


class ManeuverKind(Enum):
    SLIDE = "slide"
    CORNER = "corner"


class SlideRule(Enum):
    SINGLE_FLANK = "single"
    DOUBLE_FLANK = "double"


class RejectReason(Enum):
    """Why a maneuver was refused, in the order the conditions are checked."""

    OUT_OF_BOUNDS = "out_of_bounds"
    OCCUPIED = "occupied"
    NO_FLANK = "no_flank"
    DISCONNECT = "disconnect"
    DEAD_ACTUATOR = "dead_actuator"
    # engine level: another maneuver is already in flight
    BUSY = "busy"


@dataclass(frozen=True)
class MotionParams:
    pitch_mm: float = 12.0
    speed_mm_s: float = 12.0
    slide_rule: SlideRule = SlideRule.SINGLE_FLANK

    def __post_init__(self) -> None:
        if self.pitch_mm <= 0 or self.speed_mm_s <= 0:
            raise ValueError("pitch and speed must be positive")

    @property
    def leg_ticks(self) -> int:
        """Milliseconds needed to travel one cell, halves rounded up."""
        return max(1, math.floor(1000 * self.pitch_mm / self.speed_mm_s + 0.5))


@dataclass(frozen=True)
class Maneuver:
    """
    A slide (one leg) or a corner (two perpendicular legs, executed atomically)
    of a single module. A failed mover is carried by a live driver.
    """

    mover: int
    kind: ManeuverKind
    legs: tuple[Dir, ...]
    driver: int | None = None

    def __post_init__(self) -> None:
        if self.kind is ManeuverKind.SLIDE and len(self.legs) != 1:
            raise ValueError("a slide has exactly one leg")
        if self.kind is ManeuverKind.CORNER:
            if len(self.legs) != 2 or not self.legs[0].is_perpendicular(self.legs[1]):
                raise ValueError("a corner has two perpendicular legs")
        if self.driver is not None and self.driver == self.mover:
            raise ValueError("a module cannot drive itself")

    @classmethod
    def slide(cls, mover: int, d: Dir, driver: int | None = None) -> "Maneuver":
        return cls(mover, ManeuverKind.SLIDE, (d,), driver)

    @classmethod
    def corner(
        cls, mover: int, first: Dir, second: Dir, driver: int | None = None
    ) -> "Maneuver":
        return cls(mover, ManeuverKind.CORNER, (first, second), driver)

    @classmethod
    def from_legs(
        cls, mover: int, legs: tuple[Dir, ...], driver: int | None = None
    ) -> "Maneuver":
        kind = ManeuverKind.SLIDE if len(legs) == 1 else ManeuverKind.CORNER
        return cls(mover, kind, legs, driver)

    @property
    def motions(self) -> int:
        return len(self.legs)

    def waypoints(self, start: Coord) -> list[Coord]:
        """Cells visited after each leg, starting from `start`."""
        cells = []
        c = start
        for d in self.legs:
            c = d.step(c)
            cells.append(c)
        return cells

    def destination(self, start: Coord) -> Coord:
        return self.waypoints(start)[-1]

    def sort_key(self) -> tuple[int, tuple[int, ...], int]:
        return (
            self.mover,
            tuple(LEG_ORDER.index(d) for d in self.legs),
            -1 if self.driver is None else self.driver,
        )
