# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from dataclasses import dataclass, field
from enum import Enum

from dili.api.configuration import ModuleStatus
from dili.api.coord import Coord
from dili.api.message import MoveCommand, WaveTag
from dili.lattice.geometry import moore_window


class Phase(Enum):
    IDLE = "idle"
    ELECTING = "electing"
    LEADER = "leader"
    EXECUTING = "executing"
    DONE = "done"


@dataclass(frozen=True)
class SensedCell:
    id: int
    status: ModuleStatus

    @property
    def alive(self) -> bool:
        return self.status is ModuleStatus.ALIVE


@dataclass(frozen=True)
class Sensing:
    """
    What a module perceives of its surroundings: its own cell, the 3x3 block
    around it (row-major, north row first) and the live modules docked to it.
    """

    pos: Coord
    moore: tuple[SensedCell | None, ...]
    alive_neighbors: tuple[int, ...]


@dataclass(frozen=True)
class WindowMap:
    """
    The 3x3 domain centered on a leader. `cells` follows `moore_window`
    order: north row first, west to east.
    """

    center: Coord
    cells: tuple[SensedCell | None, ...]

    def __post_init__(self) -> None:
        if len(self.cells) != 9:
            raise ValueError("a window has nine cells")

    def coords(self) -> list[Coord]:
        return moore_window(self.center)

    def items(self) -> list[tuple[Coord, SensedCell | None]]:
        return list(zip(self.coords(), self.cells))

    def at(self, c: Coord) -> SensedCell | None:
        for pos, cell in self.items():
            if pos == c:
                return cell
        return None

    def occupied(self) -> int:
        return sum(1 for cell in self.cells if cell is not None)


@dataclass(frozen=True)
class AgentState:
    """
    Local state of one module's controller. Transitions replace the whole
    record; nothing here is shared with other modules.
    """

    id: int
    pos: Coord
    goal: Coord
    origin: Coord
    status: ModuleStatus = ModuleStatus.ALIVE
    phase: Phase = Phase.IDLE
    epoch: int = -1
    # election
    own_tag: WaveTag | None = None
    adopted: WaveTag | None = None
    parent: int | None = None
    pending_acks: frozenset[int] = frozenset()
    echoed: bool = False
    # sensing
    moore: tuple[SensedCell | None, ...] = ()
    neighbors: tuple[int, ...] = ()
    last_activity: int = 0
    # round, leader side
    window: WindowMap | None = None
    plan: tuple[MoveCommand, ...] = ()
    cursor: int = 0
    awaiting: int | None = None
    moved: int = 0
    # round, executor side
    executing: MoveCommand | None = None
    seen: frozenset[tuple[str, int, int]] = field(default_factory=frozenset)
    malformed: int = 0

    @classmethod
    def initial(cls, module_id: int, pos: Coord, goal: Coord, origin: Coord) -> "AgentState":
        return cls(id=module_id, pos=pos, goal=goal, origin=origin)

    @property
    def alive(self) -> bool:
        return self.status is ModuleStatus.ALIVE

    @property
    def anchored(self) -> bool:
        return self.pos in (self.origin, self.goal)

    @property
    def current_command(self) -> MoveCommand | None:
        if self.cursor < len(self.plan):
            return self.plan[self.cursor]
        return None
