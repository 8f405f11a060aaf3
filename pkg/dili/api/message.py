# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import Union

from dili.api.coord import Coord

# source id used for operator-level broadcasts (goal changes)
OPERATOR_ID = 0


class MessageKind(Enum):
    WAVE = "WAVE"
    ECHO = "ECHO"
    LEADER_ANN = "LEADER_ANN"
    MOVE_CMD = "MOVE_CMD"
    CMD_DONE = "CMD_DONE"
    ROUND_DONE = "ROUND_DONE"
    NEW_GOAL = "NEW_GOAL"


@total_ordering
@dataclass(frozen=True)
class WaveTag:
    """
    Election tag. Higher epoch wins, then higher score, then smaller id.
    """

    epoch: int
    score: int
    id: int

    def _key(self) -> tuple[int, int, int]:
        return (self.epoch, self.score, -self.id)

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, WaveTag):
            return NotImplemented
        return self._key() < other._key()


@dataclass(frozen=True)
class MoveCommand:
    epoch: int
    seq: int
    target: int
    objective: Coord
    driver: int | None = None
    leader: int = 0


@dataclass(frozen=True)
class ElectionPayload:
    """Carried by WAVE and ECHO."""

    tag: WaveTag


@dataclass(frozen=True)
class LeaderAnnouncement:
    tag: WaveTag
    # command sequence number in progress; re-announcements double as keepalives
    seq: int = 0


@dataclass(frozen=True)
class CommandEnvelope:
    command: MoveCommand
    hops_left: int


@dataclass(frozen=True)
class CommandResult:
    epoch: int
    seq: int
    leader: int
    target: int
    moved: bool
    hops_left: int


@dataclass(frozen=True)
class RoundDone:
    epoch: int
    leader: int


@dataclass(frozen=True)
class NewGoal:
    goal: Coord
    epoch: int


Payload = Union[
    ElectionPayload,
    LeaderAnnouncement,
    CommandEnvelope,
    CommandResult,
    RoundDone,
    NewGoal,
]


@dataclass(frozen=True)
class Message:
    uid: int
    src: int
    dst: int
    kind: MessageKind
    payload: Payload
    sent_at: int

    def __post_init__(self) -> None:
        if self.src == self.dst:
            raise ValueError("a module cannot message itself")

    @property
    def epoch(self) -> int:
        p = self.payload
        if isinstance(p, (ElectionPayload, LeaderAnnouncement)):
            return p.tag.epoch
        if isinstance(p, CommandEnvelope):
            return p.command.epoch
        if isinstance(p, (CommandResult, RoundDone, NewGoal)):
            return p.epoch
        return -1
