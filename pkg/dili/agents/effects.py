# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

"""
Inputs an agent reacts to and effects it asks the engine to carry out.
Agents never touch the engine directly: a transition returns the new state
and a list of effects.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Union

from dili.agents.state import Sensing
from dili.api.maneuver import Maneuver
from dili.api.message import Message, MessageKind, MoveCommand, Payload, WaveTag


class TimerKind(Enum):
    ROUND = "round"
    COMMAND = "command"


# inputs


@dataclass(frozen=True)
class Start:
    epoch: int = 0


@dataclass(frozen=True)
class Deliver:
    message: Message


@dataclass(frozen=True)
class Timeout:
    pass


@dataclass(frozen=True)
class CommandTimeout:
    epoch: int
    seq: int


@dataclass(frozen=True)
class ManeuverOutcome:
    epoch: int
    seq: int
    moved: bool


@dataclass(frozen=True)
class NeighborChanged:
    """A docked neighbor broke down."""

    pass


AgentInput = Union[Start, Deliver, Timeout, CommandTimeout, ManeuverOutcome, NeighborChanged]


# effects


@dataclass(frozen=True)
class Send:
    dst: int
    kind: MessageKind
    payload: Payload


@dataclass(frozen=True)
class EnterEpoch:
    epoch: int
    tag: WaveTag | None


@dataclass(frozen=True)
class DeclareLeader:
    tag: WaveTag


@dataclass(frozen=True)
class IssueCommand:
    command: MoveCommand


@dataclass(frozen=True)
class RequestManeuver:
    maneuver: Maneuver
    command: MoveCommand


@dataclass(frozen=True)
class CompleteRound:
    epoch: int
    commands: int
    moved: int


@dataclass(frozen=True)
class ArmTimer:
    kind: TimerKind
    at: int
    epoch: int = 0
    seq: int = 0


Effect = Union[
    Send, EnterEpoch, DeclareLeader, IssueCommand, RequestManeuver, CompleteRound, ArmTimer
]


class Sensor(ABC):
    """
    Physical sensing available to a module: its surroundings and the
    maneuvers its actuators (or a driver's) could perform right now.
    """

    @abstractmethod
    def sense(self, module_id: int) -> Sensing:
        pass

    @abstractmethod
    def maneuvers(self, module_id: int) -> list[Maneuver]:
        pass


@dataclass(frozen=True)
class AgentContext:
    now: int
    sensor: Sensor
