# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-strict

from .coord import Coord, Grid
from .configuration import Configuration, ModuleRecord, ModuleStatus
from .maneuver import (
    Dir,
    LEG_ORDER,
    Maneuver,
    ManeuverKind,
    MotionParams,
    RejectReason,
    SlideRule,
)
from .message import Message, MessageKind, MoveCommand, OPERATOR_ID, WaveTag
from .metrics import Metrics
from .scenario import Scenario, ScenarioEvent, ScenarioEventType, SimParams
from .trace import TRACE_SCHEMA, TraceEvent, TraceKind


__all__ = [
    "Configuration",
    "Coord",
    "Dir",
    "Grid",
    "LEG_ORDER",
    "Maneuver",
    "ManeuverKind",
    "Message",
    "MessageKind",
    "Metrics",
    "ModuleRecord",
    "ModuleStatus",
    "MotionParams",
    "MoveCommand",
    "OPERATOR_ID",
    "RejectReason",
    "Scenario",
    "ScenarioEvent",
    "ScenarioEventType",
    "SimParams",
    "SlideRule",
    "TRACE_SCHEMA",
    "TraceEvent",
    "TraceKind",
    "WaveTag",
]
