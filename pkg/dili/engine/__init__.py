# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-strict

from .event_queue import Event, EventQueue
from .guard import goal_monitor, guard_maneuver, SafetyViolation
from .simulation import run, run_script, Simulation


__all__ = [
    "Event",
    "EventQueue",
    "goal_monitor",
    "guard_maneuver",
    "run",
    "run_script",
    "SafetyViolation",
    "Simulation",
]
