# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

import math

from dili.api.maneuver import Maneuver, MotionParams

# one SEP switches polarity per substep; a whole cell of travel takes six
SUBSTEPS_PER_LEG = 6


def maneuver_duration(m: Maneuver, params: MotionParams) -> int:
    """Ticks (simulated milliseconds) needed to execute every leg of `m`."""
    return m.motions * params.leg_ticks


def substep_offsets(params: MotionParams) -> list[int]:
    """Offsets of the six polarity switches from the start of a leg."""
    leg = params.leg_ticks
    return [
        math.floor(k * leg / SUBSTEPS_PER_LEG + 0.5) for k in range(1, SUBSTEPS_PER_LEG + 1)
    ]


def substep_schedule(m: Maneuver, params: MotionParams, start: int) -> list[list[int]]:
    """Absolute substep ticks, one list per leg, for a maneuver begun at `start`."""
    offsets = substep_offsets(params)
    return [
        [start + i * params.leg_ticks + o for o in offsets] for i in range(m.motions)
    ]
