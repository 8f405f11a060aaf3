# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from dili.api.configuration import Configuration
from dili.api.coord import Coord, Grid
from dili.api.maneuver import Maneuver, MotionParams, RejectReason
from dili.lattice.connectivity import path_exists
from dili.motion.maneuvers import check_maneuver


class SafetyViolation(RuntimeError):
    """The configuration broke apart at a maneuver boundary."""

    pass


def guard_maneuver(
    config: Configuration,
    grid: Grid,
    m: Maneuver,
    params: MotionParams | None = None,
) -> RejectReason | None:
    """
    Physical interlock in front of every maneuver: None accepts, otherwise
    the first condition the maneuver fails.
    """
    return check_maneuver(config, grid, m, params)


def goal_monitor(config: Configuration, input: Coord, output: Coord) -> bool:
    return path_exists(config, input, output)
