# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-strict

from .maneuvers import (
    apply_maneuver,
    available_maneuvers,
    cell_successors,
    check_maneuver,
    geometry_check,
    IllegalManeuverError,
    leg_flanks,
    LEG_OPTIONS,
    legal_maneuvers,
)
from .timing import (
    maneuver_duration,
    substep_offsets,
    substep_schedule,
    SUBSTEPS_PER_LEG,
)


__all__ = [
    "apply_maneuver",
    "available_maneuvers",
    "cell_successors",
    "check_maneuver",
    "geometry_check",
    "IllegalManeuverError",
    "leg_flanks",
    "LEG_OPTIONS",
    "legal_maneuvers",
    "maneuver_duration",
    "substep_offsets",
    "substep_schedule",
    "SUBSTEPS_PER_LEG",
]
