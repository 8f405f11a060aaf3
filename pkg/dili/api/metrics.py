# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from dataclasses import asdict, dataclass


@dataclass
class Metrics:
    """
    Run totals. `motions` counts unit-cell legs and is the objective being
    minimized; `maneuvers` counts committed slides and corners.
    """

    motions: int = 0
    maneuvers: int = 0
    epochs: int = 0
    messages_sent: int = 0
    messages_delivered: int = 0
    messages_dropped: int = 0
    simtime_ms: int = 0
    goal_reached: bool = False
    final_path_len: int | None = None

    def as_dict(self) -> dict[str, int | bool | None]:
        return asdict(self)
