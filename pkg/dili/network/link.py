# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from dili.api.message import Message
from dili.network.latency_models import LatencyModel


def link_key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass
class LinkState:
    """
    A docked face pair. Deliveries on one link happen at strictly increasing
    ticks, which preserves send order in both directions.
    """

    endpoints: tuple[int, int]
    last_delivery: int = 0
    in_flight: deque[tuple[Message, int]] = field(default_factory=deque)


def schedule_delivery(
    msg: Message, model: LatencyModel, rng: np.random.Generator, link: LinkState
) -> int:
    tick = max(msg.sent_at + model.sample(rng), link.last_delivery + 1)
    link.last_delivery = tick
    link.in_flight.append((msg, tick))
    return tick


def on_undock(link: LinkState) -> list[Message]:
    dropped = [msg for msg, _ in link.in_flight]
    link.in_flight.clear()
    return dropped
