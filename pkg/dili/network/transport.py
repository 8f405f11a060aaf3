# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

import logging

import numpy as np

from dili.api.configuration import Configuration
from dili.api.message import Message
from dili.lattice.geometry import adjacent4
from dili.network.latency_models import LatencyModel
from dili.network.link import link_key, LinkState, on_undock, schedule_delivery

logger: logging.Logger = logging.getLogger(__name__)


class LinkDownError(ValueError):
    """Raised to the sender when a message cannot be put on a link."""

    def __init__(self, msg: Message, reason: str) -> None:
        super().__init__(f"cannot send {msg.kind.value} {msg.src}->{msg.dst}: {reason}")
        self.msg = msg
        self.reason = reason


class Transport:
    """
    One-hop message transport between docked modules. Links form lazily on
    first use and vanish when either face undocks, dropping what they carry.
    """

    def __init__(self, model: LatencyModel, rng: np.random.Generator) -> None:
        self.model = model
        self._rng = rng
        self._links: dict[tuple[int, int], LinkState] = {}
        self._in_flight: set[int] = set()
        self._in_transit: set[int] = set()

    def set_in_transit(self, module_id: int, moving: bool) -> None:
        if moving:
            self._in_transit.add(module_id)
        else:
            self._in_transit.discard(module_id)

    def send(self, msg: Message, config: Configuration, now: int) -> int:
        """
        Schedules `msg` and returns its delivery tick. Raises LinkDownError
        when the two modules are not docked or a failed module is involved.
        """
        src = config.record(msg.src)
        dst = config.record(msg.dst)
        if not src.alive:
            raise LinkDownError(msg, "failed_src")
        if not adjacent4(src.pos, dst.pos) or {msg.src, msg.dst} & self._in_transit:
            raise LinkDownError(msg, "link_down")
        if not dst.alive:
            raise LinkDownError(msg, "failed_dst")
        key = link_key(msg.src, msg.dst)
        link = self._links.get(key)
        if link is None:
            link = LinkState(endpoints=key, last_delivery=now)
            self._links[key] = link
        self._in_flight.add(msg.uid)
        return schedule_delivery(msg, self.model, self._rng, link)

    def deliver(self, msg: Message) -> bool:
        """
        Takes a message off its link at its delivery tick. Returns False if
        the message was dropped after it was scheduled.
        """
        if msg.uid not in self._in_flight:
            return False
        self._in_flight.discard(msg.uid)
        link = self._links[link_key(msg.src, msg.dst)]
        head, _ = link.in_flight.popleft()
        assert head.uid == msg.uid, "links deliver in schedule order"
        return True

    def _drop_links(self, keys: list[tuple[int, int]]) -> list[Message]:
        dropped: list[Message] = []
        for key in keys:
            link = self._links.pop(key)
            dropped.extend(on_undock(link))
        for msg in dropped:
            self._in_flight.discard(msg.uid)
        if dropped:
            logger.debug(f"dropped {len(dropped)} in-flight messages on {keys}")
        return dropped

    def undock(self, module_id: int) -> list[Message]:
        """Breaks every link of a module; returns the messages lost."""
        return self._drop_links(sorted(k for k in self._links if module_id in k))

    def drop_all(self) -> list[Message]:
        return self._drop_links(sorted(self._links))

    @property
    def pending(self) -> int:
        return len(self._in_flight)
