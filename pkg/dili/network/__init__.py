# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-strict

from .latency_models import FixedLatency, LatencyModel, parse_latency, UniformLatency
from .link import link_key, LinkState, on_undock, schedule_delivery
from .transport import LinkDownError, Transport


__all__ = [
    "FixedLatency",
    "LatencyModel",
    "link_key",
    "LinkDownError",
    "LinkState",
    "on_undock",
    "parse_latency",
    "schedule_delivery",
    "Transport",
    "UniformLatency",
]
