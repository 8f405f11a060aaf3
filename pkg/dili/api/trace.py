# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from dataclasses import dataclass, field
from enum import Enum

from dili.api.coord import Coord
from dili.api.maneuver import Dir, parse_legs


class TraceKind(Enum):
    HEADER = "HEADER"
    ELECT = "ELECT"
    LEADER = "LEADER"
    CMD = "CMD"
    MOVE = "MOVE"
    REJECT = "REJECT"
    ROUND = "ROUND"
    MSG = "MSG"
    MSGDROP = "MSGDROP"
    EVENT = "EVENT"
    GOAL = "GOAL"
    STUCK = "STUCK"
    METRICS = "METRICS"


# payload keys of every record kind, in the order they are written
TRACE_SCHEMA: dict[TraceKind, tuple[str, ...]] = {
    TraceKind.HEADER: (
        "mode",
        "seed",
        "max_ticks",
        "round_timeout",
        "latency",
        "slide_rule",
        "pitch",
        "speed",
        "scoring",
        "log_messages",
    ),
    TraceKind.ELECT: ("epoch", "id", "score"),
    TraceKind.LEADER: ("epoch", "id", "score", "pos"),
    TraceKind.CMD: ("epoch", "seq", "leader", "target", "driver", "objective"),
    TraceKind.MOVE: (
        "epoch",
        "seq",
        "mover",
        "driver",
        "leg",
        "legs",
        "start",
        "from",
        "to",
        "substeps",
    ),
    TraceKind.REJECT: ("epoch", "seq", "mover", "driver", "legs", "reason"),
    TraceKind.ROUND: ("epoch", "leader", "commands", "moved"),
    TraceKind.MSG: ("src", "dst", "kind", "epoch", "deliver"),
    TraceKind.MSGDROP: ("src", "dst", "kind", "reason"),
    TraceKind.EVENT: ("type", "value", "requested", "epoch"),
    TraceKind.GOAL: ("epoch", "motions", "path_len", "output"),
    TraceKind.STUCK: ("epoch", "reason"),
    TraceKind.METRICS: (
        "motions",
        "maneuvers",
        "epochs",
        "messages_sent",
        "messages_delivered",
        "messages_dropped",
        "simtime_ms",
        "goal_reached",
        "final_path_len",
    ),
}


def format_value(value: object) -> str:
    """Renders a payload value in its trace spelling."""
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Coord):
        return f"{value.x},{value.y}"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (tuple, list)):
        return ",".join(d.name if isinstance(d, Dir) else str(d) for d in value)
    return str(value)


@dataclass(frozen=True)
class TraceEvent:
    """
    One trace record. Payload values are kept in their written string form;
    the typed getters below decode them.
    """

    at: int
    seq: int
    kind: TraceKind
    fields: dict[str, str] = field(default_factory=dict)

    def __hash__(self) -> int:
        return hash((self.at, self.seq, self.kind, tuple(self.fields.items())))

    def raw(self, key: str) -> str:
        try:
            return self.fields[key]
        except KeyError:
            raise ValueError(f"{self.kind.value} record has no {key!r}") from None

    def as_int(self, key: str) -> int:
        return int(self.raw(key))

    def opt_int(self, key: str) -> int | None:
        v = self.raw(key)
        return None if v == "none" else int(v)

    def as_coord(self, key: str) -> Coord:
        x, y = self.raw(key).split(",")
        return Coord(int(x), int(y))

    def as_bool(self, key: str) -> bool:
        v = self.raw(key)
        if v not in ("true", "false"):
            raise ValueError(f"{key}={v} is not a boolean")
        return v == "true"

    def legs(self, key: str = "legs") -> tuple[Dir, ...]:
        return parse_legs(self.raw(key))

    def int_list(self, key: str) -> list[int]:
        v = self.raw(key)
        return [int(p) for p in v.split(",")] if v else []


def make_event(at: int, seq: int, kind: TraceKind, /, **values: object) -> TraceEvent:
    """Builds a record from typed values, in schema key order."""
    keys = TRACE_SCHEMA[kind]
    missing = set(keys) - set(values)
    extra = set(values) - set(keys)
    if missing or extra:
        raise ValueError(
            f"{kind.value} payload mismatch: missing {sorted(missing)}, extra {sorted(extra)}"
        )
    return TraceEvent(at, seq, kind, {k: format_value(values[k]) for k in keys})
