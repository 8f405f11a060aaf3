# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from pathlib import Path
from typing import Iterable

from dili.api.trace import TRACE_SCHEMA, TraceEvent, TraceKind

TRACE_MAGIC = "DILITRACE"
TRACE_VERSION = "v1"
TRACE_HEADER: str = f"{TRACE_MAGIC} {TRACE_VERSION}"


class TraceFormatError(ValueError):
    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


def format_event(ev: TraceEvent) -> str:
    payload = " ".join(f"{k}={ev.fields[k]}" for k in TRACE_SCHEMA[ev.kind])
    return f"{ev.at} {ev.seq} {ev.kind.value} {payload}".rstrip()


def write_trace(events: Iterable[TraceEvent]) -> str:
    lines = [TRACE_HEADER]
    lines += [format_event(ev) for ev in events]
    return "\n".join(lines) + "\n"


def _parse_line(number: int, line: str) -> TraceEvent:
    parts = line.split(" ")
    if len(parts) < 3:
        raise TraceFormatError(number, "expected `<at> <seq> <KIND> key=value ...`")
    try:
        at, seq = int(parts[0]), int(parts[1])
    except ValueError:
        raise TraceFormatError(number, "at and seq must be integers") from None
    try:
        kind = TraceKind(parts[2])
    except ValueError:
        raise TraceFormatError(number, f"unknown record kind {parts[2]!r}") from None
    fields: dict[str, str] = {}
    for token in parts[3:]:
        key, sep, value = token.partition("=")
        if not sep or not key:
            raise TraceFormatError(number, f"malformed field {token!r}")
        fields[key] = value
    expected = TRACE_SCHEMA[kind]
    if tuple(fields) != expected:
        raise TraceFormatError(
            number, f"{kind.value} wants keys {' '.join(expected)}, got {' '.join(fields)}"
        )
    return TraceEvent(at, seq, kind, fields)


def read_trace(text: str) -> list[TraceEvent]:
    """
    Parses a trace file written by `write_trace`.

    Raises:
        TraceFormatError: bad header or malformed record, citing the line.
    """
    lines = text.splitlines()
    if not lines:
        raise TraceFormatError(1, "empty trace")
    head = lines[0].split(" ")
    if len(head) != 2 or head[0] != TRACE_MAGIC:
        raise TraceFormatError(1, f"not a trace file: {lines[0]!r}")
    if head[1] != TRACE_VERSION:
        raise TraceFormatError(1, f"unsupported version {head[1]}")
    return [_parse_line(n, line) for n, line in enumerate(lines[1:], start=2) if line]


def save_trace(events: Iterable[TraceEvent], path: str | Path) -> None:
    Path(path).write_text(write_trace(events))


def load_trace(path: str | Path) -> list[TraceEvent]:
    return read_trace(Path(path).read_text())
