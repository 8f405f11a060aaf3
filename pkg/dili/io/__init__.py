# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-strict

from .render import Frame, glyph_grid, Overlay, render_ascii, render_svg, trace_frames
from .report import metrics_report
from .scenario_format import (
    format_scenario,
    load_scenario,
    parse_scenario,
    parse_script,
    ScenarioParseError,
)
from .trace_format import (
    format_event,
    load_trace,
    read_trace,
    save_trace,
    TRACE_HEADER,
    TraceFormatError,
    write_trace,
)


__all__ = [
    "format_event",
    "format_scenario",
    "Frame",
    "glyph_grid",
    "load_scenario",
    "load_trace",
    "metrics_report",
    "Overlay",
    "parse_scenario",
    "parse_script",
    "read_trace",
    "render_ascii",
    "render_svg",
    "save_trace",
    "ScenarioParseError",
    "TRACE_HEADER",
    "trace_frames",
    "TraceFormatError",
    "write_trace",
]
