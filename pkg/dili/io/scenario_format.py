# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

"""
Line-oriented scenario files. One directive per line, `#` starts a comment:

    grid W H
    input X Y
    output X Y
    module ID X Y
    seed N
    latency fixed T | latency uniform A B
    pitch MM
    speed MMPS
    slide-rule single|double
    round-timeout T
    max-ticks T
    scoring proximity|uniform
    log-messages true|false
    at T set-output X Y
    at T fail ID
"""

from dataclasses import dataclass, field
from pathlib import Path

from dili.agents.scoring import SCORING_MODULES
from dili.api.configuration import ModuleRecord
from dili.api.coord import Coord, Grid
from dili.api.maneuver import Maneuver, MotionParams, parse_legs, SlideRule
from dili.api.scenario import Scenario, ScenarioEvent, ScenarioEventType, SimParams
from dili.lattice.connectivity import components
from dili.network.latency_models import FixedLatency, LatencyModel, UniformLatency

SINGLETON_DIRECTIVES: tuple[str, ...] = (
    "grid",
    "input",
    "output",
    "seed",
    "latency",
    "pitch",
    "speed",
    "slide-rule",
    "round-timeout",
    "max-ticks",
    "scoring",
    "log-messages",
)


class ScenarioParseError(ValueError):
    """
    A scenario file was rejected. `line` is 1-based; 0 means the problem is
    something the file lacks rather than something it says.
    """

    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass
class _Draft:
    singletons: dict[str, tuple[int, list[str]]] = field(default_factory=dict)
    modules: list[tuple[int, ModuleRecord]] = field(default_factory=list)
    events: list[tuple[int, ScenarioEvent]] = field(default_factory=list)


def _int(line: int, token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ScenarioParseError(line, f"{what} must be an integer, got {token!r}") from None


def _float(line: int, token: str, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ScenarioParseError(line, f"{what} must be a number, got {token!r}") from None


def _arity(line: int, tokens: list[str], n: int) -> None:
    if len(tokens) != n + 1:
        raise ScenarioParseError(line, f"{tokens[0]} takes {n} argument(s)")


def _coord(line: int, tokens: list[str]) -> Coord:
    return Coord(_int(line, tokens[0], "x"), _int(line, tokens[1], "y"))


def _event(line: int, tokens: list[str]) -> ScenarioEvent:
    if len(tokens) < 3:
        raise ScenarioParseError(line, "expected `at T set-output X Y` or `at T fail ID`")
    at = _int(line, tokens[1], "tick")
    if at < 0:
        raise ScenarioParseError(line, "event tick must not be negative")
    action = tokens[2]
    if action == ScenarioEventType.SET_OUTPUT.value and len(tokens) == 5:
        return ScenarioEvent.set_output(at, _coord(line, tokens[3:5]))
    if action == ScenarioEventType.FAIL.value and len(tokens) == 4:
        return ScenarioEvent.fail(at, _int(line, tokens[3], "module id"))
    raise ScenarioParseError(line, f"malformed event {' '.join(tokens[2:])!r}")


def _collect(text: str) -> _Draft:
    draft = _Draft()
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        keyword = tokens[0]
        if keyword == "module":
            _arity(number, tokens, 3)
            mid = _int(number, tokens[1], "module id")
            if mid <= 0:
                raise ScenarioParseError(number, "module ids must be positive")
            draft.modules.append((number, ModuleRecord(mid, _coord(number, tokens[2:4]))))
        elif keyword == "at":
            draft.events.append((number, _event(number, tokens)))
        elif keyword in SINGLETON_DIRECTIVES:
            if keyword in draft.singletons:
                first = draft.singletons[keyword][0]
                raise ScenarioParseError(number, f"duplicate {keyword} (first on line {first})")
            draft.singletons[keyword] = (number, tokens[1:])
        else:
            raise ScenarioParseError(number, f"unknown directive {keyword!r}")
    return draft


def _latency(line: int, args: list[str]) -> LatencyModel:
    try:
        if len(args) == 2 and args[0] == "fixed":
            return FixedLatency(_int(line, args[1], "latency"))
        if len(args) == 3 and args[0] == "uniform":
            return UniformLatency(_int(line, args[1], "latency"), _int(line, args[2], "latency"))
    except ScenarioParseError:
        raise
    except ValueError as e:
        raise ScenarioParseError(line, str(e)) from None
    raise ScenarioParseError(line, "expected `latency fixed T` or `latency uniform A B`")


def _params(draft: _Draft) -> SimParams:
    s = draft.singletons
    values: dict[str, object] = {}
    motion: dict[str, object] = {}
    for key, (line, args) in s.items():
        if key in ("grid", "input", "output"):
            continue
        if key == "latency":
            values["latency"] = _latency(line, args)
            continue
        if len(args) != 1:
            raise ScenarioParseError(line, f"{key} takes 1 argument")
        arg = args[0]
        if key == "seed":
            values["seed"] = _int(line, arg, key)
        elif key == "round-timeout":
            values["round_timeout"] = _int(line, arg, key)
        elif key == "max-ticks":
            values["max_ticks"] = _int(line, arg, key)
        elif key == "pitch":
            motion["pitch_mm"] = _float(line, arg, key)
        elif key == "speed":
            motion["speed_mm_s"] = _float(line, arg, key)
        elif key == "slide-rule":
            try:
                motion["slide_rule"] = SlideRule(arg)
            except ValueError:
                raise ScenarioParseError(line, "slide-rule is single or double") from None
        elif key == "scoring":
            if arg not in SCORING_MODULES:
                raise ScenarioParseError(line, f"scoring is one of {sorted(SCORING_MODULES)}")
            values["scoring"] = arg
        elif key == "log-messages":
            if arg not in ("true", "false"):
                raise ScenarioParseError(line, "log-messages is true or false")
            values["log_messages"] = arg == "true"
    try:
        values["motion"] = MotionParams(**motion)
    except ValueError as e:
        line = min(s[k][0] for k in ("pitch", "speed") if k in s) if motion else 0
        raise ScenarioParseError(line, str(e)) from None
    try:
        return SimParams(**values)
    except ValueError as e:
        keys = [k for k in ("round-timeout", "max-ticks") if k in s]
        raise ScenarioParseError(s[keys[0]][0] if keys else 0, str(e)) from None


def _grid(draft: _Draft) -> Grid:
    s = draft.singletons
    for key in ("grid", "input", "output"):
        if key not in s:
            raise ScenarioParseError(0, f"missing {key} directive")
        _arity(s[key][0], [key, *s[key][1]], 2)
    gline, gargs = s["grid"]
    width, height = _int(gline, gargs[0], "width"), _int(gline, gargs[1], "height")
    if width < 1 or height < 1:
        raise ScenarioParseError(gline, "grid dimensions must be positive")
    cells = {}
    for key in ("input", "output"):
        line, args = s[key]
        c = _coord(line, args)
        if not (0 <= c.x < width and 0 <= c.y < height):
            raise ScenarioParseError(line, f"{key} {c} is outside the {width}x{height} grid")
        cells[key] = c
    if cells["input"] == cells["output"]:
        raise ScenarioParseError(max(s["input"][0], s["output"][0]), "input and output coincide")
    return Grid(width, height, cells["input"], cells["output"])


def _check_modules(draft: _Draft, grid: Grid) -> None:
    if not draft.modules:
        raise ScenarioParseError(0, "no module directives")
    ids: dict[int, int] = {}
    cells: dict[Coord, int] = {}
    for line, rec in draft.modules:
        if rec.id in ids:
            raise ScenarioParseError(line, f"duplicate module id {rec.id} (line {ids[rec.id]})")
        if rec.pos in cells:
            raise ScenarioParseError(line, f"cell {rec.pos} already holds a module (line {cells[rec.pos]})")
        if not grid.contains(rec.pos):
            raise ScenarioParseError(line, f"module {rec.id} at {rec.pos} is outside the grid")
        ids[rec.id] = line
        cells[rec.pos] = line
    parts = components(frozenset(cells))
    if len(parts) > 1:
        home = next(p for p in parts if draft.modules[0][1].pos in p)
        stray = next(line for line, rec in draft.modules if rec.pos not in home)
        raise ScenarioParseError(stray, "initial modules are not 4-connected")


def _check_events(draft: _Draft, grid: Grid, max_ticks: int) -> None:
    ids = {rec.id for _, rec in draft.modules}
    last = 0
    for line, ev in draft.events:
        if ev.at < last:
            raise ScenarioParseError(line, "events must be listed in tick order")
        if ev.at > max_ticks:
            raise ScenarioParseError(line, f"event at {ev.at} is past max-ticks {max_ticks}")
        last = ev.at
        if ev.type is ScenarioEventType.FAIL and ev.module not in ids:
            raise ScenarioParseError(line, f"fail names unknown module {ev.module}")
        if ev.output is not None:
            if not grid.contains(ev.output):
                raise ScenarioParseError(line, f"set-output {ev.output} is outside the grid")
            if ev.output == grid.input:
                raise ScenarioParseError(line, "set-output cannot target the input cell")


def parse_scenario(text: str) -> Scenario:
    """
    Parses a scenario file. Errors cite the first offending line.

    Args:
        text: the whole file.
    Raises:
        ScenarioParseError
    """
    draft = _collect(text)
    grid = _grid(draft)
    params = _params(draft)
    _check_modules(draft, grid)
    _check_events(draft, grid, params.max_ticks)
    return Scenario(
        grid=grid,
        modules=tuple(rec for _, rec in draft.modules),
        params=params,
        events=tuple(ev for _, ev in draft.events),
    )


def load_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_text())


def _latency_directive(model: LatencyModel) -> str:
    return "latency " + model.describe().replace(":", " ")


def format_scenario(scenario: Scenario) -> str:
    """Pretty-prints a scenario; `parse_scenario` reads it back unchanged."""
    g, p = scenario.grid, scenario.params
    m = p.motion
    lines = [
        f"grid {g.width} {g.height}",
        f"input {g.input.x} {g.input.y}",
        f"output {g.output.x} {g.output.y}",
        f"seed {p.seed}",
        _latency_directive(p.latency),
        f"pitch {m.pitch_mm!r}",
        f"speed {m.speed_mm_s!r}",
        f"slide-rule {m.slide_rule.value}",
        f"round-timeout {p.round_timeout}",
        f"max-ticks {p.max_ticks}",
        f"scoring {p.scoring}",
        f"log-messages {'true' if p.log_messages else 'false'}",
    ]
    lines += [f"module {r.id} {r.pos.x} {r.pos.y}" for r in scenario.modules]
    for ev in scenario.events:
        if ev.type is ScenarioEventType.SET_OUTPUT:
            assert ev.output is not None
            lines.append(f"at {ev.at} set-output {ev.output.x} {ev.output.y}")
        else:
            lines.append(f"at {ev.at} fail {ev.module}")
    return "\n".join(lines) + "\n"


def parse_script(text: str) -> list[Maneuver]:
    """
    Operator scripts: one maneuver per line as `MOVER LEGS [DRIVER]`, for
    example `3 E` or `4 E,S 2`.
    """
    maneuvers = []
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if len(tokens) not in (2, 3):
            raise ScenarioParseError(number, "expected `MOVER LEGS [DRIVER]`")
        mover = _int(number, tokens[0], "mover")
        driver = _int(number, tokens[2], "driver") if len(tokens) == 3 else None
        try:
            maneuvers.append(Maneuver.from_legs(mover, parse_legs(tokens[1]), driver))
        except ValueError as e:
            raise ScenarioParseError(number, str(e)) from None
    return maneuvers
