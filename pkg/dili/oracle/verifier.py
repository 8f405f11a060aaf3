# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

"""
Independent replay of a trace against its scenario. Each check reports the
first trace line that breaks it; line 1 is the `DILITRACE v1` header, so the
record at index i sits on line i + 2.
"""

import logging
from dataclasses import dataclass, field

from dili.agents.scoring import CandidateScoringModule, get_scoring_module
from dili.agents.state import AgentState
from dili.api.configuration import Configuration, ModuleStatus
from dili.api.coord import Coord, Grid
from dili.api.maneuver import Maneuver, MotionParams, RejectReason, SlideRule
from dili.api.scenario import Scenario
from dili.api.trace import TraceEvent, TraceKind
from dili.lattice.connectivity import Adjacency, chain_length, is_connected, path_exists
from dili.lattice.geometry import adjacent4, manhattan
from dili.motion.maneuvers import available_maneuvers, check_maneuver

logger: logging.Logger = logging.getLogger(__name__)

CHECKS: tuple[str, ...] = (
    "ordering",
    "header",
    "legality",
    "connectivity",
    "serialization",
    "election",
    "leader_argmax",
    "candidacy",
    "commands",
    "progress",
    "epochs",
    "driven",
    "locality",
    "fifo",
    "failed_sender",
    "goal",
    "metrics",
)

# checks that only make sense when agents drive the run
AGENT_CHECKS: frozenset[str] = frozenset(
    {"election", "leader_argmax", "candidacy", "commands", "progress"}
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    line: int | None = None

    def render(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        where = f" line {self.line}" if self.line is not None else ""
        detail = f": {self.detail}" if self.detail else ""
        return f"{self.name}: {status}{where}{detail}"


@dataclass
class VerifyReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def render(self) -> str:
        lines = [c.render() for c in self.checks]
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _line(index: int) -> int:
    return index + 2


class _Replay:
    def __init__(self, scenario: Scenario, trace: list[TraceEvent]) -> None:
        self.scenario = scenario
        self.trace = trace
        self.grid: Grid = scenario.grid
        self.config: Configuration = scenario.configuration
        self.failures: dict[str, tuple[int, str]] = {}
        self.skipped: set[str] = set()
        self.motion = MotionParams()
        self.scoring_name = "proximity"
        self.scoring: CandidateScoringModule = get_scoring_module(self.scoring_name)
        self.log_messages = False
        self.scripted = False

        # election and rounds
        self.leaders: dict[int, TraceEvent] = {}
        self.elects: dict[int, list[tuple[int, int]]] = {}
        # best (id, score) over every alive module when an epoch's election opens
        self.best_candidate: dict[int, tuple[int, int] | None] = {}
        # elections that a scenario event or a motion overlapped
        self.disturbed: set[int] = set()
        # sensed maneuvers per module, valid until the configuration or output changes
        self.sensed: dict[int, list[Maneuver]] = {}
        self.commands: dict[tuple[int, int], TraceEvent] = {}
        self.commanded: dict[int, set[int]] = {}
        self.last_epoch = -1
        # maneuvers
        self.open_move: tuple[int, int, int, int] | None = None
        self.last_leg_end = -1
        self.moves = 0
        self.maneuvers = 0
        # the tick budget may cut a maneuver short
        self.truncated = False
        # messages
        self.last_delivery: dict[tuple[int, int], int] = {}
        self.msgs = 0
        self.drops = 0

    def fail(self, name: str, index: int, detail: str) -> None:
        if name not in self.failures:
            self.failures[name] = (_line(index), detail)

    # records

    def run(self) -> VerifyReport:
        if not self.trace:
            self.fail("header", -1, "empty trace")
        for i, ev in enumerate(self.trace):
            self._ordering(i, ev)
            handler = getattr(self, f"_on_{ev.kind.value.lower()}")
            try:
                handler(i, ev)
            except ValueError as e:
                self.fail("header" if ev.kind is TraceKind.HEADER else "legality", i, str(e))
        if self.trace and self.trace[-1].kind is not TraceKind.METRICS:
            self.fail("metrics", len(self.trace) - 1, "trace does not end with METRICS")
        report = VerifyReport()
        for name in CHECKS:
            if name in self.failures:
                line, detail = self.failures[name]
                report.checks.append(CheckResult(name, False, detail, line))
            elif name in self.skipped:
                report.checks.append(CheckResult(name, True, "skipped"))
            else:
                report.checks.append(CheckResult(name, True))
        return report

    def _ordering(self, i: int, ev: TraceEvent) -> None:
        if ev.seq != i:
            self.fail("ordering", i, f"seq {ev.seq} at position {i}")
        if i > 0:
            prev = self.trace[i - 1]
            if (ev.at, ev.seq) <= (prev.at, prev.seq):
                self.fail("ordering", i, "(at, seq) does not increase")
        if i > 0 and ev.kind is TraceKind.HEADER:
            self.fail("header", i, "second HEADER")

    def _on_header(self, i: int, ev: TraceEvent) -> None:
        if i != 0:
            return
        mode = ev.raw("mode")
        if mode not in ("distributed", "script"):
            self.fail("header", i, f"unknown mode {mode}")
        self.scripted = mode == "script"
        if self.scripted:
            self.skipped |= AGENT_CHECKS
        self.motion = MotionParams(
            pitch_mm=float(ev.raw("pitch")),
            speed_mm_s=float(ev.raw("speed")),
            slide_rule=SlideRule(ev.raw("slide_rule")),
        )
        self.scoring_name = ev.raw("scoring")
        self.scoring = get_scoring_module(self.scoring_name)
        self.log_messages = ev.as_bool("log_messages")
        if not self.log_messages:
            self.skipped |= {"locality", "fifo", "failed_sender"}

    def _score(self, module_id: int, epoch: int) -> int | None:
        rec = self.config.record(module_id)
        state = AgentState(
            id=module_id,
            pos=rec.pos,
            goal=self.grid.output,
            origin=self.grid.input,
            status=rec.status,
            epoch=epoch,
        )
        legal = self.sensed.get(module_id)
        if legal is None:
            legal = available_maneuvers(self.config, self.grid, module_id, self.motion)
            self.sensed[module_id] = legal
        tag = self.scoring.score(state, legal)
        return None if tag is None else tag.score

    def _open_election(self, epoch: int) -> None:
        if epoch in self.best_candidate:
            return
        scored = []
        for rec in self.config:
            if rec.alive:
                score = self._score(rec.id, epoch)
                if score is not None:
                    scored.append((score, -rec.id))
        if scored:
            score, neg_id = max(scored)
            self.best_candidate[epoch] = (-neg_id, score)
        else:
            self.best_candidate[epoch] = None

    def _disturb_open_elections(self) -> None:
        self.disturbed |= {e for e in self.best_candidate if e not in self.leaders}

    def _on_elect(self, i: int, ev: TraceEvent) -> None:
        epoch, mid, score = ev.as_int("epoch"), ev.as_int("id"), ev.as_int("score")
        if self.scripted:
            return
        self._open_election(epoch)
        expected = self._score(mid, epoch)
        if expected != score:
            self.fail("candidacy", i, f"module {mid} claimed {score}, replay gives {expected}")
        self.elects.setdefault(epoch, []).append((mid, score))

    def _epoch_order(self, i: int, epoch: int) -> None:
        if epoch < self.last_epoch:
            self.fail("epochs", i, f"epoch {epoch} after {self.last_epoch}")
        self.last_epoch = max(self.last_epoch, epoch)

    def _on_leader(self, i: int, ev: TraceEvent) -> None:
        epoch, mid, score = ev.as_int("epoch"), ev.as_int("id"), ev.as_int("score")
        self._epoch_order(i, epoch)
        if epoch in self.leaders:
            self.fail("election", i, f"second leader in epoch {epoch}")
            return
        self.leaders[epoch] = ev
        if ev.as_coord("pos") != self.config.record(mid).pos:
            self.fail("election", i, f"leader {mid} is not at {ev.raw('pos')}")
        alive = [(m, s) for m, s in self.elects.get(epoch, []) if self.config.record(m).alive]
        if (mid, score) not in alive:
            self.fail("candidacy", i, f"leader {mid} never stood in epoch {epoch}")
        self._open_election(epoch)
        best = self.best_candidate[epoch]
        if epoch not in self.disturbed and best is not None and best != (mid, score):
            self.fail(
                "leader_argmax",
                i,
                f"epoch {epoch}: leader {mid} ({score}), best candidate {best[0]} ({best[1]})",
            )

    def _on_cmd(self, i: int, ev: TraceEvent) -> None:
        epoch, seq = ev.as_int("epoch"), ev.as_int("seq")
        leader, target = ev.as_int("leader"), ev.as_int("target")
        self._epoch_order(i, epoch)
        lead = self.leaders.get(epoch)
        if lead is None or lead.as_int("id") != leader:
            self.fail("commands", i, f"command from {leader}, not the leader of epoch {epoch}")
        targets = self.commanded.setdefault(epoch, set())
        if target in targets:
            self.fail("commands", i, f"module {target} commanded twice in epoch {epoch}")
        targets.add(target)
        if lead is not None:
            center = lead.as_coord("pos")
            pos = self.config.record(target).pos
            if max(abs(pos.x - center.x), abs(pos.y - center.y)) > 1:
                self.fail("commands", i, f"module {target} at {pos} is outside the window")
        self.commands[(epoch, seq)] = ev

    def _on_move(self, i: int, ev: TraceEvent) -> None:
        epoch, seq, mover = ev.as_int("epoch"), ev.as_int("seq"), ev.as_int("mover")
        driver = ev.opt_int("driver")
        leg, legs = ev.as_int("leg"), ev.legs()
        src, dst = ev.as_coord("from"), ev.as_coord("to")
        start = ev.as_int("start")
        self._epoch_order(i, epoch)
        self.moves += 1
        self._disturb_open_elections()
        rec = self.config.record(mover)

        if start < self.last_leg_end:
            self.fail("serialization", i, f"leg starts at {start} before {self.last_leg_end}")
        if ev.at - start != self.motion.leg_ticks:
            self.fail("serialization", i, f"leg took {ev.at - start} ticks")
        self.last_leg_end = ev.at

        if leg == 1:
            if self.open_move is not None:
                self.fail("serialization", i, "maneuver started before the last one ended")
            self.maneuvers += 1
            m = Maneuver.from_legs(mover, legs, driver)
            reason = check_maneuver(self.config, self.grid, m, self.motion)
            if reason is not None:
                self.fail("legality", i, f"{m} refused: {reason.value}")
            self._check_driven(i, rec.status, driver, rec.pos)
            self._check_command(i, epoch, seq, mover, driver)
            # links of the mover break at departure
            for key in [k for k in self.last_delivery if mover in k]:
                del self.last_delivery[key]
        elif self.open_move != (epoch, seq, mover, leg - 1):
            self.fail("legality", i, "leg does not continue the open maneuver")

        if rec.pos != src:
            self.fail("legality", i, f"module {mover} is at {rec.pos}, not {src}")
        if legs[leg - 1].step(src) != dst:
            self.fail("legality", i, f"{src} -> {dst} is not a {legs[leg - 1].name} leg")
        if not self._progress_ok(epoch, seq, src, dst):
            self.fail("progress", i, f"{src} -> {dst} does not approach the objective")

        occupant = self.config.occupant(dst)
        if occupant is not None and occupant.id != mover:
            self.fail("legality", i, f"{dst} is occupied by {occupant.id}")
            return
        self.config = self.config.moved(mover, dst)
        self.sensed.clear()
        last = leg == len(legs)
        adjacency = Adjacency.FOUR if last else Adjacency.EIGHT
        if not is_connected(self.config, adjacency):
            self.fail("connectivity", i, f"configuration split after {mover} reached {dst}")
        self.open_move = None if last else (epoch, seq, mover, leg)

    def _check_driven(
        self, i: int, status: ModuleStatus, driver: int | None, pos: Coord
    ) -> None:
        if status is ModuleStatus.FAILED:
            if driver is None:
                self.fail("driven", i, "failed module moved without a driver")
                return
            d = self.config.record(driver)
            if not d.alive or not adjacent4(d.pos, pos):
                self.fail("driven", i, f"driver {driver} cannot actuate")
        elif driver is not None:
            self.fail("driven", i, "live module moved with a driver")

    def _check_command(
        self, i: int, epoch: int, seq: int, mover: int, driver: int | None
    ) -> None:
        if self.scripted:
            return
        cmd = self.commands.get((epoch, seq))
        if cmd is None:
            self.fail("commands", i, f"no command {seq} in epoch {epoch}")
        elif cmd.as_int("target") != mover or cmd.opt_int("driver") != driver:
            self.fail("commands", i, f"move of {mover} does not match command {seq}")

    def _progress_ok(self, epoch: int, seq: int, src: Coord, dst: Coord) -> bool:
        if self.scripted:
            return True
        cmd = self.commands.get((epoch, seq))
        if cmd is None:
            return True
        objective = cmd.as_coord("objective")
        return manhattan(dst, objective) < manhattan(src, objective)

    def _on_reject(self, i: int, ev: TraceEvent) -> None:
        RejectReason(ev.raw("reason"))

    def _on_round(self, i: int, ev: TraceEvent) -> None:
        epoch = ev.as_int("epoch")
        self._epoch_order(i, epoch)
        if self.scripted:
            return
        lead = self.leaders.get(epoch)
        if lead is None or lead.as_int("id") != ev.as_int("leader"):
            self.fail("commands", i, f"round closed by a module that did not lead epoch {epoch}")

    def _on_msg(self, i: int, ev: TraceEvent) -> None:
        src, dst = ev.as_int("src"), ev.as_int("dst")
        self.msgs += 1
        s, d = self.config.record(src), self.config.record(dst)
        if not s.alive:
            self.fail("failed_sender", i, f"failed module {src} sent a message")
        if not adjacent4(s.pos, d.pos):
            self.fail("locality", i, f"{src} at {s.pos} and {dst} at {d.pos} are not docked")
        deliver = ev.as_int("deliver")
        if deliver <= ev.at:
            self.fail("fifo", i, "delivery not after send")
        key = (min(src, dst), max(src, dst))
        if deliver <= self.last_delivery.get(key, -1):
            self.fail("fifo", i, f"delivery {deliver} overtakes an earlier message on {key}")
        self.last_delivery[key] = deliver

    def _on_msgdrop(self, i: int, ev: TraceEvent) -> None:
        self.drops += 1

    def _on_event(self, i: int, ev: TraceEvent) -> None:
        kind, value = ev.raw("type"), ev.raw("value")
        self._disturb_open_elections()
        if kind == "fail":
            mid = int(value)
            self.config = self.config.with_status(mid, ModuleStatus.FAILED)
            self.sensed.clear()
            for key in [k for k in self.last_delivery if mid in k]:
                del self.last_delivery[key]
        elif kind == "set-output":
            self.grid = self.grid.with_output(ev.as_coord("value"))
            self.sensed.clear()
        else:
            self.fail("header", i, f"unknown scenario event {kind}")

    def _on_goal(self, i: int, ev: TraceEvent) -> None:
        if ev.as_coord("output") != self.grid.output:
            self.fail("goal", i, f"goal names output {ev.raw('output')}, expected {self.grid.output}")
        if not path_exists(self.config, self.grid.input, self.grid.output):
            self.fail("goal", i, "GOAL recorded while input and output are not joined")
        if ev.as_int("motions") != self.moves:
            self.fail("goal", i, f"GOAL counts {ev.raw('motions')} motions, trace has {self.moves}")
        # a pause drops every in-flight message
        self.last_delivery.clear()

    def _on_stuck(self, i: int, ev: TraceEvent) -> None:
        if i != len(self.trace) - 2:
            self.fail("metrics", i, "records follow STUCK")
        self.truncated = ev.raw("reason") == "max_ticks"

    def _on_metrics(self, i: int, ev: TraceEvent) -> None:
        if ev.as_int("motions") != self.moves:
            self.fail("metrics", i, f"motions={ev.raw('motions')} but {self.moves} MOVE records")
        started = ev.as_int("maneuvers")
        if started != self.maneuvers and not (self.truncated and started == self.maneuvers + 1):
            self.fail("metrics", i, f"maneuvers={ev.raw('maneuvers')} but {self.maneuvers} started")
        if ev.as_int("messages_dropped") != self.drops:
            self.fail("metrics", i, f"messages_dropped={ev.raw('messages_dropped')} but {self.drops} MSGDROP")
        if self.log_messages and ev.as_int("messages_sent") < self.msgs:
            self.fail("metrics", i, "fewer messages sent than MSG records")
        if ev.as_int("simtime_ms") != ev.at:
            self.fail("metrics", i, "simtime_ms differs from the METRICS tick")
        reached = path_exists(self.config, self.grid.input, self.grid.output)
        if ev.as_bool("goal_reached") != reached:
            self.fail("goal", i, f"goal_reached={ev.raw('goal_reached')} but replay says {reached}")
        expected_len = chain_length(self.config, self.grid.input, self.grid.output)
        if ev.opt_int("final_path_len") != expected_len:
            self.fail("metrics", i, f"final_path_len={ev.raw('final_path_len')}, replay {expected_len}")
        if self.open_move is not None and not self.truncated:
            self.fail("serialization", i, "run ended mid-maneuver")


def verify_trace(scenario: Scenario, trace: list[TraceEvent]) -> VerifyReport:
    """Replays `trace` over `scenario` and runs every check."""
    report = _Replay(scenario, trace).run()
    if not report.passed:
        logger.warning(
            "verification failed: " + ", ".join(c.name for c in report.failures)
        )
    return report
