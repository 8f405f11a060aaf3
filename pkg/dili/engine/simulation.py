# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

"""
Deterministic discrete-event loop driving the module agents.

Everything observable is written to the trace as it happens. Events run in
(tick, insertion sequence) order and every random draw comes from the one
seeded generator owned by the transport, so a (scenario, params) pair always
yields the same trace.
"""

import logging
from dataclasses import dataclass, replace
from typing import Sequence, Union

import numpy as np

from dili.agents.effects import (
    AgentContext,
    AgentInput,
    ArmTimer,
    CommandTimeout,
    CompleteRound,
    DeclareLeader,
    Deliver,
    Effect,
    EnterEpoch,
    IssueCommand,
    ManeuverOutcome,
    NeighborChanged,
    RequestManeuver,
    Send,
    Sensor,
    Start,
    Timeout,
    TimerKind,
)
from dili.agents.module_agent import HOP_LIMIT, ModuleAgent
from dili.agents.scoring import get_scoring_module
from dili.agents.state import AgentState, Phase, SensedCell, Sensing
from dili.api.configuration import Configuration, ModuleStatus
from dili.api.maneuver import Maneuver, RejectReason
from dili.api.message import Message, MessageKind, MoveCommand, NewGoal, OPERATOR_ID
from dili.api.metrics import Metrics
from dili.api.scenario import Scenario, ScenarioEvent, ScenarioEventType, SimParams
from dili.api.trace import make_event, TraceEvent, TraceKind
from dili.engine.event_queue import EventQueue
from dili.engine.guard import goal_monitor, guard_maneuver, SafetyViolation
from dili.lattice.connectivity import chain_length, is_connected
from dili.lattice.geometry import adjacent4, moore_window
from dili.motion.maneuvers import available_maneuvers
from dili.motion.timing import substep_offsets
from dili.network.transport import LinkDownError, Transport

logger: logging.Logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Delivery:
    message: Message


@dataclass(frozen=True)
class _LegDone:
    pass


@dataclass(frozen=True)
class _Timer:
    module: int
    kind: TimerKind
    generation: int
    epoch: int
    seq: int


@dataclass(frozen=True)
class _ScenarioItem:
    event: ScenarioEvent


@dataclass(frozen=True)
class _AgentItem:
    module: int
    input: AgentInput


@dataclass(frozen=True)
class _ScriptNext:
    index: int


QueueItem = Union[_Delivery, _LegDone, _Timer, _ScenarioItem, _AgentItem, _ScriptNext]


@dataclass
class _ActiveManeuver:
    maneuver: Maneuver
    executor: int | None
    epoch: int
    seq: int
    leg: int = 0
    leg_start: int = 0


class Simulation(Sensor):
    """
    One run of a scenario. Use `run()` for the distributed algorithm or
    `run_script()` to replay a fixed list of maneuvers without agents.

    Args:
        scenario: grid, initial modules and timed events.
        params: overrides the scenario's own parameters when given.
    """

    def __init__(self, scenario: Scenario, params: SimParams | None = None) -> None:
        self.scenario = scenario
        self.params: SimParams = params if params is not None else scenario.params
        self.grid = scenario.grid
        self.config: Configuration = scenario.configuration
        if not is_connected(self.config):
            raise ValueError("initial configuration is not 4-connected")
        if any(not r.alive for r in self.config):
            raise ValueError("initial modules must all be alive")
        self.motion = self.params.motion
        self.transport = Transport(
            self.params.latency, np.random.default_rng(self.params.seed)
        )
        self.queue: EventQueue[QueueItem] = EventQueue()
        self.trace: list[TraceEvent] = []
        self.metrics = Metrics()
        self.now = 0
        command_timeout = (
            2 * self.motion.leg_ticks + 4 * HOP_LIMIT * self.params.latency.max_delay
        )
        self.agent = ModuleAgent(
            get_scoring_module(self.params.scoring),
            round_timeout=self.params.round_timeout,
            command_timeout=command_timeout,
        )
        self.states: dict[int, AgentState] = {
            r.id: AgentState.initial(r.id, r.pos, self.grid.output, self.grid.input)
            for r in self.config
        }
        self._uid = 0
        self._timer_gen: dict[tuple[int, TimerKind], int] = {}
        self._active: _ActiveManeuver | None = None
        self._moving: int | None = None
        self._deferred: list[ScenarioEvent] = []
        self._pending_events = len(scenario.events)
        self._paused = False
        self._halted = False
        self._goal_holds = False
        self._script: Sequence[Maneuver] = ()
        self._scripted = False
        self._cache: dict[tuple[str, int], object] = {}
        # epoch bookkeeping for stuck detection
        self._max_epoch = -1
        self._entered: dict[int, set[int]] = {}
        self._candidates: dict[int, int] = {}
        self._motions_in: dict[int, int] = {}
        self._finalized: set[int] = set()
        self._idle_run = 0

    # public entry points

    def run(self) -> tuple[list[TraceEvent], Metrics]:
        self._header("distributed")
        self._push_scenario_events()
        if self._check_goal():
            self._on_goal()
        if not self._halted and not self._paused:
            for r in self.config:
                self.queue.push(0, _AgentItem(r.id, Start(0)))
        self._loop()
        return self._finish()

    def run_script(self, maneuvers: Sequence[Maneuver]) -> tuple[list[TraceEvent], Metrics]:
        """Executes `maneuvers` back to back, skipping those the guard refuses."""
        self._scripted = True
        self._script = tuple(maneuvers)
        self._header("script")
        self._push_scenario_events()
        if self._check_goal():
            self._on_goal()
        self.queue.push(0, _ScriptNext(0))
        self._loop()
        return self._finish()

    # Sensor

    def sense(self, module_id: int) -> Sensing:
        key = ("sense", module_id)
        cached = self._cache.get(key)
        if cached is None:
            pos = self.config.record(module_id).pos
            moore = []
            for c in moore_window(pos):
                rec = self.config.occupant(c)
                moore.append(None if rec is None else SensedCell(rec.id, rec.status))
            neighbors = tuple(
                r.id
                for r in self.config
                if r.alive and r.id != self._moving and adjacent4(r.pos, pos)
            )
            cached = Sensing(pos, tuple(moore), neighbors)
            self._cache[key] = cached
        assert isinstance(cached, Sensing)
        return cached

    def maneuvers(self, module_id: int) -> list[Maneuver]:
        key = ("maneuvers", module_id)
        cached = self._cache.get(key)
        if cached is None:
            cached = available_maneuvers(self.config, self.grid, module_id, self.motion)
            self._cache[key] = cached
        assert isinstance(cached, list)
        return cached

    # trace

    def _record(self, kind: TraceKind, /, **values: object) -> None:
        self.trace.append(make_event(self.now, len(self.trace), kind, **values))

    def _header(self, mode: str) -> None:
        p = self.params
        self._record(
            TraceKind.HEADER,
            mode=mode,
            seed=p.seed,
            max_ticks=p.max_ticks,
            round_timeout=p.round_timeout,
            latency=p.latency.describe(),
            slide_rule=p.motion.slide_rule,
            pitch=float(p.motion.pitch_mm),
            speed=float(p.motion.speed_mm_s),
            scoring=p.scoring,
            log_messages=p.log_messages,
        )

    def _drop(self, msg: Message, reason: str) -> None:
        self.metrics.messages_dropped += 1
        self._record(
            TraceKind.MSGDROP, src=msg.src, dst=msg.dst, kind=msg.kind, reason=reason
        )

    # main loop

    def _push_scenario_events(self) -> None:
        for ev in self.scenario.events:
            self.queue.push(ev.at, _ScenarioItem(ev))

    def _loop(self) -> None:
        while self.queue and not self._halted:
            ev = self.queue.pop()
            if ev.at > self.params.max_ticks:
                self.now = self.params.max_ticks
                self._record(TraceKind.STUCK, epoch=max(self._max_epoch, 0), reason="max_ticks")
                logger.info(f"tick budget {self.params.max_ticks} exhausted")
                self._halted = True
                break
            self.now = ev.at
            self._handle(ev.item)

    def _handle(self, item: QueueItem) -> None:
        if isinstance(item, _Delivery):
            msg = item.message
            if not self.transport.deliver(msg):
                return
            self.metrics.messages_delivered += 1
            self._step(msg.dst, Deliver(msg))
        elif isinstance(item, _LegDone):
            self._on_leg_done()
        elif isinstance(item, _Timer):
            if self._timer_gen.get((item.module, item.kind)) != item.generation:
                return
            if item.kind is TimerKind.ROUND:
                self._step(item.module, Timeout())
            else:
                self._step(item.module, CommandTimeout(item.epoch, item.seq))
        elif isinstance(item, _ScenarioItem):
            if self._active is not None:
                self._deferred.append(item.event)
            else:
                self._inject(item.event)
        elif isinstance(item, _AgentItem):
            self._step(item.module, item.input)
        elif isinstance(item, _ScriptNext):
            self._script_step(item.index)

    def _finish(self) -> tuple[list[TraceEvent], Metrics]:
        if not self._halted and not self._scripted and not self._goal_holds:
            self._record(TraceKind.STUCK, epoch=max(self._max_epoch, 0), reason="quiescent")
        m = self.metrics
        m.simtime_ms = self.now
        m.epochs = len(self._entered)
        m.goal_reached = goal_monitor(self.config, self.grid.input, self.grid.output)
        m.final_path_len = (
            chain_length(self.config, self.grid.input, self.grid.output)
            if m.goal_reached
            else None
        )
        self._record(TraceKind.METRICS, **m.as_dict())
        return self.trace, m

    # agents

    def _step(self, module_id: int, inp: AgentInput) -> None:
        state = self.states[module_id]
        if not state.alive or self._halted:
            return
        ctx = AgentContext(self.now, self)
        state, effects = self.agent.step(state, inp, ctx)
        self.states[module_id] = state
        for eff in effects:
            if self._halted:
                return
            self._apply(module_id, eff)

    def _apply(self, module_id: int, eff: Effect) -> None:
        if isinstance(eff, Send):
            self._send(Message(self._next_uid(), module_id, eff.dst, eff.kind, eff.payload, self.now))
        elif isinstance(eff, EnterEpoch):
            self._enter_epoch(module_id, eff)
        elif isinstance(eff, DeclareLeader):
            logger.info(f"epoch {eff.tag.epoch}: module {module_id} leads (score {eff.tag.score})")
            self._record(
                TraceKind.LEADER,
                epoch=eff.tag.epoch,
                id=module_id,
                score=eff.tag.score,
                pos=self.config.record(module_id).pos,
            )
        elif isinstance(eff, IssueCommand):
            cmd = eff.command
            self._record(
                TraceKind.CMD,
                epoch=cmd.epoch,
                seq=cmd.seq,
                leader=cmd.leader,
                target=cmd.target,
                driver=cmd.driver,
                objective=cmd.objective,
            )
        elif isinstance(eff, RequestManeuver):
            self._request(module_id, eff.maneuver, eff.command)
        elif isinstance(eff, CompleteRound):
            self._record(
                TraceKind.ROUND,
                epoch=eff.epoch,
                leader=module_id,
                commands=eff.commands,
                moved=eff.moved,
            )
        elif isinstance(eff, ArmTimer):
            key = (module_id, eff.kind)
            gen = self._timer_gen.get(key, 0) + 1
            self._timer_gen[key] = gen
            self.queue.push(
                max(eff.at, self.now), _Timer(module_id, eff.kind, gen, eff.epoch, eff.seq)
            )

    def _next_uid(self) -> int:
        self._uid += 1
        return self._uid

    def _send(self, msg: Message) -> None:
        self.metrics.messages_sent += 1
        try:
            tick = self.transport.send(msg, self.config, self.now)
        except LinkDownError as e:
            self._drop(msg, e.reason)
            return
        if self.params.log_messages:
            self._record(
                TraceKind.MSG,
                src=msg.src,
                dst=msg.dst,
                kind=msg.kind,
                epoch=msg.epoch,
                deliver=tick,
            )
        self.queue.push(tick, _Delivery(msg))

    def _invalidate_timers(self, module_id: int) -> None:
        for kind in TimerKind:
            key = (module_id, kind)
            self._timer_gen[key] = self._timer_gen.get(key, 0) + 1

    # epochs and stuck detection

    def _enter_epoch(self, module_id: int, eff: EnterEpoch) -> None:
        e = eff.epoch
        if eff.tag is not None:
            self._record(TraceKind.ELECT, epoch=e, id=module_id, score=eff.tag.score)
        if e > self._max_epoch:
            if self._max_epoch >= 0:
                self._finalize(self._max_epoch)
            self._max_epoch = e
            logger.debug(f"epoch {e} opened by module {module_id}")
        self._entered.setdefault(e, set()).add(module_id)
        if eff.tag is not None:
            self._candidates[e] = self._candidates.get(e, 0) + 1
        alive = {r.id for r in self.config if r.alive}
        if (
            not self._halted
            and alive <= self._entered[e]
            and self._candidates.get(e, 0) == 0
        ):
            self._finalize(e)

    def _finalize(self, e: int) -> None:
        if e in self._finalized or self._halted:
            return
        self._finalized.add(e)
        if self._motions_in.get(e, 0) > 0:
            self._idle_run = 0
            return
        self._idle_run += 1
        if self._idle_run >= 2:
            reason = "no_candidates" if self._candidates.get(e, 0) == 0 else "no_progress"
            logger.info(f"stuck at epoch {e}: {reason}")
            self._record(TraceKind.STUCK, epoch=e, reason=reason)
            self._halted = True

    # maneuvers

    def _request(self, executor: int, m: Maneuver, cmd: MoveCommand) -> None:
        if not self._begin(m, cmd.epoch, cmd.seq, executor):
            self.queue.push(
                self.now, _AgentItem(executor, ManeuverOutcome(cmd.epoch, cmd.seq, False))
            )

    def _begin(self, m: Maneuver, epoch: int, seq: int, executor: int | None) -> bool:
        reason = (
            RejectReason.BUSY
            if self._active is not None
            else guard_maneuver(self.config, self.grid, m, self.motion)
        )
        if reason is not None:
            logger.debug(f"rejected {m}: {reason.value}")
            self._record(
                TraceKind.REJECT,
                epoch=epoch,
                seq=seq,
                mover=m.mover,
                driver=m.driver,
                legs=m.legs,
                reason=reason,
            )
            return False
        self.metrics.maneuvers += 1
        self._active = _ActiveManeuver(m, executor, epoch, seq, leg=0, leg_start=self.now)
        self._moving = m.mover
        self._cache.clear()
        self.transport.set_in_transit(m.mover, True)
        for msg in self.transport.undock(m.mover):
            self._drop(msg, "undock")
        self.queue.push(self.now + self.motion.leg_ticks, _LegDone())
        return True

    def _on_leg_done(self) -> None:
        active = self._active
        assert active is not None
        m = active.maneuver
        src = self.config.record(m.mover).pos
        dst = m.legs[active.leg].step(src)
        self.config = self.config.moved(m.mover, dst)
        self.states[m.mover] = replace(self.states[m.mover], pos=dst)
        self._cache.clear()
        self.metrics.motions += 1
        self._motions_in[active.epoch] = self._motions_in.get(active.epoch, 0) + 1
        self._record(
            TraceKind.MOVE,
            epoch=active.epoch,
            seq=active.seq,
            mover=m.mover,
            driver=m.driver,
            leg=active.leg + 1,
            legs=m.legs,
            start=active.leg_start,
            **{"from": src, "to": dst},
            substeps=substep_offsets(self.motion),
        )
        active.leg += 1
        if active.leg < len(m.legs):
            active.leg_start = self.now
            self.queue.push(self.now + self.motion.leg_ticks, _LegDone())
            return
        self._end_maneuver(active)

    def _end_maneuver(self, active: _ActiveManeuver) -> None:
        self._active = None
        self._moving = None
        self._cache.clear()
        self.transport.set_in_transit(active.maneuver.mover, False)
        if not is_connected(self.config):
            raise SafetyViolation(
                f"configuration disconnected after {active.maneuver} at tick {self.now}"
            )
        if self._check_goal():
            self._on_goal()
        while self._deferred and not self._halted:
            self._inject(self._deferred.pop(0))
        if self._halted:
            return
        if self._scripted:
            self.queue.push(self.now, _ScriptNext(active.seq))
        elif not self._paused and active.executor is not None:
            self.queue.push(
                self.now,
                _AgentItem(active.executor, ManeuverOutcome(active.epoch, active.seq, True)),
            )

    def _script_step(self, index: int) -> None:
        if index >= len(self._script):
            return
        if not self._begin(self._script[index], 0, index + 1, None):
            self.queue.push(self.now, _ScriptNext(index + 1))

    # goal handling

    def _check_goal(self) -> bool:
        """True when the goal has just started to hold."""
        holds = goal_monitor(self.config, self.grid.input, self.grid.output)
        fresh = holds and not self._goal_holds
        self._goal_holds = holds
        return fresh

    def _on_goal(self) -> None:
        self._record(
            TraceKind.GOAL,
            epoch=max(self._max_epoch, 0),
            motions=self.metrics.motions,
            path_len=chain_length(self.config, self.grid.input, self.grid.output),
            output=self.grid.output,
        )
        if self._scripted:
            return
        if self._pending_events == 0:
            logger.info(f"goal reached at tick {self.now} after {self.metrics.motions} motions")
            self._halted = True
            return
        logger.info(f"goal reached at tick {self.now}, waiting for scenario events")
        self._pause()

    def _pause(self) -> None:
        self._paused = True
        if self._max_epoch >= 0:
            self._finalized.add(self._max_epoch)
        self._idle_run = 0
        for module_id, state in self.states.items():
            if state.alive:
                self.states[module_id] = replace(state, phase=Phase.DONE)
            self._invalidate_timers(module_id)
        self.queue.remove_if(lambda it: isinstance(it, (_Delivery, _Timer, _AgentItem)))
        for msg in self.transport.drop_all():
            self._drop(msg, "paused")

    # scenario events

    def _inject(self, ev: ScenarioEvent) -> None:
        self._pending_events -= 1
        self._record(
            TraceKind.EVENT,
            type=ev.type,
            value=ev.value,
            requested=ev.at,
            epoch=max(self._max_epoch, 0),
        )
        if ev.type is ScenarioEventType.FAIL:
            assert ev.module is not None
            self._fail(ev.module)
        else:
            assert ev.output is not None
            self._set_output(ev)

    def _fail(self, module_id: int) -> None:
        if not self.config.record(module_id).alive:
            return
        logger.info(f"module {module_id} failed at tick {self.now}")
        self.config = self.config.with_status(module_id, ModuleStatus.FAILED)
        self.states[module_id] = replace(self.states[module_id], status=ModuleStatus.FAILED)
        self._cache.clear()
        self._invalidate_timers(module_id)
        for msg in self.transport.undock(module_id):
            self._drop(msg, "failed_dst" if msg.dst == module_id else "failed_src")
        self.queue.remove_if(
            lambda it: isinstance(it, _AgentItem) and it.module == module_id
        )
        if self._paused or self._scripted:
            return
        pos = self.config.record(module_id).pos
        for r in self.config:
            if r.alive and adjacent4(r.pos, pos):
                self.queue.push(self.now, _AgentItem(r.id, NeighborChanged()))

    def _set_output(self, ev: ScenarioEvent) -> None:
        assert ev.output is not None
        self.grid = self.grid.with_output(ev.output)
        self._cache.clear()
        # the operator broadcast reaches every module at once
        for module_id, state in self.states.items():
            self.states[module_id] = replace(state, goal=ev.output)
        self._goal_holds = False
        if self._check_goal():
            self._on_goal()
            return
        if self._scripted:
            return
        epoch = self._max_epoch + 1
        self._paused = False
        for r in self.config:
            if not r.alive:
                continue
            msg = Message(
                self._next_uid(),
                OPERATOR_ID,
                r.id,
                MessageKind.NEW_GOAL,
                NewGoal(ev.output, epoch),
                self.now,
            )
            self.queue.push(self.now, _AgentItem(r.id, Deliver(msg)))


def run(scenario: Scenario, params: SimParams | None = None) -> tuple[list[TraceEvent], Metrics]:
    return Simulation(scenario, params).run()


def run_script(
    scenario: Scenario, maneuvers: Sequence[Maneuver], params: SimParams | None = None
) -> tuple[list[TraceEvent], Metrics]:
    return Simulation(scenario, params).run_script(maneuvers)
