# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

import logging
from dataclasses import replace

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
    Start,
    Timeout,
    TimerKind,
)
from dili.agents.election import election_step, maybe_complete, refresh, start_epoch
from dili.agents.planner import assemble_window, best_maneuver, plan_round
from dili.agents.scoring import CandidateScoringModule, ProximityScoringModule
from dili.agents.state import AgentState, Phase
from dili.api.maneuver import Maneuver
from dili.api.message import (
    CommandEnvelope,
    CommandResult,
    LeaderAnnouncement,
    Message,
    MessageKind,
    MoveCommand,
    NewGoal,
    Payload,
    RoundDone,
    WaveTag,
)

logger: logging.Logger = logging.getLogger(__name__)

# flooding radius for commands and their results, in docked hops
HOP_LIMIT = 3

StepOutput = tuple[AgentState, list[Effect]]


class ModuleAgent:
    """
    The controller every module runs. It holds only configuration; the
    per-module state is passed in and returned, so one instance serves the
    whole ensemble.

    Args:
        scoring: candidacy rule for elections.
        round_timeout: ticks without election or round traffic after which a
            module starts a fresh epoch on its own.
        command_timeout: ticks a leader waits for a remote command result
            before treating the command as a no-op.
        hop_limit: flooding radius for MOVE_CMD and CMD_DONE.
    """

    def __init__(
        self,
        scoring: CandidateScoringModule | None = None,
        round_timeout: int = 10_000,
        command_timeout: int = 2_240,
        hop_limit: int = HOP_LIMIT,
    ) -> None:
        self.scoring: CandidateScoringModule = scoring or ProximityScoringModule()
        self.round_timeout = round_timeout
        self.command_timeout = command_timeout
        self.hop_limit = hop_limit

    def step(self, state: AgentState, inp: AgentInput, ctx: AgentContext) -> StepOutput:
        if not state.alive:
            return state, []
        if isinstance(inp, Start):
            return self._start(state, inp.epoch, ctx)
        if isinstance(inp, Timeout):
            return self.on_timeout(state, ctx)
        if isinstance(inp, CommandTimeout):
            return self._on_command_timeout(state, inp, ctx)
        if isinstance(inp, ManeuverOutcome):
            return self._on_outcome(state, inp, ctx)
        if isinstance(inp, NeighborChanged):
            state = refresh(state, ctx)
            effects: list[Effect] = []
            state, leader = maybe_complete(state, effects)
            return self._maybe_lead(state, effects, leader, ctx)
        if isinstance(inp, Deliver):
            return self._on_message(state, inp.message, ctx)
        raise TypeError(f"unsupported agent input {inp!r}")

    # epochs and elections

    def _start(self, state: AgentState, epoch: int, ctx: AgentContext) -> StepOutput:
        state, effects, leader = start_epoch(
            state, epoch, ctx, self.scoring, self.round_timeout
        )
        return self._maybe_lead(state, effects, leader, ctx)

    def _maybe_lead(
        self,
        state: AgentState,
        effects: list[Effect],
        leader: WaveTag | None,
        ctx: AgentContext,
    ) -> StepOutput:
        if leader is None:
            return state, effects
        return self._become_leader(state, leader, effects, ctx)

    def on_timeout(self, state: AgentState, ctx: AgentContext) -> StepOutput:
        if not state.alive or state.phase is Phase.DONE:
            return state, []
        if ctx.now - state.last_activity >= self.round_timeout:
            logger.debug(
                f"module {state.id} idle since {state.last_activity}, "
                f"opening epoch {state.epoch + 1}"
            )
            return self._start(state, state.epoch + 1, ctx)
        return state, [ArmTimer(TimerKind.ROUND, state.last_activity + self.round_timeout)]

    def _on_message(self, state: AgentState, msg: Message, ctx: AgentContext) -> StepOutput:
        kind = msg.kind
        if kind in (MessageKind.WAVE, MessageKind.ECHO):
            state, effects, leader = election_step(
                state, msg, ctx, self.scoring, self.round_timeout
            )
            return self._maybe_lead(state, effects, leader, ctx)
        if kind is MessageKind.LEADER_ANN:
            return self._on_announcement(state, msg, ctx)
        if kind is MessageKind.MOVE_CMD:
            return self._on_command(state, msg, ctx)
        if kind is MessageKind.CMD_DONE:
            return self._on_result(state, msg, ctx)
        if kind is MessageKind.ROUND_DONE:
            return self._on_round_done(state, msg, ctx)
        if kind is MessageKind.NEW_GOAL:
            return self._on_new_goal(state, msg, ctx)
        return replace(state, malformed=state.malformed + 1), []

    def _flood(
        self, state: AgentState, kind: MessageKind, payload: Payload, exclude: int = -1
    ) -> list[Effect]:
        return [Send(n, kind, payload) for n in state.neighbors if n != exclude]

    def _join_epoch(self, state: AgentState, tag: WaveTag, effects: list[Effect]) -> AgentState:
        """Catches up with an epoch whose election this module never saw."""
        effects.append(EnterEpoch(tag.epoch, None))
        return replace(
            state,
            epoch=tag.epoch,
            own_tag=None,
            adopted=tag,
            parent=None,
            pending_acks=frozenset(),
            echoed=True,
            executing=None,
        )

    def _on_announcement(
        self, state: AgentState, msg: Message, ctx: AgentContext
    ) -> StepOutput:
        ann = msg.payload
        if not isinstance(ann, LeaderAnnouncement):
            return replace(state, malformed=state.malformed + 1), []
        key = ("ann", ann.tag.epoch, ann.seq)
        if ann.tag.epoch < state.epoch or key in state.seen:
            return state, []
        state = refresh(state, ctx)
        effects: list[Effect] = []
        if ann.tag.epoch > state.epoch:
            state = self._join_epoch(state, ann.tag, effects)
        phase = state.phase if state.phase is Phase.LEADER else Phase.EXECUTING
        state = replace(
            state, seen=state.seen | {key}, last_activity=ctx.now, phase=phase
        )
        effects += self._flood(state, MessageKind.LEADER_ANN, ann, exclude=msg.src)
        return state, effects

    # rounds, leader side

    def _become_leader(
        self,
        state: AgentState,
        tag: WaveTag,
        effects: list[Effect],
        ctx: AgentContext,
    ) -> StepOutput:
        state = refresh(state, ctx)
        window = assemble_window(state)
        plan = plan_round(
            window, state.goal, state.origin, state.epoch, state.id, ctx.sensor.maneuvers
        )
        logger.debug(
            f"module {state.id} leads epoch {state.epoch} from {state.pos} "
            f"with {len(plan)} commands"
        )
        state = replace(
            state,
            phase=Phase.LEADER,
            window=window,
            plan=tuple(plan),
            cursor=0,
            awaiting=None,
            moved=0,
            last_activity=ctx.now,
            seen=state.seen | {("ann", state.epoch, 0)},
        )
        effects.append(DeclareLeader(tag))
        effects += self._flood(state, MessageKind.LEADER_ANN, LeaderAnnouncement(tag, 0))
        return self._dispatch(state, effects, ctx)

    def _executor_maneuver(self, cmd: MoveCommand, ctx: AgentContext) -> Maneuver | None:
        start = ctx.sensor.sense(cmd.target).pos
        return best_maneuver(
            start, ctx.sensor.maneuvers(cmd.target), cmd.objective, cmd.driver
        )

    def _dispatch(
        self, state: AgentState, effects: list[Effect], ctx: AgentContext
    ) -> StepOutput:
        """Issues commands in plan order until one has to be waited for."""
        while True:
            cmd = state.current_command
            if cmd is None:
                return self._finish_round(state, effects, ctx)
            effects.append(IssueCommand(cmd))
            executor = cmd.driver if cmd.driver is not None else cmd.target
            if executor == state.id:
                m = self._executor_maneuver(cmd, ctx)
                if m is not None:
                    state = replace(state, awaiting=cmd.seq, last_activity=ctx.now)
                    effects.append(RequestManeuver(m, cmd))
                    return state, effects
                state = replace(state, cursor=state.cursor + 1)
                continue
            tag = state.adopted
            assert tag is not None
            state = replace(
                state,
                awaiting=cmd.seq,
                last_activity=ctx.now,
                seen=state.seen
                | {("ann", cmd.epoch, cmd.seq), ("cmd", cmd.epoch, cmd.seq)},
            )
            effects += self._flood(
                state, MessageKind.LEADER_ANN, LeaderAnnouncement(tag, cmd.seq)
            )
            effects += self._flood(
                state, MessageKind.MOVE_CMD, CommandEnvelope(cmd, self.hop_limit)
            )
            effects.append(
                ArmTimer(
                    TimerKind.COMMAND,
                    ctx.now + self.command_timeout,
                    epoch=cmd.epoch,
                    seq=cmd.seq,
                )
            )
            return state, effects

    def _advance(
        self, state: AgentState, moved: bool, ctx: AgentContext
    ) -> StepOutput:
        state = replace(
            state,
            cursor=state.cursor + 1,
            awaiting=None,
            moved=state.moved + int(moved),
            last_activity=ctx.now,
        )
        state = refresh(state, ctx)
        return self._dispatch(state, [], ctx)

    def _finish_round(
        self, state: AgentState, effects: list[Effect], ctx: AgentContext
    ) -> StepOutput:
        effects.append(CompleteRound(state.epoch, len(state.plan), state.moved))
        state = refresh(state, ctx)
        effects += self._flood(
            state, MessageKind.ROUND_DONE, RoundDone(state.epoch + 1, state.id)
        )
        state, more, leader = start_epoch(
            state, state.epoch + 1, ctx, self.scoring, self.round_timeout
        )
        effects += more
        return self._maybe_lead(state, effects, leader, ctx)

    def _leading(self, state: AgentState, epoch: int, seq: int) -> bool:
        return (
            state.phase is Phase.LEADER
            and state.epoch == epoch
            and state.awaiting == seq
        )

    def _on_command_timeout(
        self, state: AgentState, inp: CommandTimeout, ctx: AgentContext
    ) -> StepOutput:
        if not self._leading(state, inp.epoch, inp.seq):
            return state, []
        logger.debug(f"leader {state.id}: command {inp.seq} of epoch {inp.epoch} timed out")
        return self._advance(state, False, ctx)

    def _on_result(self, state: AgentState, msg: Message, ctx: AgentContext) -> StepOutput:
        res = msg.payload
        if not isinstance(res, CommandResult):
            return replace(state, malformed=state.malformed + 1), []
        key = ("done", res.epoch, res.seq)
        if res.epoch < state.epoch or key in state.seen:
            return state, []
        state = replace(state, seen=state.seen | {key}, last_activity=ctx.now)
        if res.leader == state.id and self._leading(state, res.epoch, res.seq):
            return self._advance(state, res.moved, ctx)
        if res.hops_left <= 1:
            return state, []
        state = refresh(state, ctx)
        fwd = replace(res, hops_left=res.hops_left - 1)
        return state, self._flood(state, MessageKind.CMD_DONE, fwd, exclude=msg.src)

    # rounds, executor side

    def _on_command(self, state: AgentState, msg: Message, ctx: AgentContext) -> StepOutput:
        env = msg.payload
        if not isinstance(env, CommandEnvelope):
            return replace(state, malformed=state.malformed + 1), []
        cmd = env.command
        key = ("cmd", cmd.epoch, cmd.seq)
        if cmd.epoch < state.epoch or key in state.seen:
            return state, []
        state = refresh(state, ctx)
        effects: list[Effect] = []
        if cmd.epoch > state.epoch:
            state = self._join_epoch(
                state, WaveTag(cmd.epoch, 0, cmd.leader), effects
            )
        state = replace(state, seen=state.seen | {key}, last_activity=ctx.now)
        executor = cmd.driver if cmd.driver is not None else cmd.target
        if executor == state.id:
            m = self._executor_maneuver(cmd, ctx)
            if m is not None:
                effects.append(RequestManeuver(m, cmd))
                return replace(state, executing=cmd), effects
            return state, effects + self._report(state, cmd, False)
        if env.hops_left > 1:
            fwd = CommandEnvelope(cmd, env.hops_left - 1)
            effects += self._flood(state, MessageKind.MOVE_CMD, fwd, exclude=msg.src)
        return state, effects

    def _report(self, state: AgentState, cmd: MoveCommand, moved: bool) -> list[Effect]:
        result = CommandResult(
            epoch=cmd.epoch,
            seq=cmd.seq,
            leader=cmd.leader,
            target=cmd.target,
            moved=moved,
            hops_left=self.hop_limit,
        )
        return self._flood(state, MessageKind.CMD_DONE, result)

    def _on_outcome(
        self, state: AgentState, inp: ManeuverOutcome, ctx: AgentContext
    ) -> StepOutput:
        if self._leading(state, inp.epoch, inp.seq):
            return self._advance(state, inp.moved, ctx)
        cmd = state.executing
        if cmd is None or (cmd.epoch, cmd.seq) != (inp.epoch, inp.seq):
            return state, []
        state = refresh(state, ctx)
        state = replace(
            state,
            executing=None,
            last_activity=ctx.now,
            seen=state.seen | {("done", cmd.epoch, cmd.seq)},
        )
        return state, self._report(state, cmd, inp.moved)

    # round and goal control

    def _on_round_done(self, state: AgentState, msg: Message, ctx: AgentContext) -> StepOutput:
        done = msg.payload
        if not isinstance(done, RoundDone):
            return replace(state, malformed=state.malformed + 1), []
        if done.epoch <= state.epoch:
            return state, []
        state = refresh(state, ctx)
        effects = self._flood(state, MessageKind.ROUND_DONE, done, exclude=msg.src)
        state, more = self._start(state, done.epoch, ctx)
        return state, effects + more

    def _on_new_goal(self, state: AgentState, msg: Message, ctx: AgentContext) -> StepOutput:
        ng = msg.payload
        if not isinstance(ng, NewGoal):
            return replace(state, malformed=state.malformed + 1), []
        state = replace(state, goal=ng.goal)
        if ng.epoch <= state.epoch and state.phase is not Phase.DONE:
            return state, []
        return self._start(state, max(ng.epoch, state.epoch + 1), ctx)
