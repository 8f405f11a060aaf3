# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

"""
Asynchronous leader election by wave extinction with echo.

Every candidate floods a WAVE carrying its tag. A module adopts the greatest
tag it has seen, remembers who brought it as parent and forwards it to its
other docked neighbors. A neighbor answers a tag either with an ECHO (once
its own subtree is done) or by forwarding the same tag back, which counts as
a decline. When nothing is pending the module echoes to its parent; the
initiator whose own tag completes is the leader. Lower tags simply die out.
"""

from dataclasses import replace

from dili.agents.effects import (
    AgentContext,
    ArmTimer,
    Effect,
    EnterEpoch,
    Send,
    TimerKind,
)
from dili.agents.scoring import CandidateScoringModule
from dili.agents.state import AgentState, Phase
from dili.api.message import ElectionPayload, Message, MessageKind, WaveTag

StepResult = tuple[AgentState, list[Effect], WaveTag | None]


def refresh(state: AgentState, ctx: AgentContext) -> AgentState:
    """Re-reads the surroundings; pending peers that are gone stop counting."""
    sensing = ctx.sensor.sense(state.id)
    neighbors = frozenset(sensing.alive_neighbors)
    return replace(
        state,
        pos=sensing.pos,
        moore=sensing.moore,
        neighbors=sensing.alive_neighbors,
        pending_acks=state.pending_acks & neighbors,
    )


def start_epoch(
    state: AgentState,
    epoch: int,
    ctx: AgentContext,
    scoring: CandidateScoringModule,
    round_timeout: int,
) -> StepResult:
    """
    Enters `epoch`: recomputes candidacy and, if a candidate, launches a wave.
    """
    state = refresh(state, ctx)
    state = replace(state, epoch=epoch)
    own = scoring.score(state, ctx.sensor.maneuvers(state.id)) if state.alive else None
    state = replace(
        state,
        phase=Phase.ELECTING,
        own_tag=own,
        adopted=own,
        parent=None,
        pending_acks=frozenset(state.neighbors) if own is not None else frozenset(),
        echoed=False,
        window=None,
        plan=(),
        cursor=0,
        awaiting=None,
        moved=0,
        executing=None,
        last_activity=ctx.now,
        seen=frozenset(k for k in state.seen if k[1] >= epoch),
    )
    effects: list[Effect] = [
        EnterEpoch(epoch, own),
        ArmTimer(TimerKind.ROUND, ctx.now + round_timeout),
    ]
    if own is None:
        return state, effects, None
    for n in state.neighbors:
        effects.append(Send(n, MessageKind.WAVE, ElectionPayload(own)))
    if not state.pending_acks:
        state, leader = _complete(state, effects)
        return state, effects, leader
    return state, effects, None


def _complete(state: AgentState, effects: list[Effect]) -> tuple[AgentState, WaveTag | None]:
    tag = state.adopted
    assert tag is not None
    state = replace(state, echoed=True)
    if tag.id == state.id:
        return state, tag
    assert state.parent is not None
    effects.append(Send(state.parent, MessageKind.ECHO, ElectionPayload(tag)))
    return state, None


def maybe_complete(state: AgentState, effects: list[Effect]) -> tuple[AgentState, WaveTag | None]:
    if (
        state.phase is Phase.ELECTING
        and state.adopted is not None
        and not state.echoed
        and not state.pending_acks
    ):
        return _complete(state, effects)
    return state, None


def election_step(
    state: AgentState,
    msg: Message,
    ctx: AgentContext,
    scoring: CandidateScoringModule,
    round_timeout: int,
) -> StepResult:
    """
    Handles one WAVE or ECHO. Returns the new state, outgoing effects and
    the winning tag when this module has just won.

    Args:
        state: the receiving module's state.
        msg: a WAVE or ECHO addressed to it.
        ctx: current tick and sensing.
        scoring: candidacy rule, used if the message opens a new epoch.
        round_timeout: inactivity bound armed on entering a new epoch.
    """
    if not state.alive:
        return state, [], None
    payload = msg.payload
    if not isinstance(payload, ElectionPayload):
        return replace(state, malformed=state.malformed + 1), [], None
    tag = payload.tag
    if tag.epoch < state.epoch:
        return state, [], None

    effects: list[Effect] = []
    if tag.epoch > state.epoch:
        state, effects, leader = start_epoch(state, tag.epoch, ctx, scoring, round_timeout)
        assert leader is None, "a module with a docked sender has someone to wait for"
    else:
        state = refresh(state, ctx)
    state = replace(state, last_activity=ctx.now)
    if state.phase is not Phase.ELECTING:
        return state, effects, None

    if msg.kind is MessageKind.WAVE:
        if state.adopted is None or tag > state.adopted:
            pending = frozenset(n for n in state.neighbors if n != msg.src)
            state = replace(
                state, adopted=tag, parent=msg.src, pending_acks=pending, echoed=False
            )
            for n in state.neighbors:
                if n != msg.src:
                    effects.append(Send(n, MessageKind.WAVE, ElectionPayload(tag)))
        elif tag == state.adopted:
            state = replace(state, pending_acks=state.pending_acks - {msg.src})
        else:
            return state, effects, None
    elif msg.kind is MessageKind.ECHO:
        if tag != state.adopted:
            return state, effects, None
        state = replace(state, pending_acks=state.pending_acks - {msg.src})
    else:
        return replace(state, malformed=state.malformed + 1), effects, None

    state, leader = maybe_complete(state, effects)
    return state, effects, leader
