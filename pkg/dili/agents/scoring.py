# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from abc import ABC, abstractmethod
from typing import Iterable

from dili.agents.state import AgentState
from dili.api.maneuver import Maneuver
from dili.api.message import WaveTag
from dili.lattice.geometry import manhattan


class CandidateScoringModule(ABC):
    """
    An abstract interface for candidacy. A module may run for leader only if
    it is alive, not anchored on the input or output cell, and owns a
    maneuver that brings it strictly closer to the goal; the scoring module
    decides how good such a candidate is.
    """

    name: str = "abstract"

    @abstractmethod
    def quality(self, state: AgentState) -> int:
        pass

    def score(self, state: AgentState, legal: Iterable[Maneuver]) -> WaveTag | None:
        if not state.alive or state.anchored:
            return None
        here = manhattan(state.pos, state.goal)
        if not any(manhattan(m.destination(state.pos), state.goal) < here for m in legal):
            return None
        return WaveTag(state.epoch, self.quality(state), state.id)


class ProximityScoringModule(CandidateScoringModule):
    """
    Modules nearer the output are better candidates.
    """

    name: str = "proximity"

    def quality(self, state: AgentState) -> int:
        return -manhattan(state.pos, state.goal)


class UniformScoringModule(CandidateScoringModule):
    """
    Every candidate scores the same; the smallest id wins.
    """

    name: str = "uniform"

    def quality(self, state: AgentState) -> int:
        return 0


SCORING_MODULES: dict[str, type[CandidateScoringModule]] = {
    ProximityScoringModule.name: ProximityScoringModule,
    UniformScoringModule.name: UniformScoringModule,
}


def get_scoring_module(name: str) -> CandidateScoringModule:
    try:
        return SCORING_MODULES[name]()
    except KeyError:
        raise ValueError(
            f"unknown scoring {name!r}, expected one of {sorted(SCORING_MODULES)}"
        ) from None


def candidate_score(
    state: AgentState,
    legal: Iterable[Maneuver],
    scoring: CandidateScoringModule | None = None,
) -> WaveTag | None:
    return (scoring or ProximityScoringModule()).score(state, legal)
