# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-strict

from .effects import AgentContext, Sensor
from .election import election_step, start_epoch
from .module_agent import HOP_LIMIT, ModuleAgent
from .planner import assemble_window, best_maneuver, plan_round
from .scoring import (
    candidate_score,
    CandidateScoringModule,
    get_scoring_module,
    ProximityScoringModule,
    SCORING_MODULES,
    UniformScoringModule,
)
from .state import AgentState, Phase, SensedCell, Sensing, WindowMap


__all__ = [
    "AgentContext",
    "AgentState",
    "assemble_window",
    "best_maneuver",
    "candidate_score",
    "CandidateScoringModule",
    "election_step",
    "get_scoring_module",
    "HOP_LIMIT",
    "ModuleAgent",
    "Phase",
    "plan_round",
    "ProximityScoringModule",
    "SCORING_MODULES",
    "SensedCell",
    "Sensing",
    "Sensor",
    "start_epoch",
    "UniformScoringModule",
    "WindowMap",
]
