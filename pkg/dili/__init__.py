# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-strict

from .engine.simulation import run, run_script, Simulation
from .io.scenario_format import parse_scenario
from .oracle.verifier import verify_trace

__all__ = ["parse_scenario", "run", "run_script", "Simulation", "verify_trace"]
