# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-strict

from .greedy import greedy_baseline, GreedyResult
from .search import (
    iterative_deepening_motion_count,
    optimal_motion_count,
    OracleResult,
    OracleStatus,
    SearchBounds,
    solve,
)
from .verifier import CHECKS, CheckResult, verify_trace, VerifyReport


__all__ = [
    "CHECKS",
    "CheckResult",
    "greedy_baseline",
    "GreedyResult",
    "iterative_deepening_motion_count",
    "optimal_motion_count",
    "OracleResult",
    "OracleStatus",
    "SearchBounds",
    "solve",
    "verify_trace",
    "VerifyReport",
]
