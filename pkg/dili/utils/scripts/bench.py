# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

"""
Runs every scenario of a directory over a range of seeds, one simulation per
process when more than one job is requested, and tabulates the metrics.
"""

import logging
import multiprocessing as mp
from dataclasses import replace
from pathlib import Path

import pandas as pd

from dili.engine.simulation import run
from dili.io.scenario_format import load_scenario

logger: logging.Logger = logging.getLogger(__name__)

BENCH_COLUMNS: list[str] = [
    "scenario",
    "seed",
    "motions",
    "maneuvers",
    "epochs",
    "simtime_ms",
    "goal",
]


def parse_seed_range(text: str) -> list[int]:
    """`A..B` (inclusive) or a single seed."""
    first, sep, last = text.partition("..")
    try:
        lo = int(first)
        hi = int(last) if sep else lo
    except ValueError:
        raise ValueError(f"bad seed range {text!r}, expected A..B") from None
    if hi < lo:
        raise ValueError(f"empty seed range {text!r}")
    return list(range(lo, hi + 1))


def run_one(job: tuple[str, int | None]) -> dict[str, object]:
    """Worker: one (scenario file, seed) pair. A None seed keeps the file's."""
    path, seed = job
    scenario = load_scenario(path)
    params = scenario.params if seed is None else replace(scenario.params, seed=seed)
    _, metrics = run(scenario, params)
    return {
        "scenario": Path(path).stem,
        "seed": params.seed,
        "motions": metrics.motions,
        "maneuvers": metrics.maneuvers,
        "epochs": metrics.epochs,
        "simtime_ms": metrics.simtime_ms,
        "goal": metrics.goal_reached,
    }


def run_bench(
    directory: str | Path, seeds: list[int] | None = None, jobs: int = 1
) -> pd.DataFrame:
    """
    Args:
        directory: folder holding `*.scn` files.
        seeds: seeds to run each scenario with; None uses each file's own seed.
        jobs: worker processes; 1 runs inline.
    """
    files = sorted(str(p) for p in Path(directory).glob("*.scn"))
    if not files:
        raise ValueError(f"no .scn files in {directory}")
    work: list[tuple[str, int | None]] = [
        (f, s) for f in files for s in (seeds if seeds is not None else [None])
    ]
    logger.info(f"bench: {len(work)} runs over {len(files)} scenarios, {jobs} job(s)")
    if jobs > 1:
        with mp.Pool(processes=jobs) as pool:
            rows = pool.map(run_one, work)
    else:
        rows = [run_one(job) for job in work]
    table = pd.DataFrame(rows, columns=BENCH_COLUMNS)
    return table.sort_values(["scenario", "seed"], kind="stable").reset_index(drop=True)


def format_bench(table: pd.DataFrame) -> str:
    lines = []
    for row in table.itertuples(index=False):
        values = row._asdict()
        values["goal"] = "true" if values["goal"] else "false"
        lines.append(" ".join(f"{k}={values[k]}" for k in BENCH_COLUMNS))
    return "".join(line + "\n" for line in lines)
