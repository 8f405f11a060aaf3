# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

"""
End-to-end runs: random blobs for the safety properties, the checked-in
scenarios for liveness and the fault demos.
"""

import unittest
from dataclasses import replace

from dili.api.maneuver import MotionParams, SlideRule
from dili.api.scenario import Scenario
from dili.api.trace import TraceEvent, TraceKind
from dili.engine.simulation import run
from dili.io.scenario_format import load_scenario
from dili.io.trace_format import write_trace
from dili.oracle.search import optimal_motion_count
from dili.oracle.verifier import verify_trace

from test.utils import random_blob_scenario, SCENARIO_DIR

SAFETY_SEEDS = range(1, 101)


def _blob(seed: int, **params: object) -> Scenario:
    return random_blob_scenario(
        seed,
        modules=6 + (seed * 7) % 35,
        width=8 + seed % 13,
        height=8 + (seed // 13) % 13,
        log_messages=True,
        **params,
    )


def _leaders_are_best(trace: list[TraceEvent]) -> bool:
    elects: dict[int, list[tuple[int, int]]] = {}
    for ev in trace:
        if ev.kind is TraceKind.ELECT:
            elects.setdefault(ev.as_int("epoch"), []).append((ev.as_int("score"), -ev.as_int("id")))
        elif ev.kind is TraceKind.LEADER:
            best = max(elects[ev.as_int("epoch")])
            if best != (ev.as_int("score"), -ev.as_int("id")):
                return False
    return True


class TestSafety(unittest.TestCase):
    def test_random_blobs(self) -> None:
        for seed in SAFETY_SEEDS:
            with self.subTest(seed=seed):
                scenario = _blob(seed)
                trace, metrics = run(scenario)
                report = verify_trace(scenario, trace)
                self.assertTrue(report.passed, report.render())
                self.assertIn(trace[-2].kind, (TraceKind.GOAL, TraceKind.STUCK))
                self.assertEqual(metrics.goal_reached, trace[-2].kind is TraceKind.GOAL)
                self.assertTrue(_leaders_are_best(trace))

    def test_random_blobs_double_flank(self) -> None:
        for seed in SAFETY_SEEDS[::5]:
            with self.subTest(seed=seed):
                scenario = _blob(seed, motion=MotionParams(slide_rule=SlideRule.DOUBLE_FLANK))
                trace, _ = run(scenario)
                self.assertEqual(trace[0].raw("slide_rule"), "double")
                self.assertTrue(verify_trace(scenario, trace).passed)

    def test_replay_is_exact(self) -> None:
        for seed in (3, 17, 42):
            scenario = _blob(seed)
            self.assertEqual(write_trace(run(scenario)[0]), write_trace(run(scenario)[0]))


class TestLiveness(unittest.TestCase):
    def test_every_liveness_scenario(self) -> None:
        paths = sorted((SCENARIO_DIR / "liveness").glob("*.scn"))
        self.assertEqual(len(paths), 10)
        for path in paths:
            with self.subTest(scenario=path.stem):
                scenario = load_scenario(path)
                trace, metrics = run(scenario)
                self.assertTrue(metrics.goal_reached)
                report = verify_trace(scenario, trace)
                self.assertTrue(report.passed, report.render())
                if not scenario.events:
                    optimum = optimal_motion_count(scenario)
                    assert optimum is not None
                    self.assertGreaterEqual(metrics.motions, optimum)

    def test_other_seeds_still_reach_the_goal(self) -> None:
        for path in sorted((SCENARIO_DIR / "liveness").glob("*.scn")):
            scenario = load_scenario(path)
            for seed in (101, 202):
                with self.subTest(scenario=path.stem, seed=seed):
                    _, metrics = run(scenario, replace(scenario.params, seed=seed))
                    self.assertTrue(metrics.goal_reached)


class TestFaults(unittest.TestCase):
    def test_leader_fails_mid_round(self) -> None:
        scenario = load_scenario(SCENARIO_DIR / "demos" / "leader_failure.scn")
        trace, metrics = run(scenario)
        report = verify_trace(scenario, trace)
        self.assertTrue(report.passed, report.render())
        fail = next(ev for ev in trace if ev.kind is TraceKind.EVENT)
        self.assertGreaterEqual(fail.at, 1000)
        later = trace[fail.seq + 1 :]
        self.assertFalse(any(ev.kind is TraceKind.MSG and ev.as_int("src") == 4 for ev in later))
        self.assertFalse(any(ev.kind is TraceKind.LEADER and ev.as_int("id") == 4 for ev in later))
        self.assertIn(trace[-2].kind, (TraceKind.GOAL, TraceKind.STUCK))
        self.assertEqual(trace[-1].kind, TraceKind.METRICS)
