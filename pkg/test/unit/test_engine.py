# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

import unittest
from dataclasses import replace

from dili.api.coord import Coord
from dili.api.maneuver import MotionParams
from dili.api.scenario import ScenarioEvent
from dili.api.trace import TraceEvent, TraceKind
from dili.engine.event_queue import EventQueue
from dili.engine.simulation import run, run_script, Simulation
from dili.io.scenario_format import load_scenario, parse_script
from dili.io.trace_format import write_trace
from dili.oracle.verifier import verify_trace

from test.utils import make_scenario, SCENARIO_DIR


def _kinds(trace: list[TraceEvent], quiet: bool = True) -> list[TraceKind]:
    """Record kinds, leaving out message traffic when `quiet`."""
    skip = {TraceKind.MSG, TraceKind.MSGDROP} if quiet else set()
    return [ev.kind for ev in trace if ev.kind not in skip]


class TestEventQueue(unittest.TestCase):
    def test_tick_then_insertion_order(self) -> None:
        q: EventQueue[str] = EventQueue()
        q.push(5, "b")
        q.push(1, "a")
        q.push(5, "c")
        self.assertEqual([q.pop().item for _ in range(3)], ["a", "b", "c"])
        self.assertFalse(q)

    def test_remove_if(self) -> None:
        q: EventQueue[int] = EventQueue()
        for i in range(6):
            q.push(10 - i, i)
        self.assertEqual(q.remove_if(lambda i: i % 2 == 0), [4, 2, 0])
        self.assertEqual(len(q), 3)
        self.assertEqual(q.pop().item, 5)


class TestSimulation(unittest.TestCase):
    def test_single_corner_reaches_the_output(self) -> None:
        scenario = load_scenario(SCENARIO_DIR / "liveness" / "tip_corner.scn")
        trace, metrics = run(scenario)
        self.assertEqual(
            _kinds(trace),
            [
                TraceKind.HEADER,
                TraceKind.ELECT,
                TraceKind.LEADER,
                TraceKind.CMD,
                TraceKind.MOVE,
                TraceKind.MOVE,
                TraceKind.GOAL,
                TraceKind.METRICS,
            ],
        )
        leader = next(ev for ev in trace if ev.kind is TraceKind.LEADER)
        self.assertEqual(leader.as_int("id"), 3)
        self.assertEqual(leader.as_coord("pos"), Coord(1, 1))
        self.assertEqual(metrics.motions, 2)
        self.assertEqual(metrics.maneuvers, 1)
        self.assertEqual(metrics.epochs, 1)
        self.assertTrue(metrics.goal_reached)
        self.assertEqual(metrics.final_path_len, 3)
        self.assertTrue(verify_trace(scenario, trace).passed)

    def test_header_keeps_exact_motion_params(self) -> None:
        scenario = load_scenario(SCENARIO_DIR / "liveness" / "tip_corner.scn")
        motion = MotionParams(pitch_mm=1.0005004, speed_mm_s=1.0)
        trace, _ = run(scenario, replace(scenario.params, motion=motion))
        self.assertEqual(trace[0].raw("pitch"), "1.0005004")
        self.assertEqual(trace[0].raw("speed"), "1.0")
        moves = [ev for ev in trace if ev.kind is TraceKind.MOVE]
        self.assertEqual(moves[1].at - moves[0].at, 1001)
        report = verify_trace(scenario, trace)
        self.assertTrue(report.passed, report.render())

    def test_blob_reaches_the_output(self) -> None:
        scenario = load_scenario(SCENARIO_DIR / "liveness" / "blob_east.scn")
        trace, metrics = run(scenario)
        self.assertTrue(metrics.goal_reached)
        self.assertGreaterEqual(metrics.motions, 6)
        self.assertLessEqual(metrics.motions, 18)
        self.assertEqual(trace[-1].kind, TraceKind.METRICS)
        self.assertEqual(trace[-2].kind, TraceKind.GOAL)
        self.assertTrue(verify_trace(scenario, trace).passed)

    def test_same_inputs_same_trace(self) -> None:
        scenario = load_scenario(SCENARIO_DIR / "liveness" / "straight_shot.scn")
        first, _ = run(scenario)
        second, _ = run(scenario)
        self.assertEqual(write_trace(first), write_trace(second))

    def test_params_override_scenario(self) -> None:
        scenario = load_scenario(SCENARIO_DIR / "liveness" / "tip_corner.scn")
        trace, _ = run(scenario, replace(scenario.params, seed=99))
        self.assertEqual(trace[0].as_int("seed"), 99)

    def test_goal_already_holds(self) -> None:
        scenario = load_scenario(SCENARIO_DIR / "demos" / "already_joined.scn")
        trace, metrics = run(scenario)
        self.assertEqual(
            _kinds(trace), [TraceKind.HEADER, TraceKind.GOAL, TraceKind.METRICS]
        )
        self.assertEqual(trace[1].at, 0)
        self.assertEqual((metrics.motions, metrics.epochs), (0, 0))
        self.assertEqual(metrics.final_path_len, 3)

    def test_tick_budget(self) -> None:
        scenario = load_scenario(SCENARIO_DIR / "liveness" / "blob_east.scn")
        trace, metrics = run(scenario, replace(scenario.params, max_ticks=1500))
        self.assertEqual(trace[-2].kind, TraceKind.STUCK)
        self.assertEqual(trace[-2].raw("reason"), "max_ticks")
        self.assertEqual(metrics.simtime_ms, 1500)
        self.assertFalse(metrics.goal_reached)
        self.assertTrue(verify_trace(scenario, trace).passed)

    def test_too_few_modules_is_stuck(self) -> None:
        # two modules can never span four cells
        scenario = make_scenario(5, 3, (0, 0), (4, 0), [(0, 0), (0, 1)])
        trace, metrics = run(scenario)
        self.assertEqual(trace[-2].kind, TraceKind.STUCK)
        self.assertFalse(metrics.goal_reached)
        self.assertIsNone(metrics.final_path_len)
        self.assertTrue(verify_trace(scenario, trace).passed)

    def test_rejects_disconnected_start(self) -> None:
        with self.assertRaises(ValueError):
            Simulation(make_scenario(4, 4, (0, 0), (3, 0), [(0, 0), (2, 2)]))


class TestScenarioEvents(unittest.TestCase):
    def test_output_moves_after_the_first_goal(self) -> None:
        scenario = load_scenario(SCENARIO_DIR / "liveness" / "goal_change.scn")
        trace, metrics = run(scenario)
        goals = [ev for ev in trace if ev.kind is TraceKind.GOAL]
        self.assertEqual([g.as_coord("output") for g in goals], [Coord(2, 0), Coord(0, 2)])
        event = next(ev for ev in trace if ev.kind is TraceKind.EVENT)
        self.assertEqual(event.raw("type"), "set-output")
        self.assertEqual(event.at, 20_000)
        self.assertLess(goals[0].at, event.at)
        self.assertTrue(metrics.goal_reached)
        self.assertTrue(verify_trace(scenario, trace).passed)

    def test_failed_module_goes_silent(self) -> None:
        scenario = load_scenario(SCENARIO_DIR / "liveness" / "fault_band.scn")
        trace, metrics = run(scenario)
        fail = next(ev for ev in trace if ev.kind is TraceKind.EVENT)
        self.assertEqual((fail.raw("type"), fail.raw("value")), ("fail", "2"))
        after = trace[fail.seq + 1 :]
        self.assertFalse(any(ev.kind is TraceKind.MSG and ev.as_int("src") == 2 for ev in after))
        self.assertTrue(metrics.goal_reached)
        self.assertEqual(metrics.motions, 2)
        self.assertTrue(verify_trace(scenario, trace).passed)

    def test_fail_waits_for_the_maneuver_in_flight(self) -> None:
        scenario = load_scenario(SCENARIO_DIR / "liveness" / "tip_corner.scn")
        # the corner runs from shortly after the election until about tick 2100
        scenario = replace(scenario, events=(ScenarioEvent.fail(1500, 2),))
        trace, _ = run(scenario)
        event = next((ev for ev in trace if ev.kind is TraceKind.EVENT), None)
        last_move = [ev for ev in trace if ev.kind is TraceKind.MOVE][-1]
        if event is not None:
            self.assertEqual(event.as_int("requested"), 1500)
            self.assertGreaterEqual(event.at, last_move.at)

    def test_live_module_rides_a_failed_neighbor(self) -> None:
        scenario = make_scenario(
            4,
            2,
            (0, 0),
            (3, 0),
            [(0, 0), (1, 0), (2, 0), (2, 1), (1, 1)],
            events=(ScenarioEvent.fail(0, 3),),
            log_messages=True,
        )
        trace, metrics = run(scenario)
        moves = [ev for ev in trace if ev.kind is TraceKind.MOVE]
        self.assertEqual([ev.as_int("mover") for ev in moves], [4, 4])
        self.assertEqual(moves[-1].as_coord("to"), Coord(3, 0))
        self.assertTrue(metrics.goal_reached)
        report = verify_trace(scenario, trace)
        self.assertTrue(report.passed, report.render())


class TestScript(unittest.TestCase):
    def test_transit_timing(self) -> None:
        scenario = load_scenario(SCENARIO_DIR / "demos" / "transit.scn")
        script = parse_script((SCENARIO_DIR / "demos" / "transit.script").read_text())
        trace, metrics = run_script(scenario, script)
        moves = [ev for ev in trace if ev.kind is TraceKind.MOVE]
        self.assertEqual(len(moves), 10)
        self.assertEqual([ev.as_int("start") for ev in moves], list(range(0, 10_000, 1000)))
        self.assertEqual(moves[-1].as_coord("to"), Coord(10, 1))
        substeps = [ev.int_list("substeps") for ev in moves]
        self.assertEqual(sum(len(s) for s in substeps), 60)
        self.assertEqual(substeps[0], [167, 333, 500, 667, 833, 1000])
        self.assertEqual(metrics.simtime_ms, 10_000)
        self.assertEqual((metrics.motions, metrics.maneuvers), (10, 10))
        self.assertFalse(metrics.goal_reached)
        self.assertIsNone(metrics.final_path_len)
        self.assertNotIn(TraceKind.STUCK, _kinds(trace))
        self.assertTrue(verify_trace(scenario, trace).passed)

    def test_failed_module_is_driven(self) -> None:
        scenario = load_scenario(SCENARIO_DIR / "demos" / "driven.scn")
        script = parse_script((SCENARIO_DIR / "demos" / "driven.script").read_text())
        trace, metrics = run_script(scenario, script)
        reject = next(ev for ev in trace if ev.kind is TraceKind.REJECT)
        self.assertEqual(reject.raw("reason"), "dead_actuator")
        moves = [ev for ev in trace if ev.kind is TraceKind.MOVE]
        self.assertEqual([ev.opt_int("driver") for ev in moves], [2, 2])
        self.assertEqual((metrics.motions, metrics.maneuvers), (2, 1))
        self.assertTrue(metrics.goal_reached)
        report = verify_trace(scenario, trace)
        self.assertTrue(report.passed, report.render())
        self.assertEqual(report.check("election").detail, "skipped")
