# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

import unittest

from parameterized import parameterized

from dili.api.coord import Coord, Grid
from dili.api.maneuver import (
    Dir,
    Maneuver,
    ManeuverKind,
    MotionParams,
    RejectReason,
    SlideRule,
)
from dili.motion.maneuvers import (
    apply_maneuver,
    available_maneuvers,
    check_maneuver,
    IllegalManeuverError,
    legal_maneuvers,
    LEG_OPTIONS,
)
from dili.motion.timing import maneuver_duration, substep_offsets, substep_schedule

from test.utils import brute_force_moves, connected_shapes, make_config


class TestManeuverShape(unittest.TestCase):
    def test_corner_needs_perpendicular_legs(self) -> None:
        with self.assertRaises(ValueError):
            Maneuver(1, ManeuverKind.CORNER, (Dir.E, Dir.W))
        with self.assertRaises(ValueError):
            Maneuver(1, ManeuverKind.SLIDE, (Dir.E, Dir.N))
        with self.assertRaises(ValueError):
            Maneuver.slide(1, Dir.E, driver=1)

    def test_waypoints(self) -> None:
        m = Maneuver.corner(1, Dir.E, Dir.S)
        self.assertEqual(m.waypoints(Coord(1, 1)), [Coord(2, 1), Coord(2, 0)])
        self.assertEqual(m.motions, 2)

    def test_leg_options_are_slides_then_corners(self) -> None:
        self.assertEqual(len(LEG_OPTIONS), 12)
        self.assertEqual(LEG_OPTIONS[:4], [(Dir.E,), (Dir.N,), (Dir.S,), (Dir.W,)])


class TestLegality(unittest.TestCase):
    def setUp(self) -> None:
        self.grid = Grid(4, 3, Coord(0, 0), Coord(3, 0))
        # a rail along the bottom with one module riding on top
        self.config = make_config([(0, 0), (1, 0), (2, 0), (0, 1)])

    def test_slide_along_rail(self) -> None:
        self.assertIsNone(check_maneuver(self.config, self.grid, Maneuver.slide(4, Dir.E)))

    @parameterized.expand(
        [
            ("out_of_bounds", Maneuver.slide(4, Dir.W), RejectReason.OUT_OF_BOUNDS),
            ("occupied", Maneuver.slide(4, Dir.S), RejectReason.OCCUPIED),
            ("no_flank", Maneuver.corner(4, Dir.N, Dir.E), RejectReason.NO_FLANK),
            ("onto_the_rider", Maneuver.slide(1, Dir.N), RejectReason.OCCUPIED),
            ("cut_module", Maneuver.slide(2, Dir.N), RejectReason.DISCONNECT),
        ]
    )
    def test_first_failed_condition_is_reported(
        self, _name: str, m: Maneuver, reason: RejectReason
    ) -> None:
        self.assertEqual(check_maneuver(self.config, self.grid, m), reason)

    def test_corner_around_the_rail_end(self) -> None:
        grid = Grid(4, 2, Coord(0, 0), Coord(2, 0))
        config = make_config([(0, 0), (1, 0), (1, 1)])
        self.assertIsNone(check_maneuver(config, grid, Maneuver.corner(3, Dir.E, Dir.S)))
        # sliding off the end leaves the mover hanging
        self.assertEqual(
            check_maneuver(config, grid, Maneuver.slide(3, Dir.E)), RejectReason.DISCONNECT
        )

    def test_small_shapes(self) -> None:
        grid = Grid(4, 4, Coord(1, 0), Coord(3, 3))
        tromino = make_config([(0, 0), (1, 0), (1, 1)])
        self.assertIsNone(check_maneuver(tromino, grid, Maneuver.slide(1, Dir.N)))
        square = make_config([(0, 0), (1, 0), (0, 1), (1, 1)])
        self.assertEqual(
            check_maneuver(square, grid, Maneuver.slide(4, Dir.E)), RejectReason.DISCONNECT
        )
        corner = Maneuver.corner(4, Dir.E, Dir.S)
        self.assertIsNone(check_maneuver(square, grid, corner))
        self.assertEqual(apply_maneuver(square, corner).record(4).pos, Coord(2, 0))

    def test_double_flank_needs_both_stators(self) -> None:
        params = MotionParams(slide_rule=SlideRule.DOUBLE_FLANK)
        self.assertIsNone(
            check_maneuver(self.config, self.grid, Maneuver.slide(4, Dir.E), params)
        )
        config = make_config([(0, 0), (1, 0), (1, 1)])
        grid = Grid(4, 2, Coord(0, 0), Coord(2, 0))
        self.assertEqual(
            check_maneuver(config, grid, Maneuver.corner(3, Dir.E, Dir.S), params),
            RejectReason.NO_FLANK,
        )

    def test_failed_mover_needs_a_driver(self) -> None:
        grid = Grid(3, 2, Coord(0, 0), Coord(2, 0))
        config = make_config([(0, 0), (1, 0), (1, 1)], failed=[3])
        self.assertEqual(
            check_maneuver(config, grid, Maneuver.corner(3, Dir.E, Dir.S)),
            RejectReason.DEAD_ACTUATOR,
        )
        self.assertIsNone(check_maneuver(config, grid, Maneuver.corner(3, Dir.E, Dir.S, 2)))
        # a driver must not be given to a live mover
        alive = make_config([(0, 0), (1, 0), (1, 1)])
        self.assertEqual(
            check_maneuver(alive, grid, Maneuver.corner(3, Dir.E, Dir.S, 2)),
            RejectReason.DEAD_ACTUATOR,
        )

    def test_live_mover_rides_failed_flanks(self) -> None:
        config = make_config([(0, 0), (1, 0), (2, 0), (0, 1)], failed=[1, 2])
        self.assertIsNone(check_maneuver(config, self.grid, Maneuver.slide(4, Dir.E)))
        # closing the chain around a failed module at (2,0)
        grid = Grid(4, 2, Coord(0, 0), Coord(3, 0))
        config = make_config([(0, 0), (1, 0), (2, 0), (2, 1), (1, 1)], failed=[3])
        self.assertIsNone(check_maneuver(config, grid, Maneuver.corner(4, Dir.E, Dir.S)))
        self.assertIn(Maneuver.corner(4, Dir.E, Dir.S), legal_maneuvers(config, grid, 4))

    def test_failed_mover_needs_live_flanks(self) -> None:
        config = make_config([(0, 0), (1, 0), (2, 0), (0, 1)], failed=[1, 2, 4])
        self.assertEqual(
            check_maneuver(config, self.grid, Maneuver.slide(4, Dir.E, driver=1)),
            RejectReason.DEAD_ACTUATOR,
        )

    def test_driver_must_flank_the_first_leg(self) -> None:
        grid = Grid(3, 3, Coord(0, 0), Coord(0, 2))
        config = make_config([(0, 0), (0, 1), (1, 0), (1, 1)], failed=[4])
        self.assertIsNone(check_maneuver(config, grid, Maneuver.corner(4, Dir.N, Dir.W, 2)))
        self.assertEqual(
            check_maneuver(config, grid, Maneuver.corner(4, Dir.N, Dir.W, 3)),
            RejectReason.DEAD_ACTUATOR,
        )

    def test_apply_with_check(self) -> None:
        moved = apply_maneuver(self.config, Maneuver.slide(4, Dir.E), self.grid, check=True)
        self.assertEqual(moved.record(4).pos, Coord(1, 1))
        with self.assertRaises(IllegalManeuverError) as ctx:
            apply_maneuver(self.config, Maneuver.slide(2, Dir.N), self.grid, check=True)
        self.assertEqual(ctx.exception.reason, RejectReason.DISCONNECT)

    def test_available_maneuvers_keep_live_modules_together(self) -> None:
        # the failed module at (2,0) is the only bridge once 3 leaves (1,1)
        grid = Grid(4, 4, Coord(0, 0), Coord(3, 0))
        config = make_config([(0, 0), (1, 0), (1, 1), (2, 0)], failed=[4])
        legal = legal_maneuvers(config, grid, 3)
        self.assertIn(Maneuver.slide(3, Dir.E), legal)
        self.assertNotIn(Maneuver.slide(3, Dir.E), available_maneuvers(config, grid, 3))

    def test_available_maneuvers_sorted(self) -> None:
        ms = available_maneuvers(self.config, self.grid, 4)
        self.assertEqual(ms, sorted(ms, key=Maneuver.sort_key))


class TestLegalityMatchesBruteForce(unittest.TestCase):
    @parameterized.expand([(SlideRule.SINGLE_FLANK,), (SlideRule.DOUBLE_FLANK,)])
    def test_every_small_shape(self, rule: SlideRule) -> None:
        grid = Grid(4, 4, Coord(0, 0), Coord(3, 3))
        params = MotionParams(slide_rule=rule)
        checked = 0
        for size in (2, 3, 4):
            for shape in connected_shapes(grid, size):
                config = make_config(sorted(shape))
                for rec in config:
                    got = {m.legs for m in legal_maneuvers(config, grid, rec.id, params)}
                    want = brute_force_moves(config, grid, rec.id, rule)
                    self.assertEqual(got, want, f"{sorted(shape)} mover {rec.id}")
                    checked += 1
        self.assertGreater(checked, 500)

    @parameterized.expand([(SlideRule.SINGLE_FLANK,), (SlideRule.DOUBLE_FLANK,)])
    def test_slides_can_be_undone(self, rule: SlideRule) -> None:
        grid = Grid(4, 4, Coord(0, 0), Coord(3, 3))
        params = MotionParams(slide_rule=rule)
        undone = 0
        for size in (2, 3, 4, 5):
            for shape in connected_shapes(grid, size):
                config = make_config(sorted(shape))
                for rec in config:
                    for m in legal_maneuvers(config, grid, rec.id, params):
                        if m.kind is not ManeuverKind.SLIDE:
                            continue
                        after = apply_maneuver(config, m)
                        back = Maneuver.slide(rec.id, m.legs[0].opposite())
                        self.assertIsNone(check_maneuver(after, grid, back, params), str(m))
                        self.assertEqual(apply_maneuver(after, back), config)
                        undone += 1
        self.assertGreater(undone, 100)

    def test_failed_neighbors_do_not_restrict_live_movers(self) -> None:
        grid = Grid(4, 4, Coord(0, 0), Coord(3, 3))
        for size in (3, 4):
            for shape in connected_shapes(grid, size):
                for mover in range(1, size + 1):
                    for broken in range(1, size + 1):
                        if broken == mover:
                            continue
                        config = make_config(sorted(shape), failed=[broken])
                        got = {m.legs for m in legal_maneuvers(config, grid, mover)}
                        want = brute_force_moves(config, grid, mover, SlideRule.SINGLE_FLANK)
                        self.assertEqual(got, want, f"{sorted(shape)} mover {mover}")


class TestTiming(unittest.TestCase):
    def test_default_leg_is_one_second(self) -> None:
        self.assertEqual(MotionParams().leg_ticks, 1000)
        self.assertEqual(MotionParams(pitch_mm=12.0, speed_mm_s=24.0).leg_ticks, 500)

    @parameterized.expand([(16.0, 63), (32.0, 31), (1.0, 1000), (3000.0, 1)])
    def test_halves_round_up(self, speed: float, ticks: int) -> None:
        self.assertEqual(MotionParams(pitch_mm=1.0, speed_mm_s=speed).leg_ticks, ticks)

    def test_six_substeps_per_leg(self) -> None:
        self.assertEqual(substep_offsets(MotionParams()), [167, 333, 500, 667, 833, 1000])

    def test_corner_schedule(self) -> None:
        m = Maneuver.corner(1, Dir.E, Dir.S)
        params = MotionParams()
        self.assertEqual(maneuver_duration(m, params), 2000)
        schedule = substep_schedule(m, params, start=500)
        self.assertEqual(schedule[0][0], 667)
        self.assertEqual(schedule[1][-1], 2500)
