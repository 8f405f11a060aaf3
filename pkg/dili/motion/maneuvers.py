# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

"""
Legality of slides and corners under the linear-motor motion model.

A leg from p to q = p + d is carried by a flank: an occupied cell beside the
path, perpendicular to d. Conditions are checked in a fixed order and the
first one that fails is reported:

    (a) destination in bounds and free      -> out_of_bounds / occupied
    (b) flank present for the leg           -> no_flank
    (c) mid-corner state 8-connected        -> disconnect
    (d) final state 4-connected             -> disconnect
    (e) actuation by live modules           -> dead_actuator
"""

from typing import Iterable, Iterator

from dili.api.configuration import Configuration, ModuleRecord
from dili.api.coord import Coord, Grid
from dili.api.maneuver import (
    Dir,
    LEG_ORDER,
    Maneuver,
    MotionParams,
    RejectReason,
    SlideRule,
)
from dili.lattice.connectivity import Adjacency, is_connected
from dili.lattice.geometry import adjacent4, cell_neighbors


class IllegalManeuverError(ValueError):
    def __init__(self, maneuver: Maneuver, reason: RejectReason) -> None:
        super().__init__(f"illegal maneuver {maneuver}: {reason.value}")
        self.maneuver = maneuver
        self.reason = reason


def _leg_options() -> list[tuple[Dir, ...]]:
    options: list[tuple[Dir, ...]] = [(d,) for d in LEG_ORDER]
    for first in LEG_ORDER:
        for second in LEG_ORDER:
            if first.is_perpendicular(second):
                options.append((first, second))
    return options


# 4 slides followed by 8 corners, in leg tie-break order
LEG_OPTIONS: list[tuple[Dir, ...]] = _leg_options()


def leg_flanks(
    others: frozenset[Coord], p: Coord, d: Dir, rule: SlideRule
) -> frozenset[Coord]:
    """
    Occupied cells able to carry a leg from p along d.

    Args:
        others: occupied cells, excluding the mover.
        p: cell the leg starts from.
        d: leg direction.
        rule: single flank accepts a stator beside either end of the leg,
            double flank needs stators beside both ends on the same side.
    """
    q = d.step(p)
    flanks: set[Coord] = set()
    for s in d.perpendicular():
        side = [s.step(p), s.step(q)]
        present = [c for c in side if c in others]
        if rule is SlideRule.SINGLE_FLANK:
            flanks.update(present)
        elif len(present) == 2:
            flanks.update(present)
    return frozenset(flanks)


def geometry_check(
    others: frozenset[Coord],
    start: Coord,
    legs: tuple[Dir, ...],
    grid: Grid | None,
    rule: SlideRule,
    others_connected: bool | None = None,
) -> tuple[RejectReason | None, list[frozenset[Coord]]]:
    """
    Conditions (a) to (d) on anonymous cells. Returns the first failure, if
    any, together with the flank cells found for each leg checked.
    """
    flanks_per_leg: list[frozenset[Coord]] = []
    pos = start
    for d in legs:
        q = d.step(pos)
        if grid is not None and not grid.contains(q):
            return RejectReason.OUT_OF_BOUNDS, flanks_per_leg
        if q in others:
            return RejectReason.OCCUPIED, flanks_per_leg
        flanks = leg_flanks(others, pos, d, rule)
        if not flanks:
            return RejectReason.NO_FLANK, flanks_per_leg
        flanks_per_leg.append(flanks)
        pos = q

    if others_connected is None:
        others_connected = is_connected(others)

    if len(legs) == 2:
        mid = legs[0].step(start)
        if others_connected:
            touching = any(n in others for n in cell_neighbors(mid, diagonal=True))
        else:
            touching = is_connected(others | {mid}, Adjacency.EIGHT)
        if not touching:
            return RejectReason.DISCONNECT, flanks_per_leg

    if not any(n in others for n in cell_neighbors(pos)):
        return RejectReason.DISCONNECT, flanks_per_leg
    if not others_connected and not is_connected(others | {pos}):
        return RejectReason.DISCONNECT, flanks_per_leg
    return None, flanks_per_leg


def _alive_cells(config: Configuration, cells: frozenset[Coord]) -> set[Coord]:
    out = set()
    for c in cells:
        rec = config.occupant(c)
        if rec is not None and rec.alive:
            out.add(c)
    return out


def _actuation_check(
    config: Configuration,
    mover: ModuleRecord,
    m: Maneuver,
    flanks_per_leg: list[frozenset[Coord]],
) -> RejectReason | None:
    if mover.alive:
        return None if m.driver is None else RejectReason.DEAD_ACTUATOR
    # failed movers need a live stator on every leg
    alive_flanks = [_alive_cells(config, flanks) for flanks in flanks_per_leg]
    if any(not cells for cells in alive_flanks):
        return RejectReason.DEAD_ACTUATOR
    if m.driver is None or m.driver not in config:
        return RejectReason.DEAD_ACTUATOR
    driver = config.record(m.driver)
    if not driver.alive or not adjacent4(driver.pos, mover.pos):
        return RejectReason.DEAD_ACTUATOR
    if driver.pos not in alive_flanks[0]:
        return RejectReason.DEAD_ACTUATOR
    return None


def check_maneuver(
    config: Configuration,
    grid: Grid | None,
    m: Maneuver,
    params: MotionParams | None = None,
    others_connected: bool | None = None,
) -> RejectReason | None:
    """
    Returns None if `m` is legal in `config`, otherwise the first failed
    condition. Raises ValueError for an unknown mover.
    """
    params = params or MotionParams()
    mover = config.record(m.mover)
    others = config.cells - {mover.pos}
    reason, flanks_per_leg = geometry_check(
        others, mover.pos, m.legs, grid, params.slide_rule, others_connected
    )
    if reason is not None:
        return reason
    return _actuation_check(config, mover, m, flanks_per_leg)


def legal_maneuvers(
    config: Configuration,
    grid: Grid,
    mover: int,
    params: MotionParams | None = None,
) -> frozenset[Maneuver]:
    params = params or MotionParams()
    rec = config.record(mover)
    others = config.cells - {rec.pos}
    others_connected = is_connected(others)
    if rec.alive:
        drivers: list[int | None] = [None]
    else:
        drivers = sorted(
            r.id for r in config if r.alive and adjacent4(r.pos, rec.pos)
        )
    legal = set()
    for legs in LEG_OPTIONS:
        reason, flanks_per_leg = geometry_check(
            others, rec.pos, legs, grid, params.slide_rule, others_connected
        )
        if reason is not None:
            continue
        for driver in drivers:
            m = Maneuver.from_legs(mover, legs, driver)
            if _actuation_check(config, rec, m, flanks_per_leg) is None:
                legal.add(m)
    return frozenset(legal)


def available_maneuvers(
    config: Configuration,
    grid: Grid,
    mover: int,
    params: MotionParams | None = None,
) -> list[Maneuver]:
    """
    What a module senses it may do: the legal maneuvers that also keep the
    live modules in one docked group, so that elections can still reach
    everybody. A maneuver ending on the output cell is kept regardless.
    Sorted by `Maneuver.sort_key`.
    """
    legal = legal_maneuvers(config, grid, mover, params)
    if all(r.alive for r in config) or not is_connected(config.alive_cells):
        return sorted(legal, key=Maneuver.sort_key)
    start = config.record(mover).pos
    kept = []
    for m in legal:
        if m.destination(start) == grid.output:
            kept.append(m)
            continue
        after = apply_maneuver(config, m)
        if is_connected(after.alive_cells):
            kept.append(m)
    return sorted(kept, key=Maneuver.sort_key)


def apply_maneuver(
    config: Configuration,
    m: Maneuver,
    grid: Grid | None = None,
    params: MotionParams | None = None,
    check: bool = False,
) -> Configuration:
    """
    Moves the mover to the end of its legs. With `check=True` the maneuver
    is validated first and IllegalManeuverError names the failed condition;
    an occupied destination is always refused.
    """
    rec = config.record(m.mover)
    if check:
        reason = check_maneuver(config, grid, m, params)
        if reason is not None:
            raise IllegalManeuverError(m, reason)
    dest = m.destination(rec.pos)
    if any(c in config.cells for c in m.waypoints(rec.pos)):
        raise IllegalManeuverError(m, RejectReason.OCCUPIED)
    return config.moved(m.mover, dest)


def cell_successors(
    cells: frozenset[Coord],
    grid: Grid,
    rule: SlideRule,
    anchored: Iterable[Coord] = (),
) -> Iterator[tuple[frozenset[Coord], Coord, tuple[Dir, ...]]]:
    """
    Every state one legal maneuver away from `cells`, with modules treated as
    anonymous and alive. Yields (next_cells, start, legs).
    """
    fixed = set(anchored)
    for start in sorted(cells):
        if start in fixed:
            continue
        others = cells - {start}
        others_connected = is_connected(others)
        for legs in LEG_OPTIONS:
            reason, _ = geometry_check(
                others, start, legs, grid, rule, others_connected
            )
            if reason is None:
                pos = start
                for d in legs:
                    pos = d.step(pos)
                yield others | {pos}, start, legs
