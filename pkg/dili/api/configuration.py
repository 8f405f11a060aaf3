# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator

from dili.api.coord import Coord


class ModuleStatus(Enum):
    ALIVE = "alive"
    FAILED = "failed"


@dataclass(frozen=True)
class ModuleRecord:
    id: int
    pos: Coord
    status: ModuleStatus = ModuleStatus.ALIVE

    @property
    def alive(self) -> bool:
        return self.status is ModuleStatus.ALIVE


@dataclass(frozen=True)
class Configuration:
    """
    The physical state of the conveyor: every module with its cell and status.
    Records are kept sorted by id so that equal configurations compare and
    iterate identically.
    """

    modules: tuple[ModuleRecord, ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.modules, key=lambda r: r.id))
        object.__setattr__(self, "modules", ordered)
        ids = [r.id for r in ordered]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate module ids in {ids}")
        if any(i <= 0 for i in ids):
            raise ValueError("module ids must be positive")
        if len({r.pos for r in ordered}) != len(ordered):
            raise ValueError("two modules share a cell")

    @classmethod
    def of(cls, records: Iterable[ModuleRecord]) -> "Configuration":
        return cls(tuple(records))

    @classmethod
    def from_cells(cls, cells: Iterable[Coord]) -> "Configuration":
        """Builds an all-alive configuration with ids 1..n in the given order."""
        return cls(
            tuple(ModuleRecord(i + 1, Coord(*c)) for i, c in enumerate(cells))
        )

    def __len__(self) -> int:
        return len(self.modules)

    def __iter__(self) -> Iterator[ModuleRecord]:
        return iter(self.modules)

    @cached_property
    def _by_id(self) -> dict[int, ModuleRecord]:
        return {r.id: r for r in self.modules}

    @cached_property
    def _by_pos(self) -> dict[Coord, ModuleRecord]:
        return {r.pos: r for r in self.modules}

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(r.id for r in self.modules)

    @cached_property
    def cells(self) -> frozenset[Coord]:
        return frozenset(self._by_pos)

    @cached_property
    def alive_cells(self) -> frozenset[Coord]:
        return frozenset(r.pos for r in self.modules if r.alive)

    def __contains__(self, module_id: object) -> bool:
        return module_id in self._by_id

    def record(self, module_id: int) -> ModuleRecord:
        try:
            return self._by_id[module_id]
        except KeyError:
            raise ValueError(f"unknown module id {module_id}") from None

    def occupant(self, pos: Coord) -> ModuleRecord | None:
        return self._by_pos.get(pos)

    def moved(self, module_id: int, pos: Coord) -> "Configuration":
        rec = self.record(module_id)
        return Configuration(
            tuple(replace(r, pos=pos) if r is rec else r for r in self.modules)
        )

    def with_status(self, module_id: int, status: ModuleStatus) -> "Configuration":
        rec = self.record(module_id)
        return Configuration(
            tuple(replace(r, status=status) if r is rec else r for r in self.modules)
        )
