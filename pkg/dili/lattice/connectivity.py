# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from enum import Enum
from functools import lru_cache
from typing import Iterable, Union

import networkx as nx

from dili.api.configuration import Configuration
from dili.api.coord import Coord
from dili.lattice.geometry import cell_neighbors

Cells = Union[Configuration, Iterable[Coord]]


class Adjacency(Enum):
    FOUR = "four"
    EIGHT = "eight"


def _cells(occupied: Cells) -> frozenset[Coord]:
    if isinstance(occupied, Configuration):
        return occupied.cells
    return frozenset(occupied)


def occupancy_graph(occupied: Cells, adjacency: Adjacency = Adjacency.FOUR) -> nx.Graph:
    """
    Graph whose nodes are occupied cells, joined when they touch under
    `adjacency`.
    """
    cells = _cells(occupied)
    graph = nx.Graph()
    graph.add_nodes_from(cells)
    diagonal = adjacency is Adjacency.EIGHT
    for c in cells:
        for n in cell_neighbors(c, diagonal=diagonal):
            if n in cells:
                graph.add_edge(c, n)
    return graph


def is_connected(occupied: Cells, adjacency: Adjacency = Adjacency.FOUR) -> bool:
    return _connected(_cells(occupied), adjacency)


# keyed by the cell set; legality sweeps ask about the same sets over and over
@lru_cache(maxsize=1 << 17)
def _connected(cells: frozenset[Coord], adjacency: Adjacency) -> bool:
    if len(cells) <= 1:
        return True
    return nx.is_connected(occupancy_graph(cells, adjacency))


def components(occupied: Cells) -> list[set[Coord]]:
    """4-connected components, largest first, ties broken by smallest cell."""
    comps = list(nx.connected_components(occupancy_graph(occupied)))
    return sorted(comps, key=lambda comp: (-len(comp), min(comp)))


def is_cut_module(config: Configuration, module_id: int) -> bool:
    """
    True iff taking this module away leaves the other occupied cells
    4-disconnected.
    """
    pos = config.record(module_id).pos
    if is_connected(config):
        graph = occupancy_graph(config)
        return pos in set(nx.articulation_points(graph))
    return not is_connected(config.cells - {pos})


def path_exists(occupied: Cells, a: Coord, b: Coord) -> bool:
    cells = _cells(occupied)
    if a not in cells or b not in cells:
        return False
    if a == b:
        return True
    return nx.has_path(occupancy_graph(cells), a, b)


def chain_length(occupied: Cells, a: Coord, b: Coord) -> int | None:
    """Number of modules on the shortest occupied chain from a to b."""
    if not path_exists(occupied, a, b):
        return None
    return nx.shortest_path_length(occupancy_graph(occupied), a, b) + 1
