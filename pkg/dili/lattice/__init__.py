# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-strict

from .connectivity import (
    Adjacency,
    chain_length,
    components,
    is_connected,
    is_cut_module,
    occupancy_graph,
    path_exists,
)
from .geometry import (
    adjacent4,
    cell_neighbors,
    manhattan,
    moore_window,
    neighbors4,
    target_path,
)


__all__ = [
    "Adjacency",
    "adjacent4",
    "cell_neighbors",
    "chain_length",
    "components",
    "is_connected",
    "is_cut_module",
    "manhattan",
    "moore_window",
    "neighbors4",
    "occupancy_graph",
    "path_exists",
    "target_path",
]
