"""Types of the subsequence-graph stage."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Set, Tuple

import networkx as nx
import numpy as np


@dataclass(frozen=True)
class NodeInfo:
    centroid: Tuple[float, ...]
    member_count: int
    cell: Tuple[int, ...] = ()


@dataclass
class NodeQuantization:
    """Grid quantization of embedded subsequences.

    Nodes are the occupied cells of a regular grid over the bounding box of
    the embedded points; ids are assigned in order of first occurrence.
    """

    node_seq: np.ndarray
    nodes: Dict[int, NodeInfo]
    points: np.ndarray
    components: np.ndarray
    column_mean: np.ndarray
    grid_lo: np.ndarray
    grid_width: np.ndarray
    bins_per_axis: int
    _cell_ids: Dict[int, int] = field(default_factory=dict, repr=False)

    def cells(self, points: np.ndarray) -> np.ndarray:
        """Flat grid-cell index of each embedded point."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        coords = np.floor((points - self.grid_lo) / self.grid_width).astype(np.int64)
        np.clip(coords, 0, self.bins_per_axis - 1, out=coords)
        return np.ravel_multi_index(coords.T, (self.bins_per_axis,) * coords.shape[1])

    def assign(self, points: np.ndarray) -> np.ndarray:
        """Node id of each embedded point; -1 for points in unoccupied cells."""
        return np.array([self._cell_ids.get(int(c), -1) for c in self.cells(points)], dtype=np.int64)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def member_counts(self) -> np.ndarray:
        return np.array([self.nodes[n].member_count for n in sorted(self.nodes)])


@dataclass
class SubsequenceGraph:
    """Transition graph over the node sequence of consecutive subsequences.

    Edge weight w(a, b) counts the positions j with node_seq[j] = a and
    node_seq[j+1] = b. The degree of a node is in-degree plus out-degree of
    the directed graph, a self-loop contributing 2.
    """

    graph: nx.DiGraph
    node_seq: np.ndarray
    transition_values: np.ndarray
    subseq_len: int = 1
    series_timestamps: Optional[np.ndarray] = None

    @property
    def nodes(self) -> Dict[Hashable, dict]:
        return dict(self.graph.nodes(data=True))

    @property
    def edges(self) -> Dict[Tuple[Hashable, Hashable], int]:
        return {(a, b): d["weight"] for a, b, d in self.graph.edges(data=True)}

    @property
    def total_weight(self) -> int:
        return int(sum(d["weight"] for _, _, d in self.graph.edges(data=True)))

    def degree(self, node: Hashable) -> int:
        return int(self.graph.degree(node))

    def weight(self, a: Hashable, b: Hashable) -> int:
        data = self.graph.get_edge_data(a, b)
        return 0 if data is None else int(data["weight"])


@dataclass
class ScoreSeries:
    """Normality score per query start.

    ``coverage[i]`` is the (first, last) sample index of the series span the
    query path at position i covers; ``timestamps[i]`` is the time of the last one.
    """

    timestamps: np.ndarray
    norm_scores: np.ndarray
    coverage: np.ndarray
    query_len: int = 1
    graph: Optional[SubsequenceGraph] = field(default=None, repr=False)

    def __len__(self) -> int:
        return self.norm_scores.size


@dataclass
class AnomalySubgraph:
    nodes: Set[Hashable] = field(default_factory=set)
    edges: Set[Tuple[Hashable, Hashable]] = field(default_factory=set)
    flagged_spans: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.nodes
