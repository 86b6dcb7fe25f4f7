"""Transition graph construction and path normality scoring."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Dict, Hashable, List, Optional, Tuple, Union

import networkx as nx
import numpy as np
import pandas as pd

from hifwatch.config.s2g_settings import S2gConfig
from hifwatch.errors import ParameterError, PathIndexError
from hifwatch.tracing.logger import get_module_logger
from hifwatch.utils.file_utils import ensure_writable, write_csv

from .embedding import extract_subsequences, quantize_to_nodes
from .models import AnomalySubgraph, NodeInfo, ScoreSeries, SubsequenceGraph

logger = get_module_logger()


def build_graph(
    node_seq,
    nodes: Optional[Dict[Hashable, NodeInfo]] = None,
    series_timestamps: Optional[np.ndarray] = None,
    subseq_len: int = 1,
) -> SubsequenceGraph:
    """Directed graph whose edge weights count consecutive node transitions.

    Args:
        node_seq: Node id of every subsequence, in time order (length >= 2).
        nodes: Optional node attributes (centroid, member count) to attach.
        series_timestamps: Timestamps of the underlying series, used to time scores.
        subseq_len: Subsequence length the node sequence was built with.
    """
    seq = np.asarray(node_seq)
    if seq.ndim != 1 or seq.size < 2:
        raise ParameterError("a node sequence needs at least two entries")
    labels, codes = np.unique(seq, return_inverse=True)
    codes = codes.ravel()
    pairs = np.column_stack([codes[:-1], codes[1:]])
    edge_codes, pair_index, counts = np.unique(pairs, axis=0, return_inverse=True, return_counts=True)

    graph = nx.DiGraph()
    for code, label in enumerate(labels.tolist()):
        info = nodes.get(label) if nodes else None
        if info is None:
            graph.add_node(label, member_count=int(np.count_nonzero(codes == code)))
        else:
            graph.add_node(label, centroid=info.centroid, member_count=info.member_count)
    for (a, b), weight in zip(edge_codes.tolist(), counts.tolist()):
        graph.add_edge(labels[a].item(), labels[b].item(), weight=int(weight))

    degree = np.array([graph.degree(label) for label in labels.tolist()], dtype=float)
    divisor = np.maximum(degree - 1.0, 1.0)
    transition_values = counts[pair_index.ravel()] / divisor[codes[:-1]]
    logger.debug(f"graph: {graph.number_of_nodes()} nodes, {graph.number_of_edges()} edges")
    return SubsequenceGraph(
        graph=graph,
        node_seq=seq,
        transition_values=transition_values,
        subseq_len=int(subseq_len),
        series_timestamps=None if series_timestamps is None else np.asarray(series_timestamps, dtype=float),
    )


def normality_score(g: SubsequenceGraph, start: int, lq: int) -> float:
    """Mean of w(N_j, N_j+1) / max(deg(N_j) - 1, 1) over the ``lq`` transitions from ``start``."""
    if lq < 1:
        raise ParameterError("query length must be >= 1")
    if start < 0 or start + lq > g.transition_values.size:
        raise PathIndexError(
            f"path of {lq} transitions from {start} exits a sequence of {g.node_seq.size} nodes"
        )
    return math.fsum(g.transition_values[start:start + lq].tolist()) / lq


def _position_times(g: SubsequenceGraph, lq: int, n_positions: int) -> Tuple[np.ndarray, np.ndarray]:
    first = np.arange(n_positions)
    last = first + lq + g.subseq_len - 1
    if g.series_timestamps is None:
        return last.astype(float), np.column_stack([first, last])
    return g.series_timestamps[last], np.column_stack([first, last])


def score_all(g: SubsequenceGraph, lq: int) -> ScoreSeries:
    """Normality score at every start with a complete path of ``lq`` transitions."""
    if not 1 <= lq <= g.node_seq.size - 1:
        raise ParameterError(f"query length {lq} needs a sequence of at least {lq + 1} nodes")
    values = g.transition_values.tolist()
    n_positions = len(values) - lq + 1
    scores = np.fromiter(
        (math.fsum(values[i:i + lq]) / lq for i in range(n_positions)),
        dtype=float,
        count=n_positions,
    )
    timestamps, coverage = _position_times(g, lq, n_positions)
    return ScoreSeries(timestamps=timestamps, norm_scores=scores, coverage=coverage, query_len=lq, graph=g)


def score_series(x: np.ndarray, timestamps: np.ndarray, cfg: S2gConfig) -> ScoreSeries:
    """Subsequences, nodes, graph and scores of one series in a single call."""
    subseqs = extract_subsequences(x, cfg.subseq_len_l)
    quantization = quantize_to_nodes(subseqs, cfg)
    graph = build_graph(quantization.node_seq, quantization.nodes, timestamps, cfg.subseq_len_l)
    return score_all(graph, cfg.query_len_lq)


def _runs(mask: np.ndarray) -> List[Tuple[int, int]]:
    """(first, last) index of each maximal run of True."""
    padded = np.concatenate(([False], mask, [False])).astype(np.int8)
    edges = np.flatnonzero(np.diff(padded))
    return [(int(a), int(b) - 1) for a, b in zip(edges[::2], edges[1::2])]


def classify(s: ScoreSeries, theta: float) -> Tuple[np.ndarray, AnomalySubgraph]:
    """Label positions with Norm < theta and collect the anomalous subgraph.

    The subgraph holds every node and edge on an anomalous path; flagged spans
    are the merged series extents of the anomalous paths.
    """
    if not math.isfinite(theta):
        raise ParameterError("threshold must be finite")
    labels = s.norm_scores < theta
    result = AnomalySubgraph()
    if not labels.any():
        return labels, result

    flagged = np.flatnonzero(labels)
    span_end = int(s.coverage[:, 1].max()) + 1
    sample_marks = np.zeros(span_end + 1, dtype=np.int64)
    np.add.at(sample_marks, s.coverage[flagged, 0], 1)
    np.add.at(sample_marks, s.coverage[flagged, 1] + 1, -1)
    sample_mask = np.cumsum(sample_marks)[:span_end] > 0
    g = s.graph
    times = None if g is None else g.series_timestamps
    for first, last in _runs(sample_mask):
        if times is None:
            result.flagged_spans.append((float(first), float(last)))
        else:
            result.flagged_spans.append((float(times[first]), float(times[last])))

    if g is not None:
        lq = s.query_len
        n_transitions = g.transition_values.size
        marks = np.zeros(n_transitions + 1, dtype=np.int64)
        np.add.at(marks, flagged, 1)
        np.add.at(marks, flagged + lq, -1)
        transitions = np.cumsum(marks)[:n_transitions] > 0
        seq = g.node_seq
        idx = np.flatnonzero(transitions)
        result.edges = {(a, b) for a, b in zip(seq[idx].tolist(), seq[idx + 1].tolist())}
        result.nodes = {n for edge in result.edges for n in edge}
    return labels, result


def write_graph_dump(g: SubsequenceGraph, path: Union[str, Path], force: bool = False) -> Path:
    """Write nodes as ``node_id,centroid...,member_count`` and edges as ``src,dst,weight``."""
    target = ensure_writable(path, force)
    lines = ["# nodes", "node_id,centroid,member_count"]
    for node, data in g.graph.nodes(data=True):
        centroid = ",".join(f"{c:.12g}" for c in data.get("centroid", ()))
        fields = [str(node)] + ([centroid] if centroid else []) + [str(data.get("member_count", 0))]
        lines.append(",".join(fields))
    lines += ["# edges", "src,dst,weight"]
    for a, b, data in sorted(g.graph.edges(data=True), key=lambda e: (str(e[0]), str(e[1]))):
        lines.append(f"{a},{b},{data['weight']}")
    target.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return target


def write_score_csv(s: ScoreSeries, path: Union[str, Path], force: bool = False) -> Path:
    return write_csv(pd.DataFrame({"time_s": s.timestamps, "norm_score": s.norm_scores}), path, force=force)
