"""Subsequence graph construction and path normality scoring."""

from .embedding import extract_subsequences, quantize_to_nodes
from .graph import (
    build_graph,
    classify,
    normality_score,
    score_all,
    score_series,
    write_graph_dump,
    write_score_csv,
)
from .models import AnomalySubgraph, NodeInfo, NodeQuantization, ScoreSeries, SubsequenceGraph

__all__ = [
    "extract_subsequences",
    "quantize_to_nodes",
    "build_graph",
    "normality_score",
    "score_all",
    "score_series",
    "classify",
    "write_graph_dump",
    "write_score_csv",
    "NodeInfo",
    "NodeQuantization",
    "SubsequenceGraph",
    "ScoreSeries",
    "AnomalySubgraph",
]
