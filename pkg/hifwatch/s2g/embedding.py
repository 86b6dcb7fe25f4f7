"""Subsequence extraction and grid quantization of the subsequence embedding."""

from __future__ import annotations

from typing import Dict

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from sklearn.decomposition import PCA

from hifwatch.config.s2g_settings import S2gConfig
from hifwatch.errors import ParameterError
from hifwatch.tracing.logger import get_module_logger

from .models import NodeInfo, NodeQuantization

logger = get_module_logger()


def extract_subsequences(x: np.ndarray, l: int) -> np.ndarray:
    """Read-only (N-l+1) × l view of every length-``l`` window of ``x``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ParameterError("series must be one-dimensional")
    if not 1 <= l <= x.size:
        raise ParameterError(f"subsequence length {l} must lie in [1, {x.size}]")
    return sliding_window_view(x, l)


def principal_components(centered: np.ndarray, embed_dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Column mean and the top ``embed_dim`` principal directions (l × embed_dim).

    Each direction is signed so its largest-magnitude entry is positive.
    """
    embed_dim = min(embed_dim, *centered.shape)
    pca = PCA(n_components=embed_dim, svd_solver="full").fit(centered)
    components = pca.components_.T.copy()
    rows = np.argmax(np.abs(components), axis=0)
    signs = np.sign(components[rows, np.arange(embed_dim)])
    signs[signs == 0] = 1.0
    return pca.mean_.copy(), components * signs


def quantize_to_nodes(subseqs: np.ndarray, cfg: S2gConfig) -> NodeQuantization:
    """Map each subsequence to a node: an occupied cell of the embedding grid.

    Subsequences are mean-removed and projected on the leading principal
    directions; the bounding box of the projections is split into
    ``cfg.bins_per_axis`` cells per axis. Identical subsequences always share
    a node.
    """
    s = np.asarray(subseqs, dtype=float)
    if s.ndim != 2 or s.shape[0] == 0:
        raise ParameterError("expected a non-empty matrix of subsequences")
    embed_dim = min(cfg.embed_dim, *s.shape)
    centered = s - s.mean(axis=1, keepdims=True)
    column_mean, components = principal_components(centered, embed_dim)
    # row-wise products so identical rows project identically
    points = np.einsum("ij,jk->ik", centered, components) - column_mean @ components

    lo = points.min(axis=0)
    width = (points.max(axis=0) - lo) / cfg.bins_per_axis
    width[width == 0] = 1.0
    quantization = NodeQuantization(
        node_seq=np.empty(0, dtype=np.int64),
        nodes={},
        points=points,
        components=components,
        column_mean=column_mean,
        grid_lo=lo,
        grid_width=width,
        bins_per_axis=cfg.bins_per_axis,
    )
    cells = quantization.cells(points)
    unique_cells, first_index, inverse = np.unique(cells, return_index=True, return_inverse=True)
    order = np.argsort(first_index, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    node_seq = rank[inverse.ravel()].astype(np.int64)

    counts = np.bincount(node_seq, minlength=order.size)
    sums = np.zeros((order.size, embed_dim))
    np.add.at(sums, node_seq, points)
    centroids = sums / counts[:, None]
    grid_shape = (cfg.bins_per_axis,) * embed_dim
    nodes: Dict[int, NodeInfo] = {}
    cell_ids: Dict[int, int] = {}
    for node_id, cell_pos in enumerate(order):
        cell = int(unique_cells[cell_pos])
        cell_ids[cell] = node_id
        nodes[node_id] = NodeInfo(
            centroid=tuple(float(c) for c in centroids[node_id]),
            member_count=int(counts[node_id]),
            cell=tuple(int(c) for c in np.unravel_index(cell, grid_shape)),
        )
    quantization.node_seq = node_seq
    quantization.nodes = nodes
    quantization._cell_ids = cell_ids
    logger.debug(f"{s.shape[0]} subsequences quantized into {len(nodes)} nodes")
    return quantization
