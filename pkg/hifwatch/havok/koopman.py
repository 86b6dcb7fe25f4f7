"""Finite-dimensional Koopman approximation by exact DMD on snapshot pairs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from scipy import linalg
from scipy.optimize import linear_sum_assignment

from hifwatch.errors import DegenerateInputError, ParameterError
from hifwatch.tracing.logger import get_module_logger

logger = get_module_logger()

PSEUDO_INVERSE_TOLERANCE = 1e-10


@dataclass
class KoopmanApprox:
    """Reduced operator K (r × r) acting on coordinates in the POD basis of X.

    ``modes`` are the eigenvectors of K; ``full_modes`` lift them back to the
    snapshot space (exact DMD modes).
    """

    operator: np.ndarray
    eigenvalues: np.ndarray
    modes: np.ndarray
    basis: np.ndarray
    full_modes: np.ndarray
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.operator.shape[0]

    def continuous_eigenvalues(self, dt: float) -> np.ndarray:
        """log(lambda) / dt; a zero eigenvalue maps to -inf."""
        with np.errstate(divide="ignore"):
            return np.log(self.eigenvalues.astype(complex)) / dt


def dmd_koopman(x_snapshots: np.ndarray, y_snapshots: np.ndarray, rank: Optional[int] = None) -> KoopmanApprox:
    """Least-squares K with Y ≈ K X, restricted to the leading POD subspace of X.

    Columns of X and Y are snapshots; Y[:, j] follows X[:, j]. Singular values
    of X below 1e-10·sigma_1 are dropped from the pseudo-inverse and the
    truncation is recorded in ``diagnostics``.

    Raises:
        ParameterError: X and Y shapes differ.
        DegenerateInputError: X is all zeros.
    """
    x = np.asarray(x_snapshots, dtype=float)
    y = np.asarray(y_snapshots, dtype=float)
    if x.shape != y.shape or x.ndim != 2:
        raise ParameterError(f"snapshot matrices differ in shape: {x.shape} vs {y.shape}")
    u, s, vt = linalg.svd(x, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        raise DegenerateInputError("snapshot matrix X is zero")
    retained = int(np.count_nonzero(s > PSEUDO_INVERSE_TOLERANCE * s[0]))
    requested = s.size if rank is None else int(rank)
    r = min(requested, retained)
    diagnostics: Dict[str, Any] = {
        "requested_rank": requested,
        "retained_rank": r,
        "pseudo_inverse_truncated": retained < requested,
        "condition": float(s[0] / s[r - 1]),
    }
    if retained < requested:
        logger.warning(f"pseudo-inverse truncated: {retained} of {requested} singular values above tolerance")
    u_r, s_r, v_r = u[:, :r], s[:r], vt[:r].T
    y_v = y @ v_r / s_r
    operator = u_r.T @ y_v
    eigenvalues, eigenvectors = linalg.eig(operator)
    return KoopmanApprox(
        operator=operator,
        eigenvalues=eigenvalues,
        modes=eigenvectors,
        basis=u_r,
        full_modes=y_v @ eigenvectors,
        diagnostics=diagnostics,
    )


def koopman_from_coordinates(coordinates: np.ndarray, rank: Optional[int] = None) -> KoopmanApprox:
    """Fit K on a trajectory stored one time step per row."""
    z = np.asarray(coordinates, dtype=float)
    if z.ndim != 2 or z.shape[0] < 2:
        raise ParameterError("a trajectory needs at least two rows")
    return dmd_koopman(z[:-1].T, z[1:].T, rank=rank)


def propagate_reduced(k: KoopmanApprox, z0: np.ndarray, steps: int) -> np.ndarray:
    """Iterate z(t+1) = K z(t); row 0 of the (steps+1, r) result is ``z0``."""
    z0 = np.asarray(z0)
    if z0.shape != (k.rank,):
        raise ParameterError(f"initial state of shape {z0.shape} does not match rank {k.rank}")
    if steps < 0:
        raise ParameterError("steps must be >= 0")
    dtype = np.result_type(z0, k.operator)
    trajectory = np.empty((steps + 1, k.rank), dtype=dtype)
    trajectory[0] = z0
    for n in range(steps):
        trajectory[n + 1] = k.operator @ trajectory[n]
    return trajectory


def spectrum_deviation(a: KoopmanApprox, b: KoopmanApprox) -> float:
    """Mean |lambda - mu| over the minimum-cost matching of two equal-size spectra."""
    if a.eigenvalues.size != b.eigenvalues.size:
        raise ParameterError(
            f"spectra differ in size: {a.eigenvalues.size} vs {b.eigenvalues.size}"
        )
    cost = np.abs(a.eigenvalues[:, None] - b.eigenvalues[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(np.mean(cost[rows, cols]))
