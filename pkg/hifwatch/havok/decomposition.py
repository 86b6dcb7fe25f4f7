"""Singular value decomposition of delay matrices and optimal hard-threshold rank.

The hard threshold follows the optimal singular value hard threshold for a
matrix with white noise: with aspect ratio beta,

    lambda*(beta) = sqrt(2(beta+1) + 8 beta / (beta + 1 + sqrt(beta^2 + 14 beta + 1)))

is the coefficient for known noise level sigma (threshold lambda* sqrt(n) sigma),
and omega(beta) = lambda*(beta) / sqrt(mu_beta), mu_beta the median of the
Marchenko-Pastur distribution, is the coefficient applied to the median
singular value when the noise level is unknown.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import numpy as np
from scipy import integrate, linalg, optimize

from hifwatch.errors import DegenerateInputError, NonFiniteSampleError, NumericalError, ParameterError
from hifwatch.tracing.logger import get_module_logger

from .hankel import HankelEmbedding

logger = get_module_logger()


@dataclass
class SvdFactors:
    """H = left · diag(singular_values) · rightᵀ.

    ``left_vectors`` is the time-indexed factor. Each of its columns has its
    largest-magnitude entry positive; the matching right vector is flipped with it.
    """

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.left_vectors.shape[0], self.right_vectors.shape[0]

    @property
    def energy(self) -> float:
        return float(np.sum(self.singular_values ** 2))

    def reconstruct(self, rank: int | None = None) -> np.ndarray:
        r = self.singular_values.size if rank is None else rank
        return (self.left_vectors[:, :r] * self.singular_values[:r]) @ self.right_vectors[:, :r].T

    def rank_above(self, relative_tolerance: float = 1e-10) -> int:
        if self.singular_values.size == 0 or self.singular_values[0] == 0:
            return 0
        return int(np.count_nonzero(self.singular_values > relative_tolerance * self.singular_values[0]))


def fix_signs(left: np.ndarray, right_t: Optional[np.ndarray] = None) -> None:
    """Flip singular vector pairs in place so each left vector's largest entry is positive."""
    rows = np.argmax(np.abs(left), axis=0)
    signs = np.sign(left[rows, np.arange(left.shape[1])])
    signs[signs == 0] = 1.0
    left *= signs
    if right_t is not None:
        n_pairs = min(left.shape[1], right_t.shape[0])
        right_t[:n_pairs] *= signs[:n_pairs, None]


def svd(h: Union[HankelEmbedding, np.ndarray], full_matrices: bool = False) -> SvdFactors:
    """SVD of a delay matrix with the sign convention applied.

    The economy form (left factor m × min(m, k)) is the default; a full
    m × m left factor is rarely affordable for records of 10^5 samples.

    Raises:
        NonFiniteSampleError: the matrix holds NaN or infinity.
        NumericalError: LAPACK failed with both drivers.
    """
    matrix = h.matrix if isinstance(h, HankelEmbedding) else np.asarray(h, dtype=float)
    finite = np.isfinite(matrix)
    if not finite.all():
        flat = int(np.flatnonzero(~finite.ravel())[0])
        raise NonFiniteSampleError(flat, float(matrix.ravel()[flat]))
    try:
        u, s, vt = linalg.svd(matrix, full_matrices=full_matrices, lapack_driver="gesdd", check_finite=False)
    except linalg.LinAlgError:
        logger.warning("gesdd did not converge; retrying with gesvd")
        try:
            u, s, vt = linalg.svd(matrix, full_matrices=full_matrices, lapack_driver="gesvd", check_finite=False)
        except linalg.LinAlgError as e:
            raise NumericalError(
                "singular value decomposition did not converge",
                {
                    "shape": matrix.shape,
                    "frobenius_norm": float(np.linalg.norm(matrix)),
                    "max_abs": float(np.max(np.abs(matrix))) if matrix.size else 0.0,
                    "lapack": str(e),
                },
            ) from e
    fix_signs(u, vt)
    return SvdFactors(left_vectors=u, singular_values=s, right_vectors=vt.T)


def svht_known_noise_coefficient(beta: float) -> float:
    w = 8.0 * beta / (beta + 1.0 + math.sqrt(beta * beta + 14.0 * beta + 1.0))
    return math.sqrt(2.0 * (beta + 1.0) + w)


@lru_cache(maxsize=64)
def marchenko_pastur_median(beta: float) -> float:
    """Median of the Marchenko-Pastur law with ratio ``beta`` (0 < beta <= 1)."""
    lower = (1.0 - math.sqrt(beta)) ** 2
    upper = (1.0 + math.sqrt(beta)) ** 2

    def density(x: float) -> float:
        spread = (upper - x) * (x - lower)
        return math.sqrt(spread) / (2.0 * math.pi * beta * x) if spread > 0 else 0.0

    def upper_mass(x0: float) -> float:
        mass, _ = integrate.quad(density, x0, upper, limit=200)
        return mass

    return optimize.brentq(lambda x: upper_mass(x) - 0.5, lower, upper, xtol=1e-12)


def svht_coefficient(beta: float, noise_known: bool = False, median_rule: str = "approximate") -> float:
    """Hard-threshold coefficient for aspect ratio ``beta``.

    With unknown noise the coefficient multiplies the median singular value;
    ``median_rule="approximate"`` uses the cubic fit 0.56β³ - 0.95β² + 1.82β + 1.43,
    ``"exact"`` the Marchenko-Pastur median.
    """
    if not 0 < beta <= 1:
        raise ParameterError(f"aspect ratio beta={beta} must lie in (0, 1]")
    if noise_known:
        return svht_known_noise_coefficient(beta)
    if str(getattr(median_rule, "value", median_rule)) == "exact":
        return svht_known_noise_coefficient(beta) / math.sqrt(marchenko_pastur_median(beta))
    return 0.56 * beta ** 3 - 0.95 * beta ** 2 + 1.82 * beta + 1.43


def optimal_rank(
    singular_values,
    aspect_beta: float,
    noise_known: bool = False,
    *,
    noise_sigma: float | None = None,
    n_rows: int | None = None,
    min_rank: int = 2,
    median_rule: str = "approximate",
) -> int:
    """Number of singular values above the optimal hard threshold, at least ``min_rank``.

    Args:
        singular_values: Non-increasing, non-negative spectrum.
        aspect_beta: min(m, k) / max(m, k) of the decomposed matrix.
        noise_known: Use the known-noise threshold lambda*·sqrt(n_rows)·noise_sigma.
        min_rank: Floor on the result (2 keeps at least one delay coordinate).

    Raises:
        DegenerateInputError: every singular value is zero.
        ParameterError: malformed spectrum or beta outside (0, 1].
    """
    s = np.asarray(singular_values, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ParameterError("singular values must be a non-empty vector")
    if np.any(s < 0) or np.any(np.diff(s) > 1e-12 * max(s[0], 1.0)):
        raise ParameterError("singular values must be non-negative and non-increasing")
    if not np.any(s > 0):
        raise DegenerateInputError("all singular values are zero")
    coefficient = svht_coefficient(aspect_beta, noise_known, median_rule)
    if noise_known:
        if noise_sigma is None or n_rows is None:
            raise ParameterError("known-noise threshold needs noise_sigma and n_rows")
        threshold = coefficient * math.sqrt(n_rows) * noise_sigma
    else:
        threshold = coefficient * float(np.median(s))
    rank = int(np.count_nonzero(s > threshold))
    logger.debug(f"SVHT threshold {threshold:.4e} keeps {rank} of {s.size} singular values")
    return min(max(rank, min_rank), s.size)
