"""Delay embedding, optimal hard-threshold rank, forcing extraction and Koopman fits."""

from .decomposition import SvdFactors, marchenko_pastur_median, optimal_rank, svd, svht_coefficient
from .forcing import (
    ForcingModel,
    HavokDecomposition,
    extract_forcing,
    fit_forcing_model,
    forcing_frame,
    forcing_series,
    write_forcing_csv,
)
from .hankel import HankelEmbedding, build_hankel
from .koopman import KoopmanApprox, dmd_koopman, koopman_from_coordinates, propagate_reduced, spectrum_deviation

__all__ = [
    "HankelEmbedding",
    "build_hankel",
    "SvdFactors",
    "svd",
    "optimal_rank",
    "svht_coefficient",
    "marchenko_pastur_median",
    "HavokDecomposition",
    "ForcingModel",
    "forcing_series",
    "fit_forcing_model",
    "extract_forcing",
    "forcing_frame",
    "write_forcing_csv",
    "KoopmanApprox",
    "dmd_koopman",
    "koopman_from_coordinates",
    "propagate_reduced",
    "spectrum_deviation",
]
