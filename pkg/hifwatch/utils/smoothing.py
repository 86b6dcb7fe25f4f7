"""Moving-average smoothing shared by forcing export and score normalization."""

from __future__ import annotations

import numpy as np
from scipy.ndimage import uniform_filter1d

from hifwatch.errors import ParameterError


def moving_average(values: np.ndarray, width: int) -> np.ndarray:
    """Trailing moving average: each output averages its own and the ``width - 1`` previous samples.

    Samples before the start replicate the first value, so no output depends
    on a later input.
    """
    if width < 1:
        raise ParameterError("moving average width must be >= 1")
    values = np.asarray(values, dtype=float)
    if width == 1 or values.size == 0:
        return values.copy()
    # origin (width - 1) // 2 moves the whole footprint onto past samples
    return uniform_filter1d(values, size=width, mode="nearest", origin=(width - 1) // 2)
