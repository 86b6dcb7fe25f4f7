"""Time stepping for the branch equations.

Both the arc conductance equation and the R-L branch equation are linear in
their state once the driving input is known:

    dy/dt = lam * y + f(t)

so a whole series can be advanced as a first-order recursion. With the
input sampled at the step ends and interpolated linearly at the midpoint,
one classical RK4 step reads

    y[n+1] = P(z) y[n] + h/6 (c0(z) f[n] + cm(z) f[n+1/2] + f[n+1]),  z = lam h

and the recursion runs through ``scipy.signal.lfilter``. When |z| grows past
the RK4 stability bound the exact first-order-hold step is used instead.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.signal import lfilter

from hifwatch.errors import NonFiniteSampleError, ParameterError, SingularArcError
from hifwatch.tracing.logger import get_module_logger

from .models import HifParams, RlParams

logger = get_module_logger()

# RK4 is stable for real z down to about -2.785
RK4_STABILITY_LIMIT = 2.5


class StepCoefficients(NamedTuple):
    """y[n+1] = decay*y[n] + w_start*f[n] + w_mid*f[n+1/2] + w_end*f[n+1]."""

    decay: float
    w_start: float
    w_mid: float
    w_end: float


def rk4_coefficients(lam: float, h: float) -> StepCoefficients:
    z = lam * h
    decay = 1.0 + z + z * z / 2.0 + z ** 3 / 6.0 + z ** 4 / 24.0
    c0 = 1.0 + z + z * z / 2.0 + z ** 3 / 4.0
    cm = 4.0 + 2.0 * z + z * z / 2.0
    return StepCoefficients(decay, h / 6.0 * c0, h / 6.0 * cm, h / 6.0)


def exact_hold_coefficients(lam: float, h: float) -> StepCoefficients:
    """Exact step of dy/dt = lam*y + f for f linear over the step (lam < 0)."""
    if lam >= 0:
        raise ParameterError("exact hold step needs a decaying system (lam < 0)")
    a = -lam
    ah = a * h
    one_minus_decay = -math.expm1(-ah)
    slope_weight = (1.0 - one_minus_decay / ah) / a  # integral of e^{-a(h-s)} s/h ds
    rise_weight = one_minus_decay / a
    return StepCoefficients(1.0 - one_minus_decay, rise_weight - slope_weight, 0.0, slope_weight)


def step_coefficients(lam: float, h: float, *, allow_fallback: bool = True) -> StepCoefficients:
    if allow_fallback and abs(lam * h) > RK4_STABILITY_LIMIT:
        return exact_hold_coefficients(lam, h)
    return rk4_coefficients(lam, h)


def advance_linear(f: np.ndarray, coeffs: StepCoefficients, y0: float) -> np.ndarray:
    """Run y[n+1] = decay*y[n] + u[n] over a sampled input ``f``; returns len(f) states."""
    f = np.asarray(f, dtype=float)
    if f.size == 1:
        return np.array([y0], dtype=float)
    f_mid = 0.5 * (f[:-1] + f[1:])
    u = coeffs.w_start * f[:-1] + coeffs.w_mid * f_mid + coeffs.w_end * f[1:]
    tail, _ = lfilter([1.0], [1.0, -coeffs.decay], u, zi=[coeffs.decay * y0])
    return np.concatenate(([y0], tail))


def _check_finite(series: np.ndarray) -> None:
    bad = np.flatnonzero(~np.isfinite(series))
    if bad.size:
        raise NonFiniteSampleError(int(bad[0]), float(series[bad[0]]))


def arc_target_conductance(i_f, p: HifParams):
    """Stationary conductance |i| / (u0 + r0 |i|) of the Kizilcay arc."""
    magnitude = np.abs(i_f)
    return magnitude / (p.u0 + p.r0 * magnitude)


def integrate_arc_conductance(i_f: np.ndarray, p: HifParams, dt: float, g0: float | None = None) -> np.ndarray:
    """Integrate dg/dt = (|i|/(u0 + r0|i|) - g)/tau along a sampled arc current.

    Args:
        i_f: Arc current samples (amperes).
        p: Arc parameters; ``p.g_init`` is the conductance at the first sample
           unless ``g0`` is given.
        dt: Sample step (seconds).

    Returns:
        Conductance at every sample (siemens), strictly positive.

    Raises:
        NonFiniteSampleError: a current sample is NaN or infinite.
    """
    if not dt > 0:
        raise ParameterError("dt must be > 0")
    i_f = np.asarray(i_f, dtype=float)
    if i_f.size == 0:
        raise ParameterError("current series is empty")
    _check_finite(i_f)
    coeffs = rk4_coefficients(-1.0 / p.tau, dt)
    target = arc_target_conductance(i_f, p) / p.tau
    # the midpoint target comes from the interpolated current, not the interpolated target
    mid_target = arc_target_conductance(0.5 * (i_f[:-1] + i_f[1:]), p) / p.tau
    u = coeffs.w_start * target[:-1] + coeffs.w_mid * mid_target + coeffs.w_end * target[1:]
    start = p.g_init if g0 is None else g0
    tail, _ = lfilter([1.0], [1.0, -coeffs.decay], u, zi=[coeffs.decay * start])
    return np.concatenate(([start], tail))


def hif_branch_voltage(i_f, g, R0: float):
    """Voltage across the fault branch: i·R0 + i/g.

    Raises:
        SingularArcError: any conductance is zero or negative.
    """
    g_arr = np.asarray(g, dtype=float)
    if np.any(g_arr <= 0):
        raise SingularArcError("arc conductance must stay positive")
    result = np.asarray(i_f, dtype=float) * R0 + np.asarray(i_f, dtype=float) / g_arr
    return float(result) if result.ndim == 0 else result


def simulate_rl_current(v: np.ndarray, p: RlParams, dt: float, i0: float = 0.0) -> np.ndarray:
    """Current of a series R-L branch driven by the voltage samples ``v``.

    With L = 0 the branch is resistive and i = v/R pointwise; ``i0`` is then ignored.
    """
    if not dt > 0:
        raise ParameterError("dt must be > 0")
    v = np.asarray(v, dtype=float)
    _check_finite(v)
    if p.L == 0:
        return v / p.R
    lam = -p.R / p.L
    if abs(lam * dt) > RK4_STABILITY_LIMIT:
        logger.warning(
            f"R-L branch (R={p.R}, L={p.L}) is stiff at dt={dt:.3e}; using the exact hold step"
        )
    coeffs = step_coefficients(lam, dt)
    return advance_linear(v / p.L, coeffs, i0)
