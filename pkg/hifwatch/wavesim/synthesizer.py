"""Primary-side current synthesis for a substation transformer.

The network is a single-phase Thevenin equivalent: a stiff sinusoidal source
behind the source impedance feeds the transformer. Every event branch is
solved in its own loop with the source impedance referred to the secondary,
so branch currents superpose exactly on top of the steady load current.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from hifwatch.config.sim_settings import SimConfig
from hifwatch.tracing.logger import get_module_logger

from .integrators import (
    arc_target_conductance,
    exact_hold_coefficients,
    hif_branch_voltage,
    rk4_coefficients,
    simulate_rl_current,
)
from .models import EventSchedule, HifParams, RlParams, ScheduledEvent, Waveform, sample_index

logger = get_module_logger()


def source_voltage(config: SimConfig, t: np.ndarray) -> np.ndarray:
    """Primary source voltage (volts) at times ``t`` measured from the record start."""
    phase = math.radians(config.source_phase_deg)
    return math.sqrt(2.0) * config.source_voltage_rms * np.sin(config.omega * t + phase)


def baseline_phasor(config: SimConfig) -> Tuple[float, float]:
    """Peak amplitude (primary amperes) and lag angle of the steady load current."""
    r_s, l_s = config.secondary_source_impedance
    r_load, l_load = config.base_load
    z = complex(r_s + r_load, config.omega * (l_s + l_load))
    v_secondary_peak = math.sqrt(2.0) * config.source_voltage_rms / config.transformer_ratio
    return v_secondary_peak / abs(z) / config.transformer_ratio, math.atan2(z.imag, z.real)


def baseline_current(config: SimConfig, t: np.ndarray) -> np.ndarray:
    """Steady load current plus the configured harmonic distortion."""
    amplitude, lag = baseline_phasor(config)
    angle = config.omega * t + math.radians(config.source_phase_deg) - lag
    current = amplitude * np.sin(angle)
    for order in sorted(config.harmonics):
        current = current + config.harmonics[order] * amplitude * np.sin(order * angle)
    return current


def inrush_current(config: SimConfig, t: np.ndarray) -> np.ndarray:
    """Energization inrush surrogate, zero before the energization time."""
    params = config.inrush
    if params is None:
        return np.zeros_like(t)
    amplitude, _ = baseline_phasor(config)
    elapsed = t - params.energization_time
    active = elapsed >= 0
    elapsed = np.where(active, elapsed, 0.0)
    shape = np.cos(config.omega * elapsed) + params.second_harmonic * np.cos(2.0 * config.omega * elapsed)
    envelope = params.peak_multiple * amplitude * np.exp(-elapsed / params.decay_tau)
    return np.where(active, envelope * shape, 0.0)


def _open_at_current_zero(current: np.ndarray, scheduled_stop: int) -> np.ndarray:
    """Zero the branch current from the first zero crossing at or after ``scheduled_stop``."""
    if scheduled_stop >= current.size:
        return current
    if scheduled_stop < 1:
        scheduled_stop = 1
    tail = current[scheduled_stop - 1:]
    crossings = np.flatnonzero(tail[:-1] * tail[1:] <= 0)
    cut = scheduled_stop + int(crossings[0]) if crossings.size else current.size
    opened = current.copy()
    opened[cut:] = 0.0
    return opened


def _rl_branch(config: SimConfig, event: ScheduledEvent, v_secondary: np.ndarray, start: int, stop: int) -> np.ndarray:
    params: RlParams = event.params
    r_s, l_s = config.secondary_source_impedance
    loop = RlParams(R=params.R + r_s, L=params.L + l_s, kind=params.kind)
    branch = simulate_rl_current(v_secondary[start:], loop, config.dt)
    return _open_at_current_zero(branch, stop - start)


def _arc_branch(
    config: SimConfig, event: ScheduledEvent, t: np.ndarray, start: int, stop: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Arc loop with the conductance held over each step, then advanced (semi-implicit).

    Returns the secondary branch current and the branch voltage over ``t[start:]``.
    """
    params: HifParams = event.params
    r_s, l_s = config.secondary_source_impedance
    dt = config.dt
    # the loop may run at most one cycle past the scheduled end while waiting for a zero
    horizon = min(t.size, stop + config.samples_per_cycle + 1)
    times = t[start:horizon]
    v = source_voltage(config, times) / config.transformer_ratio

    g_step = rk4_coefficients(-1.0 / params.tau, dt)
    n = times.size
    current = np.zeros(n)
    conductance = np.zeros(n)
    g = params.g_init
    resistance = r_s + params.R0 + 1.0 / g
    i = v[0] / resistance if l_s == 0 else 0.0
    current[0], conductance[0] = i, g
    scheduled = stop - start
    last = n
    for step in range(n - 1):
        resistance = r_s + params.R0 + 1.0 / g
        if l_s == 0:
            i_next = v[step + 1] / resistance
        else:
            c = exact_hold_coefficients(-resistance / l_s, dt)
            i_next = c.decay * i + (c.w_start * v[step] + c.w_end * v[step + 1]) / l_s
        i_mid = 0.5 * (i + i_next)
        g = (g_step.decay * g
             + (g_step.w_start * arc_target_conductance(i, params)
                + g_step.w_mid * arc_target_conductance(i_mid, params)
                + g_step.w_end * arc_target_conductance(i_next, params)) / params.tau)
        if step + 1 >= scheduled and i * i_next <= 0:
            last = step + 1
            break
        i = i_next
        current[step + 1], conductance[step + 1] = i, g
    current[last:] = 0.0
    voltage = np.zeros(n)
    arcing = slice(0, last)
    voltage[arcing] = hif_branch_voltage(current[arcing], conductance[arcing], params.R0)

    branch = np.zeros(t.size - start)
    branch_voltage = np.zeros(t.size - start)
    branch[:n] = current
    branch_voltage[:n] = voltage
    logger.debug(
        f"arc at {event.onset:.4f} s: peak {np.max(np.abs(current)):.3f} A secondary, "
        f"extinguished after {last} samples"
    )
    return branch, branch_voltage


def simulate_event(
    config: SimConfig, event: ScheduledEvent, t: Optional[np.ndarray] = None
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """Primary-referred branch current of one event over the whole record.

    Returns ``(current, branch_voltage)``; the voltage is only produced for arc
    branches (secondary volts) and is None for R-L branches.
    """
    if t is None:
        t = np.arange(config.n_samples) / config.sample_rate
    start = sample_index(event.onset, config.sample_rate)
    stop = sample_index(event.end, config.sample_rate)
    current = np.zeros(t.size)
    if start >= t.size:
        return current, None
    if event.is_hif:
        branch, branch_voltage = _arc_branch(config, event, t, start, stop)
        voltage = np.zeros(t.size)
        voltage[start:] = branch_voltage
        current[start:] = branch / config.transformer_ratio
        return current, voltage
    v_secondary = source_voltage(config, t) / config.transformer_ratio
    current[start:] = _rl_branch(config, event, v_secondary, start, stop) / config.transformer_ratio
    return current, None


def fault_labels(schedule: EventSchedule, n_samples: int, sample_rate: float) -> np.ndarray:
    """1 for every sample inside a scheduled fault interval [onset, onset + duration)."""
    labels = np.zeros(n_samples, dtype=np.uint8)
    for event in schedule.hif_events:
        start = sample_index(event.onset, sample_rate)
        stop = min(n_samples, sample_index(event.end, sample_rate))
        labels[start:stop] = 1
    return labels


def synthesize(config: SimConfig, schedule: EventSchedule) -> Waveform:
    """Synthesize the primary-side current of one record.

    The current is the steady load (with harmonics) plus every event branch
    current reflected through the transformer, the optional inrush surrogate
    and Gaussian measurement noise of ``noise_sigma`` × baseline peak.
    Overlapping events superpose.

    Raises:
        ScheduleError: an event starts after the record ends or runs past it.
    """
    schedule.check_fits(config.duration, config.sample_rate)
    n = config.n_samples
    t = np.arange(n) / config.sample_rate
    logger.info(
        f"Synthesizing {config.duration:.3f} s at {config.sample_rate:.0f} Hz "
        f"with {len(schedule.events)} events (seed {config.rng_seed})"
    )

    current = baseline_current(config, t)
    fault_voltage = np.zeros(n)
    for event in schedule.events:
        branch, voltage = simulate_event(config, event, t)
        current = current + branch
        if voltage is not None:
            fault_voltage = fault_voltage + voltage
        logger.debug(f"{event.kind} at {event.onset:.4f} s for {event.duration:.4f} s added")

    if config.inrush is not None:
        current = current + inrush_current(config, t)

    if config.noise_sigma > 0:
        amplitude, _ = baseline_phasor(config)
        rng = np.random.default_rng(config.rng_seed)
        current = current + rng.normal(0.0, config.noise_sigma * amplitude, n)

    channels = {
        "i_primary": current,
        "v_source": source_voltage(config, t),
        "v_fault": fault_voltage,
    }
    return Waveform(
        sample_rate=config.sample_rate,
        t0=config.t0,
        channels=channels,
        labels=fault_labels(schedule, n, config.sample_rate),
    )
