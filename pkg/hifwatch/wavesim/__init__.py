"""Synthetic substation current waveforms with arcing faults and benign transients."""

from .integrators import hif_branch_voltage, integrate_arc_conductance, simulate_rl_current
from .models import EventSchedule, HifParams, RlKind, RlParams, ScheduledEvent, Waveform, sample_index
from .synthesizer import baseline_current, fault_labels, simulate_event, source_voltage, synthesize
from .waveform_io import read_waveform_csv, write_waveform_csv

__all__ = [
    "EventSchedule",
    "HifParams",
    "RlKind",
    "RlParams",
    "ScheduledEvent",
    "Waveform",
    "sample_index",
    "integrate_arc_conductance",
    "hif_branch_voltage",
    "simulate_rl_current",
    "baseline_current",
    "fault_labels",
    "simulate_event",
    "source_voltage",
    "synthesize",
    "read_waveform_csv",
    "write_waveform_csv",
]
