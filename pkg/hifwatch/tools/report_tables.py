"""
Renders evaluation metrics and detected intervals as markdown tables.
"""

from __future__ import annotations

from typing import Any, Dict, Iterable, List

from tabulate import tabulate

from hifwatch.detector.models import DetectedInterval


def metrics_table(metrics: Dict[str, Any]) -> str:
    """Summary counts of an evaluation document (``EvaluationResult.as_dict()``)."""
    rows = [
        ["faults", metrics["n_faults"]],
        ["matched", metrics["matched"]],
        ["missed", metrics["missed"]],
        ["false positives", metrics["false_positives"]],
        ["benign-window false positives", metrics["benign_window_false_positives"]],
        ["continuations", metrics["continuations"]],
        ["detection rate", f"{metrics['detection_rate']:.3f}"],
    ]
    return tabulate(rows, headers=["metric", "value"], tablefmt="github")


def latency_table(metrics: Dict[str, Any]) -> str:
    rows: List[List[Any]] = [
        [
            f"{m['fault_onset']:.5f}",
            f"{m['detected_onset']:.5f}",
            f"{m['latency_s'] * 1e3:.3f}",
            f"{m['latency_cycles']:.4f}",
        ]
        for m in metrics["matches"]
    ]
    headers = ["fault onset (s)", "detected (s)", "latency (ms)", "latency (cycles)"]
    return tabulate(rows, headers=headers, tablefmt="github")


def intervals_table(intervals: Iterable[DetectedInterval]) -> str:
    rows = []
    for interval in intervals:
        peak = "" if interval.peak_anomaly_score is None else f"{interval.peak_anomaly_score:.3f}"
        deviation = "" if interval.koopman_deviation is None else f"{interval.koopman_deviation:.4g}"
        rows.append([f"{interval.onset:.5f}", f"{interval.duration * 1e3:.3f}", peak, deviation])
    headers = ["onset (s)", "duration (ms)", "peak anomaly", "spectrum deviation"]
    return tabulate(rows, headers=headers, tablefmt="github")
