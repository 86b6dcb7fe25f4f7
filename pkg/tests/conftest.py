# Shared fixtures for the hifwatch tests.
#
# Records are kept short and coarsely sampled (256 samples per cycle) so the
# full pipeline runs in well under a second; the bundled presets at 2048
# samples per cycle are only exercised by tests marked `slow`.

import logging
from pathlib import Path
from typing import Any, Dict

import pytest
import yaml

from hifwatch.config import DetectorConfig, HavokConfig, S2gConfig, SimConfig
from hifwatch.tracing.logging_context import clear_logging_context
from hifwatch.wavesim import EventSchedule, HifParams, RlKind, RlParams, ScheduledEvent

logger = logging.getLogger("hifwatch.tests")

SMALL_SAMPLES_PER_CYCLE = 256

# short arc time constant and a high arc voltage give sharp current corners
SHARP_ARC = {"R0": 20.0, "tau": 5e-5, "u0": 1000.0, "r0": 0.5}


def pytest_configure(config: Any) -> None:
    config.addinivalue_line("markers", "slow: full-resolution acceptance runs on the bundled presets")


@pytest.fixture(autouse=True)
def _reset_logging_context():
    clear_logging_context()
    yield
    clear_logging_context()


@pytest.fixture
def small_sim() -> SimConfig:
    return SimConfig(samples_per_cycle=SMALL_SAMPLES_PER_CYCLE, duration=1.0, noise_sigma=1e-4, rng_seed=3)


@pytest.fixture
def small_detector() -> DetectorConfig:
    return DetectorConfig(
        baseline_span=0.5,
        smoothing_window=4,
        min_baseline_scores=50,
        expected_sample_rate=60.0 * SMALL_SAMPLES_PER_CYCLE,
        havok=HavokConfig(window_k=16, analysis_cycles=4.0),
        s2g=S2gConfig(subseq_len_l=16, query_len_lq=32, bins_per_axis=20),
    )


@pytest.fixture
def hif_event() -> ScheduledEvent:
    return ScheduledEvent(onset=0.7, duration=0.05, params=HifParams(**SHARP_ARC))


@pytest.fixture
def mixed_schedule(hif_event) -> EventSchedule:
    motor = ScheduledEvent(onset=0.6, duration=0.3, params=RlParams(R=5.0, L=0.02, kind=RlKind.MOTOR_START))
    return EventSchedule(events=(hif_event, motor))


def small_config_document(events=()) -> Dict[str, Any]:
    """Run configuration mapping matching the small fixtures."""
    return {
        "sim": {
            "samples_per_cycle": SMALL_SAMPLES_PER_CYCLE,
            "duration": 1.0,
            "noise_sigma": 1e-4,
            "rng_seed": 3,
        },
        "schedule": {"events": list(events)},
        "havok": {"window_k": 16, "analysis_cycles": 4.0},
        "s2g": {"subseq_len_l": 16, "query_len_lq": 32, "bins_per_axis": 20},
        "detector": {"baseline_span": 0.5, "smoothing_window": 4, "min_baseline_scores": 50},
    }


@pytest.fixture
def small_config_file(tmp_path: Path) -> Path:
    """Event-free small run configuration written as YAML."""
    path = tmp_path / "small.yaml"
    path.write_text(yaml.safe_dump(small_config_document()), encoding="utf-8")
    return path


@pytest.fixture
def hif_config_file(tmp_path: Path) -> Path:
    """Small run configuration with one arcing fault at 0.7 s."""
    path = tmp_path / "hif.yaml"
    event = {"onset": 0.7, "duration": 0.05, "params": dict(SHARP_ARC)}
    path.write_text(yaml.safe_dump(small_config_document([event])), encoding="utf-8")
    return path
