"""Tests for the sectioned run configuration: presets, YAML files and environment overrides."""

from pathlib import Path

import pytest
import yaml

from hifwatch.config import ConfigKeyError, ForcingMode, SettingsError
from hifwatch.config.run_config import (
    PRESETS,
    RunConfig,
    apply_env_overrides,
    load_run_config,
    read_config_document,
    resolve_config_path,
)
from hifwatch.wavesim import RlKind

from .conftest import small_config_document


def _write(tmp_path: Path, data, name: str = "run.yaml") -> Path:
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path


class TestPresets:
    def test_presets_resolve_to_bundled_files(self):
        for name in PRESETS:
            assert resolve_config_path(name).exists()

    def test_case_a_schedule(self):
        config = load_run_config("case_a", environ={})
        assert config.sim.samples_per_cycle == 2048
        assert config.sim.duration == 2.0
        assert [e.onset for e in config.schedule.hif_events] == [1.2, 1.4, 1.6]
        assert [e.onset for e in config.schedule.benign_events] == [1.0, 1.1, 1.3, 1.5, 1.7]
        kinds = {e.onset: e.params.kind for e in config.schedule.benign_events}
        assert kinds[1.0] == RlKind.MOTOR_START
        assert kinds[1.1] == RlKind.LOAD_SWITCH

    def test_case_b_schedule(self):
        config = load_run_config("case_b", environ={})
        assert [e.onset for e in config.schedule.hif_events] == [1.4]
        assert len(config.schedule.events) == 3

    def test_preset_detector_inherits_sim_rates(self):
        config = load_run_config("case_a", environ={})
        assert config.detector.system_frequency == 60.0
        assert config.detector.expected_sample_rate == 60.0 * 2048
        assert config.detector.havok.window_k == 64
        assert config.detector.havok.mode == ForcingMode.WINDOWED
        assert config.detector.havok.hop_cycles == 0.25
        assert config.detector.s2g.query_len_lq == 256

    def test_unknown_preset(self):
        with pytest.raises(SettingsError, match="config file not found"):
            resolve_config_path("case_z")


class TestRunConfigMapping:
    def test_empty_mapping_gives_defaults(self):
        config = RunConfig.from_mapping({})
        assert config.schedule.events == ()
        assert config.detector.expected_sample_rate == config.sim.sample_rate

    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigKeyError) as excinfo:
            RunConfig.from_mapping({"simulation": {}})
        assert excinfo.value.key_path == "simulation"

    def test_unknown_nested_key_has_dotted_path(self):
        with pytest.raises(ConfigKeyError) as excinfo:
            RunConfig.from_mapping({"sim": {"durration": 1.0}})
        assert excinfo.value.key_path == "sim.durration"

    def test_unknown_event_key(self):
        data = {"schedule": {"events": [{"onset": 0.1, "lenght": 0.05}]}}
        with pytest.raises(ConfigKeyError) as excinfo:
            RunConfig.from_mapping(data)
        assert "lenght" in excinfo.value.key_path

    def test_havok_inside_detector_is_rejected(self):
        with pytest.raises(ConfigKeyError) as excinfo:
            RunConfig.from_mapping({"detector": {"havok": {"window_k": 32}}})
        assert excinfo.value.key_path == "detector.havok"

    def test_explicit_detector_frequency_is_kept(self):
        config = RunConfig.from_mapping(
            {"sim": {"system_frequency": 50.0, "samples_per_cycle": 512}, "detector": {"system_frequency": 60.0}}
        )
        assert config.detector.system_frequency == 60.0
        assert config.detector.expected_sample_rate == 50.0 * 512

    def test_as_dict_feeds_back_into_from_mapping(self):
        config = load_run_config("case_a", environ={})
        assert RunConfig.from_mapping(config.as_dict()) == config

    def test_as_dict_is_sectioned(self):
        data = RunConfig().as_dict()
        assert list(data) == ["sim", "schedule", "havok", "s2g", "detector"]
        assert "havok" not in data["detector"]

    def test_with_seed(self):
        config = RunConfig()
        assert config.with_seed(None) is config
        assert config.with_seed(5).sim.rng_seed == 5
        assert config.sim.rng_seed == 0


class TestConfigFiles:
    def test_load_small_file(self, small_config_file):
        config = load_run_config(small_config_file, environ={})
        assert config.sim.samples_per_cycle == 256
        assert config.detector.havok.window_k == 16
        assert config.detector.s2g.subseq_len_l == 16

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("sim: [unclosed\n", encoding="utf-8")
        with pytest.raises(SettingsError, match="invalid YAML"):
            read_config_document(path)

    def test_top_level_must_be_mapping(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n", encoding="utf-8")
        with pytest.raises(SettingsError, match="mapping"):
            read_config_document(path)

    def test_empty_file_gives_defaults(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("", encoding="utf-8")
        config = load_run_config(path, environ={})
        assert config == RunConfig.from_mapping({})
        assert config.sim == RunConfig().sim

    def test_invalid_value_reports_section(self, tmp_path):
        data = small_config_document()
        data["detector"]["sigma_multiplier"] = -1
        with pytest.raises(SettingsError, match="detector"):
            load_run_config(_write(tmp_path, data), environ={})


class TestEnvOverrides:
    def test_overrides_reach_every_section(self, small_config_file):
        environ = {
            "HIFWATCH_SIM__DURATION": "0.75",
            "HIFWATCH_SIM__INRUSH__PEAK_MULTIPLE": "3",
            "HIFWATCH_HAVOK__WINDOW_K": "64",
            "HIFWATCH_HAVOK__MODE": "trained",
            "HIFWATCH_S2G__BINS_PER_AXIS": "30",
            "HIFWATCH_DETECTOR__SIGMA_MULTIPLIER": "4.5",
        }
        config = load_run_config(small_config_file, environ=environ)
        assert config.sim.duration == 0.75
        assert config.sim.inrush.peak_multiple == 3.0
        assert config.detector.havok.window_k == 64
        assert config.detector.havok.mode == ForcingMode.TRAINED
        assert config.detector.havok.analysis_cycles == 4.0
        assert config.detector.s2g.bins_per_axis == 30
        assert config.detector.sigma_multiplier == 4.5

    def test_unrelated_variables_are_ignored(self):
        merged = apply_env_overrides({"sim": {"duration": 1.0}}, {"PATH": "/bin", "HIFWATCH_VERBOSE": "1"})
        assert merged == {"sim": {"duration": 1.0}}

    def test_source_mapping_is_not_modified(self):
        data = {"sim": {"duration": 1.0}}
        apply_env_overrides(data, {"HIFWATCH_SIM__DURATION": "2.0"})
        assert data == {"sim": {"duration": 1.0}}

    def test_unknown_section(self):
        with pytest.raises(ConfigKeyError):
            apply_env_overrides({}, {"HIFWATCH_SIMULATION__DURATION": "1"})

    def test_schedule_is_not_overridable(self):
        with pytest.raises(ConfigKeyError):
            apply_env_overrides({}, {"HIFWATCH_SCHEDULE__EVENTS": "x"})

    def test_unknown_field(self, small_config_file):
        with pytest.raises(ConfigKeyError) as excinfo:
            load_run_config(small_config_file, environ={"HIFWATCH_SIM__COLOUR": "blue"})
        assert excinfo.value.key_path == "sim.colour"

    def test_bad_value_type(self, small_config_file):
        with pytest.raises(SettingsError, match="sim.duration"):
            load_run_config(small_config_file, environ={"HIFWATCH_SIM__DURATION": "long"})
