"""
Test suite for the settings base layer.

Tests cover:
- Environment variable parsing and type conversion
- .env file loading
- BaseSettings construction, validation, as_dict and merge
- Mapping coercion of tuples, mappings, enums and nested sections
- Unknown-key rejection with dotted key paths
"""

import os
import tempfile
import unittest
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple
from unittest.mock import patch

import pytest

from hifwatch.config import DetectorConfig, ForcingMode, HavokConfig, S2gConfig, SimConfig
from hifwatch.config.base_settings import (
    BaseSettings,
    ConfigKeyError,
    DotEnvLoader,
    EnvironmentVariableError,
    EnvParser,
    SettingsError,
    coerce_value,
)


class TestEnvParser(unittest.TestCase):
    """Test environment variable parsing utilities."""

    def setUp(self):
        self.original_env = {}
        test_vars = ["TEST_STR", "TEST_INT", "TEST_FLOAT", "TEST_BOOL", "TEST_LIST", "TEST_MISSING", "TEST_FALLBACK"]
        for var in test_vars:
            self.original_env[var] = os.environ.get(var)
            if var in os.environ:
                del os.environ[var]

    def tearDown(self):
        for var, value in self.original_env.items():
            if value is not None:
                os.environ[var] = value
            elif var in os.environ:
                del os.environ[var]

    def test_get_env_string_default(self):
        self.assertEqual(EnvParser.get_env("TEST_MISSING", default="default_value"), "default_value")
        os.environ["TEST_STR"] = "hello world"
        self.assertEqual(EnvParser.get_env("TEST_STR", default="default"), "hello world")

    def test_get_env_multiple_names(self):
        os.environ["TEST_FALLBACK"] = "fallback_value"
        result = EnvParser.get_env("TEST_MISSING", "TEST_FALLBACK", default="default")
        self.assertEqual(result, "fallback_value")

    def test_get_env_integer_conversion(self):
        os.environ["TEST_INT"] = "42"
        result = EnvParser.get_env("TEST_INT", env_type=int)
        self.assertEqual(result, 42)
        self.assertIsInstance(result, int)

        os.environ["TEST_INT"] = "not_a_number"
        with self.assertRaises(EnvironmentVariableError):
            EnvParser.get_env("TEST_INT", env_type=int)

    def test_get_env_float_conversion(self):
        os.environ["TEST_FLOAT"] = "3.14"
        result = EnvParser.get_env("TEST_FLOAT", env_type=float)
        self.assertEqual(result, 3.14)
        self.assertIsInstance(result, float)

    def test_get_env_boolean_conversion(self):
        for value in ["true", "True", "1", "yes", "on"]:
            os.environ["TEST_BOOL"] = value
            self.assertTrue(EnvParser.get_env("TEST_BOOL", env_type=bool), f"'{value}' should be True")
        for value in ["false", "0", "no", "off", ""]:
            os.environ["TEST_BOOL"] = value
            self.assertFalse(EnvParser.get_env("TEST_BOOL", env_type=bool), f"'{value}' should be False")

    def test_get_env_list_conversion(self):
        os.environ["TEST_LIST"] = "item1, item2 , item3"
        self.assertEqual(EnvParser.get_env("TEST_LIST", env_type=list), ["item1", "item2", "item3"])
        os.environ["TEST_LIST"] = ""
        self.assertEqual(EnvParser.get_env("TEST_LIST", env_type=list), [])

    def test_get_env_required(self):
        with self.assertRaises(EnvironmentVariableError) as cm:
            EnvParser.get_env("TEST_MISSING", required=True)
        self.assertIn("Required environment variable not found", str(cm.exception))


class TestDotEnvLoader(unittest.TestCase):
    """Test .env file loading functionality."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.temp_path = Path(self.temp_dir)
        self.original_env = dict(os.environ)

    def tearDown(self):
        os.environ.clear()
        os.environ.update(self.original_env)
        import shutil
        shutil.rmtree(self.temp_dir)

    @patch('hifwatch.config.base_settings.load_dotenv')
    def test_load_dotenv_files_success(self, mock_load_dotenv):
        env_file = self.temp_path / ".env"
        env_file.write_text("HIFWATCH_TEST_VAR=test_value\n")

        result = DotEnvLoader.load_dotenv_files([self.temp_path])

        self.assertTrue(result)
        mock_load_dotenv.assert_called_once_with(env_file, override=False)

    def test_load_dotenv_files_missing_file(self):
        self.assertFalse(DotEnvLoader.load_dotenv_files([self.temp_path / "nonexistent"]))

    def test_load_dotenv_does_not_override_existing(self):
        (self.temp_path / ".env").write_text("HIFWATCH_TEST_VAR=from_file\nHIFWATCH_OTHER_VAR=other\n")
        os.environ["HIFWATCH_TEST_VAR"] = "from_env"

        DotEnvLoader.load_dotenv_files([self.temp_path])

        self.assertEqual(os.environ["HIFWATCH_TEST_VAR"], "from_env")
        self.assertEqual(os.environ["HIFWATCH_OTHER_VAR"], "other")

    def test_get_default_search_paths(self):
        paths = DotEnvLoader._get_default_search_paths()
        self.assertIsInstance(paths, list)
        self.assertIn(Path.cwd(), paths)


@dataclass(frozen=True)
class CustomTestSettings(BaseSettings):
    """Settings class exercising the BaseSettings machinery."""

    name: str = "test"
    count: int = 10
    enabled: bool = True
    scale: float = 1.0
    pair: Tuple[float, float] = (0.0, 1.0)
    weights: Dict[int, float] = field(default_factory=dict)
    label: Optional[str] = None

    def validate(self):
        if self.count < 0:
            raise SettingsError("Count must be non-negative")


@dataclass(frozen=True)
class OuterTestSettings(BaseSettings):
    inner: CustomTestSettings = field(default_factory=CustomTestSettings)
    mode: ForcingMode = ForcingMode.TRAINED


class TestBaseSettings(unittest.TestCase):
    """Test BaseSettings functionality."""

    def setUp(self):
        self.original_env = dict(os.environ)
        for name in list(os.environ):
            if name.startswith("CUSTOM_"):
                del os.environ[name]

    def tearDown(self):
        os.environ.clear()
        os.environ.update(self.original_env)

    def test_validation_failure_prevents_construction(self):
        with self.assertRaises(SettingsError) as cm:
            CustomTestSettings(count=-1)
        self.assertIn("Count must be non-negative", str(cm.exception))

    def test_from_env_with_prefix(self):
        os.environ["CUSTOM_NAME"] = "custom"
        os.environ["CUSTOM_COUNT"] = "42"
        os.environ["CUSTOM_ENABLED"] = "false"
        os.environ["CUSTOM_PAIR"] = "0.5, 2"

        settings = CustomTestSettings.from_env(prefix="CUSTOM_", load_dotenv=False)

        self.assertEqual(settings.name, "custom")
        self.assertEqual(settings.count, 42)
        self.assertFalse(settings.enabled)
        self.assertEqual(settings.pair, (0.5, 2.0))

    def test_from_env_with_overrides(self):
        os.environ["CUSTOM_NAME"] = "env_name"
        settings = CustomTestSettings.from_env(prefix="CUSTOM_", load_dotenv=False, name="override_name", count=99)
        self.assertEqual(settings.name, "override_name")
        self.assertEqual(settings.count, 99)

    def test_from_mapping_rejects_unknown_keys(self):
        with self.assertRaises(ConfigKeyError) as cm:
            CustomTestSettings.from_mapping({"name": "x", "colour": "red"})
        self.assertEqual(cm.exception.key_path, "colour")

    def test_from_mapping_reports_nested_key_path(self):
        with self.assertRaises(ConfigKeyError) as cm:
            OuterTestSettings.from_mapping({"inner": {"cuont": 3}})
        self.assertEqual(cm.exception.key_path, "inner.cuont")

    def test_from_mapping_coerces_nested_values(self):
        settings = OuterTestSettings.from_mapping(
            {"inner": {"count": "7", "scale": 2, "weights": {"3": "0.25"}}, "mode": "windowed"}
        )
        self.assertEqual(settings.inner.count, 7)
        self.assertIsInstance(settings.inner.scale, float)
        self.assertEqual(settings.inner.weights, {3: 0.25})
        self.assertEqual(settings.mode, ForcingMode.WINDOWED)

    def test_nested_validation_error_names_section(self):
        with self.assertRaises(SettingsError) as cm:
            OuterTestSettings.from_mapping({"inner": {"count": -4}})
        self.assertIn("inner", str(cm.exception))

    def test_as_dict(self):
        settings = OuterTestSettings(inner=CustomTestSettings(name="test", count=42, weights={3: 0.5}))
        result = settings.as_dict()
        self.assertEqual(result["mode"], "trained")
        self.assertEqual(result["inner"]["count"], 42)
        self.assertEqual(result["inner"]["pair"], [0.0, 1.0])
        self.assertEqual(result["inner"]["weights"], {3: 0.5})

    def test_as_dict_feeds_back_into_from_mapping(self):
        original = OuterTestSettings(inner=CustomTestSettings(label="x", pair=(1.0, 2.0)), mode=ForcingMode.WINDOWED)
        self.assertEqual(OuterTestSettings.from_mapping(original.as_dict()), original)

    def test_merge(self):
        original = CustomTestSettings(name="original", count=10)
        merged = original.merge(name="merged", count=20)
        self.assertEqual(original.name, "original")
        self.assertEqual(merged.name, "merged")
        self.assertEqual(merged.count, 20)

    def test_merge_validates(self):
        with self.assertRaises(SettingsError):
            CustomTestSettings().merge(count=-5)


class TestCoerceValue:
    def test_optional_accepts_none(self):
        assert coerce_value(Optional[int], None, "x") is None

    def test_required_rejects_none(self):
        with pytest.raises(SettingsError, match="x: value is required"):
            coerce_value(int, None, "x")

    def test_tuple_length_checked(self):
        with pytest.raises(SettingsError, match="expected 2 items"):
            coerce_value(Tuple[float, float], [1.0, 2.0, 3.0], "sim.base_load")

    def test_integral_float_becomes_int(self):
        assert coerce_value(int, 4.0, "x") == 4

    def test_bad_string_reports_key(self):
        with pytest.raises(EnvironmentVariableError, match="sim.duration"):
            coerce_value(float, "two", "sim.duration")


class TestSectionValidation:
    def test_sim_defaults_derive_sample_rate(self):
        sim = SimConfig()
        assert sim.sample_rate == 60.0 * 2048
        assert sim.n_samples == int(round(2.0 * 60.0 * 2048))

    @pytest.mark.parametrize(
        "overrides",
        [
            {"system_frequency": 0.0},
            {"samples_per_cycle": 4},
            {"duration": -1.0},
            {"base_load": (0.0, 0.01)},
            {"harmonics": {1: 0.1}},
            {"noise_sigma": -0.1},
        ],
    )
    def test_sim_rejects_invalid_values(self, overrides):
        with pytest.raises(SettingsError):
            SimConfig(**overrides)

    @pytest.mark.parametrize("samples_per_cycle", [16, 32, 63])
    def test_sim_rejects_coarse_sampling(self, samples_per_cycle):
        with pytest.raises(SettingsError, match="samples_per_cycle must be >= 64"):
            SimConfig(samples_per_cycle=samples_per_cycle)

    def test_sim_accepts_minimum_sampling(self):
        assert SimConfig(samples_per_cycle=64).sample_rate == 64 * 60.0

    def test_s2g_query_must_cover_subsequence(self):
        with pytest.raises(SettingsError, match="query_len_lq"):
            S2gConfig(subseq_len_l=64, query_len_lq=32)

    def test_s2g_needs_two_bins(self):
        with pytest.raises(SettingsError):
            S2gConfig(bins_per_axis=1)

    def test_havok_known_noise_needs_sigma(self):
        with pytest.raises(SettingsError, match="noise_sigma"):
            HavokConfig(noise_known=True)

    def test_havok_window_defaults_to_eighth_cycle(self):
        assert HavokConfig().resolve_window(2048) == 256
        assert HavokConfig(window_k=40).resolve_window(2048) == 40

    @pytest.mark.parametrize(
        "overrides",
        [
            {"baseline_span": 0.0},
            {"sigma_multiplier": 0.0},
            {"min_event_duration": -0.001},
            {"smoothing_window": 0},
            {"max_latency": 0.0},
        ],
    )
    def test_detector_rejects_invalid_values(self, overrides):
        with pytest.raises(SettingsError):
            DetectorConfig(**overrides)
