import numpy as np
import pytest

from hifwatch.config import DetectorConfig
from hifwatch.config.detector_settings import BaselineTooShortError
from hifwatch.detector import (
    DetectedInterval,
    evaluate,
    extract_intervals,
    normalize_scores,
    settled_positions,
    three_sigma,
)
from hifwatch.errors import ParameterError
from hifwatch.s2g import ScoreSeries
from hifwatch.utils.smoothing import moving_average
from hifwatch.wavesim import EventSchedule, HifParams, RlKind, RlParams, ScheduledEvent


def _series(values, timestamps=None) -> ScoreSeries:
    values = np.asarray(values, dtype=float)
    if timestamps is None:
        timestamps = np.arange(values.size, dtype=float)
    first = np.arange(values.size)
    return ScoreSeries(timestamps=np.asarray(timestamps, dtype=float), norm_scores=values,
                       coverage=np.column_stack([first, first]))


class TestMovingAverage:
    def test_impulse_spreads_over_following_samples(self):
        impulse = np.zeros(11)
        impulse[5] = 1.0
        np.testing.assert_allclose(moving_average(impulse, 5), [0, 0, 0, 0, 0, .2, .2, .2, .2, .2, 0])

    @pytest.mark.parametrize("width", [2, 4, 5, 16])
    def test_output_never_depends_on_later_samples(self, width):
        values = np.random.default_rng(3).normal(size=64)
        changed = values.copy()
        changed[40:] += 10.0
        np.testing.assert_array_equal(moving_average(values, width)[:40], moving_average(changed, width)[:40])

    def test_trailing_mean_matches_direct_sum(self):
        values = np.arange(10, dtype=float)
        smoothed = moving_average(values, 4)
        np.testing.assert_allclose(smoothed[3:], [values[i - 3:i + 1].mean() for i in range(3, 10)])
        np.testing.assert_allclose(smoothed[:3], [0.0, 0.25, 0.75])

    def test_unit_width_is_identity(self):
        values = np.random.default_rng(0).normal(size=20)
        np.testing.assert_array_equal(moving_average(values, 1), values)

    def test_width_must_be_positive(self):
        with pytest.raises(ParameterError):
            moving_average(np.ones(3), 0)


class TestNormalizeScores:
    def test_standardized_input_is_unchanged(self):
        raw = np.random.default_rng(1).normal(size=500)
        standardized = (raw - raw.mean()) / raw.std()
        result = normalize_scores(_series(standardized), 1)
        np.testing.assert_allclose(result.norm_scores, standardized, atol=1e-12)
        assert not result.variance_fallback

    def test_constant_scores_fall_back_to_unit_variance(self):
        result = normalize_scores(_series(np.full(50, 3.0)), 3)
        np.testing.assert_array_equal(result.norm_scores, np.zeros(50))
        assert result.variance_fallback
        assert result.baseline_std == 1.0

    def test_statistics_come_from_baseline_span(self):
        values = np.concatenate([np.random.default_rng(2).normal(size=100), np.full(20, 50.0)])
        result = normalize_scores(_series(values), 1, baseline_end=100.0)
        assert result.baseline_count == 100
        assert result.baseline_mean == pytest.approx(values[:100].mean())
        assert np.all(result.anomaly_scores[100:] < -10)

    def test_window_must_be_positive(self):
        with pytest.raises(ParameterError):
            normalize_scores(_series(np.ones(5)), 0)

    def test_empty_baseline(self):
        with pytest.raises(BaselineTooShortError):
            normalize_scores(_series(np.ones(5), np.arange(5.0) + 10), 1, baseline_end=5.0)

    def test_unsettled_scores_stay_out_of_the_statistics(self):
        values = np.concatenate([np.full(10, 100.0), np.random.default_rng(6).normal(size=200)])
        settled = np.arange(values.size) >= 10
        result = normalize_scores(_series(values), 1, settled=settled)
        assert result.baseline_count == 200
        assert result.baseline_mean == pytest.approx(values[10:].mean())
        np.testing.assert_array_equal(result.settled, settled)

    def test_baseline_without_settled_scores(self):
        settled = np.arange(50) >= 40
        with pytest.raises(BaselineTooShortError, match="settled"):
            normalize_scores(_series(np.ones(50)), 1, baseline_end=30.0, settled=settled)

    def test_settled_mask_length_must_match(self):
        with pytest.raises(ParameterError):
            normalize_scores(_series(np.ones(5)), 1, settled=np.ones(4, dtype=bool))


class TestSettledPositions:
    def test_whole_query_span_must_be_settled(self):
        first = np.arange(10)
        series = ScoreSeries(timestamps=np.arange(10.0), norm_scores=np.zeros(10),
                             coverage=np.column_stack([first, first + 3]))
        np.testing.assert_array_equal(
            settled_positions(series, (2, 9)), [False, False, True, True, True, True, False, False, False, False]
        )

    def test_no_range_settles_everything(self):
        assert settled_positions(_series(np.zeros(4)), None).all()


class TestThreeSigma:
    def test_gaussian_false_alarm_rate(self):
        scores = np.random.default_rng(3).normal(size=100_000)
        theta, mask = three_sigma(_series(scores), DetectorConfig())
        assert theta == pytest.approx(scores.mean() - 3 * scores.std())
        assert np.count_nonzero(mask) / scores.size <= 0.003

    def test_five_sigma_outlier_is_flagged(self):
        baseline = np.random.default_rng(4).normal(size=1000)
        outlier = baseline.mean() - 5 * baseline.std()
        scores = np.append(baseline, outlier)
        _, mask = three_sigma(_series(scores), DetectorConfig(), baseline_end=1000.0)
        assert mask[-1]

    def test_baseline_too_short(self):
        with pytest.raises(BaselineTooShortError):
            three_sigma(_series(np.ones(50)), DetectorConfig(min_baseline_scores=100))

    def test_fixed_theta(self):
        scores = np.array([0.1, 0.6, 0.4, 0.9])
        theta, mask = three_sigma(_series(scores), DetectorConfig(fixed_theta=0.5))
        assert theta == 0.5
        np.testing.assert_array_equal(mask, [True, False, True, False])

    def test_unsettled_positions_are_not_flagged(self):
        values = np.concatenate([np.full(5, -50.0), np.random.default_rng(7).normal(size=300)])
        settled = np.arange(values.size) >= 5
        normalized = normalize_scores(_series(values), 1, settled=settled)
        theta, mask = three_sigma(normalized, DetectorConfig())
        assert not mask[:5].any()
        assert normalized.norm_scores[0] < theta

    def test_larger_multiplier_flags_fewer(self):
        series = _series(np.random.default_rng(5).standard_t(3, size=5000))
        flagged = [
            np.count_nonzero(three_sigma(series, DetectorConfig(sigma_multiplier=k))[1])
            for k in (2.0, 3.0, 4.0)
        ]
        assert flagged == sorted(flagged, reverse=True)


class TestExtractIntervals:
    def test_empty_mask(self):
        assert extract_intervals(np.zeros(10, dtype=bool), np.arange(10.0), 0.0) == []

    def test_onset_is_first_flagged_timestamp(self):
        t = 1.4 + np.arange(100) * 1e-5
        mask = np.zeros(100, dtype=bool)
        mask[96:99] = True
        (interval,) = extract_intervals(mask, t, 0.0)
        assert interval.onset == pytest.approx(1.40096)
        assert interval.duration == pytest.approx(2e-5)

    def test_separate_runs(self):
        mask = np.array([0, 1, 1, 0, 1, 1, 1, 0], dtype=bool)
        scores = np.array([0, 2, 3, 0, 1, 5, 4, 0], dtype=float)
        intervals = extract_intervals(mask, np.arange(8.0), 0.0, scores)
        assert [(i.onset, i.duration) for i in intervals] == [(1.0, 1.0), (4.0, 2.0)]
        assert [i.peak_anomaly_score for i in intervals] == [3.0, 5.0]

    def test_short_runs_dropped(self):
        mask = np.array([1, 0, 1, 1, 1], dtype=bool)
        intervals = extract_intervals(mask, np.arange(5.0), 1.5)
        assert [i.onset for i in intervals] == [2.0]

    def test_length_mismatch(self):
        with pytest.raises(ParameterError):
            extract_intervals(np.zeros(3, dtype=bool), np.arange(4.0), 0.0)


class TestEvaluate:
    @pytest.fixture
    def schedule(self):
        return EventSchedule(
            events=(
                ScheduledEvent(onset=1.2, duration=0.05, params=HifParams()),
                ScheduledEvent(onset=1.4, duration=0.05, params=HifParams()),
                ScheduledEvent(onset=1.0, duration=0.3, params=RlParams(kind=RlKind.MOTOR_START)),
            )
        )

    def test_latency_of_matched_fault(self, schedule):
        result = evaluate([DetectedInterval(1.20186, 0.01)], schedule)
        (match,) = result.matches
        assert match.fault_onset == 1.2
        assert match.latency == pytest.approx(0.00186, abs=1e-12)
        assert match.latency_cycles == pytest.approx(0.00186 * 60)
        assert result.missed_onsets == [1.4]
        assert result.detection_rate == 0.5

    def test_detection_at_onset_has_zero_latency(self, schedule):
        result = evaluate([DetectedInterval(1.4, 0.01)], schedule)
        assert result.latencies == [0.0]

    def test_detection_in_benign_window_is_a_false_positive(self, schedule):
        result = evaluate([DetectedInterval(1.01, 0.002)], schedule)
        assert result.false_positives == [(1.01, 0.002)]
        assert result.benign_window_false_positives == [(1.01, 0.002)]
        assert result.matches == []

    def test_detection_before_onset_is_a_false_positive(self, schedule):
        result = evaluate([DetectedInterval(1.15, 0.002)], schedule)
        assert result.false_positives == [(1.15, 0.002)]
        assert result.benign_window_false_positives == []

    def test_later_detection_inside_matched_fault_is_a_continuation(self, schedule):
        result = evaluate([DetectedInterval(1.22, 0.01), DetectedInterval(1.201, 0.01)], schedule)
        assert len(result.matches) == 1
        assert result.matches[0].detected_onset == 1.201
        assert result.continuations == 1
        assert result.false_positives == []

    def test_detection_past_horizon_does_not_match(self, schedule):
        result = evaluate([DetectedInterval(1.43, 0.01)], schedule)
        assert result.matches == []
        assert len(result.false_positives) == 1
        assert result.missed_onsets == [1.2, 1.4]

    def test_custom_horizon(self, schedule):
        result = evaluate([DetectedInterval(1.43, 0.01)], schedule, horizon=0.05)
        assert [m.fault_onset for m in result.matches] == [1.4]

    def test_record_offset(self, schedule):
        result = evaluate([DetectedInterval(11.2, 0.01)], schedule, t0=10.0)
        assert result.matches[0].latency == pytest.approx(0.0)

    def test_no_faults(self):
        result = evaluate([DetectedInterval(0.5, 0.01)], EventSchedule())
        assert result.detection_rate == 1.0
        assert len(result.false_positives) == 1

    def test_summary_document(self, schedule):
        summary = evaluate([DetectedInterval(1.2, 0.01)], schedule).as_dict()
        assert summary["matched"] == 1
        assert summary["missed"] == 1
        assert summary["detection_rate"] == 0.5
        assert summary["matches"][0]["latency_s"] == 0.0


class TestDetectedInterval:
    def test_dict_round_trip(self):
        interval = DetectedInterval(1.2, 0.01, 3.5, 0.02)
        assert DetectedInterval.from_dict(interval.as_dict()) == interval
        assert interval.end == pytest.approx(1.21)
