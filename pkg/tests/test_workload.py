"""Index, artifact detection, calibration, hysteresis classification."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pizzatruck.errors import NotCalibrated
from pizzatruck.signals import DEFAULT_LAYOUT, Epoch
from pizzatruck.workload import (
    CalibrationState,
    HysteresisClassifier,
    WorkloadClass,
    calibrate_baseline,
    classify,
    detect_artifact,
    workload_index,
)


def powers(frontal_theta, parietal_alpha, layout=DEFAULT_LAYOUT):
    theta = np.zeros(16)
    alpha = np.zeros(16)
    theta[list(layout.frontal_set)] = frontal_theta
    alpha[list(layout.parietal_set)] = parietal_alpha
    return theta, alpha


class TestWorkloadIndex:
    def test_direct_ratio(self):
        theta, alpha = powers(4.0, 2.0)
        assert workload_index(theta, alpha, DEFAULT_LAYOUT).value == pytest.approx(2.0)

    def test_equal_means_give_unity(self):
        theta, alpha = powers(3.3, 3.3)
        assert workload_index(theta, alpha, DEFAULT_LAYOUT).value == pytest.approx(1.0)

    def test_scale_invariance(self):
        theta, alpha = powers(4.0, 2.0)
        base = workload_index(theta, alpha, DEFAULT_LAYOUT).value
        scaled = workload_index(theta * 9.0, alpha * 9.0, DEFAULT_LAYOUT).value
        assert scaled == pytest.approx(base, rel=1e-9)

    def test_degenerate_alpha_flagged_not_raised(self):
        theta, alpha = powers(4.0, 0.0)
        result = workload_index(theta, alpha, DEFAULT_LAYOUT)
        assert result.degenerate_alpha
        assert np.isfinite(result.value)
        ok = workload_index(*powers(4.0, 2.0), DEFAULT_LAYOUT)
        assert not ok.degenerate_alpha

    def test_negative_power_rejected(self):
        theta, alpha = powers(4.0, 2.0)
        with pytest.raises(ValueError):
            workload_index(-theta, alpha, DEFAULT_LAYOUT)


def flat_epoch(value, frames=500, fs=250.0):
    return Epoch(
        end_time_s=frames / fs,
        window_s=frames / fs,
        sampling_rate_hz=fs,
        samples=np.full((16, frames), float(value)),
    )


class TestDetectArtifact:
    def test_zero_epoch_clean(self):
        assert detect_artifact(flat_epoch(0.0)) is False

    def test_spike_detected(self):
        epoch = flat_epoch(0.0)
        epoch.samples[3, 100] = 500.0
        assert detect_artifact(epoch) is True

    def test_threshold_is_exclusive(self):
        assert detect_artifact(flat_epoch(100.0)) is False
        assert detect_artifact(flat_epoch(100.0001)) is True

    def test_clean_synthetic_rarely_flags(self):
        rng = np.random.default_rng(2)
        flagged = 0
        n = 200
        for _ in range(n):
            data = rng.normal(0.0, 10.0, (16, 500)) + 30.0 * np.sin(
                2 * np.pi * 10 * np.arange(500) / 250.0
            )
            epoch = Epoch(2.0, 2.0, 250.0, data)
            flagged += detect_artifact(epoch)
        assert flagged / n < 0.01


class TestCalibration:
    def test_constant_indices(self):
        state = calibrate_baseline([1.0] * 20)
        assert state.complete
        assert state.baseline_index == pytest.approx(1.0)
        assert state.epochs_used == 20

    def test_median_robust_to_outlier(self):
        state = calibrate_baseline([1.0] * 19 + [100.0])
        assert state.complete
        assert state.baseline_index == pytest.approx(1.0)

    def test_incomplete_below_k(self):
        state = calibrate_baseline([1.0] * 19)
        assert not state.complete
        assert state.epochs_used == 19

    def test_extra_indices_ignored(self):
        state = calibrate_baseline([1.0] * 20 + [50.0] * 10)
        assert state.baseline_index == pytest.approx(1.0)
        assert state.epochs_used == 20


class TestClassify:
    def calibrated(self, baseline=1.0):
        return CalibrationState(baseline_index=baseline, epochs_used=20, complete=True)

    def test_at_baseline_nominal(self):
        assert classify(1.0, self.calibrated()) is WorkloadClass.NOMINAL

    def test_three_consecutive_overloads_flip(self):
        clf = HysteresisClassifier()
        seen = [clf.update(r) for r in (1.6, 1.7, 1.8)]
        assert seen == [WorkloadClass.NOMINAL, WorkloadClass.NOMINAL, WorkloadClass.OVERLOAD]

    def test_alternating_never_flips(self):
        clf = HysteresisClassifier()
        for r in (1.6, 1.2) * 50:
            assert clf.update(r) is WorkloadClass.NOMINAL

    def test_not_calibrated_raises(self):
        with pytest.raises(NotCalibrated):
            classify(1.0, CalibrationState(0.0, 3, False))

    def test_raw_decision_monotone_in_index(self):
        clf = HysteresisClassifier()
        rel = np.linspace(0.1, 3.0, 50)
        raws = [clf.raw_decision(r) is WorkloadClass.OVERLOAD for r in rel]
        assert raws == sorted(raws)

    @given(st.lists(st.floats(0.1, 3.0), min_size=1, max_size=200),
           st.integers(1, 5))
    @settings(max_examples=80, deadline=None)
    def test_hysteresis_matches_reference_automaton(self, rels, h):
        # Reference: flip only after h consecutive contrary raw decisions.
        clf = HysteresisClassifier(threshold_ratio=1.5, hysteresis_epochs=h)
        current = "nominal"
        run = 0
        for r in rels:
            raw = "overload" if r > 1.5 else "nominal"
            if raw == current:
                run = 0
            else:
                run += 1
                if run >= h:
                    current = raw
                    run = 0
            assert clf.update(r).value == current

    def test_no_flip_on_short_contrary_runs(self):
        clf = HysteresisClassifier(hysteresis_epochs=3)
        for r in (1.6, 1.6, 1.0, 1.6, 1.6, 1.0):
            clf.update(r)
        assert clf.current is WorkloadClass.NOMINAL
