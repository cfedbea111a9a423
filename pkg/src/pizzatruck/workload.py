"""Workload index, artifact rejection, calibration and classification.

The index is frontal theta power over parietal alpha power: both marker
directions (theta up, alpha down under load) push it the same way, so a
single ratio against a per-session baseline separates the two classes.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import NotCalibrated
from .signals import ChannelLayout, Epoch

# Floor on the parietal alpha mean so degenerate (alpha-free) synthetic
# inputs cannot blow the ratio up to infinity.
ALPHA_POWER_FLOOR_UV2 = 1e-12

DEFAULT_ARTIFACT_THRESHOLD_UV = 100.0
DEFAULT_CALIBRATION_EPOCHS = 20
DEFAULT_OVERLOAD_THRESHOLD = 1.5
DEFAULT_HYSTERESIS_EPOCHS = 3


class WorkloadClass(str, Enum):
    NOMINAL = "nominal"
    OVERLOAD = "overload"


class WorkloadIndex(NamedTuple):
    value: float
    degenerate_alpha: bool


def workload_index(
    theta_power: np.ndarray,
    alpha_power: np.ndarray,
    layout: ChannelLayout,
) -> WorkloadIndex:
    """Frontal-mean theta over parietal-mean alpha.

    ``degenerate_alpha`` is set when the epsilon floor engaged, i.e. the
    parietal alpha mean was effectively zero.
    """
    theta_power = np.asarray(theta_power, dtype=float)
    alpha_power = np.asarray(alpha_power, dtype=float)
    if np.any(theta_power < 0) or np.any(alpha_power < 0):
        raise ValueError("band powers must be non-negative")
    frontal_theta = float(np.mean(theta_power[list(layout.frontal_set)]))
    parietal_alpha = float(np.mean(alpha_power[list(layout.parietal_set)]))
    degenerate = parietal_alpha < ALPHA_POWER_FLOOR_UV2
    return WorkloadIndex(
        value=frontal_theta / max(parietal_alpha, ALPHA_POWER_FLOOR_UV2),
        degenerate_alpha=degenerate,
    )


def detect_artifact(epoch: Epoch, amplitude_threshold_uv: float = DEFAULT_ARTIFACT_THRESHOLD_UV) -> bool:
    """True when any (filtered) sample magnitude exceeds the threshold."""
    if amplitude_threshold_uv <= 0:
        raise ValueError("amplitude threshold must be positive")
    return bool(np.any(np.abs(epoch.samples) > amplitude_threshold_uv))


@dataclass(frozen=True)
class CalibrationState:
    baseline_index: float
    epochs_used: int
    complete: bool


def calibrate_baseline(
    indices: Sequence[float],
    min_epochs: int = DEFAULT_CALIBRATION_EPOCHS,
) -> CalibrationState:
    """Baseline = median of the first ``min_epochs`` artifact-free indices.

    Returns an incomplete state (interim median) until enough epochs have
    been seen.
    """
    used = list(indices[:min_epochs])
    if not used:
        return CalibrationState(baseline_index=0.0, epochs_used=0, complete=False)
    return CalibrationState(
        baseline_index=float(statistics.median(used)),
        epochs_used=len(used),
        complete=len(used) >= min_epochs,
    )


class HysteresisClassifier:
    """Two-class decision debounced over consecutive epochs.

    The raw decision is overload iff index / baseline exceeds the
    threshold ratio; the emitted class only flips after
    ``hysteresis_epochs`` consecutive raw decisions disagree with it.
    """

    def __init__(
        self,
        threshold_ratio: float = DEFAULT_OVERLOAD_THRESHOLD,
        hysteresis_epochs: int = DEFAULT_HYSTERESIS_EPOCHS,
    ):
        if threshold_ratio <= 0:
            raise ValueError("threshold_ratio must be positive")
        if hysteresis_epochs < 1:
            raise ValueError("hysteresis_epochs must be >= 1")
        self.threshold_ratio = threshold_ratio
        self.hysteresis_epochs = hysteresis_epochs
        self.current = WorkloadClass.NOMINAL
        self._contrary_run = 0

    def raw_decision(self, relative_index: float) -> WorkloadClass:
        return (
            WorkloadClass.OVERLOAD
            if relative_index > self.threshold_ratio
            else WorkloadClass.NOMINAL
        )

    def update(self, relative_index: float) -> WorkloadClass:
        raw = self.raw_decision(relative_index)
        if raw == self.current:
            self._contrary_run = 0
        else:
            self._contrary_run += 1
            if self._contrary_run >= self.hysteresis_epochs:
                self.current = raw
                self._contrary_run = 0
        return self.current


def classify(
    index: float,
    calibration: CalibrationState,
    threshold_ratio: float = DEFAULT_OVERLOAD_THRESHOLD,
    hysteresis_epochs: int = DEFAULT_HYSTERESIS_EPOCHS,
    classifier: Optional[HysteresisClassifier] = None,
) -> WorkloadClass:
    """Classify one epoch's index against the calibrated baseline.

    Pass the same ``classifier`` across calls to carry hysteresis state;
    omitting it gives the single-shot decision from a fresh Nominal state.
    """
    if not calibration.complete:
        raise NotCalibrated(
            f"baseline needs {DEFAULT_CALIBRATION_EPOCHS} epochs, has {calibration.epochs_used}"
        )
    if classifier is None:
        classifier = HysteresisClassifier(threshold_ratio, hysteresis_epochs)
    return classifier.update(index / calibration.baseline_index)


@dataclass(frozen=True)
class WorkloadSample:
    """One per-epoch workload estimate, ready for broadcast or the log."""

    end_time_s: float
    frontal_theta_power: float
    parietal_alpha_power: float
    index: float
    relative_index: Optional[float]
    workload_class: WorkloadClass
    artifact: bool
    degenerate_alpha: bool = False

    def to_dict(self) -> dict:
        return {
            "end_time_s": self.end_time_s,
            "frontal_theta_power": self.frontal_theta_power,
            "parietal_alpha_power": self.parietal_alpha_power,
            "index": self.index,
            "relative_index": self.relative_index,
            "class": self.workload_class.value,
            "artifact": self.artifact,
            "degenerate_alpha": self.degenerate_alpha,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "WorkloadSample":
        return cls(
            end_time_s=data["end_time_s"],
            frontal_theta_power=data["frontal_theta_power"],
            parietal_alpha_power=data["parietal_alpha_power"],
            index=data["index"],
            relative_index=data["relative_index"],
            workload_class=WorkloadClass(data["class"]),
            artifact=data["artifact"],
            degenerate_alpha=data.get("degenerate_alpha", False),
        )
