"""Shared data types for the EEG processing chain.

All sample values are microvolts. A chunk is the transport unit on the
wire (16 channels x F frames); an epoch is the sliding analysis window
the workload estimate is computed on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidBand

N_CHANNELS = 16


@dataclass(frozen=True)
class ChannelLayout:
    """16-channel montage with the frontal and parietal groups marked."""

    channel_names: tuple[str, ...]
    frontal_set: tuple[int, ...]
    parietal_set: tuple[int, ...]

    def __post_init__(self):
        if len(self.channel_names) != N_CHANNELS:
            raise ValueError(f"layout needs exactly {N_CHANNELS} channels, got {len(self.channel_names)}")
        if len(set(self.channel_names)) != N_CHANNELS:
            raise ValueError("channel names must be distinct")
        if not self.frontal_set or not self.parietal_set:
            raise ValueError("frontal and parietal sets must be non-empty")
        if set(self.frontal_set) & set(self.parietal_set):
            raise ValueError("frontal and parietal sets must be disjoint")
        for i in (*self.frontal_set, *self.parietal_set):
            if not 0 <= i < N_CHANNELS:
                raise ValueError(f"channel index {i} out of range")

    def frontal_names(self) -> tuple[str, ...]:
        return tuple(self.channel_names[i] for i in self.frontal_set)

    def parietal_names(self) -> tuple[str, ...]:
        return tuple(self.channel_names[i] for i in self.parietal_set)


# 10-20 subset; frontal row feeds the theta marker, parietal row the alpha marker.
DEFAULT_LAYOUT = ChannelLayout(
    channel_names=(
        "Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8",
        "C3", "Cz", "C4",
        "P7", "P3", "Pz", "P4", "P8",
        "Oz",
    ),
    frontal_set=(0, 1, 2, 3, 4, 5, 6),
    parietal_set=(10, 11, 12, 13, 14),
)

LAYOUTS = {"standard": DEFAULT_LAYOUT}


@dataclass(frozen=True)
class BandDefinition:
    name: str
    f_low_hz: float
    f_high_hz: float

    def __post_init__(self):
        if not 0 < self.f_low_hz < self.f_high_hz:
            raise InvalidBand(f"need 0 < f_low < f_high, got [{self.f_low_hz}, {self.f_high_hz}]")


THETA_BAND = BandDefinition("theta", 4.0, 8.0)
ALPHA_BAND = BandDefinition("alpha", 8.0, 12.0)


@dataclass(frozen=True)
class EegChunk:
    """A timestamped block of raw samples, [channels x frames]."""

    start_time_s: float
    sampling_rate_hz: float
    samples: np.ndarray

    def __post_init__(self):
        if self.samples.ndim != 2 or self.samples.shape[0] != N_CHANNELS:
            raise ValueError(f"samples must be ({N_CHANNELS}, F), got {self.samples.shape}")
        if self.samples.shape[1] < 1:
            raise ValueError("chunk must contain at least one frame")

    @property
    def frames(self) -> int:
        return self.samples.shape[1]

    @property
    def duration_s(self) -> float:
        return self.frames / self.sampling_rate_hz

    @property
    def end_time_s(self) -> float:
        """Time just past the last frame (start of the next chunk)."""
        return self.start_time_s + self.duration_s


@dataclass(frozen=True)
class Epoch:
    """Trailing analysis window; contains only samples at or before end_time_s."""

    end_time_s: float
    window_s: float
    sampling_rate_hz: float
    samples: np.ndarray

    @property
    def frames(self) -> int:
        return self.samples.shape[1]


@dataclass(frozen=True)
class PsdEstimate:
    """One-sided power spectral density per channel, in uV^2/Hz.

    Scaled so the rectangle-rule integral over [0, fs/2] equals the
    time-domain mean power of the windowed signal.
    """

    freqs_hz: np.ndarray
    power: np.ndarray  # [channels x bins]
    df_hz: float

    def total_power(self) -> np.ndarray:
        """Integrated power per channel over the full frequency range."""
        return np.sum(self.power, axis=1) * self.df_hz
