"""Welch PSD estimation and band-power integration."""

from __future__ import annotations

import numpy as np
from scipy import signal as sp_signal

from .errors import BandOutOfRange, SegmentTooLong
from .signals import BandDefinition, Epoch, PsdEstimate

_TAPERS = {"hann", "boxcar"}


def welch_psd(
    epoch: Epoch,
    segment_len: int | None = None,
    overlap_fraction: float = 0.5,
    taper: str = "hann",
) -> PsdEstimate:
    """Average tapered periodograms over overlapping segments.

    One-sided density convention: sum(power) * df equals the time-domain
    mean power of the epoch (exactly so for a boxcar taper with a single
    segment, approximately under tapering).

    ``segment_len`` defaults to one second of samples, capped at the
    epoch length.
    """
    frames = epoch.frames
    fs = epoch.sampling_rate_hz
    if segment_len is None:
        segment_len = min(frames, int(round(fs)))
    if segment_len > frames:
        raise SegmentTooLong(f"segment of {segment_len} frames exceeds epoch of {frames}")
    if segment_len < 2:
        raise ValueError(f"segment_len must be >= 2, got {segment_len}")
    if not 0.0 <= overlap_fraction < 1.0:
        raise ValueError(f"overlap_fraction must be in [0, 1), got {overlap_fraction}")
    if taper not in _TAPERS:
        raise ValueError(f"taper must be one of {sorted(_TAPERS)}, got {taper!r}")

    freqs, power = sp_signal.welch(
        epoch.samples,
        fs=fs,
        window=taper,
        nperseg=segment_len,
        noverlap=int(overlap_fraction * segment_len),
        detrend=False,
        scaling="density",
        axis=1,
    )
    return PsdEstimate(freqs_hz=freqs, power=power, df_hz=float(freqs[1] - freqs[0]))


def band_power(psd: PsdEstimate, band: BandDefinition) -> np.ndarray:
    """Trapezoidal integral of the PSD over the band, per channel (uV^2)."""
    f_max = float(psd.freqs_hz[-1])
    if band.f_low_hz < 0 or band.f_high_hz > f_max:
        raise BandOutOfRange(
            f"band [{band.f_low_hz}, {band.f_high_hz}] outside PSD range [0, {f_max}]"
        )
    mask = (psd.freqs_hz >= band.f_low_hz) & (psd.freqs_hz <= band.f_high_hz)
    if np.count_nonzero(mask) < 2:
        return np.zeros(psd.power.shape[0])
    return np.trapezoid(psd.power[:, mask], psd.freqs_hz[mask], axis=1)
