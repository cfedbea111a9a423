"""Synthetic 16-channel EEG whose band markers track a scripted load level.

Stands in for the headset: frontal channels carry a 6 Hz component whose
amplitude grows with the scripted level, parietal channels a 10 Hz
component that shrinks with it, everything rides on seeded pink noise.
Optional motion-artifact spikes hit all channels at Poisson times. The
output is a pure function of (script, params).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterable, Iterator

import numpy as np

from .errors import InvalidScript
from .signals import DEFAULT_LAYOUT, ChannelLayout, EegChunk, N_CHANNELS

THETA_CARRIER_HZ = 6.0
ALPHA_CARRIER_HZ = 10.0
LEVEL_RAMP_S = 1.0  # linear ramp between steps; avoids spectral splatter
ARTIFACT_SPIKE_S = 0.1


@dataclass(frozen=True)
class WorkloadScript:
    """Stepwise target load level over the session, levels in [0, 1]."""

    steps: tuple[tuple[float, float], ...]
    duration_s: float

    def __post_init__(self):
        if not self.steps:
            raise InvalidScript("script needs at least one step")
        if self.steps[0][0] != 0.0:
            raise InvalidScript(f"first step must start at t=0, got t={self.steps[0][0]}")
        times = [t for t, _ in self.steps]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise InvalidScript("step times must be strictly increasing")
        for t, level in self.steps:
            if not 0.0 <= level <= 1.0:
                raise InvalidScript(f"level {level} at t={t} outside [0, 1]")
        if self.duration_s <= 0:
            raise InvalidScript("duration_s must be positive")

    def level_at(self, t_s: float) -> float:
        """Level at time t, with a 1 s linear ramp after each step."""
        level = self.steps[0][1]
        prev_target = self.steps[0][1]
        for t_start, target in self.steps:
            if t_start == 0.0:
                level = target
                prev_target = target
                continue
            if t_s < t_start:
                break
            if t_s >= t_start + LEVEL_RAMP_S:
                level = target
            else:
                level = prev_target + (target - prev_target) * (t_s - t_start) / LEVEL_RAMP_S
            prev_target = target
        return level

    def level_array(self, sampling_rate_hz: float, n_frames: int) -> np.ndarray:
        t = np.arange(n_frames) / sampling_rate_hz
        out = np.full(n_frames, self.steps[0][1])
        prev_level = self.steps[0][1]
        for t_start, target in self.steps:
            if t_start == 0.0:
                prev_level = target
                out[:] = target
                continue
            ramp = (t >= t_start) & (t < t_start + LEVEL_RAMP_S)
            out[ramp] = prev_level + (target - prev_level) * (t[ramp] - t_start) / LEVEL_RAMP_S
            out[t >= t_start + LEVEL_RAMP_S] = target
            prev_level = target
        return out

    def transition_times(self) -> list[float]:
        return [t for t, _ in self.steps if t > 0.0]

    def to_json(self) -> str:
        return json.dumps([{"t": t, "level": level} for t, level in self.steps])

    @classmethod
    def from_json(cls, text: str, duration_s: float) -> "WorkloadScript":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidScript(f"script is not valid JSON: {exc}") from exc
        if not isinstance(raw, list):
            raise InvalidScript("script JSON must be a list of {t, level} objects")
        steps = []
        for entry in raw:
            try:
                steps.append((float(entry["t"]), float(entry["level"])))
            except (TypeError, KeyError, ValueError) as exc:
                raise InvalidScript(f"bad script step {entry!r}") from exc
        return cls(steps=tuple(steps), duration_s=duration_s)


CONSTANT_LOW = WorkloadScript(steps=((0.0, 0.0),), duration_s=180.0)
STEP_AT_60S = WorkloadScript(steps=((0.0, 0.0), (60.0, 1.0)), duration_s=180.0)


@dataclass(frozen=True)
class GeneratorParams:
    """Amplitude ranges are (value at level 0, value at level 1), in uV.

    Defaults separate level 0 from level 1 by two orders of magnitude in
    the theta/alpha ratio, comfortably clearing the 1.5x classifier
    threshold.
    """

    layout: ChannelLayout = DEFAULT_LAYOUT
    sampling_rate_hz: float = 250.0
    seed: int = 0
    theta_amp_range: tuple[float, float] = (5.0, 20.0)
    alpha_amp_range: tuple[float, float] = (20.0, 5.0)
    noise_sigma_uv: float = 10.0
    pink_exponent: float = 1.0
    artifact_rate_per_min: float = 0.0
    artifact_magnitude_uv: float = 500.0
    chunk_frames: int = 25

    def __post_init__(self):
        if min(self.theta_amp_range) < 0 or min(self.alpha_amp_range) < 0:
            raise ValueError("amplitude ranges must be non-negative")
        if not 0.0 <= self.pink_exponent <= 2.0:
            raise ValueError(f"pink_exponent must be in [0, 2], got {self.pink_exponent}")
        if self.noise_sigma_uv < 0:
            raise ValueError("noise_sigma_uv must be non-negative")
        if self.chunk_frames < 1:
            raise ValueError("chunk_frames must be >= 1")


# The 1/f shaping flattens below this frequency; without the shelf the
# few sub-0.5 Hz components dominate the variance and leave visible
# chance correlation between independent seeds over short windows.
_PINK_SHELF_HZ = 0.5


def _pink_noise(n: int, fs: float, exponent: float, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """FFT-shaped noise with power density ~ 1/f^exponent, std = sigma."""
    white = rng.standard_normal(n)
    if sigma == 0.0:
        return np.zeros(n)
    spectrum = np.fft.rfft(white)
    freqs = np.fft.rfftfreq(n, 1.0 / fs)
    shape = np.zeros_like(freqs)
    nonzero = freqs > 0
    shape[nonzero] = np.maximum(freqs[nonzero], _PINK_SHELF_HZ) ** (-exponent / 2.0)
    shaped = np.fft.irfft(spectrum * shape, n)
    std = shaped.std()
    if std == 0.0:
        return np.zeros(n)
    return shaped * (sigma / std)


def generate_array(script: WorkloadScript, params: GeneratorParams) -> np.ndarray:
    """Full-session sample matrix [16 x fs*duration], in microvolts."""
    fs = params.sampling_rate_hz
    n = int(round(script.duration_s * fs))
    rng = np.random.default_rng(params.seed)

    # Draw order is part of the determinism contract: phases first
    # (theta then alpha), then per-channel noise in channel order.
    theta_phase = rng.uniform(0.0, 2.0 * np.pi, N_CHANNELS)
    alpha_phase = rng.uniform(0.0, 2.0 * np.pi, N_CHANNELS)

    t = np.arange(n) / fs
    level = script.level_array(fs, n)
    theta0, theta1 = params.theta_amp_range
    alpha0, alpha1 = params.alpha_amp_range
    theta_amp = theta0 + (theta1 - theta0) * level
    alpha_amp = alpha0 + (alpha1 - alpha0) * level

    frontal = set(params.layout.frontal_set)
    parietal = set(params.layout.parietal_set)

    out = np.zeros((N_CHANNELS, n))
    for c in range(N_CHANNELS):
        if c in frontal:
            out[c] += theta_amp * np.sin(2.0 * np.pi * THETA_CARRIER_HZ * t + theta_phase[c])
        if c in parietal:
            out[c] += alpha_amp * np.sin(2.0 * np.pi * ALPHA_CARRIER_HZ * t + alpha_phase[c])
        out[c] += _pink_noise(n, fs, params.pink_exponent, params.noise_sigma_uv, rng)

    if params.artifact_rate_per_min > 0.0:
        spikes = _spike_times(
            script.duration_s,
            params.artifact_rate_per_min,
            np.random.default_rng([params.seed, 0xA27]),
        )
        _add_spikes(out, fs, 0.0, spikes, params.artifact_magnitude_uv)
    return out


def _chunk_array(data: np.ndarray, fs: float, chunk_frames: int) -> Iterator[EegChunk]:
    n = data.shape[1]
    for start in range(0, n, chunk_frames):
        stop = min(start + chunk_frames, n)
        yield EegChunk(
            start_time_s=start / fs,
            sampling_rate_hz=fs,
            samples=data[:, start:stop].copy(),
        )


def generate(script: WorkloadScript, params: GeneratorParams) -> Iterator[EegChunk]:
    """Chunked stream over the scripted session; see generate_array."""
    data = generate_array(script, params)
    return _chunk_array(data, params.sampling_rate_hz, params.chunk_frames)


def _spike_times(duration_s: float, rate_per_min: float, rng: np.random.Generator) -> list[float]:
    """Poisson event times over [0, duration)."""
    rate_per_s = rate_per_min / 60.0
    times = []
    t = rng.exponential(1.0 / rate_per_s)
    while t < duration_s:
        times.append(t)
        t += rng.exponential(1.0 / rate_per_s)
    return times


def _add_spikes(
    data: np.ndarray, fs: float, start_time_s: float, spike_times: list[float], magnitude_uv: float
) -> None:
    """Add half-sine bumps (ARTIFACT_SPIKE_S long) on all channels, in place."""
    n = data.shape[1]
    for s in spike_times:
        first = int(np.ceil((s - start_time_s) * fs))
        last = int(np.floor((s - start_time_s + ARTIFACT_SPIKE_S) * fs))
        first = max(first, 0)
        last = min(last, n - 1)
        if first > last:
            continue
        frames = np.arange(first, last + 1)
        tau = frames / fs + start_time_s - s
        data[:, frames] += magnitude_uv * np.sin(np.pi * tau / ARTIFACT_SPIKE_S)


def inject_artifacts(
    stream: Iterable[EegChunk],
    rate_per_min: float,
    magnitude_uv: float = 500.0,
    seed: int = 0,
) -> Iterator[EegChunk]:
    """Overlay seeded Poisson motion spikes on an existing chunk stream."""
    if rate_per_min < 0:
        raise ValueError("rate_per_min must be >= 0")
    if rate_per_min == 0.0:
        yield from stream
        return

    rng = np.random.default_rng([seed, 0xA27])
    rate_per_s = rate_per_min / 60.0
    next_spike: float | None = None
    active: list[float] = []

    for chunk in stream:
        if next_spike is None:
            next_spike = chunk.start_time_s + rng.exponential(1.0 / rate_per_s)
        while next_spike < chunk.end_time_s:
            active.append(next_spike)
            next_spike += rng.exponential(1.0 / rate_per_s)
        # Keep only spikes that can still touch this or later chunks.
        active = [s for s in active if s + ARTIFACT_SPIKE_S >= chunk.start_time_s]
        if active:
            samples = chunk.samples.copy()
            _add_spikes(samples, chunk.sampling_rate_hz, chunk.start_time_s, active, magnitude_uv)
            chunk = replace(chunk, samples=samples)
        yield chunk
