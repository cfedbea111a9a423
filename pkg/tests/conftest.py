import numpy as np
import pytest

from pizzatruck.signals import DEFAULT_LAYOUT, EegChunk
from pizzatruck.task import GameConfig


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for status, key in (("PASS", "passed"), ("FAIL", "failed")):
        for report in terminalreporter.stats.get(key, []):
            if "test_acceptance" in getattr(report, "nodeid", ""):
                lines.append((report.nodeid.split("::")[-1], status))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{status}  {name}")


@pytest.fixture
def layout():
    return DEFAULT_LAYOUT


@pytest.fixture
def small_config():
    """A quick game for state-machine tests."""
    return GameConfig(n_level=1, trial_count=5, target_rate=0.5, seed=11)


def make_chunk(samples: np.ndarray, start_time_s: float = 0.0, fs: float = 250.0) -> EegChunk:
    return EegChunk(start_time_s=start_time_s, sampling_rate_hz=fs, samples=samples)


def sine_chunk(freq_hz: float, duration_s: float, fs: float = 250.0, amplitude: float = 1.0,
               start_time_s: float = 0.0) -> EegChunk:
    t = (np.arange(int(round(duration_s * fs))) + round(start_time_s * fs)) / fs
    wave = amplitude * np.sin(2 * np.pi * freq_hz * t)
    return make_chunk(np.tile(wave, (16, 1)), start_time_s=start_time_s, fs=fs)
