"""EEG recording file format: CSV with one metadata comment line.

Layout::

    # fs=250 layout=standard
    time_s,Fp1,Fp2,...,Oz
    0.000000,1.23456,...

Values are microvolts, written with 6 significant digits. The reader
reports the first offending line (and column) of anything malformed;
NaN and infinite values are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional

import numpy as np

from .errors import MalformedFile, MissingMetadata
from .signals import EegChunk, N_CHANNELS


@dataclass(frozen=True)
class Recording:
    sampling_rate_hz: float
    layout_name: str
    channel_names: tuple[str, ...]
    start_time_s: float
    samples: np.ndarray  # [16 x frames]

    @property
    def frames(self) -> int:
        return self.samples.shape[1]

    @property
    def duration_s(self) -> float:
        return self.frames / self.sampling_rate_hz

    def chunks(self, chunk_frames: int = 25) -> Iterator[EegChunk]:
        for start in range(0, self.frames, chunk_frames):
            stop = min(start + chunk_frames, self.frames)
            yield EegChunk(
                start_time_s=self.start_time_s + start / self.sampling_rate_hz,
                sampling_rate_hz=self.sampling_rate_hz,
                samples=self.samples[:, start:stop].copy(),
            )


def write_csv(
    path,
    chunks: Iterable[EegChunk],
    channel_names: tuple[str, ...],
    layout_name: str = "standard",
) -> int:
    """Write a chunk stream to one CSV recording; returns frames written."""
    path = Path(path)
    frames_written = 0
    fs: Optional[float] = None
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for chunk in chunks:
            if fs is None:
                fs = chunk.sampling_rate_hz
                fh.write(f"# fs={fs:g} layout={layout_name}\n")
                fh.write("time_s," + ",".join(channel_names) + "\n")
            for k in range(chunk.frames):
                t = chunk.start_time_s + k / fs
                row = ",".join(f"{v:.6g}" for v in chunk.samples[:, k])
                fh.write(f"{t:.6f},{row}\n")
            frames_written += chunk.frames
    if fs is None:
        raise ValueError("cannot write an empty recording")
    return frames_written


def read_csv(path) -> Recording:
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()

    if not lines or not lines[0].startswith("#"):
        raise MissingMetadata(f"{path}: first line must be the '# fs=... layout=...' comment")
    meta = _parse_metadata(lines[0])
    if "fs" not in meta:
        raise MissingMetadata(f"{path}: metadata line lacks fs=<Hz>")
    try:
        fs = float(meta["fs"])
    except ValueError:
        raise MalformedFile(f"{path}: bad sampling rate {meta['fs']!r}", line=1)
    if fs <= 0:
        raise MalformedFile(f"{path}: sampling rate must be positive", line=1)
    layout_name = meta.get("layout", "standard")

    if len(lines) < 2:
        raise MalformedFile(f"{path}: missing header row", line=2)
    header = lines[1].split(",")
    if header[0] != "time_s":
        raise MalformedFile(f"{path}: header must start with time_s", line=2, column=1)
    channel_names = tuple(header[1:])
    if len(channel_names) != N_CHANNELS:
        raise MalformedFile(
            f"{path}: expected {N_CHANNELS} channel columns, found {len(channel_names)}", line=2
        )

    times: list[float] = []
    rows: list[list[float]] = []
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != N_CHANNELS + 1:
            raise MalformedFile(
                f"{path}: expected {N_CHANNELS + 1} columns, found {len(cells)}", line=lineno
            )
        parsed = []
        for col, cell in enumerate(cells, start=1):
            try:
                value = float(cell)
            except ValueError:
                raise MalformedFile(f"{path}: non-numeric value {cell!r}", line=lineno, column=col)
            if math.isnan(value) or math.isinf(value):
                raise MalformedFile(f"{path}: non-finite value {cell!r}", line=lineno, column=col)
            parsed.append(value)
        times.append(parsed[0])
        rows.append(parsed[1:])

    if not rows:
        raise MalformedFile(f"{path}: no sample rows", line=3)
    samples = np.asarray(rows).T
    return Recording(
        sampling_rate_hz=fs,
        layout_name=layout_name,
        channel_names=channel_names,
        start_time_s=times[0],
        samples=samples,
    )


def _parse_metadata(line: str) -> dict:
    out = {}
    for token in line.lstrip("#").split():
        if "=" in token:
            key, value = token.split("=", 1)
            out[key] = value
    return out


def replay(
    path,
    realtime: bool = False,
    speed: float = 1.0,
    clock=None,
    chunk_frames: int = 25,
) -> Iterator[EegChunk]:
    """Re-emit a recording as a chunk stream with its original timestamps.

    In realtime mode each chunk is released when the supplied clock
    reaches its end time divided by ``speed``; with no clock given a
    wall clock is used.
    """
    if speed <= 0:
        raise ValueError("speed must be positive")
    recording = read_csv(path)
    if realtime and clock is None:
        from .clock import WallClock

        clock = WallClock()
    started_at = clock.now() if realtime else 0.0
    for chunk in recording.chunks(chunk_frames):
        if realtime:
            due = started_at + (chunk.end_time_s - recording.start_time_s) / speed
            clock.sleep(due - clock.now())
        yield chunk
