"""Streaming sliding-window segmentation of a chunked sample stream.

An epoch of ``window_s`` is emitted every ``step_s`` seconds of stream
time, starting once a full window of samples exists. Emission times are
anchored to the first chunk's start, so output does not depend on chunk
boundaries.
"""

from __future__ import annotations

import numpy as np

from .signals import Epoch, EegChunk

# A chunk whose declared start drifts more than half a frame from the
# running frame count is treated as a gap (producer restarted).
_GAP_TOLERANCE_FRAMES = 0.5


class EpochSegmenter:
    def __init__(self, window_s: float, step_s: float, sampling_rate_hz: float, n_channels: int = 16):
        if window_s <= 0 or step_s <= 0:
            raise ValueError("window_s and step_s must be positive")
        if step_s > window_s:
            raise ValueError(f"step_s {step_s} must not exceed window_s {window_s}")
        self.window_s = window_s
        self.step_s = step_s
        self.fs = sampling_rate_hz
        self.n_channels = n_channels
        self.window_frames = int(round(window_s * sampling_rate_hz))
        self.step_frames = max(1, int(round(step_s * sampling_rate_hz)))
        self._origin_s: float | None = None
        self._frames_seen = 0
        self._next_emit_frame = self.window_frames
        self._tail = np.empty((n_channels, 0))

    def _reset_at(self, start_time_s: float) -> None:
        self._origin_s = start_time_s
        self._frames_seen = 0
        self._next_emit_frame = self.window_frames
        self._tail = np.empty((self.n_channels, 0))

    def push(self, chunk: EegChunk) -> list[Epoch]:
        """Feed one chunk; return every epoch that became complete."""
        if self._origin_s is None:
            self._reset_at(chunk.start_time_s)
        else:
            expected_frame = self._frames_seen
            declared_frame = (chunk.start_time_s - self._origin_s) * self.fs
            drift = declared_frame - expected_frame
            if drift < -_GAP_TOLERANCE_FRAMES:
                raise ValueError(
                    f"chunk at {chunk.start_time_s}s overlaps already-consumed samples"
                )
            if drift > _GAP_TOLERANCE_FRAMES:
                # Gap in the stream: drop stale context, restart the grid.
                self._reset_at(chunk.start_time_s)

        work = np.concatenate([self._tail, chunk.samples], axis=1)
        first_work_frame = self._frames_seen - self._tail.shape[1]
        self._frames_seen += chunk.frames

        epochs: list[Epoch] = []
        while self._next_emit_frame <= self._frames_seen:
            end = self._next_emit_frame
            lo = end - self.window_frames - first_work_frame
            hi = end - first_work_frame
            epochs.append(
                Epoch(
                    end_time_s=self._origin_s + end / self.fs,
                    window_s=self.window_s,
                    sampling_rate_hz=self.fs,
                    samples=work[:, lo:hi].copy(),
                )
            )
            self._next_emit_frame += self.step_frames

        keep = min(work.shape[1], self.window_frames)
        self._tail = work[:, work.shape[1] - keep:]
        return epochs
