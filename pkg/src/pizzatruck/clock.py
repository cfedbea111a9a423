"""Clock abstraction so sessions can run on wall time or simulated time.

Everything that needs to know the time takes a clock as a dependency;
tests and the headless simulator drive a ``SimulatedClock`` far faster
than real time, while ``serve`` uses the wall clock.
"""

from __future__ import annotations

import asyncio
import time


class WallClock:
    """Real time, anchored at construction."""

    def __init__(self):
        self._t0 = time.monotonic()

    def now(self) -> float:
        return time.monotonic() - self._t0

    def sleep(self, dt_s: float) -> None:
        if dt_s > 0:
            time.sleep(dt_s)

    async def asleep(self, dt_s: float) -> None:
        if dt_s > 0:
            await asyncio.sleep(dt_s)


class AcceleratedClock:
    """Wall clock running ``factor`` times faster; for server tests."""

    def __init__(self, factor: float = 10.0):
        self.factor = factor
        self._t0 = time.monotonic()

    def now(self) -> float:
        return (time.monotonic() - self._t0) * self.factor

    def sleep(self, dt_s: float) -> None:
        if dt_s > 0:
            time.sleep(dt_s / self.factor)

    async def asleep(self, dt_s: float) -> None:
        if dt_s > 0:
            await asyncio.sleep(dt_s / self.factor)


class SimulatedClock:
    """Manually advanced clock; sleep() advances it instantly."""

    def __init__(self, start_s: float = 0.0):
        self._now = start_s

    def now(self) -> float:
        return self._now

    def advance(self, dt_s: float) -> None:
        if dt_s < 0:
            raise ValueError("cannot advance a clock backwards")
        self._now += dt_s

    def advance_to(self, t_s: float) -> None:
        if t_s < self._now:
            raise ValueError("cannot advance a clock backwards")
        self._now = t_s

    def sleep(self, dt_s: float) -> None:
        if dt_s > 0:
            self._now += dt_s

    async def asleep(self, dt_s: float) -> None:
        if dt_s > 0:
            self._now += dt_s
        await asyncio.sleep(0)
