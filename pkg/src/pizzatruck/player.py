"""Scripted stand-in for the human player.

Watches the outbound stream and schedules submit messages with a seeded
human-ish latency. Each sub-response (judgment, drink, ingredients) is
independently correct with the configured probability.
"""

from __future__ import annotations

import random

from . import wire
from .task import OrderSequence, is_target

DEFAULT_LATENCY_RANGE_S = (0.8, 2.5)


class VirtualPlayer:
    def __init__(
        self,
        session_id: str,
        sequence: OrderSequence,
        accuracy: float,
        seed: int,
        latency_range_s: tuple[float, float] = DEFAULT_LATENCY_RANGE_S,
    ):
        if not 0.0 <= accuracy <= 1.0:
            raise ValueError(f"accuracy must be in [0, 1], got {accuracy}")
        self.session_id = session_id
        self.sequence = sequence
        self.accuracy = accuracy
        self.latency_range_s = latency_range_s
        self._rng = random.Random(seed)

    def _latency(self) -> float:
        return self._rng.uniform(*self.latency_range_s)

    def _correct(self) -> bool:
        return self._rng.random() < self.accuracy

    def observe(self, message: dict, clock_s: float) -> list[tuple[float, dict]]:
        """React to one outbound message; returns (due_time, inbound) pairs."""
        if message.get("type") != "phase_changed":
            return []
        phase = message["phase"]
        index = message["order_index"]
        if index is None:
            return []
        due = clock_s + self._latency()
        if phase == "judging":
            return [(due, self._judgment(index))]
        if phase == "selecting_drink":
            return [(due, self._drink(index))]
        if phase == "selecting_ingredients":
            return [(due, self._ingredients(index))]
        return []

    def _judgment(self, index: int) -> dict:
        truth = is_target(self.sequence, index)
        answer = truth if self._correct() else not truth
        return wire.submit_judgment(self.session_id, answer)

    def _drink(self, index: int) -> dict:
        order = self.sequence.orders[index]
        if self._correct():
            choice = order.drink
        else:
            wrong = [d for d in self.sequence.config.drink_vocab if d != order.drink]
            choice = self._rng.choice(wrong)
        return wire.submit_drink(self.session_id, choice)

    def _ingredients(self, index: int) -> dict:
        order = self.sequence.orders[index]
        chosen = set(order.ingredients)
        if not self._correct():
            chosen.discard(self._rng.choice(sorted(chosen)))
        return wire.submit_ingredients(self.session_id, chosen)
