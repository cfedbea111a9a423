"""Session orchestration: one game, one EEG stream, many subscribers.

``SessionCore`` is the single-writer event core: every state mutation
goes through ``handle_inbound``, ``tick`` or ``publish_workload``, all of
which return the outbound messages they produce. Transports (websocket
server, headless simulator) own the fan-out; the core stays synchronous
and deterministic, so an append-only log of what went in reproduces
exactly what came out.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional

from . import wire
from .errors import (
    AlreadyRunning,
    BadMessage,
    ConfigInvalid,
    ConfigLocked,
    IllegalTransition,
    LogCorrupt,
)
from .task import (
    ClockExpired,
    FeedbackDone,
    GameConfig,
    GameEngine,
    OrderPresented,
    OutcomeRecorded,
    PhaseKind,
    PresentNext,
    SessionFinished,
    SubmitDrink,
    SubmitIngredients,
    SubmitJudgment,
    generate_sequence,
)
from .workload import WorkloadSample


class SessionPhase(str, Enum):
    CONFIGURING = "configuring"
    RUNNING = "running"
    FINISHED = "finished"


@dataclass(frozen=True)
class LogEntry:
    clock_s: float
    direction: str  # "in" | "out" | "sample" | "meta"
    payload: dict

    def to_json(self) -> str:
        return wire.encode(
            {"clock_s": self.clock_s, "direction": self.direction, "payload": self.payload}
        )

    @classmethod
    def from_json(cls, text: str) -> "LogEntry":
        data = json.loads(text)
        return cls(clock_s=data["clock_s"], direction=data["direction"], payload=data["payload"])


class SessionLog:
    """Append-only in-memory log, optionally mirrored to a JSON-lines file."""

    def __init__(self, path: Optional[Path] = None):
        self.entries: list[LogEntry] = []
        self._path = Path(path) if path is not None else None
        self._fh = None
        if self._path is not None:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            self._fh = self._path.open("w", encoding="utf-8", newline="\n")

    def append(self, clock_s: float, direction: str, payload: dict) -> None:
        entry = LogEntry(clock_s=clock_s, direction=direction, payload=payload)
        self.entries.append(entry)
        if self._fh is not None:
            self._fh.write(entry.to_json() + "\n")

    def close(self) -> None:
        if self._fh is not None:
            self._fh.flush()
            self._fh.close()
            self._fh = None

    @staticmethod
    def read(path) -> list[LogEntry]:
        entries = []
        with Path(path).open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    entries.append(LogEntry.from_json(line))
        return entries


class SessionCore:
    """Deterministic session state machine behind any transport."""

    def __init__(
        self,
        session_id: str,
        config: GameConfig = GameConfig(),
        log: Optional[SessionLog] = None,
    ):
        self.session_id = session_id
        self.phase = SessionPhase.CONFIGURING
        self.config = config
        self.sequence = generate_sequence(config)
        self.engine: Optional[GameEngine] = None
        self.clock_s = 0.0
        self.latest_workload: Optional[WorkloadSample] = None
        self.log = log
        self._started_at: Optional[float] = None
        self._ticks_emitted = 0  # whole seconds of play already announced

    # -- logging helpers -----------------------------------------------------

    def _log(self, direction: str, payload: dict, clock_s: Optional[float] = None) -> None:
        if self.log is not None:
            self.log.append(self.clock_s if clock_s is None else clock_s, direction, payload)

    def _out(self, messages: list[dict]) -> list[dict]:
        for message in messages:
            self._log("out", message, clock_s=message.get("clock_s"))
        return messages

    # -- clock ----------------------------------------------------------------

    def advance_to(self, clock_s: float) -> list[dict]:
        """Move the session clock forward, emitting countdown ticks.

        Ticks fire once per whole second of play; each message carries
        the boundary time itself, so the output does not depend on how
        the live loop happened to slice time. Crossing the session
        duration expires the game exactly once.
        """
        if clock_s < self.clock_s:
            raise ValueError(f"clock cannot move backwards ({clock_s} < {self.clock_s})")
        out: list[dict] = []
        if self.phase is SessionPhase.RUNNING:
            duration = self.config.session_duration_s
            expiry = self._started_at + duration
            while True:
                boundary = self._started_at + self._ticks_emitted + 1
                if boundary > clock_s or boundary > expiry:
                    break
                remaining = max(0.0, duration - (self._ticks_emitted + 1))
                out.append(wire.countdown_tick(boundary, remaining))
                self._ticks_emitted += 1
            if expiry <= clock_s and self.phase is SessionPhase.RUNNING:
                out.extend(self._expire(expiry))
        self.clock_s = max(self.clock_s, clock_s)
        return self._out(out)

    def tick(self, dt_s: float) -> list[dict]:
        if dt_s < 0:
            raise ValueError("dt_s must be >= 0")
        if dt_s == 0.0:
            return []
        return self.advance_to(self.clock_s + dt_s)

    def _expire(self, at_clock_s: float) -> list[dict]:
        effects = self.engine.handle(ClockExpired(), at_clock_s) if self.engine else []
        self.phase = SessionPhase.FINISHED
        out = []
        for effect in effects:
            if isinstance(effect, SessionFinished):
                out.append(wire.session_end(at_clock_s, effect.score))
        return out

    # -- inbound --------------------------------------------------------------

    def handle_inbound(self, message: dict) -> list[dict]:
        """Validate, log and apply one inbound message.

        Domain rejections (bad config, wrong phase, illegal event) come
        back as ``error`` messages rather than exceptions: they are part
        of the session's observable, replayable behaviour.
        """
        try:
            wire.validate_inbound(message)
        except BadMessage as exc:
            self._log("in", message)
            return self._out([wire.error(self.clock_s, "bad_message", str(exc))])

        self._log("in", message)
        if message["session_id"] != self.session_id:
            return self._out(
                [wire.error(self.clock_s, "unknown_session", message["session_id"])]
            )

        tag = message["type"]
        try:
            if tag == "set_config":
                return self._out(self._configure(message["config"]))
            if tag == "start_session":
                return self._out(self._start())
            if tag == "subscribe":
                return self._out(self._snapshot())
            return self._out(self._route_player(message))
        except ConfigLocked as exc:
            return self._out([wire.error(self.clock_s, "config_locked", str(exc))])
        except ConfigInvalid as exc:
            return self._out([wire.error(self.clock_s, "config_invalid", str(exc))])
        except AlreadyRunning as exc:
            return self._out([wire.error(self.clock_s, "already_running", str(exc))])
        except IllegalTransition as exc:
            return self._out([wire.error(self.clock_s, "illegal_transition", str(exc))])

    def _configure(self, patch: dict) -> list[dict]:
        if self.phase is not SessionPhase.CONFIGURING:
            raise ConfigLocked("orders are fixed before the game; config is locked")
        config = self.config.patched(patch)
        sequence = generate_sequence(config)  # validates
        self.config = config
        self.sequence = sequence
        return [wire.config_ack(self.clock_s, config.to_dict(), sequence.config_hash)]

    def _start(self) -> list[dict]:
        if self.phase is not SessionPhase.CONFIGURING:
            raise AlreadyRunning(f"session is {self.phase.value}")
        self.phase = SessionPhase.RUNNING
        self._started_at = self.clock_s
        self._ticks_emitted = 0
        self.engine = GameEngine(self.sequence)
        out = []
        for effect in self.engine.handle(PresentNext(), self.clock_s):
            if isinstance(effect, OrderPresented):
                out.append(
                    wire.order_presented(self.clock_s, effect.order, len(self.sequence))
                )
        # The browser cue is instantaneous (text + beep), so the engine
        # moves straight to the judgment step.
        self.engine.handle(PresentNext(), self.clock_s)
        out.append(wire.phase_changed(self.clock_s, PhaseKind.JUDGING.value, 0))
        out.append(
            wire.countdown_tick(self.clock_s, self.config.session_duration_s)
        )
        return out

    def _route_player(self, message: dict) -> list[dict]:
        if self.phase is not SessionPhase.RUNNING:
            raise IllegalTransition(self.phase.value, message["type"])
        tag = message["type"]
        if tag == "submit_judgment":
            event = SubmitJudgment(judged_yes=message["judgment"] == "yes")
        elif tag == "submit_drink":
            event = SubmitDrink(drink=message["drink"])
        else:
            event = SubmitIngredients(ingredients=frozenset(message["ingredients"]))

        effects = self.engine.handle(event, self.clock_s)
        out = [
            wire.phase_changed(
                self.clock_s, self.engine.phase.kind.value, self.engine.phase.order_index
            )
        ]
        for effect in effects:
            if isinstance(effect, OutcomeRecorded):
                out.append(wire.trial_feedback(self.clock_s, effect.outcome))
                out.append(wire.score_update(self.clock_s, self.engine.score))

        if self.engine.phase.kind is PhaseKind.FEEDBACK:
            out.extend(self._advance_past_feedback())
        return out

    def _advance_past_feedback(self) -> list[dict]:
        """Feedback is rendered client-side; present the next order now."""
        out = []
        for effect in self.engine.handle(FeedbackDone(), self.clock_s):
            if isinstance(effect, OrderPresented):
                out.append(
                    wire.order_presented(self.clock_s, effect.order, len(self.sequence))
                )
            elif isinstance(effect, SessionFinished):
                # Sequence exhausted before the clock ran out.
                self.phase = SessionPhase.FINISHED
                out.append(wire.session_end(self.clock_s, effect.score))
        if self.phase is SessionPhase.RUNNING:
            self.engine.handle(PresentNext(), self.clock_s)
            out.append(
                wire.phase_changed(
                    self.clock_s, PhaseKind.JUDGING.value, self.engine.phase.order_index
                )
            )
        return out

    def _snapshot(self) -> list[dict]:
        """Catch-up state for a fresh subscriber, from the outbound vocabulary."""
        out = [wire.config_ack(self.clock_s, self.config.to_dict(), self.sequence.config_hash)]
        if self.engine is not None:
            phase = self.engine.phase
            if phase.order_index is not None:
                order = self.sequence.orders[phase.order_index]
                out.append(wire.order_presented(self.clock_s, order, len(self.sequence)))
            out.append(wire.phase_changed(self.clock_s, phase.kind.value, phase.order_index))
            out.append(wire.score_update(self.clock_s, self.engine.score))
        if self.phase is SessionPhase.RUNNING:
            remaining = max(0.0, self._started_at + self.config.session_duration_s - self.clock_s)
            out.append(wire.countdown_tick(self.clock_s, remaining))
        if self.latest_workload is not None:
            out.append(wire.workload_update(self.clock_s, self.latest_workload))
        return out

    # -- workload -------------------------------------------------------------

    def publish_workload(self, sample: WorkloadSample) -> list[dict]:
        """Broadcast one pipeline sample; drops silently outside Running."""
        if self.phase is not SessionPhase.RUNNING:
            return []
        self.latest_workload = sample
        self._log("sample", sample.to_dict())
        return self._out([wire.workload_update(self.clock_s, sample)])

    # -- summary --------------------------------------------------------------

    @property
    def score(self):
        return self.engine.score if self.engine is not None else None


def write_log_header(log: SessionLog, session_id: str, created_unix: float) -> None:
    """The only wall-clock data in a log; replay and hashing skip it."""
    log.append(0.0, "meta", {
        "type": "session_header",
        "session_id": session_id,
        "created_unix": created_unix,
    })


def replay_session(entries: Iterable[LogEntry]) -> SessionCore:
    """Re-feed a log's inputs through a fresh core and verify its outputs.

    Inbound and sample entries are inputs; outbound entries must match
    what the fresh core emits, in order. The first divergence raises
    :class:`LogCorrupt` with the entry position.
    """
    entries = list(entries)
    session_id = None
    for entry in entries:
        if entry.direction == "meta" and entry.payload.get("type") == "session_header":
            session_id = entry.payload["session_id"]
            break
    if session_id is None:
        raise LogCorrupt(0, "no session_header meta entry")

    core = SessionCore(session_id=session_id)
    pending: list[dict] = []

    for position, entry in enumerate(entries):
        if entry.direction == "meta":
            continue
        if entry.direction == "in":
            pending.extend(core.advance_to(entry.clock_s))
            pending.extend(core.handle_inbound(entry.payload))
        elif entry.direction == "sample":
            pending.extend(core.advance_to(entry.clock_s))
            pending.extend(core.publish_workload(WorkloadSample.from_dict(entry.payload)))
        elif entry.direction == "out":
            if not pending:
                # Clock-driven messages (ticks, expiry) appear before the
                # next input; advancing to their clock regenerates them.
                pending.extend(core.advance_to(entry.clock_s))
            if not pending:
                raise LogCorrupt(position, f"no generated message for {entry.payload.get('type')}")
            expected = pending.pop(0)
            if expected != entry.payload:
                raise LogCorrupt(
                    position,
                    f"expected {wire.encode(expected)}, log has {wire.encode(entry.payload)}",
                )
        else:
            raise LogCorrupt(position, f"unknown direction {entry.direction!r}")

    if pending:
        raise LogCorrupt(len(entries), f"{len(pending)} generated message(s) missing from log")
    return core
