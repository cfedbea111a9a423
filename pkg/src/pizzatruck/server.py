"""Websocket transport around the session core.

One server process hosts one session. All state mutation happens in a
single consumer task (the event loop of the spec's contract); websocket
receivers, the EEG producer and the ticker only enqueue immutable items.
Each connection gets its own outbox task so a slow client cannot stall
the core.

Message routing: responses to ``subscribe`` and ``error`` messages go to
the sender only; everything else is broadcast to every connection.
"""

from __future__ import annotations

import asyncio
import contextlib
import itertools
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import AsyncIterator, Callable, Iterable, Iterator, Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from . import wire
from .clock import WallClock
from .errors import BadMessage
from .pipeline import PipelineConfig, WorkloadPipeline
from .session import SessionCore, SessionLog, write_log_header
from .signals import EegChunk
from .synth import GeneratorParams, WorkloadScript, generate
from .task import GameConfig


@dataclass
class ServerSettings:
    session_id: str = "live"
    config: GameConfig = field(default_factory=GameConfig)
    chunk_source: Optional[Callable[[], Iterator[EegChunk]]] = None
    generator: GeneratorParams = field(default_factory=GeneratorParams)
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    sessions_dir: Optional[Path] = Path("sessions")
    clock_factory: Callable = WallClock
    tick_interval_s: float = 0.1


class _Connection:
    _ids = itertools.count(1)

    def __init__(self, websocket: WebSocket):
        self.id = next(self._ids)
        self.websocket = websocket
        self.role = "spectator"
        self.outbox: asyncio.Queue = asyncio.Queue()
        self.sender_task: Optional[asyncio.Task] = None


class SessionServer:
    def __init__(self, settings: ServerSettings):
        self.settings = settings
        self.clock = settings.clock_factory()
        log = None
        if settings.sessions_dir is not None:
            log = SessionLog(Path(settings.sessions_dir) / f"{settings.session_id}.jsonl")
            write_log_header(log, settings.session_id, created_unix=time.time())
        # The effective config goes through the inbound channel so the
        # log stays self-contained: replay rebuilds from defaults plus
        # the logged messages alone.
        self.core = SessionCore(session_id=settings.session_id, log=log)
        self.core.handle_inbound(
            wire.set_config(settings.session_id, settings.config.to_dict())
        )
        self.queue: asyncio.Queue = asyncio.Queue()
        self.connections: dict[int, _Connection] = {}
        self._tasks: list[asyncio.Task] = []
        self._eeg_task: Optional[asyncio.Task] = None

    # -- lifecycle -------------------------------------------------------------

    async def start(self) -> None:
        self._tasks.append(asyncio.create_task(self._consume()))
        self._tasks.append(asyncio.create_task(self._ticker()))

    async def stop(self) -> None:
        for task in self._tasks:
            task.cancel()
        if self._eeg_task is not None:
            self._eeg_task.cancel()
        for task in self._tasks:
            with contextlib.suppress(asyncio.CancelledError):
                await task
        if self._eeg_task is not None:
            with contextlib.suppress(asyncio.CancelledError):
                await self._eeg_task
        if self.core.log is not None:
            self.core.log.close()

    # -- producers --------------------------------------------------------------

    async def _ticker(self) -> None:
        while True:
            await self.clock.asleep(self.settings.tick_interval_s)
            await self.queue.put(("tick", None, None))

    async def _eeg_producer(self, started_clock_s: float) -> None:
        """Pace the chunk source against the clock, offset to session time."""
        source = self.settings.chunk_source
        if source is None:
            script = WorkloadScript(
                steps=((0.0, 0.0), (60.0, 1.0)),
                duration_s=self.settings.config.session_duration_s,
            )
            chunks: Iterable[EegChunk] = generate(script, self.settings.generator)
        else:
            chunks = source()
        first_source_time: Optional[float] = None
        for chunk in chunks:
            if first_source_time is None:
                first_source_time = chunk.start_time_s
            shifted = EegChunk(
                start_time_s=chunk.start_time_s - first_source_time + started_clock_s,
                sampling_rate_hz=chunk.sampling_rate_hz,
                samples=chunk.samples,
            )
            wait = shifted.end_time_s - self.clock.now()
            if wait > 0:
                await self.clock.asleep(wait)
            await self.queue.put(("chunk", None, shifted))

    # -- consumer (the single writer) -------------------------------------------

    async def _consume(self) -> None:
        pipeline: Optional[WorkloadPipeline] = None
        while True:
            kind, conn_id, payload = await self.queue.get()
            now = self.clock.now()
            broadcasts = list(self.core.advance_to(max(now, self.core.clock_s)))

            if kind == "tick":
                pass
            elif kind == "chunk":
                if pipeline is None:
                    pipeline = WorkloadPipeline(
                        self.settings.generator.layout,
                        payload.sampling_rate_hz,
                        self.settings.pipeline,
                    )
                for sample in pipeline.push(payload):
                    broadcasts.extend(self.core.publish_workload(sample))
            elif kind == "in":
                message, directed = payload, []
                was_running = self.core.phase.value == "running"
                outs = self.core.handle_inbound(message)
                if message.get("type") == "subscribe" and conn_id in self.connections:
                    self.connections[conn_id].role = message.get("role", "spectator")
                    directed = outs
                else:
                    directed = [m for m in outs if m["type"] == "error"]
                    broadcasts.extend(m for m in outs if m["type"] != "error")
                for m in directed:
                    self._send_to(conn_id, m)
                if not was_running and self.core.phase.value == "running":
                    self._eeg_task = asyncio.create_task(
                        self._eeg_producer(self.core.clock_s)
                    )

            for message in broadcasts:
                self._broadcast(message)

    def _send_to(self, conn_id: Optional[int], message: dict) -> None:
        conn = self.connections.get(conn_id)
        if conn is not None:
            conn.outbox.put_nowait(wire.encode(message))

    def _broadcast(self, message: dict) -> None:
        text = wire.encode(message)
        for conn in self.connections.values():
            conn.outbox.put_nowait(text)

    # -- websocket endpoint -------------------------------------------------------

    async def handle_websocket(self, websocket: WebSocket) -> None:
        await websocket.accept()
        conn = _Connection(websocket)
        self.connections[conn.id] = conn

        async def sender():
            while True:
                text = await conn.outbox.get()
                await websocket.send_text(text)

        conn.sender_task = asyncio.create_task(sender())
        try:
            while True:
                text = await websocket.receive_text()
                try:
                    message = wire.decode(text)
                except BadMessage as exc:
                    conn.outbox.put_nowait(
                        wire.encode(wire.error(self.core.clock_s, "bad_message", str(exc)))
                    )
                    continue
                await self.queue.put(("in", conn.id, message))
        except WebSocketDisconnect:
            pass
        finally:
            conn.sender_task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await conn.sender_task
            self.connections.pop(conn.id, None)


def create_app(settings: Optional[ServerSettings] = None) -> FastAPI:
    settings = settings or ServerSettings()

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI) -> AsyncIterator[None]:
        server = SessionServer(settings)
        app.state.server = server
        await server.start()
        try:
            yield
        finally:
            await server.stop()

    app = FastAPI(title="pizzatruck session server", lifespan=lifespan)

    @app.get("/health")
    async def health():
        server: SessionServer = app.state.server
        return {
            "session_id": server.core.session_id,
            "phase": server.core.phase.value,
            "clock_s": server.core.clock_s,
            "subscribers": len(server.connections),
        }

    @app.websocket("/ws")
    async def websocket_endpoint(websocket: WebSocket):
        server: SessionServer = app.state.server
        await server.handle_websocket(websocket)

    return app
