"""Network-facing chat service.

The core handler is transport-agnostic: it consumes an async iterator
of inbound JSON lines and an async ``send`` callable, which makes the
whole protocol testable without sockets or sleeping (inject a
VirtualClock). ``create_app`` wires the same handler to a FastAPI
websocket route at /chat.

Per-session ordering: user messages stream strictly one after another
(events then trace_done, never interleaved across messages), while
parameter updates and visibility toggles are handled immediately, even
mid-stream.
"""

from __future__ import annotations

import asyncio
import contextlib
import json
import random
import threading
import uuid
from dataclasses import asdict, replace

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .clock import Clock, RealClock
from .config import AppConfig, agent_config
from .errors import BackendUnavailable, ConfigError, TypemimicError, ValidationError
from .lexicon import Lexicon, load_lexicon
from .logstore import LogStore
from .pipeline import derive_seed
from .runtime import Session
from .scheduling import PAUSE
from . import wire


class ChatGateway:
    def __init__(
        self,
        config: AppConfig | None = None,
        clock: Clock | None = None,
        lexicon: Lexicon | None = None,
        logs: LogStore | None = None,
    ):
        self.config = config if config is not None else AppConfig()
        self.clock = clock if clock is not None else RealClock()
        self.lexicon = lexicon if lexicon is not None else load_lexicon(self.config.lexicon)
        self.logs = logs if logs is not None else LogStore(self.config.log_dir, self.clock)
        self._rng = random.Random(self.config.seed)
        self._counter = 0
        self._lock = threading.Lock()

    def draw_waiting_delay_ms(self) -> float:
        """Uniform draw over the configured waiting-room range."""
        low, high = self.config.waiting_room_ms
        with self._lock:
            return self._rng.uniform(low, high)

    def _next_session(self) -> tuple[str, int]:
        with self._lock:
            self._counter += 1
            count = self._counter
        if self.config.seed is not None:
            return f"s{count:04d}", derive_seed(self.config.seed, count, "session")
        return uuid.uuid4().hex[:12], random.randrange(2**63)

    async def handle(self, inbox, send) -> None:
        """Serve one client connection until its inbox closes."""
        runner = _SessionRunner(self, send)
        try:
            async for raw in inbox:
                await runner.dispatch(raw)
        finally:
            await runner.close()


class _SessionRunner:
    def __init__(self, gateway: ChatGateway, send):
        self.gateway = gateway
        self.send = send
        self.clock = gateway.clock
        self.session: Session | None = None
        self.visibility = gateway.config.visibility
        self.message_count = 0
        self.opened_at_ms = 0.0
        self.first_user_ms: float | None = None
        self.last_done_ms: float | None = None
        self.interrupted = False
        self._chain: asyncio.Task | None = None

    async def _notify(self, kind: str, text: str) -> None:
        with contextlib.suppress(Exception):
            await self.send(wire.notice(kind, text))

    async def _log(self, method: str, **kwargs) -> bool:
        try:
            getattr(self.gateway.logs, method)(**kwargs)
            return True
        except OSError as exc:
            await self._notify("persistence-error", f"log write failed: {exc}")
            return False

    async def dispatch(self, raw: str) -> None:
        try:
            message = wire.parse_client(raw)
        except wire.WireError as exc:
            await self._notify("validation-error", str(exc))
            return
        if isinstance(message, wire.OpenSession):
            await self._open(message)
        elif isinstance(message, wire.UserMessage):
            await self._user_message(message.text)
        elif isinstance(message, wire.UpdateParams):
            await self._update_params(message.patch)
        else:
            self.visibility = message.show_typing
            await self._notify("visibility-set", "on" if self.visibility else "off")

    async def _open(self, message: wire.OpenSession) -> None:
        if self.session is not None:
            await self._notify("session-exists", "this connection already has a session")
            return
        try:
            base = agent_config(
                replace(self.gateway.config, preset=message.preset or self.gateway.config.preset)
            )
            if message.params:
                from .runtime import apply_patch

                base = apply_patch(base, message.params)
        except (ValidationError, ConfigError) as exc:
            await self._notify("validation-error", str(exc))
            return
        if message.visibility is not None:
            self.visibility = message.visibility
        delay_ms = self.gateway.draw_waiting_delay_ms()
        await self.send(wire.waiting_room(delay_ms))
        await self.clock.sleep_ms(delay_ms)
        session_id, seed = self.gateway._next_session()
        self.session = Session(
            base, seed=seed, lexicon=self.gateway.lexicon, session_id=session_id
        )
        self.opened_at_ms = self.clock.now_ms()
        await self.send(wire.session_ready(session_id))

    async def _user_message(self, text: str) -> None:
        if self.session is None:
            await self._notify("no-session", "open a session first")
            return
        now = self.clock.now_ms()
        if self.first_user_ms is None:
            self.first_user_ms = now
        await self._log(
            "append_message",
            session_id=self.session.session_id,
            preset=self.session.config.preset,
            sender="user",
            text=text,
            sent_at_ms=now,
            completed_at_ms=now,
        )
        message_id = self.message_count
        self.message_count += 1
        previous = self._chain
        self._chain = asyncio.create_task(
            self._stream_message(previous, message_id, text, self.visibility)
        )

    async def _stream_message(
        self, previous: asyncio.Task | None, message_id: int, text: str, visible: bool
    ) -> None:
        if previous is not None:
            with contextlib.suppress(Exception):
                await previous
        session = self.session
        assert session is not None
        try:
            trace = await asyncio.to_thread(session.respond, text)
        except BackendUnavailable as exc:
            await self._notify("backend-unavailable", str(exc))
            return
        except TypemimicError as exc:
            await self._notify("validation-error", str(exc))
            return
        started = self.clock.now_ms()
        state = "complete"
        try:
            if visible:
                last_t = 0.0
                while True:
                    event = session.next_event()
                    if event is None:
                        break
                    await self.clock.sleep_ms(event.t - last_t)
                    last_t = event.t
                    if event.kind == PAUSE and isinstance(event.payload, (int, float)):
                        await self.clock.sleep_ms(event.payload)
                        last_t += event.payload
                    await self.send(wire.event_message(message_id, event))
            else:
                if trace.events:
                    await self.send(
                        wire.final_text_message(message_id, trace.final_text, trace.duration_ms)
                    )
                session.finish_trace()
            await self.send(wire.trace_done(message_id))
        except asyncio.CancelledError:
            state = "interrupted"
            self.interrupted = True
            raise
        except Exception:
            state = "interrupted"
            self.interrupted = True
        finally:
            done = self.clock.now_ms()
            self.last_done_ms = done
            await self._log(
                "append_message",
                session_id=session.session_id,
                preset=session.config.preset,
                sender="agent",
                text=trace.final_text,
                sent_at_ms=started,
                completed_at_ms=done,
                state=state,
            )

    async def _update_params(self, patch) -> None:
        if self.session is None:
            await self._notify("no-session", "open a session first")
            return
        try:
            applied = self.session.update_params(patch)
        except ValidationError as exc:
            await self._notify("validation-error", str(exc))
            return
        effective = {**asdict(applied.temporal), **asdict(applied.editing)}
        await self._notify("params-applied", json.dumps(effective, sort_keys=True))

    async def close(self) -> None:
        if self._chain is not None and not self._chain.done():
            self._chain.cancel()
            with contextlib.suppress(asyncio.CancelledError, Exception):
                await self._chain
        if self.session is not None:
            start = self.first_user_ms if self.first_user_ms is not None else self.opened_at_ms
            end = self.last_done_ms if self.last_done_ms is not None else start
            await self._log(
                "append_session",
                session_id=self.session.session_id,
                preset=self.session.config.preset,
                opened_at_ms=self.opened_at_ms,
                closed_at_ms=self.clock.now_ms(),
                duration_s=max(0.0, (end - start) / 1000.0),
                completion="interrupted" if self.interrupted else "complete",
            )


def create_app(gateway: ChatGateway | None = None) -> FastAPI:
    """FastAPI app exposing the stream endpoint at /chat."""
    app = FastAPI(title="typemimic gateway")
    gw = gateway if gateway is not None else ChatGateway()
    app.state.gateway = gw

    @app.websocket("/chat")
    async def chat(websocket: WebSocket):
        await websocket.accept()

        async def inbox():
            while True:
                try:
                    yield await websocket.receive_text()
                except WebSocketDisconnect:
                    return

        await gw.handle(inbox(), websocket.send_text)

    return app


def serve(config: AppConfig) -> None:
    """Run the gateway under uvicorn (blocking)."""
    import uvicorn

    app = create_app(ChatGateway(config))
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
