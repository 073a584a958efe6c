import asyncio
import json

import pytest

from typemimic.clock import VirtualClock
from typemimic.config import AppConfig
from typemimic.gateway import ChatGateway
from typemimic.lexicon import load_lexicon
from typemimic.runtime import BackendBinding


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


SCRIPTED_RESPONSE = (
    "I really love playing tennis on the weekend. It is a great sport and "
    "my favorite hobby these days. I also enjoy good music and watch fun "
    "movies with friends. What hobbies do you like? Do you play any sports "
    "or games lately?"
)


def gateway_config(tmp_path, **overrides) -> AppConfig:
    defaults = dict(
        preset="red",
        seed=11,
        log_dir=str(tmp_path / "logs"),
        waiting_room_ms=(5000.0, 15000.0),
        backend=BackendBinding(kind="scripted", responses=(SCRIPTED_RESPONSE,)),
        visibility=True,
    )
    defaults.update(overrides)
    return AppConfig(**defaults)


async def drive(gateway: ChatGateway, inputs: list[dict], expect_traces: int | None = None) -> list[dict]:
    """Feed client messages to a gateway connection, keep it open until
    the expected number of trace_done frames arrived, return all server
    messages (decoded)."""
    if expect_traces is None:
        expect_traces = sum(1 for m in inputs if m.get("type") == "user_message")
    queue: asyncio.Queue = asyncio.Queue()
    sent: list[dict] = []
    done = 0

    async def send(line: str) -> None:
        nonlocal done
        message = json.loads(line)
        sent.append(message)
        if message["type"] == "trace_done":
            done += 1
            if done >= expect_traces:
                queue.put_nowait(None)

    async def inbox():
        while True:
            item = await queue.get()
            if item is None:
                return
            yield item

    for message in inputs:
        queue.put_nowait(json.dumps(message))
    if expect_traces == 0:
        queue.put_nowait(None)
    await asyncio.wait_for(gateway.handle(inbox(), send), timeout=30)
    return sent


def run_session(tmp_path, inputs, *, clock=None, expect_traces=None, **config_overrides):
    config = gateway_config(tmp_path, **config_overrides)
    gateway = ChatGateway(config, clock=clock or VirtualClock())
    return asyncio.run(drive(gateway, inputs, expect_traces)), gateway
