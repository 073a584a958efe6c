"""Application configuration: one JSON file shared by serve/trace/validate,
with environment overrides for deployment knobs."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from .errors import ConfigError, ValidationError
from .lexicon import LexiconPaths
from .runtime import AgentConfig, BackendBinding, PromptConstraints, apply_patch, preset

_TOP_KEYS = {
    "preset", "params", "constraints", "backend", "host", "port",
    "waiting_room_ms", "visibility", "seed", "log_dir", "lexicon",
}


@dataclass(frozen=True)
class AppConfig:
    preset: str = "blue"
    params: Mapping[str, float] = field(default_factory=dict)  # flat overrides
    constraints: PromptConstraints = field(default_factory=PromptConstraints)
    backend: BackendBinding = field(default_factory=BackendBinding)
    host: str = "127.0.0.1"
    port: int = 8008
    waiting_room_ms: tuple[float, float] = (5000.0, 15000.0)
    visibility: bool = True
    seed: int | None = None
    log_dir: str = "logs"
    lexicon: LexiconPaths = field(default_factory=LexiconPaths)


def agent_config(app: AppConfig) -> AgentConfig:
    """Resolve the preset plus flat overrides into a full agent config."""
    base = preset(app.preset)
    patched = apply_patch(base, dict(app.params))
    return replace(patched, constraints=app.constraints, backend=app.backend)


def _parse_constraints(data: Mapping) -> PromptConstraints:
    try:
        return PromptConstraints(
            max_sentences=int(data.get("max_sentences", 2)),
            max_words=int(data.get("max_words", 30)),
            language_restriction=str(data.get("language_restriction", "English only")),
        )
    except ValidationError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad constraints block: {exc}") from exc


def _parse_backend(data: Mapping, config_dir: Path) -> BackendBinding:
    kind = data.get("kind", "echo")
    responses: tuple[str, ...] = tuple(data.get("responses", ()))
    responses_file = data.get("responses_file")
    if responses_file:
        path = Path(responses_file)
        if not path.is_absolute():
            path = config_dir / path
        try:
            responses = tuple(
                line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()
            )
        except OSError as exc:
            raise ConfigError(f"cannot read responses_file: {exc}") from exc
    return BackendBinding(
        kind=str(kind),
        responses=responses,
        endpoint=str(data.get("endpoint", "")),
        model=str(data.get("model", "")),
        auth_env=str(data.get("auth_env", "")),
        timeout_ms=float(data.get("timeout_ms", 10000.0)),
    )


def _parse_lexicon(data: Mapping) -> LexiconPaths:
    return LexiconPaths(
        redundant_words=data.get("redundant_words"),
        synonyms=data.get("synonyms"),
        redundant_sentences=data.get("redundant_sentences"),
        remote_endpoint=data.get("remote_endpoint"),
        remote_timeout_ms=float(data.get("remote_timeout_ms", 1000.0)),
    )


def load_config(path: str | None = None, env: Mapping[str, str] | None = None) -> AppConfig:
    """Read the JSON config file (if any) and apply TYPEMIMIC_* overrides."""
    env = os.environ if env is None else env
    data: dict = {}
    config_dir = Path.cwd()
    if path:
        config_dir = Path(path).resolve().parent
        try:
            with open(path, encoding="utf-8") as handle:
                data = json.load(handle)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(data) - _TOP_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    waiting = data.get("waiting_room_ms", (5000.0, 15000.0))
    if not (isinstance(waiting, (list, tuple)) and len(waiting) == 2):
        raise ConfigError("waiting_room_ms must be a [low, high] pair")
    low, high = float(waiting[0]), float(waiting[1])
    if low < 0 or high < low:
        raise ConfigError(f"waiting_room_ms range [{low}, {high}] is invalid")

    params = data.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("params must be an object of flat parameter overrides")

    config = AppConfig(
        preset=str(env.get("TYPEMIMIC_PRESET", data.get("preset", "blue"))),
        params=dict(params),
        constraints=_parse_constraints(data.get("constraints", {})),
        backend=_parse_backend(data.get("backend", {}), config_dir),
        host=str(env.get("TYPEMIMIC_HOST", data.get("host", "127.0.0.1"))),
        port=int(env.get("TYPEMIMIC_PORT", data.get("port", 8008))),
        waiting_room_ms=(low, high),
        visibility=bool(data.get("visibility", True)),
        seed=int(env["TYPEMIMIC_SEED"]) if "TYPEMIMIC_SEED" in env else data.get("seed"),
        log_dir=str(env.get("TYPEMIMIC_LOG_DIR", data.get("log_dir", "logs"))),
        lexicon=_parse_lexicon(data.get("lexicon", {})),
    )
    agent_config(config)  # fail fast on bad preset/params
    return config
