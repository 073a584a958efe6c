"""Operator command line: serve the gateway, generate/replay/validate
traces offline, and analyze conversation logs.

Exit codes: 0 success, 1 I/O or data error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .analysis import analyze, regression_points, write_points_csv
from .config import AppConfig, agent_config, load_config
from .errors import ConfigError, ReplayError, TypemimicError, ValidationError
from .lexicon import load_lexicon
from .logstore import read_records
from .pipeline import derive_seed, synthesize_trace
from .runtime import preset, preset_names
from .scheduling import trace_from_jsonl, trace_to_jsonl
from .validation import summarize, validate_corpus


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="typemimic",
        description="Human-like typing performances for chatbot responses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the chat gateway")
    serve.add_argument("--config", help="JSON config file")
    serve.add_argument("--host")
    serve.add_argument("--port", type=int)
    serve.add_argument("--preset", choices=preset_names())
    serve.add_argument("--log-dir")
    serve.add_argument("--seed", type=int)

    trace = sub.add_parser("trace", help="generate keystroke traces offline")
    trace.add_argument("text", nargs="?", help="response text to perform")
    trace.add_argument("--corpus", help="file with one response per line")
    trace.add_argument("--config", help="JSON config file")
    trace.add_argument("--preset", choices=preset_names())
    trace.add_argument("--seed", type=int, default=0)
    trace.add_argument("--out", help="output file (single text) or directory (corpus)")

    replay = sub.add_parser("replay", help="replay a trace file")
    replay.add_argument("trace_file")

    validate = sub.add_parser("validate", help="check traces against a config")
    validate.add_argument("paths", nargs="+", help="trace files or directories")
    validate.add_argument("--config", help="JSON config file overriding trace headers")
    validate.add_argument("--preset", choices=preset_names())

    analyze_cmd = sub.add_parser("analyze", help="compute interaction metrics from logs")
    analyze_cmd.add_argument("log_dir")
    analyze_cmd.add_argument("--out", help="write the JSON report here instead of stdout")
    analyze_cmd.add_argument("--csv", help="write per-session regression points as CSV")

    return parser


def _resolve_agent(args) -> tuple:
    """(AgentConfig, Lexicon) from --config and/or --preset."""
    if args.config:
        app = load_config(args.config)
        if getattr(args, "preset", None):
            app = replace(app, preset=args.preset)
        return agent_config(app), load_lexicon(app.lexicon)
    name = getattr(args, "preset", None) or "blue"
    return preset(name), load_lexicon()


def _cmd_trace(args) -> int:
    config, lexicon = _resolve_agent(args)
    if args.corpus:
        texts = [
            line
            for line in Path(args.corpus).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        if not args.out:
            raise ConfigError("--out DIRECTORY is required in corpus mode")
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for index, text in enumerate(texts):
            trace = synthesize_trace(
                text, config.temporal, config.editing, lexicon,
                derive_seed(args.seed, index, "cli-trace"),
            )
            (out_dir / f"trace-{index:04d}.jsonl").write_text(
                trace_to_jsonl(trace), encoding="utf-8"
            )
        print(f"wrote {len(texts)} traces to {out_dir}")
        return 0
    if args.text is None:
        raise ConfigError("provide a response text or --corpus FILE")
    trace = synthesize_trace(
        args.text, config.temporal, config.editing, lexicon,
        derive_seed(args.seed, 0, "cli-trace"),
    )
    payload = trace_to_jsonl(trace)
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def _cmd_replay(args) -> int:
    from .scheduling import apply_trace

    trace = trace_from_jsonl(Path(args.trace_file).read_text(encoding="utf-8"))
    text = apply_trace(trace.events)
    counts: dict[str, int] = {}
    for event in trace.events:
        counts[event.kind] = counts.get(event.kind, 0) + 1
    print(text)
    print("---")
    print(f"duration_ms: {trace.duration_ms:.3f}")
    by_kind = ", ".join(f"{kind}={count}" for kind, count in sorted(counts.items()))
    print(f"events: {len(trace.events)} ({by_kind or 'none'})")
    return 0


def _collect_trace_files(paths: list[str]) -> list[Path]:
    files: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            files.extend(sorted(path.glob("*.jsonl")))
        else:
            files.append(path)
    return files


def _cmd_validate(args) -> int:
    files = _collect_trace_files(args.paths)
    if not files:
        raise ConfigError("no trace files found")
    traces = [trace_from_jsonl(f.read_text(encoding="utf-8")) for f in files]
    temporal = editing = None
    if args.config or args.preset:
        config, _ = _resolve_agent(args)
        temporal, editing = config.temporal, config.editing
    report = summarize(validate_corpus(traces, temporal, editing))
    print(json.dumps(report, indent=2))
    return 0 if report["passed"] else 1


def _cmd_analyze(args) -> int:
    records = list(read_records(args.log_dir))
    report = analyze(records)
    payload = json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(payload + "\n", encoding="utf-8")
    else:
        print(payload)
    if args.csv:
        write_points_csv(regression_points(records), args.csv)
    return 0


def _cmd_serve(args) -> int:
    from .gateway import serve

    app = load_config(args.config) if args.config else load_config()
    overrides = {}
    if args.host:
        overrides["host"] = args.host
    if args.port is not None:
        overrides["port"] = args.port
    if args.preset:
        overrides["preset"] = args.preset
    if args.log_dir:
        overrides["log_dir"] = args.log_dir
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        app = replace(app, **overrides)
    serve(app)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "serve": _cmd_serve,
        "trace": _cmd_trace,
        "replay": _cmd_replay,
        "validate": _cmd_validate,
        "analyze": _cmd_analyze,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, ValidationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ReplayError as exc:
        print(f"trace error: {exc}", file=sys.stderr)
        return 1
    except TypemimicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
