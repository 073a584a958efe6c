import json
from pathlib import Path

import pytest

from typemimic.cli import main
from typemimic.scheduling import trace_from_jsonl, trace_to_jsonl


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_trace_is_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(["trace", "--preset", "blue", "--seed", "1", "hello", "--out", str(out1)]) == 0
    assert main(["trace", "--preset", "blue", "--seed", "1", "hello", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_trace_seed_changes_output(tmp_path):
    out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    main(["trace", "--preset", "green", "--seed", "1", "hello there friend", "--out", str(out1)])
    main(["trace", "--preset", "green", "--seed", "2", "hello there friend", "--out", str(out2)])
    assert out1.read_bytes() != out2.read_bytes()


def test_trace_rejects_invalid_config(tmp_path, capsys):
    config = tmp_path / "bad.json"
    config.write_text(
        json.dumps({"preset": "red", "params": {
            "word_deletion_rate": 0.5, "word_insertion_rate": 0.4, "word_modification_rate": 0.3
        }}),
        encoding="utf-8",
    )
    code, _, err = run(capsys, "trace", "--config", str(config), "--seed", "1", "hi")
    assert code == 2
    assert "word" in err


def test_trace_unreadable_corpus_exits_one(tmp_path, capsys):
    code, _, err = run(
        capsys, "trace", "--corpus", str(tmp_path / "missing.txt"), "--out", str(tmp_path / "o")
    )
    assert code == 1


def test_corpus_mode_writes_numbered_files_that_validate(tmp_path, capsys):
    import random

    rng = random.Random(11)
    bank = ["I", "love", "tennis", "good", "music", "great", "sport", "fun",
            "movies", "friends", "favorite", "hobby", "weekend", "play", "watch"]
    lines = [
        " ".join(rng.choice(bank) for _ in range(rng.randint(4, 9))) + "."
        for _ in range(100)
    ]
    corpus = tmp_path / "corpus.txt"
    corpus.write_text("\n".join(lines) + "\n", encoding="utf-8")
    out_dir = tmp_path / "traces"
    code, out, _ = run(
        capsys, "trace", "--preset", "red", "--seed", "5",
        "--corpus", str(corpus), "--out", str(out_dir),
    )
    assert code == 0
    files = sorted(out_dir.glob("*.jsonl"))
    assert len(files) == 100
    assert files[0].name == "trace-0000.jsonl"
    assert files[-1].name == "trace-0099.jsonl"
    code, out, _ = run(capsys, "validate", str(out_dir))
    assert code == 0
    assert '"passed": true' in out


def test_replay_round_trips_the_text(tmp_path, capsys):
    out = tmp_path / "t.jsonl"
    main(["trace", "--preset", "blue", "--seed", "1", "hi", "--out", str(out)])
    code, stdout, _ = run(capsys, "replay", str(out))
    assert code == 0
    assert stdout.splitlines()[0] == "hi"
    assert "duration_ms:" in stdout
    assert "type=2" in stdout


def test_replay_reports_event_counts_matching_the_file(tmp_path, capsys):
    out = tmp_path / "t.jsonl"
    main(["trace", "--preset", "red", "--seed", "9",
          "I love tennis and good music with friends.", "--out", str(out)])
    code, stdout, _ = run(capsys, "replay", str(out))
    assert code == 0
    lines = out.read_text(encoding="utf-8").splitlines()[1:]
    kinds = {}
    for line in lines:
        kind = json.loads(line)["kind"]
        kinds[kind] = kinds.get(kind, 0) + 1
    for kind, count in kinds.items():
        assert f"{kind}={count}" in stdout


def test_replay_tampered_trace_exits_one_with_index(tmp_path, capsys):
    out = tmp_path / "t.jsonl"
    main(["trace", "--preset", "blue", "--seed", "1", "hi", "--out", str(out)])
    lines = out.read_text(encoding="utf-8").splitlines()
    # delete-backward as the very first event: caret is at offset 0
    lines.insert(1, '{"t":0.0,"kind":"delete","payload":null,"caret":0}')
    tampered = tmp_path / "tampered.jsonl"
    tampered.write_text("\n".join(lines) + "\n", encoding="utf-8")
    code, _, err = run(capsys, "replay", str(tampered))
    assert code == 1
    assert "event 0" in err


def test_validate_detects_config_mismatch(tmp_path, capsys):
    corpus = tmp_path / "corpus.txt"
    corpus.write_text(
    "\n".join(
            "I love tennis and good music with friends on the weekend."
            for _ in range(30)
        ),
        encoding="utf-8",
    )
    out_dir = tmp_path / "traces"
    main(["trace", "--preset", "green", "--seed", "3", "--corpus", str(corpus), "--out", str(out_dir)])
    code, out, _ = run(capsys, "validate", str(out_dir))
    assert code == 0
    # same traces judged against blue's much faster paces must fail
    code, out, _ = run(capsys, "validate", str(out_dir), "--preset", "blue")
    assert code == 1
    report = json.loads(out)
    failing = {c["name"] for c in report["checks"] if not c["passed"]}
    assert any("char-pace" in name for name in failing)


def test_validate_no_traces_is_a_config_error(tmp_path, capsys):
    empty = tmp_path / "none"
    empty.mkdir()
    code, _, err = run(capsys, "validate", str(empty))
    assert code == 2


def test_analyze_writes_report_and_csv(tmp_path, capsys):
    from typemimic.clock import VirtualClock
    from typemimic.logstore import LogStore

    store = LogStore(tmp_path / "logs", VirtualClock())
    for i, preset in enumerate(["blue", "red"]):
        sid = f"s{i}"
        store.append_message(
            session_id=sid, preset=preset, sender="user",
            text="Hi there. How are you?", sent_at_ms=0.0, completed_at_ms=0.0,
        )
        store.append_message(
            session_id=sid, preset=preset, sender="agent",
            text="I am fine. Thanks for asking today!",
            sent_at_ms=10.0, completed_at_ms=5000.0,
        )
        store.append_session(
            session_id=sid, preset=preset, opened_at_ms=0.0, closed_at_ms=6000.0,
            duration_s=5.0, completion="complete",
        )
    report_path = tmp_path / "report.json"
    csv_path = tmp_path / "points.csv"
    code, _, _ = run(
        capsys, "analyze", str(tmp_path / "logs"),
        "--out", str(report_path), "--csv", str(csv_path),
    )
    assert code == 0
    report = json.loads(report_path.read_text(encoding="utf-8"))
    assert set(report["presets"]) == {"blue", "red"}
    assert report["presets"]["blue"]["metrics"]["user_words"]["mean"] == 5.0
    rows = csv_path.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "agent_words,user_words"
    assert len(rows) == 3


def test_trace_stdout_mode(capsys):
    code = main(["trace", "--preset", "blue", "--seed", "4", "ok then"])
    stdout = capsys.readouterr().out
    assert code == 0
    trace = trace_from_jsonl(stdout)
    assert trace.final_text == "ok then"


def test_missing_text_and_corpus_is_a_config_error(capsys):
    code, _, err = run(capsys, "trace", "--preset", "blue")
    assert code == 2


def test_unknown_flags_rejected():
    with pytest.raises(SystemExit) as excinfo:
        main(["trace", "--warp-speed", "hello"])
    assert excinfo.value.code == 2
