"""Acceptance suite: every criterion runs at its stated tolerance and
prints one PASS line. All randomness is seeded; no test sleeps."""

import asyncio
import json
import math
import random
import time

import pytest
from scipy import stats as scipy_stats

from conftest import drive, gateway_config

from typemimic.analysis import fit_regression
from typemimic.clock import VirtualClock
from typemimic.errors import ValidationError
from typemimic.gateway import ChatGateway
from typemimic.lexicon import load_lexicon
from typemimic.planning import (
    ActionKind,
    ActionLevel,
    EditingParameters,
    plan_edits,
    validate_params,
)
from typemimic.runtime import PromptConstraints, build_prompt, preset
from typemimic.scheduling import (
    DELETE,
    MOVE,
    PAUSE,
    TemporalParameters,
    apply_trace,
    sample_delay,
    schedule,
)
from typemimic.segmenter import segment
from typemimic.cli import main as cli_main

LEXICON = load_lexicon()
SYNONYM_WORDS = sorted(
    json.loads(
        __import__("importlib.resources", fromlist=["files"])
        .files("typemimic.data")
        .joinpath("synonyms.json")
        .read_text(encoding="utf-8")
    )
)
FILLER_WORDS = ["so", "then", "now", "here", "there", "this", "that"]


def random_text(rng: random.Random, max_words: int = 200, bank: list | None = None) -> str:
    bank = bank if bank is not None else SYNONYM_WORDS + FILLER_WORDS
    total = rng.randint(1, max_words)
    words_left = total
    paragraphs = []
    while words_left > 0:
        sentences = []
        for _ in range(rng.randint(1, 4)):
            if words_left <= 0:
                break
            n = min(words_left, rng.randint(1, 12))
            words_left -= n
            sentences.append(
                " ".join(rng.choice(bank) for _ in range(n)) + rng.choice(".!?")
            )
        if sentences:
            paragraphs.append(" ".join(sentences))
    return "\n\n".join(paragraphs)


def random_editing(rng: random.Random) -> EditingParameters:
    def triple(budget=1.0):
        raw = [rng.uniform(0, 0.5) for _ in range(3)]
        scale = min(1.0, budget / max(sum(raw), 1e-9))
        return [r * scale for r in raw]

    p = triple()
    s = triple()
    w = triple()
    return EditingParameters(
        paragraph_deletion_rate=p[0], paragraph_insertion_rate=p[1], paragraph_modification_rate=p[2],
        sentence_deletion_rate=s[0], sentence_insertion_rate=s[1], sentence_modification_rate=s[2],
        word_deletion_rate=w[0], word_insertion_rate=w[1], word_modification_rate=w[2],
        char_typo_rate=rng.uniform(0, 1),
    )


def random_temporal(rng: random.Random) -> TemporalParameters:
    return TemporalParameters(
        char_pace_mean_ms=rng.uniform(0, 150), char_pace_std_ms=rng.uniform(0, 50),
        space_lag_mean_ms=rng.uniform(0, 200), space_lag_std_ms=rng.uniform(0, 60),
        deletion_pace_mean_ms=rng.uniform(0, 80), deletion_pace_std_ms=rng.uniform(0, 25),
        cursor_pace_mean_ms=rng.uniform(0, 12), cursor_pace_std_ms=rng.uniform(0, 4),
        pause_rate=rng.uniform(0, 1),
        thinking_mean_s=rng.uniform(0, 2), thinking_std_s=rng.uniform(0, 0.5),
    )


def test_a01_eventual_text_soundness():
    """1,000 randomized pipelines replay byte-exactly in under 10 s."""
    rng = random.Random(20240801)
    started = time.perf_counter()
    for index in range(1000):
        text = random_text(rng)
        editing = random_editing(rng)
        temporal = random_temporal(rng)
        seed = rng.randrange(2**32)
        plan = plan_edits(segment(text), editing, LEXICON, seed)
        trace = schedule(plan, temporal, seed ^ 0xACE, editing=editing)
        assert apply_trace(trace.events) == text, f"pipeline {index} diverged"
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"took {elapsed:.2f}s"
    print(f"\nPASS A1 eventual-text soundness: 1000 pipelines, {elapsed:.2f}s")


def test_a02_delay_distribution_fidelity():
    """characterTypingPace (100, 20): 10k draws, mean +-2%, std +-5%, all >= 0."""
    rng = random.Random(7)
    started = time.perf_counter()
    draws = [sample_delay(100.0, 20.0, rng) for _ in range(10_000)]
    elapsed = time.perf_counter() - started
    mean = sum(draws) / len(draws)
    std = math.sqrt(sum((d - mean) ** 2 for d in draws) / (len(draws) - 1))
    assert all(d >= 0.0 for d in draws)
    assert abs(mean - 100.0) <= 2.0, f"mean {mean:.3f}"
    assert abs(std - 20.0) <= 1.0, f"std {std:.3f}"
    assert elapsed < 1.0
    print(f"\nPASS A2 delay fidelity: mean={mean:.2f} std={std:.2f} in {elapsed:.3f}s")


def test_a03_edit_rate_fidelity_and_immunity():
    """word modificationRate 0.2 over >=10k eligible words: within 3 binomial
    sigma; sentence-initial words take zero delete/modify actions."""
    rng = random.Random(99)
    params = EditingParameters(word_modification_rate=0.2)
    eligible = 0
    observed = 0
    initial_hits = 0
    texts = 0
    while eligible < 10_000:
        # corpus drawn from thesaurus-covered words only, so every
        # non-initial word is genuinely eligible for a synonym detour
        text = random_text(rng, max_words=40, bank=SYNONYM_WORDS)
        structure = segment(text)
        initials = {(w.start, w.end) for w in structure.words if w.sentence_initial}
        eligible += structure.word_count - len(initials)
        texts += 1
        plan = plan_edits(structure, params, LEXICON, rng.randrange(2**32))
        for action in plan.actions:
            span = (action.target.start, action.target.end)
            if action.level is ActionLevel.WORD and action.kind in (
                ActionKind.DELETE, ActionKind.MODIFY
            ):
                if span in initials:
                    initial_hits += 1
            observed += 1
    sigma = math.sqrt(eligible * 0.2 * 0.8)
    assert initial_hits == 0
    assert abs(observed - 0.2 * eligible) <= 3 * sigma, (
        f"{observed} of {eligible} (expected {0.2 * eligible:.0f} +- {3 * sigma:.0f})"
    )
    print(
        f"\nPASS A3 edit-rate fidelity: {observed}/{eligible} eligible words "
        f"({observed / eligible:.4f} vs 0.2) over {texts} texts, immunity clean"
    )


def test_a04_constraint_enforcement():
    """Rate sums above 1 always rejected; 1,000 random plans have pairwise
    disjoint target spans."""
    rng = random.Random(4242)
    rejected = 0
    while rejected < 500:
        d, i, m = (rng.uniform(0, 1) for _ in range(3))
        if d + i + m <= 1.0 + 1e-9:
            continue
        with pytest.raises(ValidationError):
            validate_params(
                EditingParameters(
                    word_deletion_rate=d, word_insertion_rate=i, word_modification_rate=m
                )
            )
        rejected += 1
    for overflow in (1.2, 7.0):
        with pytest.raises(ValidationError):
            validate_params(EditingParameters(char_typo_rate=overflow))

    for index in range(1000):
        text = random_text(rng, max_words=60)
        plan = plan_edits(
            segment(text), random_editing(rng), LEXICON, rng.randrange(2**32)
        )
        spans = sorted((a.target.start, a.target.end) for a in plan.actions)
        for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
            assert e1 <= s2, f"plan {index} has overlapping targets"
    print(f"\nPASS A4 constraint enforcement: 500 invalid sums rejected, 1000 plans disjoint")


PRESET_RESPONSE = (
    "I really love playing tennis on the weekend with my good friends. "
    "It is a great sport and it keeps me happy and strong all the time. "
    "I also enjoy fun movies and nice music after every single match we play. "
    "What hobbies do you enjoy lately my friend? Do you also like games, "
    "books, long walks, or maybe some cooking on a quiet warm evening?"
)


def test_a05_preset_semantics():
    """Blue: no pauses, no edits. Green: pauses, no edits. Red: both.
    Verified over 100 seeded runs each."""
    assert segment(PRESET_RESPONSE).word_count >= 60
    counts = {"blue": set(), "green": set(), "red": set()}
    for name in counts:
        config = preset(name)
        for seed in range(100):
            plan = plan_edits(segment(PRESET_RESPONSE), config.editing, LEXICON, seed)
            trace = schedule(plan, config.temporal, seed + 10_000, editing=config.editing)
            kinds = {ev.kind for ev in trace.events}
            counts[name].add(frozenset(kinds & {PAUSE, MOVE, DELETE}))
            if name == "blue":
                assert PAUSE not in kinds and MOVE not in kinds and DELETE not in kinds
            elif name == "green":
                assert PAUSE in kinds, f"green seed {seed} produced no pause"
                assert MOVE not in kinds and DELETE not in kinds
            else:
                assert PAUSE in kinds, f"red seed {seed} produced no pause"
                assert MOVE in kinds or DELETE in kinds, f"red seed {seed} had no edits"
            assert apply_trace(trace.events) == PRESET_RESPONSE
    print("\nPASS A5 preset semantics: blue/green/red verified over 100 seeded runs each")


def test_a06_waiting_room_uniformity(tmp_path):
    """10,000 simulated opens: uniform on [5000, 15000] ms (KS p > 0.01)."""
    gateway = ChatGateway(gateway_config(tmp_path, seed=123), clock=VirtualClock())
    started = time.perf_counter()
    delays = [gateway.draw_waiting_delay_ms() for _ in range(10_000)]
    elapsed = time.perf_counter() - started
    assert all(5000.0 <= d <= 15000.0 for d in delays)
    result = scipy_stats.kstest(delays, scipy_stats.uniform(loc=5000, scale=10000).cdf)
    assert result.pvalue > 0.01, f"KS p={result.pvalue:.4f}"
    assert elapsed < 1.0
    print(f"\nPASS A6 waiting-room uniformity: KS p={result.pvalue:.3f} in {elapsed:.3f}s")


def test_a07_determinism(tmp_path):
    """Identical config + seed: byte-identical trace files and wire transcripts."""
    file_a = tmp_path / "a.jsonl"
    file_b = tmp_path / "b.jsonl"
    text = PRESET_RESPONSE
    assert cli_main(["trace", "--preset", "red", "--seed", "42", text, "--out", str(file_a)]) == 0
    assert cli_main(["trace", "--preset", "red", "--seed", "42", text, "--out", str(file_b)]) == 0
    assert file_a.read_bytes() == file_b.read_bytes()

    transcripts = []
    for run in range(2):
        config = gateway_config(tmp_path / f"run{run}", seed=314)
        gateway = ChatGateway(config, clock=VirtualClock())
        inputs = [
            {"type": "open_session", "preset": "red"},
            {"type": "user_message", "text": "hello!"},
            {"type": "user_message", "text": "tell me more?"},
        ]
        sent = asyncio.run(drive(gateway, inputs))
        transcripts.append(json.dumps(sent, sort_keys=True))
    assert transcripts[0] == transcripts[1]
    print("\nPASS A7 determinism: trace files and wire transcripts byte-identical")


def test_a08_regression_recovery():
    """Synthetic y = 0.67x + 6.81 + N(0,5), n=200: slope +-0.1, intercept +-5;
    perfect line gives r_squared == 1 exactly."""
    rng = random.Random(1234)
    points = []
    for _ in range(200):
        x = rng.uniform(20, 120)
        points.append((x, 0.67 * x + 6.81 + rng.gauss(0, 5)))
    fit = fit_regression(points)
    assert abs(fit.slope - 0.67) <= 0.1, f"slope {fit.slope:.4f}"
    assert abs(fit.intercept - 6.81) <= 5.0, f"intercept {fit.intercept:.4f}"

    exact = fit_regression([(float(x), 2.0 * x + 1.0) for x in range(1, 201)])
    assert exact.r_squared == 1.0
    assert exact.slope == 2.0
    print(
        f"\nPASS A8 regression recovery: slope={fit.slope:.3f} "
        f"intercept={fit.intercept:.2f}, perfect line r2=1.0 exact"
    )


def test_a09_prompt_template():
    """The constraint line matches the published template byte-exactly."""
    prompt = build_prompt("hi", PromptConstraints(max_sentences=2, max_words=25))
    assert prompt == (
        "hi\n(Please provide a reply with no more than 2 sentences, "
        "and less than 25 words in total. Use English only please.)"
    )
    prompt2 = build_prompt("what's up", PromptConstraints(max_sentences=3, max_words=40))
    assert prompt2.endswith(
        "(Please provide a reply with no more than 3 sentences, "
        "and less than 40 words in total. Use English only please.)"
    )
    print("\nPASS A9 prompt template: byte-exact for substituted x, y")


def test_a10_gateway_framing(tmp_path):
    """Per message: Event* then TraceDone with monotone timestamps;
    visibility=false emits exactly two server messages."""
    config = gateway_config(tmp_path, seed=5)
    gateway = ChatGateway(config, clock=VirtualClock())
    inputs = [
        {"type": "open_session", "preset": "red"},
        {"type": "user_message", "text": "first message here"},
        {"type": "user_message", "text": "second message here"},
        {"type": "user_message", "text": "third message here"},
    ]
    sent = asyncio.run(drive(gateway, inputs))
    stream = [m for m in sent if m["type"] in ("event", "trace_done")]
    current = -1
    last_t = 0.0
    finished = set()
    for message in stream:
        mid = message["message_id"]
        assert mid not in finished, "message frames interleaved after trace_done"
        if mid != current:
            assert mid == current + 1
            current = mid
            last_t = 0.0
        if message["type"] == "event":
            assert message["event"]["t"] >= last_t
            last_t = message["event"]["t"]
        else:
            finished.add(mid)
    assert finished == {0, 1, 2}

    config = gateway_config(tmp_path / "hidden", seed=6, visibility=False)
    gateway = ChatGateway(config, clock=VirtualClock())
    sent = asyncio.run(
        drive(gateway, [
            {"type": "open_session", "preset": "red"},
            {"type": "user_message", "text": "hi"},
        ])
    )
    stream = [m for m in sent if m["type"] in ("event", "trace_done")]
    assert len(stream) == 2
    assert stream[0]["type"] == "event" and stream[0]["event"]["kind"] == "text"
    assert stream[1]["type"] == "trace_done"
    print("\nPASS A10 gateway framing: Event* then TraceDone, hidden mode exactly 2 messages")
