"""Acceptance suite: one test per release criterion, at stated tolerances.

The terminal summary hook in conftest prints one PASS/FAIL line per
criterion. Everything here drives the package the way the CLI does; no
UI component is involved.
"""

import hashlib
import json
import random
import time

import numpy as np
import pytest
from click.testing import CliRunner

from pizzatruck import wire
from pizzatruck.cli import main as cli_main
from pizzatruck.eeg_csv import read_csv, write_csv
from pizzatruck.errors import IllegalTransition
from pizzatruck.filters import DEFAULT_PREFILTER_ORDER, design_bandpass
from pizzatruck.pipeline import run_offline
from pizzatruck.session import SessionCore, SessionLog, SessionPhase, replay_session, write_log_header
from pizzatruck.signals import DEFAULT_LAYOUT, Epoch
from pizzatruck.simulate import run_simulation
from pizzatruck.spectral import welch_psd
from pizzatruck.synth import GeneratorParams, WorkloadScript, generate
from pizzatruck.task import (
    ClockExpired,
    FeedbackDone,
    GameConfig,
    GameEngine,
    OutcomeRecorded,
    PhaseKind,
    PresentNext,
    SubmitDrink,
    SubmitIngredients,
    SubmitJudgment,
    generate_sequence,
)
from pizzatruck.workload import WorkloadClass, WorkloadSample

FS = 250.0


def test_criterion_01_end_to_end_scenario(tmp_path):
    """Step script 0->1 at 60 s, 20 seeds: >=90% epoch agreement, <10 s wall."""
    for seed in range(20):
        result = run_simulation(
            config=GameConfig(seed=seed),
            script=WorkloadScript(steps=((0.0, 0.0), (60.0, 1.0)), duration_s=180.0),
            accuracy=1.0,
            seed=seed,
            out_dir=tmp_path if seed == 0 else None,
        )
        confusion = result.summary["confusion"]
        assert confusion["judged_epochs"] >= 250, f"seed {seed}: too few epochs judged"
        assert confusion["accuracy"] >= 0.90, (
            f"seed {seed}: accuracy {confusion['accuracy']:.3f} below 0.90"
        )
        assert result.wall_time_s < 10.0, (
            f"seed {seed}: {result.wall_time_s:.1f}s wall time"
        )


def _pink(n, exponent, rng, shelf_hz=0.5):
    # Shelved below 0.5 Hz: power at frequencies a 1 s Welch segment
    # cannot resolve is not a fair Parseval target (the production
    # pipeline band-passes 1-40 Hz before the PSD anyway).
    spectrum = np.fft.rfft(rng.standard_normal(n))
    freqs = np.fft.rfftfreq(n, 1.0 / FS)
    shape = np.zeros_like(freqs)
    nz = freqs > 0
    shape[nz] = np.maximum(freqs[nz], shelf_hz) ** (-exponent / 2.0)
    return np.fft.irfft(spectrum * shape, n)


def test_criterion_02_parseval_suite():
    """Integrated PSD equals time-domain mean power: 1% rect, 10% Welch."""
    n = 4000  # 16 s: enough segments for the Welch average to settle
    cases = []
    for seed in range(20):
        rng = np.random.default_rng(seed)
        kind = seed % 3
        if kind == 0:
            freqs = rng.uniform(3.0, 40.0, size=3)
            amps = rng.uniform(0.5, 3.0, size=3)
            t = np.arange(n) / FS
            wave = sum(a * np.sin(2 * np.pi * f * t + rng.uniform(0, 2 * np.pi))
                       for a, f in zip(amps, freqs))
            data = np.tile(wave, (16, 1))
        elif kind == 1:
            data = rng.standard_normal((16, n))
        else:
            data = np.stack([_pink(n, rng.uniform(0.5, 1.5), rng) for _ in range(16)])
        cases.append(data)

    for i, data in enumerate(cases):
        epoch = Epoch(end_time_s=n / FS, window_s=n / FS, sampling_rate_hz=FS, samples=data)
        want = np.mean(data**2, axis=1)  # the time-domain oracle

        rect = welch_psd(epoch, segment_len=n, overlap_fraction=0.0, taper="boxcar")
        np.testing.assert_allclose(
            rect.total_power(), want, rtol=0.01,
            err_msg=f"case {i}: rectangular single-segment over 1%",
        )
        welch = welch_psd(epoch, segment_len=int(FS), overlap_fraction=0.5, taper="hann")
        np.testing.assert_allclose(
            welch.total_power(), want, rtol=0.10,
            err_msg=f"case {i}: Welch defaults over 10%",
        )


def test_criterion_03_spectral_peak_accuracy():
    """Pure sinusoids land their PSD peak within one bin."""
    t = np.arange(int(2 * FS)) / FS
    for freq in (5.0, 10.0, 15.0, 20.0, 30.0):
        data = np.tile(np.sin(2 * np.pi * freq * t), (16, 1))
        epoch = Epoch(end_time_s=2.0, window_s=2.0, sampling_rate_hz=FS, samples=data)
        psd = welch_psd(epoch)  # defaults: 1 s segments, 50%, hann
        peaks = psd.freqs_hz[np.argmax(psd.power, axis=1)]
        assert np.all(np.abs(peaks - freq) <= psd.df_hz + 1e-12), (
            f"{freq} Hz peak found at {peaks}"
        )


def _gain_db(sos, freq_hz):
    z = np.exp(1j * 2 * np.pi * freq_hz / FS)
    h = np.ones_like(z, dtype=complex) if np.ndim(freq_hz) else 1.0 + 0.0j
    for b0, b1, b2, a0, a1, a2 in sos:
        h = h * (b0 + b1 / z + b2 / z**2) / (a0 + a1 / z + a2 / z**2)
    return 20 * np.log10(np.abs(h) + 1e-300)


def test_criterion_04_default_filter_meets_mask():
    """Default broadband design: stopband <= -20 dB, passband >= -3 dB."""
    coeffs = design_bandpass(1.0, 40.0, FS, order=DEFAULT_PREFILTER_ORDER)
    assert _gain_db(coeffs.sos, 0.25) <= -20.0
    assert _gain_db(coeffs.sos, 60.0) <= -20.0
    grid = np.linspace(2.0, 35.0, 331)
    gains = _gain_db(coeffs.sos, grid)
    assert np.all(gains >= -3.0), (
        f"worst passband gain {gains.min():.2f} dB at {grid[np.argmin(gains)]:.2f} Hz"
    )


def test_criterion_05_sequence_statistics():
    """1000 seeds: exactly 9 targets, clean warm-up, full index coverage."""
    hosting = set()
    for seed in range(1000):
        config = GameConfig(n_level=1, trial_count=31, target_rate=0.3, seed=seed)
        seq = generate_sequence(config)
        drinks = [o.drink for o in seq.orders]
        targets = [i for i in range(1, 31) if drinks[i] == drinks[i - 1]]
        assert len(targets) == 9, f"seed {seed}: {len(targets)} targets"
        assert not seq.orders[0].is_target
        flagged = [o.index for o in seq.orders if o.is_target]
        assert flagged == targets, f"seed {seed}: flags disagree with definition"
        hosting.update(targets)
    assert hosting == set(range(1, 31)), f"uncovered indices: {set(range(1, 31)) - hosting}"


EVENTS = [
    PresentNext(),
    SubmitJudgment(True),
    SubmitJudgment(False),
    SubmitDrink("cola"),
    SubmitDrink("water"),
    SubmitIngredients(frozenset(["cheese"])),
    SubmitIngredients(frozenset(["cheese", "ham"])),
    FeedbackDone(),
    ClockExpired(),
]


def test_criterion_06_state_machine_fuzz(tmp_path):
    """10k event streams respect the invariants; 100 session logs replay exact."""
    config = GameConfig(
        n_level=1, trial_count=4, target_rate=0.5,
        drink_vocab=("cola", "water"), ingredient_count=1,
        ingredient_vocab=("cheese", "ham"), seed=3,
    )
    sequence = generate_sequence(config)
    rng = random.Random(99)
    for _ in range(10_000):
        engine = GameEngine(sequence)
        clock = 0.0
        outcomes_seen = 0
        for _ in range(rng.randint(1, 25)):
            event = rng.choice(EVENTS)
            clock += rng.random()
            was_finished = engine.finished
            before = (engine.phase, engine.score, len(engine.outcomes))
            try:
                effects = engine.handle(event, clock)
            except IllegalTransition:
                after = (engine.phase, engine.score, len(engine.outcomes))
                assert after == before, "illegal event mutated state"
                continue
            if was_finished:
                assert isinstance(event, ClockExpired) and effects == [], (
                    "Finished must be absorbing"
                )
            outcomes_seen += sum(isinstance(e, OutcomeRecorded) for e in effects)
        assert outcomes_seen == len(engine.outcomes)
        assert engine.score.orders_completed == len(engine.outcomes)

    for fuzz_seed in range(100):
        log_path = tmp_path / f"fuzz-{fuzz_seed}.jsonl"
        final = _fuzzed_session(fuzz_seed, log_path)
        replayed = replay_session(SessionLog.read(log_path))
        assert replayed.score == final.score, f"fuzz {fuzz_seed}: score diverged"
        assert replayed.phase == final.phase, f"fuzz {fuzz_seed}: phase diverged"


def _fuzzed_session(seed: int, log_path) -> SessionCore:
    """A complete randomized session through the core, logged."""
    rng = random.Random(seed)
    session_id = f"fuzz-{seed}"
    duration = rng.uniform(5.0, 15.0)
    log = SessionLog(log_path)
    write_log_header(log, session_id, created_unix=time.time())
    core = SessionCore(session_id=session_id, log=log)
    core.handle_inbound(wire.set_config(session_id, {
        "seed": rng.randrange(2**32),
        "trial_count": rng.randint(3, 8),
        "session_duration_s": duration,
        "target_rate": rng.random(),
    }))
    if rng.random() < 0.3:
        core.handle_inbound(wire.subscribe(session_id, "spectator"))
    core.handle_inbound(wire.start_session(session_id))
    clock = 0.0
    while core.phase is SessionPhase.RUNNING:
        clock += rng.uniform(0.05, 1.5)
        core.advance_to(clock)
        if core.phase is not SessionPhase.RUNNING:
            break
        roll = rng.random()
        if roll < 0.15:  # wrong-phase noise, answered with errors
            core.handle_inbound(wire.submit_drink(session_id, "cola"))
        elif roll < 0.25:
            core.publish_workload(WorkloadSample(
                end_time_s=clock, frontal_theta_power=rng.random(),
                parietal_alpha_power=rng.random() + 0.1, index=rng.random() + 0.1,
                relative_index=None, workload_class=WorkloadClass.NOMINAL,
                artifact=rng.random() < 0.2,
            ))
        else:
            index = core.engine.phase.order_index
            kind = core.engine.phase.kind
            if index is None:
                continue
            order = core.sequence.orders[index]
            correct = rng.random() < 0.7
            if kind is PhaseKind.JUDGING:
                answer = order.is_target if correct else not order.is_target
                core.handle_inbound(wire.submit_judgment(session_id, answer))
            elif kind is PhaseKind.SELECTING_DRINK:
                drink = order.drink if correct else "water"
                core.handle_inbound(wire.submit_drink(session_id, drink))
            elif kind is PhaseKind.SELECTING_INGREDIENTS:
                chosen = set(order.ingredients)
                if not correct and chosen:
                    chosen.pop()
                core.handle_inbound(wire.submit_ingredients(session_id, chosen))
    log.close()
    return core


def _log_digest(path) -> str:
    h = hashlib.sha256()
    for line in path.read_text(encoding="utf-8").splitlines():
        if json.loads(line)["direction"] == "meta":
            continue  # the only wall-clock data
        h.update(line.encode())
        h.update(b"\n")
    return h.hexdigest()


def test_criterion_07_determinism(tmp_path):
    """Same flags and seeds: identical stdout and identical session logs."""
    runner = CliRunner()
    args = ["gen-sequence", "--n", "2", "--trials", "25", "--target-rate", "0.4",
            "--seed", "1234"]
    first = runner.invoke(cli_main, args, catch_exceptions=False)
    second = runner.invoke(cli_main, args, catch_exceptions=False)
    assert first.stdout == second.stdout and first.exit_code == 0

    digests = []
    for run in ("a", "b"):
        result = run_simulation(
            config=GameConfig(seed=77), accuracy=0.85, seed=77,
            out_dir=tmp_path / run,
        )
        digests.append(_log_digest(result.log_path))
    assert digests[0] == digests[1], "simulate logs differ between identical runs"


QUIET = dict(
    theta_amp_range=(0.5, 2.0), alpha_amp_range=(2.0, 0.5), noise_sigma_uv=0.8,
)


def test_criterion_08_scale_invariance(tmp_path):
    """A recording scaled x10 classifies identically, indices to 1e-9."""
    script = WorkloadScript(steps=((0.0, 0.0), (20.0, 1.0)), duration_s=45.0)
    params = GeneratorParams(seed=55, **QUIET)
    base_path = tmp_path / "base.csv"
    write_csv(base_path, generate(script, params), DEFAULT_LAYOUT.channel_names)

    recording = read_csv(base_path)
    scaled_path = tmp_path / "x10.csv"
    write_csv(
        scaled_path,
        (type(c)(c.start_time_s, c.sampling_rate_hz, c.samples * 10.0)
         for c in recording.chunks()),
        DEFAULT_LAYOUT.channel_names,
    )

    def analyze(path):
        rec = read_csv(path)
        return run_offline(rec.chunks(), DEFAULT_LAYOUT, rec.sampling_rate_hz)

    base = analyze(base_path)
    scaled = analyze(scaled_path)
    assert len(base) == len(scaled) > 0
    assert not any(s.artifact for s in scaled), "scaled file tripped artifact gate"
    classes_base = [s.workload_class for s in base]
    classes_scaled = [s.workload_class for s in scaled]
    assert classes_base == classes_scaled
    assert WorkloadClass.OVERLOAD in classes_base  # both regimes exercised
    for a, b in zip(base, scaled):
        assert b.index == pytest.approx(a.index, rel=1e-9)


def test_criterion_09_real_time_latency(tmp_path):
    """Every workload update lands within step_s + 100 ms of its epoch."""
    result = run_simulation(config=GameConfig(seed=11), seed=11, out_dir=tmp_path)
    epochs = result.summary["epochs"]
    assert len(epochs) >= 300
    budget = result.summary["step_s"] + 0.1
    for epoch in epochs:
        latency = epoch["published_at_s"] - epoch["end_time_s"]
        assert 0.0 <= latency <= budget, (
            f"epoch at {epoch['end_time_s']}: latency {latency:.3f}s over {budget:.3f}s"
        )
    assert result.summary["max_publish_latency_s"] <= budget
