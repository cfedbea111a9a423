"""Headless full-session run under a simulated clock.

Wires a synthetic EEG stream, the workload pipeline, the session core
and a virtual player into one deterministic loop, then reports the game
score, the per-epoch class trace and its agreement with the script's
ground truth. A 180 s session takes well under a second of wall time.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import wire
from .pipeline import PipelineConfig, WorkloadPipeline
from .player import DEFAULT_LATENCY_RANGE_S, VirtualPlayer
from .session import SessionCore, SessionLog, SessionPhase, write_log_header
from .synth import GeneratorParams, WorkloadScript, generate
from .task import GameConfig
from .workload import WorkloadClass

# Epochs this close to a scripted level change are against mixed truth;
# summaries report them separately.
TRANSITION_EXCLUSION_S = 5.0


@dataclass
class SimulationResult:
    session_id: str
    summary: dict
    log_path: Optional[Path]
    summary_path: Optional[Path]
    wall_time_s: float  # kept out of the summary: stdout stays deterministic


def truth_class(script: WorkloadScript, t_s: float) -> str:
    return (
        WorkloadClass.OVERLOAD.value
        if script.level_at(t_s) >= 0.5
        else WorkloadClass.NOMINAL.value
    )


def run_simulation(
    config: GameConfig = GameConfig(),
    script: Optional[WorkloadScript] = None,
    accuracy: float = 1.0,
    seed: int = 0,
    out_dir: Optional[Path] = None,
    generator: Optional[GeneratorParams] = None,
    pipeline_config: PipelineConfig = PipelineConfig(),
    latency_range_s: tuple[float, float] = DEFAULT_LATENCY_RANGE_S,
) -> SimulationResult:
    started_wall = time.perf_counter()
    if script is None:
        script = WorkloadScript(
            steps=((0.0, 0.0), (60.0, 1.0)), duration_s=config.session_duration_s
        )
    if generator is None:
        generator = GeneratorParams(seed=seed)

    session_id = f"sim-{seed:016x}"
    log_path = summary_path = None
    log = None
    if out_dir is not None:
        out_dir = Path(out_dir)
        log_path = out_dir / f"{session_id}.jsonl"
        summary_path = out_dir / f"{session_id}.summary.json"
        log = SessionLog(log_path)
        write_log_header(log, session_id, created_unix=time.time())

    core = SessionCore(session_id=session_id, log=log)
    outs = core.handle_inbound(wire.set_config(session_id, config.to_dict()))
    if outs and outs[0]["type"] == "error":
        raise ValueError(f"simulation config rejected: {outs[0]['detail']}")

    player = VirtualPlayer(
        session_id, core.sequence, accuracy=accuracy, seed=seed,
        latency_range_s=latency_range_s,
    )
    pipe = WorkloadPipeline(generator.layout, generator.sampling_rate_hz, pipeline_config)

    # Priority queue of scheduled player messages: (due_s, seq, message).
    schedule: list[tuple[float, int, dict]] = []
    tiebreak = 0

    def observe(messages: list[dict], clock_s: float) -> None:
        nonlocal tiebreak
        for message in messages:
            for due, inbound in player.observe(message, clock_s):
                heapq.heappush(schedule, (due, tiebreak, inbound))
                tiebreak += 1

    observe(core.handle_inbound(wire.start_session(session_id)), 0.0)

    epochs: list[dict] = []
    max_publish_latency_s = 0.0

    for chunk in generate(script, generator):
        chunk_end = chunk.start_time_s + chunk.frames / generator.sampling_rate_hz
        # Player acts first for anything due before this chunk lands.
        while schedule and schedule[0][0] <= chunk_end:
            due, _, inbound = heapq.heappop(schedule)
            observe(core.advance_to(due), due)
            if core.phase is not SessionPhase.RUNNING:
                break
            observe(core.handle_inbound(inbound), due)
        if core.phase is not SessionPhase.RUNNING:
            break

        observe(core.advance_to(chunk_end), chunk_end)
        if core.phase is not SessionPhase.RUNNING:
            break
        for sample in pipe.push(chunk):
            core.publish_workload(sample)
            max_publish_latency_s = max(
                max_publish_latency_s, core.clock_s - sample.end_time_s
            )
            epochs.append(
                {
                    "end_time_s": sample.end_time_s,
                    "published_at_s": core.clock_s,
                    "class": sample.workload_class.value,
                    "truth": truth_class(script, sample.end_time_s),
                    "artifact": sample.artifact,
                    "calibrating": sample.relative_index is None,
                }
            )

    # If the EEG script was shorter than the game, let the player finish
    # against the clock, then expire the session so the log is complete.
    session_end_s = config.session_duration_s
    while core.phase is SessionPhase.RUNNING and schedule:
        due, _, inbound = heapq.heappop(schedule)
        if due > session_end_s:
            break
        observe(core.advance_to(due), due)
        if core.phase is SessionPhase.RUNNING:
            observe(core.handle_inbound(inbound), due)
    if core.phase is SessionPhase.RUNNING:
        core.advance_to(max(core.clock_s, session_end_s))

    transitions = script.transition_times()

    def near_transition(t: float) -> bool:
        return any(abs(t - tt) <= TRANSITION_EXCLUSION_S for tt in transitions)

    judged = [
        e for e in epochs
        if not e["artifact"] and not e["calibrating"] and not near_transition(e["end_time_s"])
    ]
    matches = sum(1 for e in judged if e["class"] == e["truth"])
    elapsed_wall = time.perf_counter() - started_wall

    summary = {
        "session_id": session_id,
        "seed": seed,
        "accuracy_setting": accuracy,
        "score": core.score.to_dict() if core.score is not None else None,
        "epochs": epochs,
        "confusion": {
            "judged_epochs": len(judged),
            "matching_epochs": matches,
            "accuracy": (matches / len(judged)) if judged else None,
        },
        "max_publish_latency_s": max_publish_latency_s,
        "step_s": pipeline_config.step_s,
    }

    if log is not None:
        log.close()
    if summary_path is not None:
        import json

        summary_path.write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")

    return SimulationResult(
        session_id=session_id,
        summary=summary,
        log_path=log_path,
        summary_path=summary_path,
        wall_time_s=elapsed_wall,
    )
