"""Command line entry points.

Exit codes: 0 success, 2 environment problems (e.g. port in use),
3 bad input data (files, logs), 4 bad configuration. Results go to
stdout as JSON; diagnostics go to stderr.
"""

from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

import click

from .errors import (
    ConfigInvalid,
    InvalidScript,
    LogCorrupt,
    MalformedFile,
    MissingMetadata,
)
from .pipeline import PipelineConfig, run_offline
from .session import SessionLog, replay_session
from .signals import LAYOUTS, BandDefinition
from .simulate import run_simulation
from .synth import WorkloadScript
from .task import GameConfig, generate_sequence

EXIT_ENVIRONMENT = 2
EXIT_INPUT = 3
EXIT_CONFIG = 4


@click.group()
def main():
    """Pizza food-truck N-back game with EEG workload monitoring."""


def _load_game_config(path: str | None, seed: int | None) -> GameConfig:
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigInvalid([f"config file not found: {path}"])
        except json.JSONDecodeError as exc:
            raise ConfigInvalid([f"config file is not valid JSON: {exc}"])
    if seed is not None:
        data["seed"] = seed
    config = GameConfig.from_dict(data)
    config.validate()
    return config


def _load_script(path: str | None, duration_s: float) -> WorkloadScript | None:
    if path is None:
        return None
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InvalidScript(f"script file not found: {path}")
    return WorkloadScript.from_json(text, duration_s=duration_s)


@main.command("gen-sequence")
@click.option("--n", "n_level", type=int, default=1, show_default=True, help="N of N-back.")
@click.option("--trials", type=int, default=60, show_default=True, help="Number of orders.")
@click.option("--target-rate", type=float, default=0.3, show_default=True,
              help="Fraction of post-warm-up orders that are targets.")
@click.option("--seed", type=int, default=0, show_default=True)
def gen_sequence(n_level, trials, target_rate, seed):
    """Emit the audience-inspectable order sequence as JSON."""
    try:
        config = GameConfig(n_level=n_level, trial_count=trials,
                            target_rate=target_rate, seed=seed)
        sequence = generate_sequence(config)
    except ConfigInvalid as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_CONFIG)
    click.echo(sequence.to_json())


@main.command()
@click.option("--script", "script_path", type=str, default=None,
              help="Workload script JSON ([{\"t\":0,\"level\":0},...]).")
@click.option("--config", "config_path", type=str, default=None,
              help="Game config JSON file.")
@click.option("--player", "player_spec", type=str, default="accuracy=1.0",
              show_default=True, help="Virtual player spec, e.g. accuracy=0.9.")
@click.option("--seed", type=int, default=0, show_default=True)
def simulate(script_path, config_path, player_spec, seed):
    """Run a full headless session under a simulated clock."""
    try:
        accuracy = _parse_player(player_spec)
        config = _load_game_config(config_path, seed)
        script = _load_script(script_path, config.session_duration_s)
    except (ConfigInvalid, InvalidScript, ValueError) as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_CONFIG)

    result = run_simulation(
        config=config,
        script=script,
        accuracy=accuracy,
        seed=seed,
        out_dir=Path("sessions"),
    )
    click.echo(f"session simulated in {result.wall_time_s:.2f}s wall time", err=True)
    click.echo(json.dumps(result.summary, indent=2))


def _parse_player(spec: str) -> float:
    for part in spec.split(","):
        key, _, value = part.partition("=")
        if key.strip() != "accuracy":
            raise ValueError(f"unknown player option {key.strip()!r}")
        try:
            accuracy = float(value)
        except ValueError:
            raise ValueError(f"bad accuracy value {value!r}")
        if not 0.0 <= accuracy <= 1.0:
            raise ValueError(f"accuracy must be in [0, 1], got {accuracy}")
        return accuracy
    raise ValueError("player spec must look like accuracy=0.9")


@main.command()
@click.argument("eeg_csv", type=str)
@click.option("--bands", type=str, default="4-8,8-12", show_default=True,
              help="Theta and alpha integration bands, Hz.")
@click.option("--layout", "layout_name", type=str, default="standard", show_default=True)
@click.option("--out", "out_path", type=str, default=None,
              help="Write JSON-lines here instead of stdout.")
def analyze(eeg_csv, bands, layout_name, out_path):
    """Offline EEG file analysis: one workload sample per line."""
    from .eeg_csv import read_csv

    try:
        theta, alpha = _parse_bands(bands)
        layout = LAYOUTS[layout_name]
    except (ValueError, KeyError) as exc:
        click.echo(f"bad option: {exc}", err=True)
        sys.exit(EXIT_CONFIG)

    try:
        recording = read_csv(eeg_csv)
    except (MalformedFile, MissingMetadata, FileNotFoundError) as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_INPUT)

    config = PipelineConfig(theta_band=theta, alpha_band=alpha)
    if recording.duration_s < config.window_s:
        click.echo(
            f"warning: recording of {recording.duration_s:.2f}s is shorter than the "
            f"{config.window_s:.0f}s analysis window; no samples",
            err=True,
        )
    samples = run_offline(
        recording.chunks(), layout, recording.sampling_rate_hz, config
    )
    lines = "".join(json.dumps(s.to_dict()) + "\n" for s in samples)
    if out_path is None:
        click.echo(lines, nl=False)
    else:
        Path(out_path).write_text(lines, encoding="utf-8")


def _parse_bands(spec: str) -> tuple[BandDefinition, BandDefinition]:
    parts = spec.split(",")
    if len(parts) != 2:
        raise ValueError(f"bands must be 'LOW-HIGH,LOW-HIGH', got {spec!r}")
    edges = []
    for part in parts:
        low, _, high = part.partition("-")
        edges.append((float(low), float(high)))
    return (
        BandDefinition("theta", *edges[0]),
        BandDefinition("alpha", *edges[1]),
    )


@main.command("replay-log")
@click.argument("log_path", type=str)
def replay_log(log_path):
    """Verify a session log replays exactly; print the reconstruction."""
    try:
        entries = SessionLog.read(log_path)
    except (FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        click.echo(f"cannot read log: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    try:
        core = replay_session(entries)
    except LogCorrupt as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_INPUT)
    click.echo(json.dumps({
        "status": "ok",
        "entries": len(entries),
        "session_id": core.session_id,
        "phase": core.phase.value,
        "score": core.score.to_dict() if core.score is not None else None,
    }, indent=2))


@main.command()
@click.option("--listen", type=str, default="127.0.0.1:8765", show_default=True,
              help="host:port to bind.")
@click.option("--eeg", "eeg_spec", type=str, default="synthetic", show_default=True,
              help="'synthetic' or 'replay:<file.csv>'.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--config", "config_path", type=str, default=None,
              help="Game config JSON file.")
def serve(listen, eeg_spec, seed, config_path):
    """Host a live session over websockets."""
    import uvicorn

    from .server import ServerSettings, create_app
    from .synth import GeneratorParams

    try:
        config = _load_game_config(config_path, seed)
    except ConfigInvalid as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_CONFIG)

    chunk_source = None
    if eeg_spec.startswith("replay:"):
        replay_path = eeg_spec.split(":", 1)[1]
        from .eeg_csv import read_csv

        try:
            read_csv(replay_path)  # fail fast with a good message
        except (MalformedFile, MissingMetadata, FileNotFoundError) as exc:
            click.echo(f"replay file rejected: {exc}", err=True)
            sys.exit(EXIT_INPUT)

        def chunk_source():
            from .eeg_csv import replay

            return replay(replay_path)

    elif eeg_spec != "synthetic":
        click.echo(f"--eeg must be 'synthetic' or 'replay:<file>', got {eeg_spec!r}", err=True)
        sys.exit(EXIT_CONFIG)

    host, _, port_text = listen.partition(":")
    try:
        port = int(port_text)
    except ValueError:
        click.echo(f"bad --listen value {listen!r}", err=True)
        sys.exit(EXIT_CONFIG)

    # Fail fast on unbindable addresses instead of letting the server
    # half-start; uvicorn would exit 1 otherwise.
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((host, port))
    except OSError as exc:
        click.echo(f"cannot bind {listen}: {exc}", err=True)
        sys.exit(EXIT_ENVIRONMENT)
    finally:
        probe.close()

    settings = ServerSettings(
        session_id=f"live-{seed:016x}",
        config=config,
        chunk_source=chunk_source,
        generator=GeneratorParams(seed=seed),
    )
    app = create_app(settings)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
