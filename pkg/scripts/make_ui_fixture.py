#!/usr/bin/env python3
"""Regenerate frontend/test/fixtures/clickthrough.json.

Runs a headless session and records, as one interleaved timeline, the
outbound messages a player client would receive and the clicks a tester
performs. The submit messages those clicks produce are sent to the
session directly, so the recorded trial outcomes are the server's
verdict on exactly that trace. The UI test replays the same clicks
through the browser controller and must emit an identical trace.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pizzatruck import wire
from pizzatruck.session import SessionCore
from pizzatruck.task import GameConfig

SESSION_ID = "ui-fixture"
OUT_PATH = Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures" / "clickthrough.json"


def main() -> None:
    config = GameConfig(seed=202, n_level=1, ingredient_count=3, trial_count=5,
                        target_rate=0.5, session_duration_s=120.0)
    core = SessionCore(session_id=SESSION_ID)
    timeline: list[dict] = []
    submits: list[dict] = []
    outcomes: list[dict] = []

    def server(messages):
        for message in messages:
            timeline.append({"server": message})
            if message["type"] == "trial_feedback":
                outcomes.append(message)

    def click(action: str, value=None):
        timeline.append({"click": {"action": action, "value": value}})

    def send(message):
        submits.append(message)
        server(core.handle_inbound(message))

    server(core.handle_inbound(wire.subscribe(SESSION_ID, "player")))
    server(core.handle_inbound(wire.set_config(SESSION_ID, config.to_dict())))
    server(core.handle_inbound(wire.start_session(SESSION_ID)))

    orders = core.sequence.orders

    # Cycle 1: played perfectly.
    order = orders[0]
    click("judge", "yes" if order.is_target else "no")
    send(wire.submit_judgment(SESSION_ID, order.is_target))
    click("pick_drink", order.drink)
    send(wire.submit_drink(SESSION_ID, order.drink))
    selection: list[str] = []
    for name in sorted(order.ingredients):
        click("toggle_ingredient", name)
        selection.append(name)
    click("validate")
    send(wire.submit_ingredients(SESSION_ID, selection))

    # Cycle 2: one ingredient short, validated through the confirm dialog.
    order = orders[1]
    click("judge", "yes" if order.is_target else "no")
    send(wire.submit_judgment(SESSION_ID, order.is_target))
    click("pick_drink", order.drink)
    send(wire.submit_drink(SESSION_ID, order.drink))
    short = sorted(order.ingredients)[:-1]
    for name in short:
        click("toggle_ingredient", name)
    click("validate")  # too few: the UI asks for confirmation
    click("confirm")
    send(wire.submit_ingredients(SESSION_ID, short))

    fixture = {
        "session_id": SESSION_ID,
        "timeline": timeline,
        "expected_submits": submits,
        "trial_outcomes": outcomes,
        "final_score": core.score.to_dict(),
    }
    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    OUT_PATH.write_text(json.dumps(fixture, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {OUT_PATH} ({len(timeline)} timeline entries, "
          f"{len(submits)} submits, {len(outcomes)} outcomes)")


if __name__ == "__main__":
    main()
