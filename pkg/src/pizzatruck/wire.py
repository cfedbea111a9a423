"""Wire protocol: one JSON object per message, tagged by ``type``.

Inbound (client to server): set_config, start_session, submit_judgment,
submit_drink, submit_ingredients, subscribe. Every inbound message
carries ``session_id``.

Outbound (server to clients): config_ack, order_presented, phase_changed,
trial_feedback, workload_update, countdown_tick, score_update,
session_end, error. Every outbound message carries the server ``clock_s``.

The machine-readable schema ships in docs/wire-protocol.schema.json.
"""

from __future__ import annotations

import json
from typing import Optional

from .errors import BadMessage
from .task import Order, SessionScore, TrialOutcome
from .workload import WorkloadSample

INBOUND_TYPES = {
    "set_config",
    "start_session",
    "submit_judgment",
    "submit_drink",
    "submit_ingredients",
    "subscribe",
}

OUTBOUND_TYPES = {
    "config_ack",
    "order_presented",
    "phase_changed",
    "trial_feedback",
    "workload_update",
    "countdown_tick",
    "score_update",
    "session_end",
    "error",
}

ROLES = {"player", "spectator"}


def encode(message: dict) -> str:
    """Canonical JSON: sorted keys, no whitespace. Stable for hashing."""
    return json.dumps(message, sort_keys=True, separators=(",", ":"))


def decode(text: str) -> dict:
    try:
        message = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadMessage(f"not valid JSON: {exc}") from exc
    if not isinstance(message, dict):
        raise BadMessage("message must be a JSON object")
    return message


def validate_inbound(message: dict) -> dict:
    """Check tag, session_id and per-type payload fields."""
    tag = message.get("type")
    if tag not in INBOUND_TYPES:
        raise BadMessage(f"unknown inbound type {tag!r}")
    if not isinstance(message.get("session_id"), str) or not message["session_id"]:
        raise BadMessage(f"{tag}: session_id is required")

    if tag == "set_config":
        if not isinstance(message.get("config"), dict):
            raise BadMessage("set_config: config object is required")
    elif tag == "submit_judgment":
        if message.get("judgment") not in ("yes", "no"):
            raise BadMessage("submit_judgment: judgment must be 'yes' or 'no'")
    elif tag == "submit_drink":
        if not isinstance(message.get("drink"), str):
            raise BadMessage("submit_drink: drink is required")
    elif tag == "submit_ingredients":
        ingredients = message.get("ingredients")
        if not isinstance(ingredients, list) or not all(isinstance(i, str) for i in ingredients):
            raise BadMessage("submit_ingredients: ingredients must be a list of strings")
    elif tag == "subscribe":
        if message.get("role") not in ROLES:
            raise BadMessage(f"subscribe: role must be one of {sorted(ROLES)}")
    return message


# --- inbound builders (used by the virtual player and tests) ---------------

def set_config(session_id: str, config: dict) -> dict:
    return {"type": "set_config", "session_id": session_id, "config": config}


def start_session(session_id: str) -> dict:
    return {"type": "start_session", "session_id": session_id}


def submit_judgment(session_id: str, judged_yes: bool) -> dict:
    return {
        "type": "submit_judgment",
        "session_id": session_id,
        "judgment": "yes" if judged_yes else "no",
    }


def submit_drink(session_id: str, drink: str) -> dict:
    return {"type": "submit_drink", "session_id": session_id, "drink": drink}


def submit_ingredients(session_id: str, ingredients) -> dict:
    return {
        "type": "submit_ingredients",
        "session_id": session_id,
        "ingredients": sorted(ingredients),
    }


def subscribe(session_id: str, role: str) -> dict:
    return {"type": "subscribe", "session_id": session_id, "role": role}


# --- outbound builders ------------------------------------------------------

def config_ack(clock_s: float, config: dict, sequence_digest: str) -> dict:
    return {
        "type": "config_ack",
        "clock_s": clock_s,
        "config": config,
        "sequence_digest": sequence_digest,
    }


def order_presented(clock_s: float, order: Order, total_orders: int) -> dict:
    # The drink is delivered as a cue for the UI to present (text banner,
    # optional beep); is_target stays server-side, the judgment is the game.
    return {
        "type": "order_presented",
        "clock_s": clock_s,
        "order_index": order.index,
        "customer_id": order.customer_id,
        "ingredients": sorted(order.ingredients),
        "drink_cue": order.drink,
        "total_orders": total_orders,
    }


def phase_changed(clock_s: float, phase_kind: str, order_index: Optional[int]) -> dict:
    return {
        "type": "phase_changed",
        "clock_s": clock_s,
        "phase": phase_kind,
        "order_index": order_index,
    }


def trial_feedback(clock_s: float, outcome: TrialOutcome) -> dict:
    return {
        "type": "trial_feedback",
        "clock_s": clock_s,
        "order_index": outcome.order_index,
        "feedback": outcome.feedback.value,
        "judgment_correct": outcome.judgment_correct,
        "drink_correct": outcome.drink_correct,
        "ingredients_correct": outcome.ingredients_correct,
        "overall_correct": outcome.overall_correct,
    }


def workload_update(clock_s: float, sample: WorkloadSample) -> dict:
    return {"type": "workload_update", "clock_s": clock_s, "sample": sample.to_dict()}


def countdown_tick(clock_s: float, remaining_s: float) -> dict:
    return {"type": "countdown_tick", "clock_s": clock_s, "remaining_s": remaining_s}


def score_update(clock_s: float, score: SessionScore) -> dict:
    return {"type": "score_update", "clock_s": clock_s, "score": score.to_dict()}


def session_end(clock_s: float, score: SessionScore) -> dict:
    return {"type": "session_end", "clock_s": clock_s, "score": score.to_dict()}


def error(clock_s: float, code: str, detail: str) -> dict:
    return {"type": "error", "clock_s": clock_s, "code": code, "detail": detail}
