"""N-back food-truck task engine.

A session is a pre-generated sequence of customer orders. Each order
carries a drink (the N-back stimulus: the player judges whether it
matches the drink N orders back) and a pizza ingredient set (the recall
stimulus: the player rebuilds it from memory). The order cycle is a
small state machine driven by submit events; a session ends when the
clock expires or the sequence runs out, whichever comes first.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .errors import (
    ConfigInvalid,
    DuplicateResponse,
    IllegalTransition,
    IndexOutOfRange,
)

DEFAULT_DRINKS = ("cola", "water", "juice", "lemonade")
DEFAULT_INGREDIENTS = (
    "tomato", "cheese", "mushroom", "olive", "ham", "pepper", "onion", "basil",
)
MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class GameConfig:
    """Audience-chosen game parameters.

    ``trial_count`` bounds the number of orders that can be played; the
    session still ends at ``session_duration_s`` if the player is slower
    than that.
    """

    n_level: int = 1
    ingredient_count: int = 3
    drink_vocab: tuple[str, ...] = DEFAULT_DRINKS
    ingredient_vocab: tuple[str, ...] = DEFAULT_INGREDIENTS
    target_rate: float = 0.3
    trial_count: int = 60
    session_duration_s: float = 180.0
    seed: int = 0

    def problems(self) -> list[str]:
        """Return every invariant violation (empty when valid)."""
        out = []
        if self.n_level < 1:
            out.append(f"n_level must be >= 1, got {self.n_level}")
        if not 1 <= self.ingredient_count <= 5:
            out.append(f"ingredient_count must be in 1..5, got {self.ingredient_count}")
        if len(self.drink_vocab) < 2:
            out.append(f"drink_vocab needs at least 2 entries, got {len(self.drink_vocab)}")
        if len(set(self.drink_vocab)) != len(self.drink_vocab):
            out.append("drink_vocab entries must be distinct")
        if len(set(self.ingredient_vocab)) != len(self.ingredient_vocab):
            out.append("ingredient_vocab entries must be distinct")
        if self.ingredient_count > len(self.ingredient_vocab):
            out.append(
                f"ingredient_count {self.ingredient_count} exceeds vocabulary size "
                f"{len(self.ingredient_vocab)}"
            )
        if not 0.0 <= self.target_rate <= 1.0:
            out.append(f"target_rate must be in [0, 1], got {self.target_rate}")
        if self.trial_count < self.n_level + 1:
            out.append(
                f"trial_count must be >= n_level + 1 ({self.n_level + 1}), got {self.trial_count}"
            )
        if self.session_duration_s <= 0:
            out.append(f"session_duration_s must be positive, got {self.session_duration_s}")
        if not 0 <= self.seed <= MAX_SEED:
            out.append(f"seed must fit in 64 unsigned bits, got {self.seed}")
        return out

    def validate(self) -> None:
        problems = self.problems()
        if problems:
            raise ConfigInvalid(problems)

    def target_count(self) -> int:
        """Number of target trials implied by the rate (never in warm-up)."""
        return round(self.target_rate * (self.trial_count - self.n_level))

    def to_dict(self) -> dict:
        return {
            "n_level": self.n_level,
            "ingredient_count": self.ingredient_count,
            "drink_vocab": list(self.drink_vocab),
            "ingredient_vocab": list(self.ingredient_vocab),
            "target_rate": self.target_rate,
            "trial_count": self.trial_count,
            "session_duration_s": self.session_duration_s,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GameConfig":
        kwargs = dict(data)
        for key in ("drink_vocab", "ingredient_vocab"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        unknown = set(kwargs) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ConfigInvalid([f"unknown config field: {name}" for name in sorted(unknown)])
        return cls(**kwargs)

    def patched(self, patch: dict) -> "GameConfig":
        """New config with ``patch`` fields replacing current values."""
        merged = self.to_dict()
        merged.update(patch)
        return GameConfig.from_dict(merged)

    def digest(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()


@dataclass(frozen=True)
class Order:
    index: int
    customer_id: str
    drink: str
    ingredients: frozenset[str]
    is_target: bool

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "customer_id": self.customer_id,
            "drink": self.drink,
            "ingredients": sorted(self.ingredients),
            "is_target": self.is_target,
        }


@dataclass(frozen=True)
class OrderSequence:
    """The full pre-game program: every order is fixed before play."""

    config: GameConfig
    config_hash: str
    orders: tuple[Order, ...]

    def __len__(self) -> int:
        return len(self.orders)

    def order(self, index: int) -> Order:
        if not 0 <= index < len(self.orders):
            raise IndexOutOfRange(f"order index {index} outside 0..{len(self.orders) - 1}")
        return self.orders[index]

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "config_hash": self.config_hash,
            "orders": [o.to_dict() for o in self.orders],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "OrderSequence":
        config = GameConfig.from_dict(data["config"])
        orders = tuple(
            Order(
                index=o["index"],
                customer_id=o["customer_id"],
                drink=o["drink"],
                ingredients=frozenset(o["ingredients"]),
                is_target=o["is_target"],
            )
            for o in data["orders"]
        )
        return cls(config=config, config_hash=data["config_hash"], orders=orders)


def generate_sequence(config: GameConfig) -> OrderSequence:
    """Generate the order sequence for a config, deterministically.

    Exactly ``round(target_rate * (trial_count - n_level))`` targets are
    placed uniformly at random among the post-warm-up indices. Non-target
    drinks are drawn so they never accidentally match the drink N back.
    """
    config.validate()
    rng = random.Random(config.seed)
    n = config.n_level
    eligible = range(n, config.trial_count)
    target_indices = set(rng.sample(list(eligible), config.target_count()))

    drinks: list[str] = []
    orders: list[Order] = []
    for i in range(config.trial_count):
        if i < n:
            drink = rng.choice(config.drink_vocab)
            is_target = False
        elif i in target_indices:
            drink = drinks[i - n]
            is_target = True
        else:
            candidates = [d for d in config.drink_vocab if d != drinks[i - n]]
            drink = rng.choice(candidates)
            is_target = False
        drinks.append(drink)
        ingredients = frozenset(rng.sample(config.ingredient_vocab, config.ingredient_count))
        orders.append(
            Order(
                index=i,
                customer_id=f"customer-{i + 1:03d}",
                drink=drink,
                ingredients=ingredients,
                is_target=is_target,
            )
        )
    return OrderSequence(config=config, config_hash=config.digest(), orders=tuple(orders))


def is_target(sequence: OrderSequence, index: int) -> bool:
    """True iff the drink at ``index`` matches the drink n_level back."""
    order = sequence.order(index)
    n = sequence.config.n_level
    if index < n:
        return False
    return order.drink == sequence.orders[index - n].drink


@dataclass(frozen=True)
class PlayerResponse:
    order_index: int
    judged_yes: bool
    selected_drink: str
    selected_ingredients: frozenset[str]
    response_time_ms: float

    def __post_init__(self):
        if self.response_time_ms < 0:
            raise ValueError("response_time_ms must be >= 0")


class Feedback(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class TrialOutcome:
    order_index: int
    judgment_correct: bool
    drink_correct: bool
    ingredients_correct: bool
    overall_correct: bool
    feedback: Feedback
    is_target: bool
    judged_yes: bool
    response_time_ms: float

    def to_dict(self) -> dict:
        return {
            "order_index": self.order_index,
            "judgment_correct": self.judgment_correct,
            "drink_correct": self.drink_correct,
            "ingredients_correct": self.ingredients_correct,
            "overall_correct": self.overall_correct,
            "feedback": self.feedback.value,
            "is_target": self.is_target,
            "judged_yes": self.judged_yes,
            "response_time_ms": self.response_time_ms,
        }


def evaluate_response(
    sequence: OrderSequence,
    response: PlayerResponse,
    prior_indices=None,
) -> TrialOutcome:
    """Score one complete response against its order.

    ``prior_indices`` is the set of order indices already evaluated;
    passing it enforces the at-most-once rule without making this
    function stateful.
    """
    if prior_indices is not None and response.order_index in prior_indices:
        raise DuplicateResponse(f"order {response.order_index} already evaluated")
    order = sequence.order(response.order_index)
    target = is_target(sequence, response.order_index)
    judgment_correct = response.judged_yes == target
    drink_correct = response.selected_drink == order.drink
    ingredients_correct = frozenset(response.selected_ingredients) == order.ingredients
    overall = judgment_correct and drink_correct and ingredients_correct
    return TrialOutcome(
        order_index=response.order_index,
        judgment_correct=judgment_correct,
        drink_correct=drink_correct,
        ingredients_correct=ingredients_correct,
        overall_correct=overall,
        feedback=Feedback.POSITIVE if overall else Feedback.NEGATIVE,
        is_target=target,
        judged_yes=response.judged_yes,
        response_time_ms=response.response_time_ms,
    )


@dataclass(frozen=True)
class SessionScore:
    orders_completed: int = 0
    orders_correct: int = 0
    judgment_hits: int = 0
    judgment_false_alarms: int = 0
    mean_response_time_ms: float = 0.0

    def to_dict(self) -> dict:
        return {
            "orders_completed": self.orders_completed,
            "orders_correct": self.orders_correct,
            "judgment_hits": self.judgment_hits,
            "judgment_false_alarms": self.judgment_false_alarms,
            "mean_response_time_ms": self.mean_response_time_ms,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SessionScore":
        return cls(**data)


def update_score(score: SessionScore, outcome: TrialOutcome) -> SessionScore:
    """Fold one outcome into the running score (pure update)."""
    n = score.orders_completed + 1
    mean_rt = score.mean_response_time_ms + (outcome.response_time_ms - score.mean_response_time_ms) / n
    return SessionScore(
        orders_completed=n,
        orders_correct=score.orders_correct + (1 if outcome.overall_correct else 0),
        judgment_hits=score.judgment_hits + (1 if outcome.is_target and outcome.judged_yes else 0),
        judgment_false_alarms=score.judgment_false_alarms
        + (1 if not outcome.is_target and outcome.judged_yes else 0),
        mean_response_time_ms=mean_rt,
    )


class PhaseKind(str, Enum):
    IDLE = "idle"
    PRESENTING = "presenting"
    JUDGING = "judging"
    SELECTING_DRINK = "selecting_drink"
    SELECTING_INGREDIENTS = "selecting_ingredients"
    FEEDBACK = "feedback"
    FINISHED = "finished"


@dataclass(frozen=True)
class GamePhase:
    kind: PhaseKind
    order_index: Optional[int] = None

    def __str__(self) -> str:
        if self.order_index is None:
            return self.kind.value
        return f"{self.kind.value}({self.order_index})"


# --- events ---------------------------------------------------------------

@dataclass(frozen=True)
class PresentNext:
    """Present the next order (from Idle) or finish the cue (Presenting)."""


@dataclass(frozen=True)
class SubmitJudgment:
    judged_yes: bool


@dataclass(frozen=True)
class SubmitDrink:
    drink: str


@dataclass(frozen=True)
class SubmitIngredients:
    ingredients: frozenset


@dataclass(frozen=True)
class FeedbackDone:
    """Feedback display finished; move to the next customer."""


@dataclass(frozen=True)
class ClockExpired:
    """Session clock hit the limit."""


GameEvent = Union[
    PresentNext, SubmitJudgment, SubmitDrink, SubmitIngredients, FeedbackDone, ClockExpired
]


# --- effects --------------------------------------------------------------

@dataclass(frozen=True)
class OrderPresented:
    order: Order


@dataclass(frozen=True)
class OutcomeRecorded:
    outcome: TrialOutcome


@dataclass(frozen=True)
class SessionFinished:
    score: SessionScore


Effect = Union[OrderPresented, OutcomeRecorded, SessionFinished]


class GameEngine:
    """The 7-step order-cycle state machine.

    All mutation happens in :meth:`handle`; illegal events raise
    :class:`IllegalTransition` and leave every piece of state untouched.
    Time only enters through the ``clock_s`` argument, so the engine is
    fully deterministic given its event stream.

    Cycle: Presenting -> Judging -> SelectingDrink -> SelectingIngredients
    -> Feedback -> Presenting(next). ClockExpired short-circuits to
    Finished from anywhere; Finished is absorbing.
    """

    def __init__(self, sequence: OrderSequence):
        self.sequence = sequence
        self.phase = GamePhase(PhaseKind.IDLE)
        self.score = SessionScore()
        self.outcomes: list[TrialOutcome] = []
        self._present_clock_s: Optional[float] = None
        self._judged_yes: Optional[bool] = None
        self._drink: Optional[str] = None

    @property
    def finished(self) -> bool:
        return self.phase.kind is PhaseKind.FINISHED

    def handle(self, event: GameEvent, clock_s: float) -> list[Effect]:
        kind = self.phase.kind
        idx = self.phase.order_index

        if isinstance(event, ClockExpired):
            if kind is PhaseKind.FINISHED:
                return []  # absorbing self-loop, no duplicate effects
            self.phase = GamePhase(PhaseKind.FINISHED)
            return [SessionFinished(self.score)]

        if kind is PhaseKind.IDLE and isinstance(event, PresentNext):
            return self._present(0, clock_s)

        if kind is PhaseKind.PRESENTING and isinstance(event, PresentNext):
            self.phase = GamePhase(PhaseKind.JUDGING, idx)
            return []

        if kind is PhaseKind.JUDGING and isinstance(event, SubmitJudgment):
            self._judged_yes = event.judged_yes
            self.phase = GamePhase(PhaseKind.SELECTING_DRINK, idx)
            return []

        if kind is PhaseKind.SELECTING_DRINK and isinstance(event, SubmitDrink):
            self._drink = event.drink
            self.phase = GamePhase(PhaseKind.SELECTING_INGREDIENTS, idx)
            return []

        if kind is PhaseKind.SELECTING_INGREDIENTS and isinstance(event, SubmitIngredients):
            response = PlayerResponse(
                order_index=idx,
                judged_yes=self._judged_yes,
                selected_drink=self._drink,
                selected_ingredients=frozenset(event.ingredients),
                response_time_ms=max(0.0, (clock_s - self._present_clock_s) * 1000.0),
            )
            outcome = evaluate_response(
                self.sequence, response, prior_indices={o.order_index for o in self.outcomes}
            )
            self.outcomes.append(outcome)
            self.score = update_score(self.score, outcome)
            self.phase = GamePhase(PhaseKind.FEEDBACK, idx)
            return [OutcomeRecorded(outcome)]

        if kind is PhaseKind.FEEDBACK and isinstance(event, FeedbackDone):
            nxt = idx + 1
            if nxt >= len(self.sequence):
                self.phase = GamePhase(PhaseKind.FINISHED)
                return [SessionFinished(self.score)]
            return self._present(nxt, clock_s)

        raise IllegalTransition(str(self.phase), type(event).__name__)

    def _present(self, index: int, clock_s: float) -> list[Effect]:
        self.phase = GamePhase(PhaseKind.PRESENTING, index)
        self._present_clock_s = clock_s
        self._judged_yes = None
        self._drink = None
        return [OrderPresented(self.sequence.orders[index])]
