"""Game loop, interval legality, transcripts and the time schedule.

The game runs on nested real intervals: round n gives Player A a ball of
radius rho*(alpha*beta)^n inside the previous B-ball, and Player B a ball of
radius alpha times that inside A's.  Everything a strategy decides is logged
per round; transcripts serialize to the documented JSON schema and replay
byte-identically for a fixed seed and kernel backend.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..balls import Ball
from ..latticeflow import FlowSpec, GroupElement
from ..numberfield import NumberField
from .curves import Curve

LEGALITY_SLACK = 1e-12


@dataclass(frozen=True)
class GameParams:
    alpha: float
    beta: float
    rho: float
    rounds: int
    seed: int

    def __post_init__(self):
        if not 0 < self.alpha < 0.5:
            raise ValueError("alpha must lie in (0, 1/2)")
        if not 0 < self.beta < 1:
            raise ValueError("beta must lie in (0, 1)")
        if not self.rho > 0:
            raise ValueError("rho must be positive")
        if self.rounds < 1:
            raise ValueError("need at least one round")


@dataclass(frozen=True)
class Interval:
    center: float
    radius: float

    @property
    def left(self) -> float:
        return self.center - self.radius

    @property
    def right(self) -> float:
        return self.center + self.radius

    def contains_interval(self, other: "Interval") -> bool:
        slack = LEGALITY_SLACK * max(self.radius, 1e-300)
        return (abs(other.center - self.center)
                <= self.radius - other.radius + slack)


def schedule_scale(params: GameParams, n: int) -> Fraction:
    """rho * (alpha*beta)^n as an exact fraction of the float parameters."""
    return Fraction(params.rho) * (Fraction(params.alpha) * Fraction(params.beta)) ** n


def schedule_time(params: GameParams, n: int, spec: FlowSpec) -> Ball:
    """Round-n flow time: (1 / (2 r_max)) * log(1 / (rho (alpha beta)^n)).

    The equal-weight flow has r_max = 1, reproducing t_n = (1/2) log(1/scale).
    """
    scale = schedule_scale(params, n)
    return Ball.of(1 / scale).log() * (Fraction(1) / (2 * spec.r_max))


@dataclass
class GameContext:
    field: NumberField
    curve: Curve
    spec: FlowSpec
    params: GameParams
    base_g: GroupElement


class Transcript:
    """Ordered round records plus the final point estimate."""

    def __init__(self, params: GameParams, labels: dict):
        self.params = params
        self.labels = labels
        self.rounds: list[dict] = []
        self.x_inf: tuple | None = None
        self.forfeit: dict | None = None
        self.verification: dict | None = None

    def to_json_dict(self) -> dict:
        return {
            "params": {
                "alpha": self.params.alpha,
                "beta": self.params.beta,
                "rho": self.params.rho,
                "rounds": self.params.rounds,
                "seed": self.params.seed,
                **self.labels,
            },
            "rounds": self.rounds,
            "x_inf": list(self.x_inf) if self.x_inf else None,
            "forfeit": self.forfeit,
            "verification": self.verification,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def play_game(params: GameParams, curve: Curve, spec: FlowSpec, player_a,
              player_b, field: NumberField,
              base_g: GroupElement | None = None) -> Transcript:
    """Run the full game; deterministic given params.seed and the backend.

    Both players see the same context; an illegal move ends the game with a
    forfeit record instead of an exception.
    """
    ctx = GameContext(field, curve, spec, params,
                      base_g if base_g is not None else GroupElement.identity(field))
    seq = np.random.SeedSequence(params.seed)
    sa, sb = seq.spawn(2)
    rng_a = np.random.default_rng(sa)
    rng_b = np.random.default_rng(sb)
    player_a.reset(ctx)
    player_b.reset(ctx)

    transcript = Transcript(params, {
        "curve": curve.label,
        "weights": [str(w) for w in spec.weights],
        "flow": spec.kind,
        "player_a": type(player_a).__name__,
        "player_b": type(player_b).__name__,
    })

    parent: Interval | None = None
    last_b: Interval | None = None
    for n in range(params.rounds):
        r_a = params.rho * (params.alpha * params.beta) ** n
        center_a = player_a.choose(ctx, n, last_b, r_a, rng_a)
        a_int = Interval(float(center_a), r_a)
        if last_b is not None and not last_b.contains_interval(a_int):
            transcript.forfeit = {"player": "A", "round": n,
                                  "interval": [a_int.center, a_int.radius]}
            break
        r_b = params.alpha * r_a
        center_b, info = player_b.choose(ctx, n, a_int, r_b, rng_b)
        b_int = Interval(float(center_b), r_b)
        record = {
            "n": n,
            "A": [a_int.center, a_int.radius],
            "B": [b_int.center, b_int.radius],
            "t_n": schedule_time(params, n, spec).mid(),
            **info,
        }
        transcript.rounds.append(record)
        if not a_int.contains_interval(b_int):
            transcript.forfeit = {"player": "B", "round": n,
                                  "interval": [b_int.center, b_int.radius]}
            break
        parent, last_b = a_int, b_int

    if last_b is not None:
        transcript.x_inf = (last_b.center, last_b.radius)
    return transcript


def check_transcript_legality(transcript: Transcript, params: GameParams) -> list[str]:
    """Radius laws and nesting for every recorded round; empty list when legal."""
    problems = []
    prev_b = None
    for rec in transcript.rounds:
        n = rec["n"]
        a = Interval(*rec["A"])
        b = Interval(*rec["B"])
        r_a = params.rho * (params.alpha * params.beta) ** n
        if abs(a.radius - r_a) > 1e-12 * max(r_a, 1e-300):
            problems.append(f"round {n}: A radius {a.radius} != {r_a}")
        if abs(b.radius - params.alpha * a.radius) > 1e-12 * max(r_a, 1e-300):
            problems.append(f"round {n}: B radius {b.radius} != alpha * A radius")
        if prev_b is not None and not prev_b.contains_interval(a):
            problems.append(f"round {n}: A not inside previous B")
        if not a.contains_interval(b):
            problems.append(f"round {n}: B not inside A")
        prev_b = b
    return problems
