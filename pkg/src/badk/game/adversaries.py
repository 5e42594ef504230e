"""Programmatic Player A opponents: random, center-hugging, systole-seeking."""

from __future__ import annotations

import numpy as np

from .. import _kernels
from .engine import GameContext, Interval, schedule_time


def round_float_matrices(ctx: GameContext, x: float, t: float) -> np.ndarray:
    """Midpoint matrices of base * Phi(x) * g_t per place, for kernel scans."""
    field = ctx.field
    base = ctx.base_g.to_float_mats()
    out = np.empty_like(base)
    for k in range(len(field.places)):
        phi = float(sum(float(c) * x**i for i, c in enumerate(ctx.curve.coeffs[k])))
        r = float(ctx.spec.weights[k])
        em, ep = np.exp(-r * t), np.exp(r * t)
        # [[1, phi], [0, 1]] @ diag(em, ep)
        u = np.array([[em, phi * ep], [0.0, ep]], dtype=np.complex128)
        out[k] = base[k] @ u
    return out


def _float_systole(ctx: GameContext, x: float, t: float, box: int) -> float:
    powers = ctx.field.place_powers_mid()
    g = round_float_matrices(ctx, x, t)
    eexp = np.array([p.exponent for p in ctx.field.places], dtype=np.int64)
    min_h, _, _, _, _ = _kernels.scan_heights(powers, g, eexp, box)
    return min_h


class RandomA:
    """Legal uniform-random centers; round 0 lands in the middle half of [0, 1]."""

    def reset(self, ctx: GameContext) -> None:
        pass

    def choose(self, ctx: GameContext, n: int, parent: Interval | None,
               radius: float, rng) -> float:
        if parent is None:
            return 0.25 + 0.5 * rng.random()
        slack = parent.radius - radius
        return parent.center + (2 * rng.random() - 1) * slack


class CenterHuggingA:
    """Keeps the center fixed; x_inf equals the initial center against a
    heedless opponent."""

    def __init__(self, initial: float = 0.5):
        self.initial = initial

    def reset(self, ctx: GameContext) -> None:
        pass

    def choose(self, ctx: GameContext, n: int, parent: Interval | None,
               radius: float, rng) -> float:
        return self.initial if parent is None else parent.center


class ShortVectorSeekerA:
    """Greedy adversary: picks the candidate center minimizing the systole of
    the module Player B is about to inspect this round (float filter only;
    the adversary needs no certificates)."""

    def __init__(self, coeff_box: int = 4, candidates: int = 9, initial: float = 0.5):
        self.coeff_box = coeff_box
        self.candidates = candidates
        self.initial = initial

    def reset(self, ctx: GameContext) -> None:
        pass

    def choose(self, ctx: GameContext, n: int, parent: Interval | None,
               radius: float, rng) -> float:
        t = schedule_time(ctx.params, n, ctx.spec).mid()
        if parent is None:
            centers = np.linspace(self.initial - 0.25, self.initial + 0.25,
                                  self.candidates)
        else:
            slack = parent.radius - radius
            centers = parent.center + slack * np.linspace(-1.0, 1.0, self.candidates)
        best = None
        for c in centers:
            s = _float_systole(ctx, float(c), t, self.coeff_box)
            if best is None or s < best[0]:
                best = (s, float(c))
        return best[1]
