"""The no-win configuration: a cubic field with two flat curve components.

With d = r = 3 and a line parallel to one coordinate axis (slopes 0 at two
of the three real places), the vector tau(1, 0) has two contracted
eigendirections that no move of Player B can repair: its height decays like
e^{-2t} * max(e^{-t}, e^{t} |a x|) whatever the game does.  The demo
tabulates that decay on a grid and exhausts a small game tree to show the
best achievable systole still sinks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..latticeflow import (FlowSpec, GroupElement, flow_element, height,
                           module_vector, unipotent)
from ..numberfield import NumberField
from .adversaries import _float_systole
from .curves import linear_curve
from .engine import GameContext, GameParams, Interval, schedule_time


def doomed_height_closed_form(x: float, t: float, slope: float = 1.0) -> float:
    """H(tau(1,0) Phi(x) g_t) in the flat-cubic configuration."""
    return math.exp(-2 * t) * max(math.exp(-t), math.exp(t) * abs(slope * x))


@dataclass
class CounterexampleReport:
    slope: float
    t_max: float
    rows: list            # (x, H computed, H closed form)
    max_h_at_tmax: float
    max_closed_form_gap: float
    tree: dict | None = None

    def all_below(self, threshold: float) -> bool:
        return self.max_h_at_tmax < threshold


def decay_table(field: NumberField, t_max: float = 8.0, x_step: float = 0.01,
                slope: float = 1.0) -> CounterexampleReport:
    """Certified H(tau(1,0) Phi(x) g_t_max) over the x grid, against the
    closed form."""
    if field.r != 3 or field.s != 0:
        raise ValueError("the counterexample wants a totally real cubic field")
    spec = FlowSpec.equal(field)
    curve = linear_curve(field, [0, 0, slope], label="flat-cubic")
    gt = flow_element(field, spec, t_max)
    one, zero = field.one(), field.zero()
    rows = []
    worst_h = 0.0
    worst_gap = 0.0
    n_steps = int(round(1.0 / x_step))
    for i in range(n_steps + 1):
        x = i * x_step
        g = unipotent(field, curve.values_at(field, x)).compose(gt)
        v = module_vector(field, one, zero, g)
        h = height(field, v).mid()
        cf = doomed_height_closed_form(x, t_max, slope)
        rows.append((x, h, cf))
        worst_h = max(worst_h, h)
        worst_gap = max(worst_gap, abs(h - cf))
    return CounterexampleReport(slope, t_max, rows, worst_h, worst_gap)


def game_tree_minimax(field: NumberField, depth: int = 4, alpha: float = 0.25,
                      beta: float = 0.5, rho: float = 1.0, coeff_box: int = 2,
                      slope: float = 1.0, initial_center: float = 0.5) -> dict:
    """Exhaustive minimax over 3 candidate moves per player per round.

    Player B maximizes, Player A minimizes.  Reports the best achievable
    systole at the final round and the max-over-B min-over-time systole,
    both of which sink below the round-0 value in this configuration.
    """
    spec = FlowSpec.equal(field)
    curve = linear_curve(field, [0, 0, slope], label="flat-cubic")
    params = GameParams(alpha=alpha, beta=beta, rho=rho, rounds=max(depth, 1), seed=0)
    ctx = GameContext(field, curve, spec, params, GroupElement.identity(field))
    times = [schedule_time(params, n, spec).mid() for n in range(depth + 1)]
    cache: dict = {}

    def systole_at(x: float, n: int) -> float:
        key = (x, n)
        if key not in cache:
            cache[key] = _float_systole(ctx, x, times[n], coeff_box)
        return cache[key]

    def solve(objective: str) -> float:
        # objective "final": systole at round `depth`; "min_time": min over rounds

        def value_a(interval: Interval, n: int, running: float) -> float:
            if n == depth:
                s = systole_at(interval.center, n)
                return s if objective == "final" else min(running, s)
            r_a = rho * (alpha * beta) ** n
            return min(value_b(Interval(c, r_a), n, running)
                       for c in _candidates(interval, r_a))

        def value_b(a_int: Interval, n: int, running: float) -> float:
            running = min(running, systole_at(a_int.center, n))
            r_b = alpha * a_int.radius
            return max(value_a(Interval(c, r_b), n + 1, running)
                       for c in _candidates(a_int, r_b))

        return value_a(Interval(initial_center, rho), 0, math.inf)

    s0 = systole_at(initial_center, 0)
    final = solve("final")
    min_over_time = solve("min_time")
    return {
        "depth": depth,
        "systole_round0": s0,
        "best_final_systole": final,
        "best_min_over_time": min_over_time,
        "decayed": final < s0,
    }


def _candidates(parent: Interval, r_child: float):
    slack = parent.radius - r_child
    return (parent.center - slack, parent.center, parent.center + slack)


def counterexample_demo(field: NumberField, t_max: float = 8.0,
                        x_step: float = 0.01, tree_depth: int = 4,
                        coeff_box: int = 2) -> CounterexampleReport:
    report = decay_table(field, t_max, x_step)
    report.tree = game_tree_minimax(field, depth=tree_depth, coeff_box=coeff_box)
    return report
