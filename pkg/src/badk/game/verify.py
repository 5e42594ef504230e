"""End-to-end check of a finished game: is the limit point badly approximable?

The transcript only pins x_inf to the final interval, so every verification
quantity inherits that input radius; reports carry it explicitly and the
trajectory/bad-constant numbers are evaluated at the interval's center.
"""

from __future__ import annotations

from ..diophantine import bad_constant_estimate, dani_check
from ..latticeflow import FlowSpec, flow_element, systole, unipotent
from ..numberfield import NumberField
from .curves import Curve
from .engine import Transcript


def verify_outcome(transcript: Transcript, field: NumberField, curve: Curve,
                   spec: FlowSpec, q_bound: float = 20.0, t_max: float = 12.0,
                   step: float = 0.25, coeff_box: int = 4,
                   floor_threshold: float = 1e-4) -> dict:
    """Attach a BadReport for phi(x_inf) to the transcript and return it.

    Equal-weight games go through the Dani correspondence check; weighted
    games report the systole floor under their own flow (the correspondence
    as implemented is stated for equal weights).
    """
    if transcript.x_inf is None:
        raise ValueError("transcript has no final interval")
    x_hat, x_rad = transcript.x_inf
    point = curve.values_at(field, x_hat)

    bad = bad_constant_estimate(field, point, q_bound)
    if spec.kind == "equal":
        dani = dani_check(field, point, spec, t_max, step, coeff_box, floor_threshold)
        floor = dani.trajectory_floor
        extra = {"bounded_proxy": dani.bounded_proxy, "bridge": dani.bridge}
    else:
        u = unipotent(field, point)
        floor = None
        t = 0.0
        while t <= t_max + 1e-12:
            res = systole(field, u.compose(flow_element(field, spec, t)), coeff_box)
            if floor is None or res.value.mid() < floor.mid():
                floor = res.value
            t += step
        extra = {"bounded_proxy": bool(floor.mid() >= floor_threshold),
                 "bridge": None}

    report = {
        "x_inf": [x_hat, x_rad],
        "input_radius_caveat": x_rad,
        "c_estimate": bad.c_estimate.mid(),
        "c_estimate_radius": bad.c_estimate.rad(),
        "best_q": list(bad.best_witness.q.coeffs),
        "best_p": list(bad.best_witness.p.coeffs),
        "q_bound": q_bound,
        "trajectory_floor": floor.mid(),
        "trajectory_floor_radius": floor.rad(),
        "t_max": t_max,
        "floor_threshold": floor_threshold,
        **extra,
    }
    transcript.verification = report
    return report
