"""K-badly-approximable quality, bad-constant search, Dani correspondence.

A vector x in K_S is approximated by ratios of p, q in O_K through the
quantity  max_sigma |sigma(p) + x^sigma sigma(q)| * max_sigma |sigma(q)|.
Note the convention: plain absolute values at every place here (no squaring
at complex places), while the lattice height does square them; both follow
their own definition and are not harmonized.

The trajectory side runs the flow on tau(O_K^2) * u(x) and reports a systole
floor over a finite time grid; boundedness proper is undecidable, so reports
say "bounded proxy" and never more.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import _kernels
from .balls import Ball, abs_of
from .latticeflow import FlowSpec, flow_element, point_ks, systole, unipotent
from .numberfield import AlgebraicInteger, NumberField


@dataclass(frozen=True)
class ApproximationWitness:
    p: AlgebraicInteger
    q: AlgebraicInteger
    quality: Ball
    sup_error: Ball
    sup_denominator: Ball


@dataclass
class BadReport:
    x_mid: list                     # per-place midpoints (complex as [re, im])
    q_bound: float | None = None
    best_witness: ApproximationWitness | None = None
    c_estimate: Ball | None = None
    trajectory_floor: Ball | None = None
    t_max: float | None = None
    bounded_proxy: bool | None = None
    floor_threshold: float | None = None
    bridge: dict | None = None
    extras: dict = dc_field(default_factory=dict)

    def to_json_dict(self) -> dict:
        def num(b):
            return None if b is None else b.mid()

        def rad(b):
            return None if b is None else b.rad()

        w = self.best_witness
        return {
            "x": self.x_mid,
            "q_bound": self.q_bound,
            "c_estimate": num(self.c_estimate),
            "c_estimate_radius": rad(self.c_estimate),
            "best_q": list(w.q.coeffs) if w else None,
            "best_p": list(w.p.coeffs) if w else None,
            "trajectory_floor": num(self.trajectory_floor),
            "trajectory_floor_radius": rad(self.trajectory_floor),
            "t_max": self.t_max,
            "bounded_proxy": self.bounded_proxy,
        }


def _x_mids(field, x):
    out = []
    for p, v in zip(field.places, x):
        if p.kind == "complex":
            z = v.mid()
            out.append([z.real, z.imag])
        else:
            out.append(v.mid())
    return out


def approx_quality(field: NumberField, x, p: AlgebraicInteger,
                   q: AlgebraicInteger) -> ApproximationWitness:
    """Witness for one (p, q): sup error, sup denominator and their product."""
    if q.is_zero():
        raise ValueError("q must be nonzero")
    x = point_ks(field, x)
    err = Ball.of(0)
    den = Ball.of(0)
    for k, place in enumerate(field.places):
        sp = field.embed(p, place)
        sq = field.embed(q, place)
        err = err.max_with(abs_of(sp + x[k] * sq))
        den = den.max_with(abs_of(sq))
    return ApproximationWitness(p, q, err * den, err, den)


def bad_constant_estimate(field: NumberField, x, q_sup_bound: float,
                          coeff_box: int | None = None,
                          exhaustive_p: bool = False,
                          p_box: int | None = None) -> BadReport:
    """Minimize quality over q != 0 with max_sigma |sigma(q)| <= q_sup_bound.

    q runs over a coefficient box that provably covers the sup-norm ball
    (via the inverse embedding bound) unless a smaller box is forced.  For
    each q the candidate p comes from rounding -x^sigma sigma(q) back
    through the inverse Minkowski map plus a +-1 coefficient neighborhood;
    ``exhaustive_p`` replaces the rounding by a full box scan (validation
    aid, slow).
    """
    if q_sup_bound < 1:
        raise ValueError("q_sup_bound must be >= 1 (q = 1 always qualifies)")
    x = point_ks(field, x)
    auto_box = int(np.ceil(field.coeff_bound_factor() * q_sup_bound * (1 + 1e-12)))
    box = coeff_box if coeff_box is not None else auto_box
    powers = field.place_powers_mid()
    xv = np.array([complex(v.mid()) for v in x], dtype=np.complex128)
    minv = np.linalg.inv(field.minkowski_matrix())
    cplx = np.array([1 if p.kind == "complex" else 0 for p in field.places], dtype=np.int64)

    if exhaustive_p:
        best = _exhaustive_scan(field, x, powers, xv, box, q_sup_bound, p_box or box)
    else:
        offsets = _kernels.neighborhood_offsets(field.d, 1)
        quality, qidx, pc = _kernels.badc_scan(powers, xv, minv, offsets, box,
                                               float(q_sup_bound), cplx)
        if qidx < 0:
            raise ValueError("no admissible q in range")
        q = field.element(_kernels.decode_coeffs(qidx, box, field.d))
        best = (quality, q, field.element(pc.tolist()))

    _, q, p = best
    witness = approx_quality(field, x, p, q)
    report = BadReport(x_mid=_x_mids(field, x), q_bound=float(q_sup_bound),
                       best_witness=witness, c_estimate=witness.quality)
    report.extras["coeff_box"] = box
    report.extras["box_covers_bound"] = box >= auto_box
    return report


def _exhaustive_scan(field, x, powers, xv, qbox, q_sup_bound, pbox):
    best = None
    total_q = _kernels.combo_count(qbox, field.d)
    total_p = _kernels.combo_count(pbox, field.d)
    for qi in range(total_q):
        qc = _kernels.decode_coeffs(qi, qbox, field.d)
        if all(c == 0 for c in qc):
            continue
        sq = np.array([sum(c * powers[k, j] for j, c in enumerate(qc))
                       for k in range(len(field.places))])
        qn = np.abs(sq).max()
        if qn > q_sup_bound * (1 + 1e-12):
            continue
        for pi in range(total_p):
            pc = _kernels.decode_coeffs(pi, pbox, field.d)
            sp = np.array([sum(c * powers[k, j] for j, c in enumerate(pc))
                           for k in range(len(field.places))])
            err = np.abs(sp + xv * sq).max()
            quality = err * qn
            if best is None or quality < best[0]:
                best = (quality, field.element(qc), field.element(pc))
    if best is None:
        raise ValueError("no admissible q in range")
    return best


def dani_time(c: float, q: AlgebraicInteger, field: NumberField) -> Ball:
    """The correspondence proof's witness time -1/2 log c + log max |sigma(q)|."""
    if not c > 0:
        raise ValueError("c must be positive")
    if q.is_zero():
        raise ValueError("q must be nonzero")
    qn = Ball.of(0)
    for place in field.places:
        qn = qn.max_with(abs_of(field.embed(q, place)))
    return qn.log() - Ball.of(0.5) * Ball.of(c).log()


def dani_check(field: NumberField, x, spec: FlowSpec, t_max: float, step: float,
               coeff_box: int, floor_threshold: float) -> BadReport:
    """Systole floor of tau(O_K^2) u(x) g_t over a finite grid.

    Grid steps must stay bounded (<= 0.25 recommended); flags bounded_proxy
    iff the floor stays above floor_threshold on the grid.  Also cross-checks
    the correspondence bridge: the minimum-sup-norm vector at its worst grid
    time, when its first O_K coordinate is nonzero, yields an approximation
    witness of quality below that sup norm squared.
    """
    if spec.kind != "equal":
        raise ValueError("the correspondence as implemented uses the equal-weight flow")
    if step <= 0 or t_max < 0:
        raise ValueError("need step > 0 and t_max >= 0")
    x = point_ks(field, x)
    u = unipotent(field, x)
    ts = [k * step for k in range(int(np.floor(t_max / step)) + 1)]
    if ts[-1] < t_max:
        ts.append(t_max)
    floor = None
    sup_worst = None
    for t in ts:
        res = systole(field, u.compose(flow_element(field, spec, t)), coeff_box)
        if floor is None or res.value.mid() < floor[1].value.mid():
            floor = (t, res)
        if sup_worst is None or res.sup_min.mid() < sup_worst[1].sup_min.mid():
            sup_worst = (t, res)

    bridge = _bridge_check(field, x, sup_worst)
    floor_ball = floor[1].value
    report = BadReport(
        x_mid=_x_mids(field, x),
        trajectory_floor=floor_ball,
        t_max=float(t_max),
        bounded_proxy=bool(floor_ball.mid() >= floor_threshold),
        floor_threshold=float(floor_threshold),
        bridge=bridge,
    )
    report.extras["floor_time"] = floor[0]
    report.extras["grid_step"] = step
    report.extras["coeff_box"] = coeff_box
    report.extras["certified_complete"] = all(
        r.certified_complete for r in (floor[1], sup_worst[1]))
    return report


def _bridge_check(field, x, sup_worst):
    """Small sup norm at time t forces a good witness: quality < (c')^2."""
    t, res = sup_worst
    v = res.sup_vector
    q, p = v.a, v.b  # module rows are tau(q, p) in the correspondence
    if q.is_zero():
        return {"checked": False, "reason": "q = 0 at the sup-norm minimizer"}
    c_prime = res.sup_min
    w = approx_quality(field, x, p, q)
    bound = (c_prime * c_prime) * (1 + 1e-9)
    holds = bool(w.quality.mid() <= bound.mid() * (1 + 1e-12))
    return {
        "checked": True,
        "t": t,
        "c_prime": c_prime.mid(),
        "quality": w.quality.mid(),
        "holds": holds,
        "q": list(q.coeffs),
        "p": list(p.coeffs),
    }
