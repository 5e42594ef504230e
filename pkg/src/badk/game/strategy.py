"""Player B: the constructive winning strategy, plus the heedless control.

Round n of the strategy inspects the module tau(O_K^2) g Phi(x_n) g_t_n for
vectors of height < 1, tracks the K-span that Lemma-style uniqueness
guarantees is alone down there, and steers the next interval so that the
tracked vector's expanding coordinate is bounded below at the places served
this round.  Places voting against the majority wait for a later repetition
of the vote; a C^1 curve first gets preprocessing rounds that move the
playing field away from critical points and pin certified derivative
bounds.

Threshold decisions are never trusted to floats: a height compares against
1 either by an exact integer/fraction rule (flow scales are rational powers
of the round scale, so vectors whose expanding coordinate vanishes
identically reduce to norm inequalities) or by a certified enclosure.  The
measure-zero leftover, an enclosure still straddling 1, is classified as
not-short and flagged in the transcript rather than silently guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from ..balls import Ball, CBall
from ..latticeflow import (GroupElement, ModuleVector, flow_element, height,
                           kspan_equal, module_vector, shortest_vectors,
                           sup_of, unipotent)
from ..numberfield import AlgebraicInteger
from ..precision import PrecisionError
from .engine import GameContext, Interval, schedule_scale, schedule_time

SHORT_BOUND = 1.0


# ---------------------------------------------------------------------------
# spec'd primitive operations
# ---------------------------------------------------------------------------


def expanding_ratio(v: ModuleVector, place_idx: int, slope_or_delta, u,
                    scale=None, delta_mode: bool = False) -> Ball:
    """|s*u*v1 + v2| / ||v^sigma|| at normalized offset u in [-1, 1].

    ``slope_or_delta`` is the linear slope a_sigma (u multiplies it), or with
    ``delta_mode`` the finite difference phi(x_n + x) - phi(x_n), in which
    case the normalization divides by ``scale`` = rho (alpha beta)^n.
    """
    v1, v2 = v.embedded[place_idx]
    norm = sup_of(v1, v2)
    if not norm.lo > 0:
        raise ValueError("expanding_ratio needs a certified nonzero component")
    if delta_mode:
        if scale is None:
            raise ValueError("delta_mode needs the round scale")
        factor = Ball.of(slope_or_delta) if not isinstance(slope_or_delta, Ball) else slope_or_delta
        factor = factor / Ball.of(scale)
    else:
        s = Ball.of(slope_or_delta) if not isinstance(slope_or_delta, Ball) else slope_or_delta
        ub = u if isinstance(u, Ball) else Ball.of(u)
        factor = s * ub
    num = v1 * factor + v2
    return num.abs() / norm


def vote_of_place(v: ModuleVector, place_idx: int) -> str:
    """'R' when Re(v2/v1) >= 0, 'L' otherwise, 'abstain' when v1 encloses 0.

    An enclosed-zero first coordinate means the vector already points into
    the expanding direction at this place; no steering needed.  The sign
    itself is read at the midpoint: near-zero ratios give the same floor on
    either side, so misreading an exact zero is harmless for the guarantee.
    """
    v1, v2 = v.embedded[place_idx]
    if v1.contains_zero():
        return "abstain"
    ratio = v2 / v1
    re = ratio.re if isinstance(ratio, CBall) else ratio
    return "R" if re.mid() >= 0 else "L"


def choose_side(field, v: ModuleVector, places) -> tuple:
    """Majority side over the given places (complex votes count double).

    Returns (side, votes dict); ties break toward 'R'; with every place
    abstaining the side is 'center'.
    """
    votes = {}
    tally = {"R": 0, "L": 0}
    for k in places:
        vote = vote_of_place(v, k)
        votes[k] = vote
        if vote != "abstain":
            tally[vote] += field.places[k].exponent
    if tally["R"] == tally["L"] == 0:
        return "center", votes
    side = "R" if tally["R"] >= tally["L"] else "L"
    return side, votes


# ---------------------------------------------------------------------------
# exact height-threshold rules
# ---------------------------------------------------------------------------


def _norm_power_lt(n_abs: int, scale: Fraction, u_exp: Fraction, inverse: bool) -> bool:
    """Exact test of n_abs * scale^(-+u_exp) < 1 for positive rationals."""
    p, q = u_exp.numerator, u_exp.denominator
    if inverse:  # n_abs * scale^(-u) < 1  <=>  n_abs^q < scale^p
        return Fraction(n_abs) ** q < scale ** p
    return Fraction(n_abs) ** q * scale ** p < 1


def exact_short_state(ctx: GameContext, a: AlgebraicInteger, b: AlgebraicInteger,
                      phis: tuple, scale: Fraction):
    """Exact H < 1 decision where the structure allows one, else None.

    phis are the per-place curve values at the round center as exact
    Fractions.  Handled exactly: a = 0 (pure expanding component), and the
    second coordinate vanishing identically at every place (pure contracting
    component); both reduce to |N| against a rational power of the scale.
    """
    field = ctx.field
    spec = ctx.spec
    r_max = spec.r_max
    # sum of r_sigma * e_sigma: the total contraction weight
    w = sum(Fraction(spec.weights[k]) * field.places[k].exponent
            for k in range(len(field.places)))
    u_exp = w / (2 * r_max)  # e^{t w} = scale^(-u_exp)
    if a.is_zero():
        # H = |N(b)| * e^{t w}
        n_abs = abs(field.field_norm(b))
        return _norm_power_lt(n_abs, scale, u_exp, inverse=True)
    second_zero = True
    for k in range(len(field.places)):
        num = phis[k].numerator
        den = phis[k].denominator
        coeffs = tuple(num * ca + den * cb for ca, cb in zip(a.coeffs, b.coeffs))
        if any(c != 0 for c in coeffs):
            second_zero = False
            break
    if second_zero:
        # H = |N(a)| * e^{-t w}
        n_abs = abs(field.field_norm(a))
        return _norm_power_lt(n_abs, scale, u_exp, inverse=False)
    return None


def certified_short(ctx: GameContext, v: ModuleVector, h: Ball, phis, scale,
                    ties: list) -> bool:
    """H(v) < 1 by exact rule or certified enclosure; straddles are
    classified not-short and appended to ``ties`` (transcript diagnostics)."""
    exact = exact_short_state(ctx, v.a, v.b, phis, scale)
    if exact is not None:
        return exact
    try:
        return h.certified_lt(SHORT_BOUND)
    except PrecisionError:
        ties.append({"a": list(v.a.coeffs), "b": list(v.b.coeffs),
                     "H": h.mid(), "H_radius": h.rad()})
        return False


# ---------------------------------------------------------------------------
# strategies
# ---------------------------------------------------------------------------


class HeedlessB:
    """Control strategy: always recenter (maximal distance to the boundary)."""

    def reset(self, ctx: GameContext) -> None:
        pass

    def choose(self, ctx: GameContext, n: int, parent: Interval, radius: float, rng):
        return parent.center, {"side": "center", "votes": {},
                               "short_vectors": [], "phase": "heedless"}


@dataclass
class _TrackState:
    phase: str = "monitor"          # "preprocess" | "monitor" | "tracking"
    tracked_a: AlgebraicInteger | None = None
    tracked_b: AlgebraicInteger | None = None
    tracked_h0: float = 0.0
    detect_round: int = -1
    served: set = dc_field(default_factory=set)
    vote_rounds: int = 0
    episode: int = 0
    deriv_bounds: dict = dc_field(default_factory=dict)  # place -> (m, M)
    epsilon: float = 0.0
    overrun: bool = False
    preprocess_rounds: int = 0


class PaperStrategyB:
    """Player B running the constructive strategy.

    ``coeff_box`` bounds the enumeration per round; ``max_vote_rounds`` is
    the permitted number of voting repetitions before the transcript flags
    an overrun (the uniform bound is asserted, not derived, so it stays a
    parameter); a new K-independent vector below ``replace_factor`` times
    the tracked height restarts the episode.
    """

    def __init__(self, coeff_box: int = 4, max_vote_rounds: int | None = None,
                 replace_factor: float = 0.5, preprocess_max_rounds: int = 64):
        self.coeff_box = coeff_box
        self.max_vote_rounds = max_vote_rounds
        self.replace_factor = replace_factor
        self.preprocess_max_rounds = preprocess_max_rounds
        self.state = _TrackState()

    # -- lifecycle ------------------------------------------------------

    def reset(self, ctx: GameContext) -> None:
        self.state = _TrackState()
        self.max_votes = (self.max_vote_rounds if self.max_vote_rounds is not None
                          else 2 * len(ctx.field.places))
        if ctx.spec.kind == "weighted":
            self.consulted = (ctx.spec.max_place(),)
        else:
            self.consulted = tuple(ctx.curve.active)
        if self._needs_preprocessing(ctx):
            self.state.phase = "preprocess"

    def _needs_preprocessing(self, ctx: GameContext) -> bool:
        return any(ctx.curve.critical[k] for k in self.consulted)

    # -- move -----------------------------------------------------------

    def choose(self, ctx: GameContext, n: int, parent: Interval, radius: float, rng):
        if self.state.phase == "preprocess":
            return self._preprocess_move(ctx, n, parent, radius)
        return self._strategy_move(ctx, n, parent, radius)

    # -- preprocessing ----------------------------------------------------

    def _preprocess_move(self, ctx: GameContext, n: int, parent: Interval,
                         radius: float):
        st = self.state
        st.preprocess_rounds += 1
        crits = sorted({c for k in self.consulted for c in ctx.curve.critical[k]})
        offsets = {"R": parent.radius - radius, "C": 0.0,
                   "L": -(parent.radius - radius)}
        best = None
        for side in ("R", "C", "L"):
            c = parent.center + offsets[side]
            cand = Interval(c, radius)
            dist = min((_interval_distance(cand, x) for x in crits), default=1.0)
            if best is None or dist > best[0]:
                best = (dist, side, cand)
        _, side, cand = best
        info = {"phase": "preprocess", "side": side, "votes": {},
                "short_vectors": [], "crit_distance": best[0]}
        if best[0] > 0 and self._try_finish_preprocess(ctx, cand):
            info["derivative_bounds"] = {
                str(k): [float(m), float(mm)]
                for k, (m, mm) in self.state.deriv_bounds.items()}
            info["epsilon"] = self.state.epsilon
            self.state.phase = "monitor"
        elif st.preprocess_rounds > self.preprocess_max_rounds:
            raise RuntimeError(
                "preprocessing failed: critical points dense at the reachable "
                "interval resolution (curve violates the theorem hypothesis)")
        return cand.center, info

    def _try_finish_preprocess(self, ctx: GameContext, interval: Interval) -> bool:
        bounds = {}
        alpha = ctx.params.alpha
        for k in self.consulted:
            rng_b = ctx.curve.derivative_range(k, interval.left, interval.right)
            if rng_b.contains_zero():
                return False
            bounds[k] = (rng_b.lo, rng_b.hi)
        self.state.deriv_bounds = bounds
        self.state.epsilon = min(
            min(abs(float(m)), abs(float(mm))) for m, mm in bounds.values()
        ) * (1 - 2 * alpha)
        return True

    # -- main strategy ----------------------------------------------------

    def _strategy_move(self, ctx: GameContext, n: int, parent: Interval,
                       radius: float):
        st = self.state
        field = ctx.field
        scale = schedule_scale(ctx.params, n)
        t_n = schedule_time(ctx.params, n, ctx.spec)
        x_n = parent.center
        phis_exact = ctx.curve.values_fraction_at(Fraction(x_n))
        g_round = ctx.base_g.compose(
            unipotent(field, ctx.curve.values_at(field, x_n))
        ).compose(flow_element(field, ctx.spec, t_n))

        ties: list = []
        shorts = self._detect_shorts(ctx, g_round, phis_exact, scale, ties)
        info = {
            "phase": st.phase,
            "short_vectors": [
                {"a": list(v.a.coeffs), "b": list(v.b.coeffs), "H": h.mid()}
                for v, h in shorts[:16]
            ],
            "votes": {},
            "side": "center",
        }
        if ties:
            info["threshold_ties"] = ties

        self._update_tracking(ctx, g_round, shorts, phis_exact, scale, ties, info, n)
        info["phase"] = st.phase

        if st.phase != "tracking":
            return parent.center, info

        tracked = module_vector(field, st.tracked_a, st.tracked_b, g_round)
        pending = [k for k in self.consulted if k not in st.served]
        auto = [k for k in pending if vote_of_place(tracked, k) == "abstain"]
        for k in auto:
            st.served.add(k)
        pending = [k for k in pending if k not in auto]
        if not pending:
            info["votes"] = {str(k): "abstain" for k in auto}
            return parent.center, info

        side, votes = choose_side(field, tracked, pending)
        votes.update({k: "abstain" for k in auto})
        st.vote_rounds += 1
        if st.vote_rounds > self.max_votes:
            st.overrun = True
        for k, vote in votes.items():
            if vote == side:
                st.served.add(k)
        info["votes"] = {str(k): v for k, v in votes.items()}
        info["side"] = side
        info["vote_round"] = st.vote_rounds
        info["served"] = sorted(st.served)
        info["ratio_floors"] = self._ratio_floors(ctx)
        if st.overrun:
            info["vote_overrun"] = True
        if side == "R":
            return parent.center + (parent.radius - radius), info
        if side == "L":
            return parent.center - (parent.radius - radius), info
        return parent.center, info

    def _ratio_floors(self, ctx: GameContext) -> dict:
        floors = {}
        one_minus = 1 - 2 * ctx.params.alpha
        for k in self.consulted:
            s = ctx.curve.slope(k)
            if s is not None:
                floors[str(k)] = abs(float(s)) * one_minus
            elif k in self.state.deriv_bounds:
                m, mm = self.state.deriv_bounds[k]
                floors[str(k)] = min(abs(float(m)), abs(float(mm))) * one_minus
        return floors

    def _detect_shorts(self, ctx: GameContext, g_round: GroupElement, phis_exact,
                       scale, ties):
        """Certified vectors with H < 1, sorted by (height, integral part)."""
        candidates, raw_ties = shortest_vectors(
            ctx.field, g_round, SHORT_BOUND, self.coeff_box, return_ties=True)
        out = list(candidates)
        for v, h in raw_ties:
            if certified_short(ctx, v, h, phis_exact, scale, ties):
                out.append((v, h))
        out.sort(key=lambda vh: vh[0].sort_key(vh[1].mid()))
        return out

    def _update_tracking(self, ctx, g_round, shorts, phis_exact, scale, ties,
                         info, n):
        st = self.state
        field = ctx.field
        if st.phase == "tracking":
            tracked = module_vector(field, st.tracked_a, st.tracked_b, g_round)
            h_tr = height(field, tracked)
            still = certified_short(ctx, tracked, h_tr, phis_exact, scale, ties)
            if not still:
                info["episode_end"] = {"round": n, "H": h_tr.mid()}
                st.phase = "monitor"
                st.tracked_a = st.tracked_b = None
                st.served = set()
                st.vote_rounds = 0
            else:
                info["tracked"] = {"a": list(st.tracked_a.coeffs),
                                   "b": list(st.tracked_b.coeffs),
                                   "H": h_tr.mid()}
                if shorts:
                    v_new, h_new = shorts[0]
                    if (h_new.mid() < self.replace_factor * h_tr.mid()
                            and not kspan_equal(field, v_new, tracked)):
                        self._start_episode(ctx, v_new, h_new, n, info,
                                            replaced=True)
        if st.phase == "monitor" and shorts:
            self._start_episode(ctx, shorts[0][0], shorts[0][1], n, info,
                                replaced=False)

    def _start_episode(self, ctx, v, h, n, info, replaced: bool):
        st = self.state
        st.phase = "tracking"
        st.tracked_a, st.tracked_b = v.a, v.b
        st.tracked_h0 = h.mid()
        st.detect_round = n
        st.served = set()
        st.vote_rounds = 0
        st.episode += 1
        info["episode_start"] = {
            "round": n, "episode": st.episode, "replaced": replaced,
            "a": list(v.a.coeffs), "b": list(v.b.coeffs), "H": h.mid(),
        }
        info["tracked"] = {"a": list(v.a.coeffs), "b": list(v.b.coeffs),
                           "H": h.mid()}


def _interval_distance(interval: Interval, x: float) -> float:
    if interval.left <= x <= interval.right:
        return 0.0
    return min(abs(x - interval.left), abs(x - interval.right))
