"""Rank-2 O_K-module lattices in K_S^2: heights, flows and short vectors.

Vectors are rows tau(a, b) * g with (a, b) in O_K^2 and g in SL_2(K_S) acting
on the right, one 2x2 matrix per place.  The height is the product over
places of the sup norm of the per-place 2-vector, squared at complex places;
it is the depth-into-the-cusp proxy of the compactness criterion.

Enumeration over a coefficient box runs in float64 through the kernels
module; every candidate that matters is recomputed in interval arithmetic,
so reported heights and threshold decisions are certified.  The float filter
keeps any vector whose true height is below the bound as long as its
relative float error stays under the filter margin (1e-9; the kernels are
short dot products, comfortably within that at desk scale).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .balls import Ball, CBall, abs_of, sup_of
from .numberfield import AlgebraicInteger, NumberField
from .precision import PrecisionError

FILTER_MARGIN = 1e-9
MAX_CANDIDATES = 200_000


def _as_real_ball(v):
    if isinstance(v, Ball):
        return v
    if isinstance(v, CBall):
        if not (v.im.lo == v.im.hi == 0):
            raise ValueError("complex entry supplied for a real place")
        return v.re
    if isinstance(v, complex):
        if v.imag:
            raise ValueError("complex entry supplied for a real place")
        return Ball.of(v.real)
    return Ball.of(v)


# ---------------------------------------------------------------------------
# flows and group elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlowSpec:
    """Weights r_sigma of the diagonal flow diag(e^{-r t}, e^{r t}) per place.

    The equal-weight flow uses r_sigma = 1 at every place (the convention of
    the one-parameter flow g_t); the weighted flow requires nonnegative
    weights summing to 1.  Weights are exact Fractions so that flow scales
    stay exactly comparable where the schedule allows it.
    """

    weights: tuple
    kind: str  # "equal" | "weighted"

    @classmethod
    def equal(cls, field: NumberField) -> "FlowSpec":
        return cls((Fraction(1),) * len(field.places), "equal")

    @classmethod
    def weighted(cls, field: NumberField, weights) -> "FlowSpec":
        ws = tuple(Fraction(w) if not isinstance(w, Fraction) else w for w in weights)
        if len(ws) != len(field.places):
            raise ValueError(f"need {len(field.places)} weights, got {len(ws)}")
        if any(w < 0 for w in ws):
            raise ValueError("weights must be nonnegative")
        if sum(ws) != 1:
            raise ValueError(f"weights must sum to 1, got {sum(ws)}")
        return cls(ws, "weighted")

    @property
    def r_max(self) -> Fraction:
        return max(self.weights)

    def max_place(self) -> int:
        """Index of the place with maximal weight (first one on ties)."""
        return self.weights.index(self.r_max)


class GroupElement:
    """Element of SL_2(K_S): one 2x2 interval matrix per place.

    Entries are Balls at real places and CBalls at complex places, stored as
    ((e11, e12), (e21, e22)) per place.
    """

    def __init__(self, field: NumberField, mats):
        self.field = field
        if len(mats) != len(field.places):
            raise ValueError("one matrix per place required")
        norm = []
        for p, m in zip(field.places, mats):
            if p.kind == "complex":
                norm.append(tuple(tuple(CBall.of(v) for v in row) for row in m))
            else:
                norm.append(tuple(tuple(_as_real_ball(v) for v in row) for row in m))
        self.mats = tuple(norm)

    @classmethod
    def identity(cls, field: NumberField) -> "GroupElement":
        one, zero = Ball.of(1), Ball.of(0)
        return cls(field, [((one, zero), (zero, one)) for _ in field.places])

    @classmethod
    def from_floats(cls, field: NumberField, arrays) -> "GroupElement":
        """Per-place 2x2 float/complex matrices, taken as exact inputs."""
        return cls(field, [((m[0][0], m[0][1]), (m[1][0], m[1][1])) for m in arrays])

    def compose(self, other: "GroupElement") -> "GroupElement":
        """Matrix product per place: self then other (right action order)."""
        out = []
        for a, b in zip(self.mats, other.mats):
            out.append((
                (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
                (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
            ))
        return GroupElement(self.field, out)

    def det(self, k: int):
        m = self.mats[k]
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]

    def check_unimodular(self, tol: float = 1e-20) -> None:
        for k in range(len(self.mats)):
            dev = self.det(k) - 1
            bound = abs_of(dev)
            if bound.lo > tol:
                raise ValueError(f"determinant at place {k} differs from 1 by > {tol}")

    def inverse(self) -> "GroupElement":
        out = []
        for k, m in enumerate(self.mats):
            det = self.det(k)
            out.append(((m[1][1] / det, -m[0][1] / det), (-m[1][0] / det, m[0][0] / det)))
        return GroupElement(self.field, out)

    def to_float_mats(self) -> np.ndarray:
        g = np.empty((len(self.mats), 2, 2), dtype=np.complex128)
        for k, m in enumerate(self.mats):
            for i in range(2):
                for j in range(2):
                    v = m[i][j]
                    g[k, i, j] = v.mid() if isinstance(v, CBall) else complex(v.mid())
        return g

    def inv_colsum_norm(self) -> float:
        """max over places of the column-abs-sum norm of (g^sigma)^-1.

        Bounds |x (g^sigma)^-1|_inf <= norm * |x|_inf for row vectors x.
        """
        worst = 0.0
        for k, m in enumerate(self.mats):
            det = abs(complex(self.det(k).mid()))
            e = [[abs(complex(m[i][j].mid())) for j in range(2)] for i in range(2)]
            # inverse = adj / det; column sums of |adj| entries
            c0 = (e[1][1] + e[1][0]) / det
            c1 = (e[0][1] + e[0][0]) / det
            worst = max(worst, c0, c1)
        return worst * (1 + 1e-9)


def flow_element(field: NumberField, spec: FlowSpec, t) -> GroupElement:
    """Per-place diag(e^{-r_sigma t}, e^{r_sigma t})."""
    tb = t if isinstance(t, Ball) else Ball.of(t)
    zero = Ball.of(0)
    mats = []
    for k in range(len(field.places)):
        rt = tb * Fraction(spec.weights[k])
        mats.append((((-rt).exp(), zero), (zero, rt.exp())))
    return GroupElement(field, mats)


def unipotent(field: NumberField, values) -> GroupElement:
    """Per-place upper-triangular [[1, phi_sigma], [0, 1]]."""
    one, zero = Ball.of(1), Ball.of(0)
    mats = []
    for k, p in enumerate(field.places):
        v = values[k]
        if p.kind == "complex" and not isinstance(v, CBall):
            v = CBall.of(v)
        elif p.kind == "real" and not isinstance(v, Ball):
            v = Ball.of(v)
        mats.append(((one, v), (zero, one)))
    return GroupElement(field, mats)


def conjugated_unipotent(field: NumberField, spec: FlowSpec, t, deltas) -> GroupElement:
    """g_t^-1 Phi g_t: per-place [[1, delta_sigma * e^{2 r_sigma t}], [0, 1]]."""
    tb = t if isinstance(t, Ball) else Ball.of(t)
    vals = []
    for k in range(len(field.places)):
        scale = (tb * (2 * Fraction(spec.weights[k]))).exp()
        d = deltas[k]
        d = d if isinstance(d, (Ball, CBall)) else Ball.of(d)
        vals.append(d * scale)
    return unipotent(field, vals)


def point_ks(field: NumberField, values):
    """Per-place tuple of interval scalars from numbers/Balls/CBalls."""
    if len(values) != len(field.places):
        raise ValueError(f"need {len(field.places)} per-place values")
    out = []
    for p, v in zip(field.places, values):
        if p.kind == "complex":
            out.append(v if isinstance(v, CBall) else CBall.of(v))
        else:
            out.append(v if isinstance(v, Ball) else Ball.of(v))
    return tuple(out)


# ---------------------------------------------------------------------------
# module vectors and heights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModuleVector:
    """tau(a, b) * g: exact integral part plus certified embedded part."""

    a: AlgebraicInteger
    b: AlgebraicInteger
    embedded: tuple  # per place: (v1, v2) interval scalars

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def sort_key(self, h_mid: float):
        return (h_mid, self.a.coeffs, self.b.coeffs)


def module_vector(field: NumberField, a: AlgebraicInteger, b: AlgebraicInteger,
                  g: GroupElement) -> ModuleVector:
    emb = []
    for k, p in enumerate(field.places):
        sa = field.embed(a, p)
        sb = field.embed(b, p)
        m = g.mats[k]
        emb.append((sa * m[0][0] + sb * m[1][0], sa * m[0][1] + sb * m[1][1]))
    return ModuleVector(a, b, tuple(emb))


def height(field: NumberField, v: ModuleVector) -> Ball:
    """H(v) = prod over places of sup-norm ** e_sigma."""
    out = Ball.of(1)
    for p, (v1, v2) in zip(field.places, v.embedded):
        out = out * sup_of(v1, v2).powi(p.exponent)
    return out


def sup_norm(field: NumberField, v: ModuleVector) -> Ball:
    out = Ball.of(0)
    for v1, v2 in v.embedded:
        out = out.max_with(sup_of(v1, v2))
    return out


def scale_vector(field: NumberField, u: AlgebraicInteger, v: ModuleVector) -> ModuleVector:
    """u * v for u in O_K, acting diagonally through the embeddings."""
    emb = []
    for k, p in enumerate(field.places):
        su = field.embed(u, p)
        v1, v2 = v.embedded[k]
        emb.append((su * v1, su * v2))
    return ModuleVector(field.mul(u, v.a), field.mul(u, v.b), tuple(emb))


def kspan_equal(field: NumberField, v: ModuleVector, w: ModuleVector) -> bool:
    """Kv == Kw, decided exactly: a1*b2 - b1*a2 == 0 in O_K."""
    det = field.sub(field.mul(v.a, w.b), field.mul(v.b, w.a))
    return det.is_zero()


# ---------------------------------------------------------------------------
# enumeration: shortest vectors, systole, trajectories
# ---------------------------------------------------------------------------


def _kernel_arrays(field: NumberField, g: GroupElement):
    powers = field.place_powers_mid()
    gm = g.to_float_mats()
    eexp = np.array([p.exponent for p in field.places], dtype=np.int64)
    return powers, gm, eexp


def _vector_from_index(field: NumberField, g: GroupElement, idx: int, box: int) -> ModuleVector:
    coeffs = _kernels.decode_coeffs(idx, box, 2 * field.d)
    a = field.element(coeffs[: field.d])
    b = field.element(coeffs[field.d:])
    return module_vector(field, a, b, g)


def shortest_vectors(field: NumberField, g: GroupElement, bound: float, coeff_box: int,
                     return_ties: bool = False):
    """All nonzero tau(a,b)g with coefficients in the box and certified H < bound.

    Sorted by (height midpoint, lexicographic integral part).  With
    ``return_ties`` the vectors whose enclosure straddles the bound come back
    separately instead of raising PrecisionError.
    """
    if bound <= 0 or coeff_box < 1:
        raise ValueError("bound must be positive and coeff_box >= 1")
    powers, gm, eexp = _kernel_arrays(field, g)
    _, _, _, _, below = _kernels.scan_heights(powers, gm, eexp, coeff_box,
                                              bound=bound, margin=FILTER_MARGIN)
    if len(below) > MAX_CANDIDATES:
        raise ValueError(f"{len(below)} candidates below bound; shrink the box or bound")
    sortable = []
    ties = []
    for idx, _hf in below:
        v = _vector_from_index(field, g, idx, coeff_box)
        hb = height(field, v)
        try:
            is_short = hb.certified_lt(bound)
        except PrecisionError:
            if not return_ties:
                raise
            ties.append((v, hb))
            continue
        if is_short:
            sortable.append((v.sort_key(hb.mid()), v, hb))
    sortable.sort(key=lambda t: t[0])
    result = [(v, hb) for _, v, hb in sortable]
    if return_ties:
        return result, ties
    return result


@dataclass
class SystoleResult:
    value: Ball
    vector: ModuleVector
    sup_min: Ball
    sup_vector: ModuleVector
    coeff_box: int
    certified_complete: bool
    needed_box: int


def systole(field: NumberField, g: GroupElement, coeff_box: int) -> SystoleResult:
    """Minimum height over nonzero vectors in the box, with the achieving
    vector, the minimum sup norm (the compactness criterion's yardstick), and
    a certificate that the box was provably large enough when it was."""
    powers, gm, eexp = _kernel_arrays(field, g)
    min_h, min_hi, _min_s, min_si, _ = _kernels.scan_heights(powers, gm, eexp, coeff_box)
    if not np.isfinite(min_h):
        raise ValueError("no nonzero vector enumerated; coeff_box too small")
    # certify every candidate within the float margin of the minimum
    _, _, _, _, near = _kernels.scan_heights(powers, gm, eexp, coeff_box,
                                             bound=min_h * (1 + FILTER_MARGIN),
                                             margin=FILTER_MARGIN)
    best = None
    for idx, _hf in near:
        v = _vector_from_index(field, g, idx, coeff_box)
        hb = height(field, v)
        key = v.sort_key(hb.mid())
        if best is None or key < best[0]:
            best = (key, v, hb)
    _, v_best, h_best = best
    v_sup = _vector_from_index(field, g, min_si, coeff_box)
    s_best = sup_norm(field, v_sup)
    needed = enumeration_box_for(field, g, h_best.mid())
    return SystoleResult(h_best, v_best, s_best, v_sup, coeff_box,
                         coeff_box >= needed, needed)


def enumeration_box_for(field: NumberField, g: GroupElement, bound: float) -> int:
    """Coefficient box guaranteed to contain a height-minimizing vector among
    all v with H(v) < bound: unit renormalization balances such a v to
    per-place sup norms <= C * bound^(1/d), and the inverse embedding bounds
    the coordinates through the operator norms of g^-1."""
    if bound <= 0:
        return 1
    c = field.renormalization_constant()
    sup_bound = c * bound ** (1.0 / field.d)
    kappa = field.coeff_bound_factor()
    need = kappa * g.inv_colsum_norm() * sup_bound
    return max(1, int(np.ceil(need * (1 + 1e-9))))


def trajectory_profile(field: NumberField, g: GroupElement, spec: FlowSpec,
                       t_grid, coeff_box: int):
    """Systole of g * g(r)_t at each grid time; grid must be increasing."""
    ts = list(t_grid)
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t_grid must be strictly increasing")
    out = []
    for t in ts:
        res = systole(field, g.compose(flow_element(field, spec, t)), coeff_box)
        out.append((t, res))
    return out


# ---------------------------------------------------------------------------
# unit renormalization (height-to-norm bridge)
# ---------------------------------------------------------------------------


def unit_renormalize(field: NumberField, v: ModuleVector):
    """Unit xi with per-place norms of xi*v balanced to C^-1 H^(1/d) .. C H^(1/d).

    Searches exponent vectors around the least-squares projection onto the
    unit log lattice; raises with a diagnostic when no unit in the widened
    search box balances the vector.
    """
    h = height(field, v)
    if not h.lo > 0:
        raise ValueError("unit_renormalize requires a certified nonzero height")
    target = h.log().mid() / field.d
    sup_logs = np.array([float(np.log(sup_of(v1, v2).mid())) for v1, v2 in v.embedded])
    y = sup_logs - target
    rank = field.unit_rank()
    log_c = np.log(field.renormalization_constant())
    if rank == 0:
        if np.abs(y).max() <= log_c:
            return field.one(), v
        raise ValueError("vector cannot be balanced: trivial unit group")
    u_mat = field.unit_log_matrix()  # rank x places
    k0, *_ = np.linalg.lstsq(u_mat.T, -y, rcond=None)
    k0 = np.rint(k0).astype(np.int64)
    for radius in (3, 8):
        best = None
        rng = range(-radius, radius + 1)
        offsets = np.array(np.meshgrid(*[list(rng)] * rank)).reshape(rank, -1).T
        for off in offsets:
            k = k0 + off
            dev = float(np.abs(y + k @ u_mat).max())
            if best is None or dev < best[0]:
                best = (dev, k.copy())
        if best[0] <= log_c:
            break
    else:
        raise ValueError(
            f"unit search exhausted: best imbalance {best[0]:.4f} > log C = {log_c:.4f}")
    unit = field.one()
    for i, ki in enumerate(best[1]):
        unit = field.mul(unit, field.power(field.units[i], int(ki)))
    return unit, scale_vector(field, unit, v)


# ---------------------------------------------------------------------------
# restriction of scalars
# ---------------------------------------------------------------------------


def restriction_matrix(field: NumberField, g: GroupElement) -> np.ndarray:
    """Z-basis of the lattice in R^(2d): rows are the images of the 2d
    generators (xi^i, 0), (0, xi^i) under g, complex places split into
    real and imaginary coordinates."""
    d = field.d
    rows = []
    for which in (0, 1):
        for i in range(d):
            coeffs = [0] * d
            coeffs[i] = 1
            e = field.element(coeffs)
            a, b = (e, field.zero()) if which == 0 else (field.zero(), e)
            v = module_vector(field, a, b, g)
            row = []
            for p, (v1, v2) in zip(field.places, v.embedded):
                if p.kind == "real":
                    row.extend([v1.mid(), v2.mid()])
                else:
                    z1, z2 = v1.mid(), v2.mid()
                    row.extend([z1.real, z1.imag, z2.real, z2.imag])
            rows.append(row)
    return np.array(rows, dtype=np.float64)
