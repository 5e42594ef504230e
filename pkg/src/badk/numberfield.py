"""Exact arithmetic in K = Q(xi) with certified Galois embeddings.

Elements of O_K live on the power basis {1, xi, ..., xi^(d-1)} with integer
coordinates; all ring operations are exact.  Embeddings evaluate the
coordinate polynomial at certified root enclosures, so every embedded value
is a rigorous Ball/CBall.  The ring of integers is assumed to be Z[xi]
throughout (documented restriction; the bundled demo fields satisfy it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import sympy

from .balls import Ball, CBall, horner
from .precision import get_precision
from .roots import isolate_roots


class FieldError(ValueError):
    """Invalid field data: reducible polynomial, missing units, bad config."""


@dataclass(frozen=True)
class MinimalPolynomial:
    """Monic irreducible x^d + c_{d-1} x^{d-1} + ... + c_0, stored as (c_0..c_{d-1})."""

    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def full(self) -> list:
        return list(self.coeffs) + [1]


def make_minimal_polynomial(coeffs) -> MinimalPolynomial:
    coeffs = tuple(int(c) for c in coeffs)
    if len(coeffs) < 1:
        raise FieldError("minimal polynomial must have degree >= 1")
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.Add(*[c * x**i for i, c in enumerate(coeffs)], x ** len(coeffs)), x)
    if len(coeffs) > 1 and not poly.is_irreducible:
        raise FieldError(f"polynomial {list(coeffs)} + x^{len(coeffs)} is reducible over Q")
    return MinimalPolynomial(coeffs)


@dataclass(frozen=True)
class AlgebraicInteger:
    """Element of O_K as integer coordinates on the power basis."""

    coeffs: tuple

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)


@dataclass(frozen=True)
class Place:
    """One Galois embedding: a certified root enclosure plus its exponent."""

    kind: str  # "real" | "complex"
    root: object  # Ball for real, CBall (upper half-plane) for complex
    exponent: int  # 1 real, 2 complex
    index: int


class NumberField:
    """K = Q(xi) with places, units and the data the lattice layer consumes."""

    def __init__(self, minpoly: MinimalPolynomial, places, units, label, prec):
        self.minpoly = minpoly
        self.places = tuple(places)
        self.units = tuple(units)
        self.label = label
        self.places_precision = prec
        self.d = minpoly.degree
        self.r = sum(1 for p in self.places if p.kind == "real")
        self.s = sum(1 for p in self.places if p.kind == "complex")
        self._pow_table = _power_reduction_table(minpoly)
        self._embed_cache = {}
        self._renorm_constant = None
        self._unit_inverses = None

    # -- element constructors -----------------------------------------

    def element(self, coeffs) -> AlgebraicInteger:
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != self.d:
            raise ValueError(f"need {self.d} coordinates, got {len(coeffs)}")
        return AlgebraicInteger(coeffs)

    def zero(self) -> AlgebraicInteger:
        return AlgebraicInteger((0,) * self.d)

    def one(self) -> AlgebraicInteger:
        return self.from_int(1)

    def from_int(self, n: int) -> AlgebraicInteger:
        return AlgebraicInteger((int(n),) + (0,) * (self.d - 1))

    def xi(self) -> AlgebraicInteger:
        if self.d == 1:
            return AlgebraicInteger((-self.minpoly.coeffs[0],))
        return AlgebraicInteger((0, 1) + (0,) * (self.d - 2))

    # -- exact ring arithmetic ------------------------------------------

    def add(self, a: AlgebraicInteger, b: AlgebraicInteger) -> AlgebraicInteger:
        return AlgebraicInteger(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    def sub(self, a: AlgebraicInteger, b: AlgebraicInteger) -> AlgebraicInteger:
        return AlgebraicInteger(tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def neg(self, a: AlgebraicInteger) -> AlgebraicInteger:
        return AlgebraicInteger(tuple(-x for x in a.coeffs))

    def scalar_mul(self, n: int, a: AlgebraicInteger) -> AlgebraicInteger:
        return AlgebraicInteger(tuple(n * x for x in a.coeffs))

    def mul(self, a: AlgebraicInteger, b: AlgebraicInteger) -> AlgebraicInteger:
        d = self.d
        conv = [0] * (2 * d - 1)
        for i, x in enumerate(a.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(b.coeffs):
                conv[i + j] += x * y
        out = conv[:d] + [0] * (d - len(conv[:d]))
        for k in range(d, 2 * d - 1):
            if conv[k] == 0:
                continue
            red = self._pow_table[k - d]
            for i in range(d):
                out[i] += conv[k] * red[i]
        return AlgebraicInteger(tuple(out))

    def power(self, a: AlgebraicInteger, n: int) -> AlgebraicInteger:
        if n < 0:
            return self.power(self.inv_unit(a), -n)
        out = self.one()
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def multiplication_matrix(self, a: AlgebraicInteger):
        """Integer matrix of multiplication by a, acting on coordinate row
        vectors from the right: row j = coords of a*xi^j.  For a = xi this is
        the companion matrix of the minimal polynomial, and the Vandermonde
        matrix of the embeddings conjugates it to diag(sigma(a))."""
        rows = []
        b = a
        for _ in range(self.d):
            rows.append(list(b.coeffs))
            b = self._shift(b)
        return rows

    def _shift(self, a: AlgebraicInteger) -> AlgebraicInteger:
        """Multiply by xi."""
        d = self.d
        out = [0] + list(a.coeffs[: d - 1])
        top = a.coeffs[d - 1]
        if top:
            red = self._pow_table[0]
            for i in range(d):
                out[i] += top * red[i]
        return AlgebraicInteger(tuple(out))

    def field_norm(self, a: AlgebraicInteger) -> int:
        return _int_det(self.multiplication_matrix(a))

    def is_unit(self, a: AlgebraicInteger) -> bool:
        return abs(self.field_norm(a)) == 1

    def inv_unit(self, u: AlgebraicInteger) -> AlgebraicInteger:
        """Exact inverse of a unit via Cramer on the multiplication matrix."""
        n = self.field_norm(u)
        if abs(n) != 1:
            raise ValueError("element is not a unit")
        # solve coords(x) @ M_u = e_0 exactly; the transpose turns it into
        # a column-convention Cramer solve with determinant n in {1,-1}
        m = self.multiplication_matrix(u)
        d = self.d
        mt = [[m[j][i] for j in range(d)] for i in range(d)]
        out = []
        for i in range(d):
            mi = [row[:] for row in mt]
            for k in range(d):
                mi[k][i] = 1 if k == 0 else 0
            out.append(_int_det(mi) * n)  # divide by det = n
        return AlgebraicInteger(tuple(out))

    # -- embeddings --------------------------------------------------------

    def embed(self, a: AlgebraicInteger, place: Place):
        """Certified enclosure of sigma(a)."""
        key = (a.coeffs, place.index, get_precision())
        cached = self._embed_cache.get(key)
        if cached is None:
            cached = horner(a.coeffs, place.root)
            if len(self._embed_cache) < 65536:
                self._embed_cache[key] = cached
        return cached

    def tau(self, a: AlgebraicInteger):
        """Twisted diagonal embedding: one certified value per place."""
        return tuple(self.embed(a, p) for p in self.places)

    def tau_pair(self, pair):
        a, b = pair
        return tuple((self.embed(a, p), self.embed(b, p)) for p in self.places)

    def unit_log_embedding(self, u: AlgebraicInteger):
        """(log|sigma(u)|)_sigma as Balls; requires |N(u)| = 1."""
        if not self.is_unit(u):
            raise ValueError("unit_log_embedding requires |N(u)| = 1")
        return tuple(self.embed(u, p).abs().log() for p in self.places)

    # -- float-level data consumed by kernels and searches ------------------

    def place_roots_mid(self) -> np.ndarray:
        """Midpoint of each place root as complex128, shape (r+s,)."""
        return np.array([p.root.mid() for p in self.places], dtype=np.complex128)

    def place_powers_mid(self) -> np.ndarray:
        roots = self.place_roots_mid()
        return np.vander(roots, self.d, increasing=True).astype(np.complex128)

    def all_embeddings_mid(self) -> np.ndarray:
        """All d embeddings of xi (conjugates included): reals, then z, conj(z) pairs."""
        vals = [p.root.mid() for p in self.places if p.kind == "real"]
        for p in self.places:
            if p.kind == "complex":
                z = p.root.mid()
                vals.extend([z, z.conjugate()])
        return np.array(vals, dtype=np.complex128)

    def vandermonde(self) -> np.ndarray:
        """V with V[j, i] = sigma_i(xi)^j so that V^-1 T_a V = diag(sigma_i(a))."""
        return np.vander(self.all_embeddings_mid(), self.d, increasing=True).T.copy()

    def minkowski_matrix(self) -> np.ndarray:
        """Real d x d matrix mapping power-basis coords to R^d place coordinates."""
        rows = []
        powers = self.place_powers_mid()
        for k, p in enumerate(self.places):
            if p.kind == "real":
                rows.append(powers[k].real)
            else:
                rows.append(powers[k].real)
                rows.append(powers[k].imag)
        return np.array(rows, dtype=np.float64)

    def coeff_bound_factor(self) -> float:
        """kappa with |coords(a)|_inf <= kappa * max_sigma |sigma(a)| for a in O_K."""
        minv = np.linalg.inv(self.minkowski_matrix())
        # place coordinate vector has |entry| <= max |sigma(a)|; inf-norm bound
        return float(np.abs(minv).sum(axis=1).max()) * (1 + 1e-9)

    # -- unit lattice -------------------------------------------------------

    def unit_rank(self) -> int:
        return self.r + self.s - 1

    def unit_log_matrix(self) -> np.ndarray:
        """Rows = fundamental units, columns = places, float midpoints."""
        return np.array(
            [[b.mid() for b in self.unit_log_embedding(u)] for u in self.units],
            dtype=np.float64,
        )

    def renormalization_constant(self) -> float:
        """C of the unit-balancing lemma: exp of an upper bound for the
        sup-norm covering radius of the unit log lattice in the trace-zero
        hyperplane.  Brute force at desk scale with a safety margin."""
        if self._renorm_constant is None:
            self._renorm_constant = math.exp(_covering_radius_bound(self.unit_log_matrix()))
        return self._renorm_constant

    def __repr__(self):
        return f"NumberField({self.label!r}, d={self.d}, r={self.r}, s={self.s})"


def _power_reduction_table(minpoly: MinimalPolynomial):
    """Coordinates of xi^d, ..., xi^(2d-2) reduced to the power basis."""
    d = minpoly.degree
    table = []
    cur = [-c for c in minpoly.coeffs]  # xi^d
    table.append(tuple(cur))
    for _ in range(d - 2):
        top = cur[d - 1]
        cur = [0] + cur[: d - 1]
        if top:
            for i in range(d):
                cur[i] += top * -minpoly.coeffs[i]
        table.append(tuple(cur))
    return table


def _int_det(m) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    a = [list(row) for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _covering_radius_bound(log_matrix: np.ndarray) -> float:
    rank = log_matrix.shape[0]
    if rank == 0:
        return 1e-9
    if rank == 1:
        return float(np.abs(log_matrix[0]).max()) / 2 * 1.0000001
    # sample the fundamental parallelepiped; margin covers grid coarseness
    grid = np.linspace(0.0, 1.0, 33, endpoint=False)
    ks = np.array(np.meshgrid(*[np.arange(-2, 3)] * rank)).reshape(rank, -1).T
    translates = ks @ log_matrix
    worst = 0.0
    for t in np.array(np.meshgrid(*[grid] * rank)).reshape(rank, -1).T:
        y = t @ log_matrix
        dist = np.abs(y - translates).max(axis=1).min()
        worst = max(worst, float(dist))
    return worst * 1.35


def pell_fundamental_unit(dd: int):
    """Smallest (x, y) with x^2 - dd*y^2 = +-1 via the continued fraction of sqrt(dd)."""
    a0 = math.isqrt(dd)
    if a0 * a0 == dd:
        raise FieldError(f"{dd} is a perfect square")
    m, den, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while p * p - dd * q * q not in (1, -1):
        m = den * a - m
        den = (dd - m * m) // den
        a = (a0 + m) // den
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p, q


def _quadratic_fundamental_unit(b: int, c: int, n_max: int = 200000):
    """Fundamental unit of Z[xi], xi^2 + b*xi + c = 0 with positive discriminant.

    Searches m + n*xi with |m^2 - b*m*n + c*n^2| = 1 by increasing n; the
    Pell continued fraction handles the pure case b = 0 directly.
    """
    if b == 0:
        x, y = pell_fundamental_unit(-c)
        return (x, y)
    delta = b * b - 4 * c
    for n in range(1, n_max + 1):
        for s in (1, -1):
            t2 = delta * n * n + 4 * s
            if t2 < 0:
                continue
            t = math.isqrt(t2)
            if t * t != t2:
                continue
            for tt in (t, -t):
                m2 = b * n + tt
                if m2 % 2 == 0:
                    return (m2 // 2, n)
    raise FieldError("no fundamental unit found within search bound; supply units in config")


def parse_field(minpoly_coeffs, units=None, label: str | None = None,
                prec: int | None = None) -> NumberField:
    """Build a NumberField from config data, computing places and units.

    Real quadratic fields get their fundamental unit from the Pell /
    continued-fraction solver when no units are supplied; every other field
    of positive unit rank requires explicit units.
    """
    prec = prec or get_precision()
    minpoly = make_minimal_polynomial(minpoly_coeffs)
    iso = isolate_roots(list(minpoly.coeffs), prec)
    places = []
    idx = 0
    for root in iso.real:
        places.append(Place("real", root, 1, idx))
        idx += 1
    for root in iso.complex_upper:
        places.append(Place("complex", root, 2, idx))
        idx += 1

    field = NumberField(minpoly, places, (), label or _default_label(minpoly), prec)

    rank = field.unit_rank()
    if units is not None:
        unit_elems = tuple(field.element(u) for u in units)
    elif rank == 0:
        unit_elems = ()
    elif field.d == 2 and field.r == 2:
        x, y = _quadratic_fundamental_unit(minpoly.coeffs[1], minpoly.coeffs[0])
        unit_elems = (field.element((x, y)),)
    else:
        raise FieldError(
            f"field of unit rank {rank} needs units in the config "
            "(automatic computation only covers real quadratic fields)"
        )

    field.units = unit_elems
    _validate_units(field)
    return field


def _default_label(minpoly: MinimalPolynomial) -> str:
    return "min" + "_".join(str(c) for c in minpoly.coeffs)


def _validate_units(field: NumberField) -> None:
    for u in field.units:
        if not field.is_unit(u):
            raise FieldError(f"supplied unit {list(u.coeffs)} has |N| != 1")
    rank = field.unit_rank()
    if rank >= 1:
        if len(field.units) != rank:
            raise FieldError(f"need {rank} fundamental units, got {len(field.units)}")
        m = field.unit_log_matrix()
        if np.linalg.matrix_rank(m, tol=1e-8) != rank:
            raise FieldError("unit log embeddings do not span a rank "
                             f"{rank} lattice")


def field_from_config(cfg: dict, prec: int | None = None) -> NumberField:
    """Field config JSON: {"label": str, "minpoly": [c_0..c_{d-1}], "units": [[...], ...]?}."""
    if "minpoly" not in cfg:
        raise FieldError("field config needs a 'minpoly' entry")
    if cfg.get("nonmaximal_power_basis"):
        raise FieldError("field flagged with Z[xi] != O_K; the power-basis model does not apply")
    return parse_field(cfg["minpoly"], cfg.get("units"), cfg.get("label"), prec)
