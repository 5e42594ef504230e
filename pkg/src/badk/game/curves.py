"""Curves fed to the game: per-place polynomials with rational coefficients.

phi_sigma: R -> R per place (complex places receive the same real value
through the embedding of the curve into K_S).  Rational coefficients keep
curve values exactly representable at dyadic game centers, which the exact
short-vector rules rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..balls import Ball
from ..numberfield import NumberField


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class Curve:
    """Per-place component polynomials, their derivatives and critical points."""

    coeffs: tuple          # per place: tuple of Fractions, ascending degree
    active: tuple          # place indices with the nonvanishing-derivative hypothesis
    critical: tuple        # per place: tuple of floats (real critical points, padded domain)
    label: str = "curve"

    def deriv_coeffs(self, k: int) -> tuple:
        return tuple(i * c for i, c in enumerate(self.coeffs[k]) if i >= 1)

    def value_fraction(self, k: int, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs[k]):
            acc = acc * x + c
        return acc

    def value(self, k: int, x) -> Ball:
        xb = x if isinstance(x, Ball) else Ball.of(x)
        acc = Ball.of(0)
        for c in reversed(self.coeffs[k]):
            acc = acc * xb + c
        return acc

    def derivative_value(self, k: int, x) -> Ball:
        xb = x if isinstance(x, Ball) else Ball.of(x)
        acc = Ball.of(0)
        for c in reversed(self.deriv_coeffs(k)):
            acc = acc * xb + c
        return acc

    def derivative_range(self, k: int, lo: float, hi: float, depth: int = 6) -> Ball:
        """Certified enclosure of phi'_sigma over [lo, hi] by subdivision."""
        pieces = 1 << depth
        step = (hi - lo) / pieces
        out = None
        for i in range(pieces):
            seg = Ball(Ball.of(lo + i * step).lo, Ball.of(lo + (i + 1) * step).hi)
            val = self.derivative_value(k, seg)
            out = val if out is None else out.hull(val)
        return out

    def slope(self, k: int):
        """Exact slope when phi_sigma is linear, else None."""
        c = self.coeffs[k]
        if all(x == 0 for x in c[2:]):
            return c[1] if len(c) > 1 else Fraction(0)
        return None

    def is_linear(self) -> bool:
        return all(self.slope(k) is not None for k in range(len(self.coeffs)))

    def values_at(self, field: NumberField, x) -> tuple:
        return tuple(self.value(k, x) for k in range(len(field.places)))

    def values_fraction_at(self, x: Fraction) -> tuple:
        return tuple(self.value_fraction(k, x) for k in range(len(self.coeffs)))

    def active_weight(self, field: NumberField) -> int:
        return sum(field.places[k].exponent for k in self.active)


def _critical_points(coeffs, pad: float = 0.25):
    """Real roots of the derivative within the padded game domain (float guidance;
    the certified statement about derivatives is the range enclosure)."""
    dc = [float(i * c) for i, c in enumerate(coeffs) if i >= 1]
    while dc and dc[-1] == 0:
        dc.pop()
    if len(dc) <= 1:
        return ()
    roots = np.roots(dc[::-1])
    out = [float(r.real) for r in roots
           if abs(r.imag) < 1e-9 and -pad <= r.real <= 1 + pad]
    return tuple(sorted(out))


def poly_curve(field: NumberField, coeffs_per_place, active=None, label="curve") -> Curve:
    nplaces = len(field.places)
    if len(coeffs_per_place) != nplaces:
        raise ValueError(f"need {nplaces} component polynomials")
    coeffs = tuple(tuple(_as_fraction(c) for c in cs) for cs in coeffs_per_place)
    if active is None:
        active = tuple(k for k in range(nplaces)
                       if any(c != 0 for c in coeffs[k][1:]))
    else:
        active = tuple(sorted(set(int(a) for a in active)))
    critical = tuple(_critical_points(coeffs[k]) for k in range(nplaces))
    return Curve(coeffs, active, critical, label)


def linear_curve(field: NumberField, slopes, active=None, label="linear") -> Curve:
    return poly_curve(field, [[0, s] for s in slopes], active, label)


def check_equal_weight_hypothesis(field: NumberField, curve: Curve) -> None:
    """Active places must outweigh floor(d/2), complex places counting double."""
    need = field.d // 2
    have = curve.active_weight(field)
    if not have > need:
        raise ValueError(
            f"curve hypothesis fails: active weight {have} <= floor(d/2) = {need}")


def weighted_hypothesis_ok(field: NumberField, curve: Curve, spec) -> bool:
    """The weighted theorem wants a nonvanishing derivative at every place;
    in particular the max-weight place must be active."""
    return set(curve.active) == set(range(len(field.places)))
