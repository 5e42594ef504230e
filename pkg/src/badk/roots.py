"""Certified isolation of the roots of an integer polynomial.

Approximations come from the float64 companion matrix, get polished by
Newton iteration in MPFR, and are then certified: for a monic degree-d
polynomial p and any point z, the disc around z of radius d*|p(z)/p'(z)|
contains at least one root.  With d pairwise disjoint discs (counting the
conjugate mirror of every strictly-complex disc) each disc contains exactly
one root, and a disc centered on the real axis must contain a real root.
"""

from __future__ import annotations

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .balls import Ball, CBall, horner
from .precision import PrecisionError, get_precision


def _poly_and_deriv(coeffs):
    # full monic coefficient list c_0..c_d with c_d = 1
    full = list(coeffs) + [1]
    deriv = [i * full[i] for i in range(1, len(full))]
    return full, deriv


def _horner_mpc(full, z, ctx):
    acc = mpc(0)
    for c in reversed(full):
        acc = ctx.add(ctx.mul(acc, z), c)
    return acc


def _newton_polish(full, deriv, z0, prec, steps=80):
    ctx = gmpy2.context(precision=prec + 32)
    z = mpc(z0, precision=prec + 32)
    tol = mpfr(2) ** (-(prec + 8))
    for _ in range(steps):
        pz = _horner_mpc(full, z, ctx)
        dz = _horner_mpc(deriv, z, ctx)
        if dz == 0:
            break
        step = ctx.div(pz, dz)
        z = ctx.sub(z, step)
        if ctx.abs(step) <= tol * max(ctx.abs(z), mpfr(1)):
            break
    return z


def _cert_radius(full, deriv, z) -> mpfr:
    """Upper bound for d*|p(z)/p'(z)| at the (real or complex) point z."""
    d = len(full) - 1
    if isinstance(z, mpc):
        zb = CBall(Ball.point(z.real), Ball.point(z.imag))
    else:
        zb = CBall.of(Ball.point(z))
    pz = horner(full, zb).abs()
    dpz = horner(deriv, zb).abs()
    if dpz.lo <= 0:
        raise PrecisionError("derivative enclosure touches zero at root candidate")
    return (Ball.of(d) * pz / dpz).hi


class IsolatedRoots:
    """Certified root enclosures: reals ascending, then upper-half-plane pairs."""

    def __init__(self, real: list[Ball], complex_upper: list[CBall]):
        self.real = real
        self.complex_upper = complex_upper


def isolate_roots(coeffs, prec: int | None = None) -> IsolatedRoots:
    """Certified enclosures of all roots of x^d + c_{d-1}x^{d-1} + ... + c_0.

    ``coeffs`` is the list [c_0, ..., c_{d-1}] of a monic squarefree integer
    polynomial.  Raises PrecisionError when isolation fails at ``prec``.
    """
    prec = prec or get_precision()
    ctx = gmpy2.context(precision=prec + 32)
    full, deriv = _poly_and_deriv(coeffs)
    d = len(coeffs)
    if d == 0:
        raise ValueError("degree must be >= 1")
    if d == 1:
        return IsolatedRoots([Ball.of(-coeffs[0])], [])

    seeds = np.roots([1.0] + [float(c) for c in reversed(coeffs)])
    polished = [_newton_polish(full, deriv, complex(s), prec) for s in seeds]

    points = []  # (center mpc/mpfr, radius mpfr, is_real)
    for z in polished:
        r = _cert_radius(full, deriv, z)
        if ctx.abs(z.imag) <= 2 * r:
            # candidate real root: re-center on the axis and re-certify
            x = _newton_polish(full, deriv, mpc(z.real), prec).real
            points.append((x, _cert_radius(full, deriv, x), True))
        else:
            points.append((z, r, False))

    def _dist(a, b):
        return ctx.abs(ctx.sub(a, b))

    reals_unique: list[tuple[mpfr, mpfr]] = []
    for x, r, isr in sorted([p for p in points if p[2]], key=lambda t: t[0]):
        if any(_dist(x, y) <= ry + r for y, ry in reals_unique):
            continue
        reals_unique.append((x, r))

    upper_unique: list[tuple[mpc, mpfr]] = []
    upper = [(z, r) for z, r, isr in points if not isr and z.imag > 0]
    for z, r in sorted(upper, key=lambda t: (t[0].real, t[0].imag)):
        if any(_dist(z, w) <= rw + r for w, rw in upper_unique):
            continue
        upper_unique.append((z, r))

    if len(reals_unique) + 2 * len(upper_unique) != d:
        raise PrecisionError("root isolation found wrong multiplicity pattern")

    # disjointness of all d certified discs, with conjugate mirrors included
    discs = [(mpc(x, 0, precision=prec + 32), r) for x, r in reals_unique]
    for z, r in upper_unique:
        if not z.imag > r:
            raise PrecisionError("complex root disc touches the real axis")
        discs.append((z, r))
        discs.append((mpc(z.real, -z.imag, precision=prec + 32), r))
    for i in range(len(discs)):
        for j in range(i + 1, len(discs)):
            zi, ri = discs[i]
            zj, rj = discs[j]
            if not _dist(zi, zj) > ctx.add(ri, rj) * 2:
                raise PrecisionError("root discs overlap; raise working precision")

    down = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
    real_balls = [Ball(down.sub(x, r), up.add(x, r)) for x, r in reals_unique]
    cplx_balls = [
        CBall(Ball(down.sub(z.real, r), up.add(z.real, r)),
              Ball(down.sub(z.imag, r), up.add(z.imag, r)))
        for z, r in upper_unique
    ]
    return IsolatedRoots(real_balls, cplx_balls)
