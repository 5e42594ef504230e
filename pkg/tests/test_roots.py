import pytest

from badk import FieldError, parse_field
from badk.roots import isolate_roots


def bisect_root(coeffs, lo, hi, tol=1e-5):
    """Sign-change bisection oracle, independent of the Newton pipeline."""
    def p(x):
        acc = 0.0
        for c in reversed(list(coeffs) + [1]):
            acc = acc * x + c
        return acc

    flo = p(lo)
    assert flo * p(hi) < 0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if flo * p(mid) <= 0:
            hi = mid
        else:
            lo, flo = mid, p(mid)
    return (lo + hi) / 2


def test_sqrt2_roots():
    iso = isolate_roots([-2, 0])
    assert len(iso.real) == 2 and not iso.complex_upper
    vals = sorted(b.mid() for b in iso.real)
    assert abs(vals[0] + 2**0.5) < 1e-30
    assert abs(vals[1] - 2**0.5) < 1e-30
    for b in iso.real:
        assert b.rad() < 1e-30


def test_cubic_roots_match_bisection_oracle():
    coeffs = [-1, -3, 0]
    oracle = [bisect_root(coeffs, -2, -1), bisect_root(coeffs, -1, 0),
              bisect_root(coeffs, 1, 2)]
    iso = isolate_roots(coeffs)
    got = sorted(b.mid() for b in iso.real)
    for o, g in zip(sorted(oracle), got):
        assert abs(o - g) < 1e-4
    # fixture check against the published approximations
    assert abs(got[0] + 1.5321) < 1e-4
    assert abs(got[1] + 0.3473) < 1e-4
    assert abs(got[2] - 1.8794) < 1e-4


def test_gauss_upper_half_root():
    iso = isolate_roots([1, 0])
    assert not iso.real and len(iso.complex_upper) == 1
    z = iso.complex_upper[0].mid()
    assert abs(z - 1j) < 1e-30


def test_mixed_signature_quintic():
    # x^5 - x - 1: one real root, two complex pairs
    iso = isolate_roots([-1, -1, 0, 0, 0])
    assert len(iso.real) == 1 and len(iso.complex_upper) == 2
    x = iso.real[0].mid()
    assert abs(x**5 - x - 1) < 1e-12
    for z in iso.complex_upper:
        assert z.im.lo > 0


def test_each_ball_contains_exactly_its_root():
    iso = isolate_roots([-2, 0])
    lo, hi = sorted(b.mid() for b in iso.real)
    balls = sorted(iso.real, key=lambda b: b.mid())
    assert balls[0].contains(-(2**0.5)) or balls[0].rad() < 1e-15
    assert not balls[0].contains(hi)


def test_linear_is_exact():
    iso = isolate_roots([7])
    assert iso.real[0].is_point() and iso.real[0].lo == -7


def test_reducible_polynomial_rejected():
    with pytest.raises(FieldError):
        parse_field([1, 2])  # x^2 + 2x + 1 = (x+1)^2
    with pytest.raises(FieldError):
        parse_field([-4, 0])  # x^2 - 4
