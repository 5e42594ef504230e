import math
from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from badk import Ball, CBall, PrecisionError, get_precision, working_precision

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False,
                   allow_infinity=False)
nonzeroish = finite.filter(lambda x: abs(x) > 1e-6)


def exact_contains(b: Ball, value) -> bool:
    return b.lo <= value <= b.hi


@given(finite, finite)
@settings(max_examples=200)
def test_add_mul_containment(x, y):
    bx, by = Ball.of(x), Ball.of(y)
    hi = gmpy2.context(precision=300)
    assert exact_contains(bx + by, hi.add(gmpy2.mpfr(x), gmpy2.mpfr(y)))
    assert exact_contains(bx * by, hi.mul(gmpy2.mpfr(x), gmpy2.mpfr(y)))
    assert exact_contains(bx - by, hi.sub(gmpy2.mpfr(x), gmpy2.mpfr(y)))


@given(nonzeroish, nonzeroish)
@settings(max_examples=200)
def test_div_containment(x, y):
    hi = gmpy2.context(precision=300)
    assert exact_contains(Ball.of(x) / Ball.of(y),
                          hi.div(gmpy2.mpfr(x), gmpy2.mpfr(y)))


@given(finite)
@settings(max_examples=200)
def test_neg_abs_sq_keep_precision_and_contain(x):
    b = Ball.of(x)
    hi = gmpy2.context(precision=300)
    assert exact_contains(-b, -gmpy2.mpfr(x))
    assert exact_contains(b.abs(), abs(gmpy2.mpfr(x)))
    assert exact_contains(b.sq(), hi.mul(gmpy2.mpfr(x), gmpy2.mpfr(x)))
    # regression: endpoint ops must not fall back to the 53-bit default context
    assert (-b).lo.precision >= get_precision()


def test_exact_flow_identities():
    # these exactness facts keep t = 0 threshold comparisons decidable
    assert Ball.of(0).exp().is_point()
    assert Ball.of(0).exp().lo == 1
    assert Ball.of(1).log().is_point()
    assert Ball.of(1).log().lo == 0


def test_fraction_endpoints_bracket():
    b = Ball.of(Fraction(1, 3))
    assert b.lo < b.hi
    assert b.lo <= gmpy2.mpfr("0.333333333333333333333333333333333333333", 200) <= b.hi


def test_certified_comparisons():
    b = Ball.of(Fraction(1, 3))
    assert b.certified_lt(0.5)
    assert not b.certified_lt(0.25)
    assert b.certified_gt(0.25)
    with pytest.raises(PrecisionError):
        (Ball.of(1) - Ball.of(Fraction(1, 3)) * 3).certified_gt(0)


def test_point_on_threshold_is_decidable():
    one = Ball.of(1)
    assert one.is_point()
    assert not one.certified_lt(1)   # H = 1 exactly is not < 1
    assert not one.certified_gt(1)


def test_interval_square_through_zero():
    b = Ball(gmpy2.mpfr(-2), gmpy2.mpfr(3))
    s = b.sq()
    assert s.lo == 0 and s.hi >= 9


def test_powi_matches_repeated_mul():
    b = Ball.of(1.5) - Ball.of(Fraction(1, 7))
    direct = b * b * b
    p = b.powi(3)
    assert abs(p.mid() - direct.mid()) < 1e-15
    hi = gmpy2.context(precision=300)
    x = hi.sub(gmpy2.mpfr(1.5), hi.div(1, 7))
    cube = hi.mul(hi.mul(x, x), x)
    assert exact_contains(p, cube)
    assert b.powi(0).is_point() and b.powi(0).lo == 1


def test_exp_log_roundtrip_contains():
    b = Ball.of(2.5)
    r = b.exp().log()
    assert exact_contains(r, gmpy2.mpfr(2.5))
    assert float(r.width()) < 1e-30


def test_sqrt_rootn():
    hi = gmpy2.context(precision=300)
    assert exact_contains(Ball.of(2).sqrt(), hi.sqrt(gmpy2.mpfr(2)))
    r = Ball.of(8).rootn(3)
    assert abs(r.mid() - 2.0) < 1e-30


def test_max_min_hull():
    a, b = Ball.of(1), Ball.of(2)
    assert a.max_with(b).mid() == 2
    assert a.min_with(b).mid() == 1
    h = a.hull(b)
    assert h.lo == 1 and h.hi == 2


def test_working_precision_context():
    with working_precision(256):
        w = Ball.of(Fraction(1, 3)).width()
        assert float(w) < 1e-70
    assert get_precision() == 128 or get_precision() >= 53


@given(finite, finite, finite, finite)
@settings(max_examples=100)
def test_cball_mul_containment(a, b, c, d):
    z = CBall.of(complex(a, b)) * CBall.of(complex(c, d))
    hi = gmpy2.context(precision=300)
    re = hi.sub(hi.mul(gmpy2.mpfr(a), gmpy2.mpfr(c)), hi.mul(gmpy2.mpfr(b), gmpy2.mpfr(d)))
    im = hi.add(hi.mul(gmpy2.mpfr(a), gmpy2.mpfr(d)), hi.mul(gmpy2.mpfr(b), gmpy2.mpfr(c)))
    assert exact_contains(z.re, re)
    assert exact_contains(z.im, im)


def test_cball_abs_div():
    z = CBall.of(complex(3, 4))
    assert abs(z.abs().mid() - 5.0) < 1e-30
    q = CBall.of(complex(1, 1)) / CBall.of(complex(0, 1))
    assert abs(q.mid() - complex(1, -1)) < 1e-30


def test_cball_zero_division_guard():
    tiny = CBall(Ball(gmpy2.mpfr(-1e-40), gmpy2.mpfr(1e-40)),
                 Ball(gmpy2.mpfr(-1e-40), gmpy2.mpfr(1e-40)))
    with pytest.raises(ZeroDivisionError):
        CBall.of(1 + 0j) / tiny


def test_mid_rad_sane():
    b = Ball.of(Fraction(2, 3))
    assert math.isclose(b.mid(), 2 / 3, rel_tol=1e-15)
    assert 0 <= b.rad() < 1e-37
