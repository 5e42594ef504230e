import numpy as np
import pytest
import sympy

from badk import FieldError, parse_field, pell_fundamental_unit
from badk.numberfield import _int_det


def brute_pell(dd, cap=10000):
    """Smallest-y solution of x^2 - dd y^2 = +-1 by direct search."""
    for y in range(1, cap):
        for s in (1, -1):
            t = dd * y * y + s
            x = int(t**0.5)
            for xx in (x, x + 1):
                if xx * xx - dd * y * y in (1, -1):
                    return xx, y
    raise AssertionError("no pell solution found")


def test_pell_oracle_small_d():
    for dd in (2, 3, 5, 6, 7, 10, 13):
        assert pell_fundamental_unit(dd) == brute_pell(dd)


def test_parse_sqrt2_computes_pell_unit(sqrt2):
    assert sqrt2.r == 2 and sqrt2.s == 0 and sqrt2.d == 2
    assert [u.coeffs for u in sqrt2.units] == [(1, 1)]  # 1 + sqrt2


def test_parse_gauss_trivial_units(gauss):
    assert gauss.r == 0 and gauss.s == 1
    assert gauss.units == ()
    assert gauss.places[0].kind == "complex"
    assert abs(gauss.places[0].root.mid() - 1j) < 1e-30


def test_parse_cubic_three_real_places(cubic):
    assert cubic.r == 3 and cubic.s == 0
    assert len(cubic.units) == 2
    # discriminant 81 > 0 forces totally real; root count confirms


def test_units_required_error():
    # totally real cubic without supplied units cannot be parsed
    with pytest.raises(FieldError):
        parse_field([-1, -3, 0])


def test_bad_unit_rejected():
    with pytest.raises(FieldError):
        parse_field([-2, 0], units=[[2, 0]])


def test_embed_examples(sqrt2):
    xi = sqrt2.xi()
    vals = sorted(sqrt2.embed(xi, p).mid() for p in sqrt2.places)
    assert abs(vals[0] + 1.4142135624) < 1e-9
    assert abs(vals[1] - 1.4142135624) < 1e-9
    one = sqrt2.one()
    for p in sqrt2.places:
        b = sqrt2.embed(one, p)
        assert b.is_point() and b.lo == 1
    onexi = sqrt2.element([1, 1])
    got = sorted(sqrt2.embed(onexi, p).mid() for p in sqrt2.places)
    assert abs(got[0] + 0.41421356) < 1e-7 and abs(got[1] - 2.41421356) < 1e-7


def test_tau(sqrt2):
    t = sqrt2.tau(sqrt2.one())
    assert all(b.mid() == 1 for b in t)
    pair = sqrt2.tau_pair((sqrt2.one(), sqrt2.element([1, 1])))
    assert len(pair) == 2 and len(pair[0]) == 2


def test_mul_examples(sqrt2):
    xi = sqrt2.xi()
    assert sqrt2.mul(xi, xi).coeffs == (2, 0)
    u = sqrt2.element([1, 1])
    v = sqrt2.element([-1, 1])
    assert sqrt2.mul(u, v).coeffs == (1, 0)
    a = sqrt2.element([3, -7])
    assert sqrt2.mul(a, sqrt2.one()).coeffs == a.coeffs


def test_field_norm_examples(sqrt2, cubic):
    assert sqrt2.field_norm(sqrt2.element([1, 1])) == -1
    assert sqrt2.field_norm(sqrt2.element([3, 1])) == 7
    assert cubic.field_norm(cubic.from_int(2)) == 8


def test_multiplication_matrix_examples(sqrt2):
    t = sqrt2.multiplication_matrix(sqrt2.xi())
    # row-vector convention: (1,0) -> (0,1), (0,1) -> (2,0)
    assert t == [[0, 1], [2, 0]]
    assert sqrt2.multiplication_matrix(sqrt2.one()) == [[1, 0], [0, 1]]
    t1x = sqrt2.multiplication_matrix(sqrt2.element([1, 1]))
    assert t1x == [[1, 1], [2, 1]]  # I + T_xi


def test_charpoly_is_minpoly(sqrt2, cubic):
    for f in (sqrt2, cubic):
        t = sympy.Matrix(f.multiplication_matrix(f.xi()))
        x = sympy.Symbol("x")
        cp = t.charpoly(x).as_expr()
        want = sympy.Add(*[c * x**i for i, c in enumerate(f.minpoly.coeffs)],
                         x**f.d)
        assert sympy.expand(cp - want) == 0


def test_norm_equals_det(sqrt2, cubic):
    rng = np.random.default_rng(3)
    for f in (sqrt2, cubic):
        for _ in range(25):
            a = f.element(rng.integers(-9, 10, size=f.d).tolist())
            m = sympy.Matrix(f.multiplication_matrix(a))
            assert f.field_norm(a) == m.det()


def test_int_det_bareiss():
    m = [[2, 3, 1], [0, 5, -2], [1, -1, 4]]
    assert _int_det(m) == int(round(np.linalg.det(np.array(m, dtype=float))))
    assert _int_det([[0, 1], [1, 0]]) == -1
    assert _int_det([[1, 2], [2, 4]]) == 0


def test_unit_log_embedding(sqrt2):
    u = sqrt2.units[0]
    logs = [b.mid() for b in sqrt2.unit_log_embedding(u)]
    assert abs(max(logs) - 0.88137) < 1e-4
    assert abs(sum(logs)) < 1e-12
    z = sqrt2.unit_log_embedding(sqrt2.one())
    assert all(abs(b.mid()) == 0 for b in z)
    m1 = sqrt2.unit_log_embedding(sqrt2.from_int(-1))
    assert all(abs(b.mid()) == 0 for b in m1)
    with pytest.raises(ValueError):
        sqrt2.unit_log_embedding(sqrt2.from_int(2))


def test_product_formula_invariant(sqrt2, cubic):
    for f in (sqrt2, cubic):
        for u in f.units:
            prod = None
            for p in f.places:
                b = f.embed(u, p).abs().powi(p.exponent)
                prod = b if prod is None else prod * b
            assert abs(prod.mid() - 1) <= 10 * prod.rad() + 1e-30


def test_homomorphism_property(sqrt2):
    rng = np.random.default_rng(11)
    for _ in range(1000):
        a = sqrt2.element(rng.integers(-10, 11, size=2).tolist())
        b = sqrt2.element(rng.integers(-10, 11, size=2).tolist())
        ab = sqrt2.mul(a, b)
        for p in sqrt2.places:
            prod = sqrt2.embed(a, p) * sqrt2.embed(b, p)
            got = sqrt2.embed(ab, p)
            assert got.lo <= prod.hi and prod.lo <= got.hi  # enclosures intersect


def test_vandermonde_diagonalization(sqrt2, cubic):
    rng = np.random.default_rng(5)
    for f, n in ((sqrt2, 100), (cubic, 20)):
        v = f.vandermonde()
        vinv = np.linalg.inv(v)
        emb = f.all_embeddings_mid()
        worst = 0.0
        for _ in range(n):
            a = f.element(rng.integers(-50, 51, size=f.d).tolist())
            t = np.array(f.multiplication_matrix(a), dtype=np.complex128)
            diag = np.diag([sum(c * e**i for i, c in enumerate(a.coeffs))
                            for e in emb])
            worst = max(worst, np.abs(vinv @ t @ v - diag).max())
        assert worst < 1e-9


def test_inv_unit(sqrt2, cubic):
    for f in (sqrt2, cubic):
        for u in f.units:
            ui = f.inv_unit(u)
            assert f.mul(u, ui).coeffs == f.one().coeffs


def test_rationals_degenerate(rationals):
    assert rationals.d == 1 and rationals.r == 1
    assert rationals.field_norm(rationals.element([5])) == 5
    assert rationals.embed(rationals.element([3]), rationals.places[0]).lo == 3


def test_renormalization_constant(sqrt2, cubic, gauss):
    c2 = sqrt2.renormalization_constant()
    # rank-1 lattice: covering radius is half the log of the fundamental unit
    assert abs(np.log(c2) - 0.8813735870195 / 2) < 1e-6
    assert cubic.renormalization_constant() > 1
    assert gauss.renormalization_constant() > 1  # trivial lattice, C ~ 1


def test_power_basis_flag_rejected():
    from badk import field_from_config
    with pytest.raises(FieldError):
        field_from_config({"minpoly": [-2, 0], "nonmaximal_power_basis": True})
