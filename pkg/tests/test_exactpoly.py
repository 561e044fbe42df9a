"""Exact polynomial helpers against independent sympy oracles."""

from fractions import Fraction

import sympy

from smcert import exactpoly as xp

X = sympy.symbols("x")


def test_divmod_roundtrip():
    f = (3, Fraction(1, 2), 0, 7, 2)
    g = (1, 4, 1)
    q, r = xp.divmod_exact(f, g)
    assert xp.add(xp.mul(q, g), r) == xp.normalize(tuple(Fraction(c) for c in f))
    assert xp.degree(r) < xp.degree(g)


def test_compose_mod_matches_sympy():
    h = (2, 0, -3, 1)
    inner = (Fraction(1, 3), 2)
    mod = (1, 1, 1)
    got = xp.compose_mod(h, inner, tuple(Fraction(c) for c in mod))
    hx = sum(int(c) * X ** i for i, c in enumerate(h))
    ix = sympy.Rational(1, 3) + 2 * X
    expect = sympy.rem(sympy.expand(hx.subs(X, ix)), X ** 2 + X + 1, X)
    expect_poly = sympy.Poly(expect, X)
    coeffs = tuple(Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q))
                   for c in reversed(expect_poly.all_coeffs()))
    assert xp.normalize(got) == xp.normalize(coeffs)


def test_minimal_poly_in_quotient_vs_sympy():
    # z = x^2 in Q[x]/(x^3 - 2): minimal polynomial is t^3 - 4
    mod = tuple(Fraction(c) for c in (-2, 0, 0, 1))
    z = (Fraction(0), Fraction(0), Fraction(1))
    got = xp.minimal_poly_in_quotient(z, mod)
    assert got == (Fraction(-4), Fraction(0), Fraction(0), Fraction(1))
    # rational element: degree 1
    const = (Fraction(5, 3),)
    got = xp.minimal_poly_in_quotient(const, mod)
    assert got == (Fraction(-5, 3), Fraction(1))


def test_resultant_and_discriminant():
    f = (-2, 0, 1)  # x^2 - 2
    g = (-3, 0, 1)  # x^2 - 3
    assert xp.resultant(f, g) == 1  # (2-3)^2 = 1
    assert xp.discriminant((-1, 0, 1)) == 4  # x^2 - 1
    assert xp.discriminant((2, 0, -3, 1)) == sympy.discriminant(
        X ** 3 - 3 * X ** 2 + 2, X)


def test_factor_and_irreducibility():
    facs = xp.factor_int_poly((-6, 11, -6, 1))  # (x-1)(x-2)(x-3)
    assert [f for f, _ in facs] == [(-3, 1), (-2, 1), (-1, 1)]
    assert xp.is_irreducible_int_poly((1, 1, 1))
    assert not xp.is_irreducible_int_poly((1, 2, 1))


def test_content_primitive_sign():
    c, prim = xp.content_primitive((-4, -8))
    assert c == -4 and prim == (1, 2)
    assert xp.content_primitive((0,)) == (0, (0,))


def test_cyclotomic_order():
    assert xp.cyclotomic_order((1, 1)) == 2          # x + 1
    assert xp.cyclotomic_order((1, -1, 1)) == 6      # x^2 - x + 1
    assert xp.cyclotomic_order((1, 1, 1, 1, 1, 1, 1)) == 7
    assert xp.cyclotomic_order((-2, 1)) is None
    assert xp.cyclotomic_order((-1, -1, 1)) is None  # golden ratio


def test_clear_denominators():
    assert xp.clear_denominators((Fraction(1, 2), Fraction(2, 3))) == (3, 4)
