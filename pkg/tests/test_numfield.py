"""Labeled conjugates, heights, orbit pairing, exact ratios and powers."""

import random
from fractions import Fraction

import pytest

from smcert import exactpoly as xp
from smcert.balls import ComplexBall, RealBall
from smcert.numfield import (
    AlgebraicNumber,
    algebraic_from_minpoly,
    conjugate_ratio,
    degree_of_power,
    height,
    inverse_algebraic,
    is_root_of_unity,
    label_conjugates,
    mahler_measure,
    pair_orbit,
    product_algebraic,
    reconstruct_fraction,
    roots_of_int_poly,
)
from smcert.quadforms import hilbert_class_poly

PREC = 256


def rational_number(q, prec=PREC):
    f = Fraction(q)
    return algebraic_from_minpoly(
        (-f.numerator, f.denominator), prec, ComplexBall.exact(f, 0, prec)
    )


def test_roots_certified_and_disjoint():
    coeffs = (2, 0, -3, 1)  # x^3 - 3x^2 + 2 = (x-1)(x^2-2x-2)
    balls = roots_of_int_poly(coeffs, 128)
    assert len(balls) == 3
    for i, b in enumerate(balls):
        for c in balls[i + 1:]:
            assert b.is_disjoint(c)
    assert any(b.may_contain_exact(1) for b in balls)


def test_label_conjugates_h23():
    h = hilbert_class_poly(-23, PREC)
    x1, x2, x3 = label_conjugates(h, PREC)
    assert x1.ball().imag().contains_zero()
    assert x2.ball().imag().is_positive()
    assert x3.ball().imag().is_negative()
    # dominance and conjugate symmetry of moduli
    assert abs(x1.ball()).certainly_gt(abs(x2.ball()))
    assert abs(x2.ball()).overlaps(abs(x3.ball()))


def test_label_conjugates_all_pipeline_discs():
    for d in (-23, -92, -31, -124):
        x1, x2, x3 = label_conjugates(hilbert_class_poly(d, PREC), PREC)
        assert abs(x1.ball()).certainly_gt(abs(x2.ball())), d
        assert abs(x2.ball()).overlaps(abs(x3.ball())), d


def test_label_rejects_totally_real_cubic():
    # (x-1)(x-2)(x-3) has three real roots
    with pytest.raises(ValueError):
        label_conjugates((-6, 11, -6, 1), PREC)


def test_height_of_rationals():
    assert height(rational_number(1)).contains_zero()
    two = height(rational_number(2))
    log2 = RealBall.exact(2, PREC).log()
    assert two.overlaps(log2)
    half = height(rational_number(Fraction(1, 2)))
    assert half.overlaps(log2)


def test_height_of_singular_modulus_vs_mahler():
    h = hilbert_class_poly(-23, PREC)
    x1, _, _ = label_conjugates(h, PREC)
    hx = height(x1)
    # independent route: exp(3 h) must match the Mahler measure ball
    assert (hx * RealBall.exact(3, PREC)).exp().overlaps(mahler_measure(x1))
    assert float(hx.rad) < 1e-6


def test_pair_orbit_case_one():
    hx = hilbert_class_poly(-92, PREC)
    hy = hilbert_class_poly(-23, PREC)
    pairing = pair_orbit(label_conjugates(hx, PREC), label_conjugates(hy, PREC))
    # real pairs with real
    assert pairing.y[0].ball().imag().contains_zero()
    # exact identity H_y(P(t)) == 0 mod H_x(t)
    check = xp.compose_mod(
        tuple(Fraction(c) for c in hy),
        pairing.relator,
        tuple(Fraction(c) for c in hx),
    )
    assert xp.normalize(check) == (0,)
    # P maps the conjugate pair to a conjugate pair
    p2 = pairing.y[1].ball()
    p3 = pairing.y[2].ball()
    assert p2.conjugate().overlaps(p3)


def test_pair_orbit_case_two():
    hx = hilbert_class_poly(-124, PREC)
    hy = hilbert_class_poly(-31, PREC)
    pairing = pair_orbit(label_conjugates(hx, PREC), label_conjugates(hy, PREC))
    check = xp.compose_mod(
        tuple(Fraction(c) for c in hy),
        pairing.relator,
        tuple(Fraction(c) for c in hx),
    )
    assert xp.normalize(check) == (0,)


def test_conjugate_ratio_beta_case_one():
    x1, x2, x3 = label_conjugates(hilbert_class_poly(-92, PREC), PREC)
    beta = conjugate_ratio(x3, x2)
    assert abs(beta.ball()).contains(1)
    assert not is_root_of_unity(beta)
    assert beta.degree == 6


def test_conjugate_ratio_of_equal_elements_is_one():
    x1, x2, x3 = label_conjugates(hilbert_class_poly(-23, PREC), PREC)
    one = conjugate_ratio(x2, x2)
    assert one.minpoly == (-1, 1)


def test_alpha_ratio_case_one_not_root_of_unity():
    y1, y2, y3 = label_conjugates(hilbert_class_poly(-23, PREC), PREC)
    alpha = conjugate_ratio(y3, y2)
    assert abs(alpha.ball()).contains(1)
    assert not is_root_of_unity(alpha)


def test_root_of_unity_detection():
    minus_one = algebraic_from_minpoly((1, 1), PREC, ComplexBall.exact(-1, 0, PREC))
    assert is_root_of_unity(minus_one)
    # primitive 6th root of unity: x^2 - x + 1
    zeta6 = roots_of_int_poly((1, -1, 1), PREC)[0]
    z = algebraic_from_minpoly((1, -1, 1), PREC, zeta6)
    assert is_root_of_unity(z)
    golden_area = ComplexBall(
        ComplexBall.exact(Fraction(1618, 1000), 0, PREC).mid,
        RealBall.exact(Fraction(1, 100), PREC).mid,
        PREC,
    )
    golden = algebraic_from_minpoly((-1, -1, 1), PREC, golden_area)
    assert not is_root_of_unity(golden)


def test_degree_of_power_lemma_spot_checks():
    x23 = label_conjugates(hilbert_class_poly(-23, PREC), PREC)[0]
    assert degree_of_power(x23, 1) == 3
    assert degree_of_power(x23, 2) == 3
    x92 = label_conjugates(hilbert_class_poly(-92, PREC), PREC)[0]
    assert degree_of_power(x92, 5) == 3


def random_algebraic(rng, prec=192):
    """Random small algebraic number of degree <= 3."""
    while True:
        deg = rng.choice((1, 2, 2, 3))
        coeffs = [rng.randint(-9, 9) for _ in range(deg)] + [rng.randint(1, 9)]
        if coeffs[0] == 0:
            continue
        facs = xp.factor_int_poly(tuple(coeffs))
        fac = facs[rng.randrange(len(facs))][0]
        if xp.degree(fac) < 1:
            continue
        roots = roots_of_int_poly(fac, prec)
        ball = roots[rng.randrange(len(roots))]
        if ball.contains_zero():
            continue
        return AlgebraicNumber(fac, tuple(roots), roots.index(ball))


def test_height_laws_random_inputs():
    rng = random.Random(2024)
    checked = 0
    while checked < 100:
        a = random_algebraic(rng)
        ha = height(a)
        # h(1/a) == h(a)
        hinv = height(inverse_algebraic(a))
        assert ha.overlaps(hinv)
        # h(a^2) == 2 h(a) through an independent minimal polynomial
        from smcert.numfield import power_minimal_poly

        sq_poly = xp.clear_denominators(power_minimal_poly(a, 2))
        sq_ball = a.ball() ** 2
        sq = algebraic_from_minpoly(sq_poly, a.prec, sq_ball)
        hsq = height(sq)
        assert hsq.overlaps(ha * RealBall.exact(2, a.prec))
        checked += 1


def test_height_subadditivity_random_products():
    rng = random.Random(7)
    for _ in range(25):
        a = random_algebraic(rng)
        b = random_algebraic(rng)
        try:
            ab = product_algebraic(a, b)
        except Exception:
            continue  # ambiguous ball selection on rare near-collisions
        bound = height(a) + height(b)
        got = height(ab)
        # subadditivity up to combined ball radii, no extra slack
        assert not got.certainly_gt(bound)


def test_reconstruct_fraction_roundtrip():
    val = Fraction(-355, 113)
    ball = RealBall.exact(val, 128)
    assert reconstruct_fraction(ball, 10**6) == val
    widened = RealBall.from_midrad(ball.mid, Fraction(1, 10), 128)
    # wide ball accepts the simplest inside rational
    got = reconstruct_fraction(widened, 10**6)
    assert got is not None and abs(got - val) <= Fraction(1, 10)
