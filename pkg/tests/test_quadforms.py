"""Form enumeration, certified j-values, class polynomial rounding."""

import math

import pytest
import sympy

from smcert.balls import ComplexBall, RealBall
from smcert.quadforms import (
    Discriminant,
    QuadraticForm,
    class_number,
    eval_int_poly_ball,
    eval_j,
    hilbert_class_poly,
    j_q_coefficients,
    parse_cache,
    cache_line,
    reduced_forms,
    singular_moduli_balls,
)

PIPELINE_DISCS = (-23, -92, -31, -124)


def brute_force_forms(d):
    """Independent oracle: scan every (a, b, c) in the reduction box."""
    out = set()
    for a in range(1, math.isqrt(-d // 3) + 1):
        for b in range(-a, a + 1):
            for c in range(a, (-d // (4 * a)) + a + 2):
                if b * b - 4 * a * c != d:
                    continue
                if math.gcd(math.gcd(a, abs(b)), c) != 1:
                    continue
                if (abs(b) == a or a == c) and b < 0:
                    continue
                out.add((a, b, c))
    return out


def test_reduced_forms_minus_23_explicit():
    forms = [f.as_tuple() for f in reduced_forms(-23)]
    assert set(forms) == {(1, 1, 6), (2, 1, 3), (2, -1, 3)}
    assert forms == sorted(forms)  # canonical (a, b) order
    assert class_number(-23) == 3


def test_reduced_forms_match_brute_force():
    for d in PIPELINE_DISCS + (-3, -4, -7, -8, -11, -15, -20, -47, -71):
        got = {f.as_tuple() for f in reduced_forms(d)}
        assert got == brute_force_forms(d), d


def test_class_numbers_of_pipeline_discriminants():
    for d in PIPELINE_DISCS:
        assert class_number(d) == 3, d
    assert class_number(-3) == 1
    assert class_number(-4) == 1


def test_form_invariants():
    for d in PIPELINE_DISCS:
        for f in reduced_forms(d):
            assert f.discriminant() == d
            assert f.a > 0
            assert abs(f.b) <= f.a <= f.c


def test_invalid_discriminants_rejected():
    for bad in (5, 0, -6, -13):
        with pytest.raises(ValueError):
            Discriminant(bad)
        with pytest.raises(ValueError):
            reduced_forms(bad)


def test_j_at_i_is_1728():
    ball = eval_j(QuadraticForm(1, 0, 1), 128)
    assert ball.real().contains(1728)
    assert ball.imag().contains_zero()
    assert ball.rad < 1e-18


def test_j_at_rho_is_0():
    ball = eval_j(QuadraticForm(1, 1, 1), 128)
    assert ball.contains_zero()
    assert ball.rad < 1e-18


def test_j_radius_meets_contract():
    for prec in (128, 256):
        ball = eval_j(QuadraticForm(1, 0, 23), prec)
        assert float(RealBall.from_endpoints(ball.rad, ball.rad, prec).log().upper()) \
            <= -(prec // 2) * math.log(2) * 0.999


def test_j_doubled_precision_balls_intersect():
    # tau = sqrt(-92)/2, real value of magnitude ~ e^{2 pi sqrt 23}
    f = QuadraticForm(1, 0, 23)
    b1 = eval_j(f, 192)
    b2 = eval_j(f, 384)
    assert b1.overlaps(b2)
    assert b1.imag().contains_zero()
    scale = b1.real()
    assert scale.certainly_gt(RealBall.exact(10**12, 192))
    assert scale.certainly_lt(RealBall.exact(10**14, 192))


def test_q_expansion_prefix():
    # classical verified prefix of j: 1/q + 744 + 196884 q + ...
    coeffs = j_q_coefficients(6)
    assert coeffs == (1, 744, 196884, 21493760, 864299970, 20245856256)


def test_q_series_partial_sum_consistent_with_ball():
    # sanity: exact series prefix evaluated at q(tau) approximates the ball
    prec = 256
    from smcert.quadforms import _q_ball

    f = QuadraticForm(2, 1, 3)
    q = _q_ball(f, prec)
    coeffs = j_q_coefficients(40)
    acc = ComplexBall.exact(0, 0, prec)
    for c in reversed(coeffs[2:]):
        acc = (acc + ComplexBall.exact(c, 0, prec)) * q
    series = q.inverse() + ComplexBall.exact(coeffs[1], 0, prec) + acc
    ball = eval_j(f, prec)
    diff = abs(series - ball)
    assert diff.upper() < 1e-30


def test_hilbert_poly_small_cases():
    assert hilbert_class_poly(-3, 128) == (0, 1)
    assert hilbert_class_poly(-4, 128) == (-1728, 1)


def test_hilbert_poly_monic_cubics():
    for d in PIPELINE_DISCS:
        coeffs = hilbert_class_poly(d, 256)
        assert len(coeffs) == 4 and coeffs[-1] == 1, d


def test_hilbert_poly_rounding_stability():
    for d in PIPELINE_DISCS:
        assert hilbert_class_poly(d, 256) == hilbert_class_poly(d, 512), d


def test_hilbert_poly_root_membership():
    for d in PIPELINE_DISCS:
        coeffs = hilbert_class_poly(d, 256)
        for ball in singular_moduli_balls(d, 256):
            assert eval_int_poly_ball(coeffs, ball).contains_zero(), d


def test_hilbert_poly_discriminant_nonzero():
    x = sympy.symbols("x")
    for d in PIPELINE_DISCS:
        coeffs = hilbert_class_poly(d, 256)
        poly = sympy.Poly(list(reversed(coeffs)), x)
        assert sympy.discriminant(poly) != 0, d


def test_dominant_root_is_real_and_largest():
    for d in PIPELINE_DISCS:
        balls = singular_moduli_balls(d, 256)
        real_ones = [b for b in balls if b.imag().contains_zero()]
        assert len(real_ones) == 1, d
        dom = real_ones[0]
        for b in balls:
            if b is dom:
                continue
            assert abs(dom).certainly_gt(abs(b)), d


def test_cache_roundtrip():
    coeffs = hilbert_class_poly(-23, 256)
    line = cache_line(-23, coeffs)
    assert parse_cache(line + "\n") == {-23: coeffs}


def test_hilbert_poly_classical_rational_anchors():
    """Famous exact singular moduli as independent oracles."""
    assert hilbert_class_poly(-7, 128) == (3375, 1)       # j = -15^3
    assert hilbert_class_poly(-11, 128) == (32768, 1)     # j = -32^3
    assert hilbert_class_poly(-163, 256) == (640320 ** 3, 1)


def test_class_number_163_is_one():
    assert class_number(-163) == 1
