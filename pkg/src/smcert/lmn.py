"""Explicit lower bounds for |1 - alpha^m| when |alpha| = 1.

Realizes the effective two-logarithm corollary: for alpha of degree d and
logarithmic height h on the unit circle, not a root of unity,

    |1 - alpha^m| > 0.99 exp(-c1 (log m)^2)    for m >= 13,

with c1 assembled from c1'(d) = D + max(0, (4.49 - 0.96 D)/log 13),
D = d/2, and

    c1 = 9.03 c1'^2 (D h + 25.84) + 2 c1'/log 13 + 2 log log 13/(log 13)^2
         + (0.23 (D h + 25.84) + 2 log c1' + 0.7 D - 2.07)/(log 13)^2.

All arithmetic is ball arithmetic; the height enters through the upper
edge of its ball so the published c1 can only be overestimated, which is
the safe direction for every downstream lower bound. For m < 13 the value
|1 - alpha^m| is certified directly by ball evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .balls import PrecisionError, RealBall
from .numfield import AlgebraicNumber, height, is_root_of_unity

DEFAULT_PREC = 192

_F = Fraction


@dataclass(frozen=True)
class BakerConstant:
    """(d, D, h(alpha), c1'(d), c1(alpha)) for the asymptotic lower bound."""

    d: int
    big_d: Fraction
    h: RealBall
    c1_prime: RealBall
    c1: RealBall

    def c1_conservative(self) -> RealBall:
        """Upper edge of the c1 ball as a point; the value downstream
        bounds must use."""
        hi = self.c1.upper()
        return RealBall.from_endpoints(hi, hi, self.c1.prec)


@dataclass(frozen=True)
class LowerBoundResult:
    m: int
    bound: RealBall
    mode: str  # "asymptotic" or "direct"


def _ball_max0(x: RealBall) -> RealBall:
    zero = RealBall.exact(0, x.prec).mid
    return RealBall.from_endpoints(max(x.lower(), zero), max(x.upper(), zero),
                                   x.prec)


def c1_prime(d: int, prec: int = DEFAULT_PREC) -> RealBall:
    """c1'(d) = D + max(0, (4.49 - 0.96 D)/log 13), D = d/2."""
    if d < 2:
        raise ValueError("degree must be at least 2")
    big_d = RealBall.exact(_F(d, 2), prec)
    log13 = RealBall.exact(13, prec).log()
    inner = (RealBall.exact(_F(449, 100), prec)
             - RealBall.exact(_F(96, 100), prec) * big_d) / log13
    return big_d + _ball_max0(inner)


def _c1_formula(d: int, h_upper: RealBall, prec: int) -> RealBall:
    big_d = RealBall.exact(_F(d, 2), prec)
    log13 = RealBall.exact(13, prec).log()
    log13_sq = log13 * log13
    c1p = c1_prime(d, prec)
    dh = big_d * h_upper + RealBall.exact(_F(2584, 100), prec)
    main = RealBall.exact(_F(903, 100), prec) * c1p * c1p * dh
    second = RealBall.exact(2, prec) * c1p / log13
    third = RealBall.exact(2, prec) * log13.log() / log13_sq
    tail = (RealBall.exact(_F(23, 100), prec) * dh
            + RealBall.exact(2, prec) * c1p.log()
            + RealBall.exact(_F(7, 10), prec) * big_d
            - RealBall.exact(_F(207, 100), prec)) / log13_sq
    return main + second + third + tail


def baker_constant(alpha: AlgebraicNumber, unit_modulus: bool = False,
                   prec: int = DEFAULT_PREC) -> BakerConstant:
    """Full constant tuple for alpha on the unit circle.

    ``unit_modulus`` asserts the caller knows |alpha| = 1 exactly (for a
    ratio of complex conjugates); the ball check alone cannot certify an
    equality.
    """
    if not abs(alpha.ball()).contains(1):
        raise ValueError("|alpha| ball does not contain 1")
    if not unit_modulus:
        raise ValueError("caller must certify |alpha| = 1 structurally")
    if is_root_of_unity(alpha):
        raise ValueError("alpha is a root of unity")
    h = height(alpha)
    h_up = RealBall.from_endpoints(h.upper(), h.upper(), prec)
    d = alpha.degree
    return BakerConstant(
        d=d,
        big_d=_F(d, 2),
        h=h,
        c1_prime=c1_prime(d, prec),
        c1=_c1_formula(d, h_up, prec),
    )


def asymptotic_lower_bound(baker: BakerConstant, m: int,
                           prec: int = DEFAULT_PREC) -> RealBall:
    """0.99 exp(-c1 (log m)^2) with the conservative c1."""
    if m < 13:
        raise ValueError("asymptotic branch needs m >= 13")
    log_m = RealBall.exact(m, prec).log()
    c1 = baker.c1_conservative()
    return (RealBall.exact(_F(99, 100), prec)
            * (-(c1 * log_m * log_m)).exp())


def direct_lower_bound(alpha: AlgebraicNumber, m: int,
                       max_prec: int = 4096) -> RealBall:
    """Certified positive lower edge of |1 - alpha^m| by ball evaluation."""
    from .balls import ComplexBall

    a = alpha
    while True:
        ball = abs(ComplexBall.exact(1, 0, a.prec) - (a.ball() ** m))
        if ball.is_positive():
            lo = ball.lower()
            return RealBall.from_endpoints(lo, lo, a.prec)
        if a.prec >= max_prec:
            raise PrecisionError(
                f"|1 - alpha^{m}| straddles zero at precision {max_prec}")
        a = a.at_precision(a.prec * 2)


def lower_bound(alpha: AlgebraicNumber, baker: BakerConstant, m: int,
                prec: int = DEFAULT_PREC) -> LowerBoundResult:
    """Certified lower bound for |1 - alpha^m|: direct evaluation below
    m = 13, the two-logarithm bound from there on."""
    if m < 1:
        raise ValueError("m must be positive")
    if m < 13:
        return LowerBoundResult(m, direct_lower_bound(alpha, m), "direct")
    return LowerBoundResult(m, asymptotic_lower_bound(baker, m, prec),
                            "asymptotic")
