"""Certified nonvanishing of the collinearity determinant.

Each residual pair (m, n) is checked twice:

* ball route: det[[1, x_i^m, y_i^n]] evaluated with certified complex
  balls; zero excluded when |center| > radius. Rows 2 and 3 are complex
  conjugates, so the determinant is purely imaginary; the real part ball
  must contain zero (sanity) while the modulus certifies nonvanishing.
* exact route: the determinant as an element of Q[t]/(M(t)) through the
  theta-expressions, then the field norm Res_t(M, D) as an exact rational;
  a nonzero norm certifies nonvanishing unconditionally and is the
  authoritative verdict (a nonzero element has no vanishing conjugate).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import exactpoly as xp
from .balls import ComplexBall
from .bounds import CaseData, MasterBound, PositivityThresholds, residual_set
from .localfield import SplittingField
from .numfield import eval_q_poly

BALL_PREC_START = 256
BALL_PREC_CAP = 4096


@dataclass(frozen=True)
class NonvanishingCheck:
    m: int
    n: int
    ball: ComplexBall
    ball_nonzero: bool
    norm: Fraction
    norm_nonzero: bool
    consistent: bool
    prec_used: int

    @property
    def verdict_nonzero(self) -> bool:
        # exact route is authoritative; ball route is the fast pre-filter
        return self.norm_nonzero and self.ball_nonzero


def determinant_ball(case: CaseData, m: int, n: int,
                     prec: int = BALL_PREC_START) -> ComplexBall:
    """Ball containing det[[1, x_i^m, y_i^n], i = 1..3]."""
    xs = [a.at_precision(prec) for a in case.pairing.x]
    ys = [a.at_precision(prec) for a in case.pairing.y]
    xm = [a.ball() ** m for a in xs]
    yn = [a.ball() ** n for a in ys]
    det = (xm[1] * yn[2] - xm[2] * yn[1]
           - (xm[0] * yn[2] - xm[2] * yn[0])
           + (xm[0] * yn[1] - xm[1] * yn[0]))
    return det


def determinant_ball_certified(case: CaseData, m: int, n: int):
    """Escalate precision until zero is excluded; returns (ball, prec) or
    (widest ball, cap) when undecided (exact route then decides)."""
    prec = BALL_PREC_START
    while True:
        ball = determinant_ball(case, m, n, prec)
        if not ball.real().contains_zero():
            raise RuntimeError(
                "determinant real part certified nonzero; conjugate rows "
                "were mislabeled")
        if ball.is_nonzero():
            return ball, prec
        if prec >= BALL_PREC_CAP:
            return ball, prec
        prec *= 2


def determinant_exact(sf: SplittingField, m: int, n: int):
    """The determinant as an exact element of Q[t]/(M), and its norm."""
    m_q = tuple(Fraction(c) for c in sf.min_poly)
    xm = [xp.pow_mod(e, m, m_q) for e in sf.x_exprs]
    yn = [xp.pow_mod(e, n, m_q) for e in sf.y_exprs]

    def mm(a, b):
        return xp.mul_mod(a, b, m_q)

    det = xp.add(
        xp.sub(mm(xm[1], yn[2]), mm(xm[2], yn[1])),
        xp.add(
            xp.neg(xp.sub(mm(xm[0], yn[2]), mm(xm[2], yn[0]))),
            xp.sub(mm(xm[0], yn[1]), mm(xm[1], yn[0])),
        ),
    )
    det = xp.poly_mod(det, m_q)
    norm = xp.resultant(m_q, det) if xp.normalize(det) != (0,) else Fraction(0)
    return det, norm


def exact_norm_check(sf: SplittingField, m: int, n: int) -> Fraction:
    """Nonzero rational norm of the determinant; raises if it vanishes."""
    _, norm = determinant_exact(sf, m, n)
    if norm == 0:
        raise ArithmeticError(f"determinant norm vanishes at (m, n) = ({m}, {n})")
    return norm


def check_pair(case: CaseData, sf: SplittingField, m: int, n: int
               ) -> NonvanishingCheck:
    """Run both certification routes and their consistency check."""
    ball, prec = determinant_ball_certified(case, m, n)
    det_poly, norm = determinant_exact(sf, m, n)

    # consistency: the product of the determinant over all embeddings is
    # the norm; evaluate the exact element on every theta ball
    prod = ComplexBall.exact(1, 0, sf.prec)
    for theta in sf.theta_balls:
        prod = prod * eval_q_poly(det_poly, theta)
    consistent = (prod.imag().contains_zero()
                  and prod.real().contains(norm))
    return NonvanishingCheck(
        m=m, n=n, ball=ball, ball_nonzero=ball.is_nonzero(),
        norm=norm, norm_nonzero=(norm != 0),
        consistent=consistent, prec_used=prec,
    )


@dataclass(frozen=True)
class CaseVerdict:
    case_id: int
    verdict: str  # "PROVEN" or "INCOMPLETE"
    failing_stage: str | None
    checks: tuple


def close_case(case: CaseData, sf: SplittingField, master: MasterBound,
               thresholds: PositivityThresholds, rows, residual
               ) -> CaseVerdict:
    """PROVEN iff the large-exponent contradiction holds, the table plus
    the p-adic bound reduce to exactly the given residual set, and every
    residual pair passes both nonvanishing routes."""
    if not master.contradiction:
        return CaseVerdict(case.case_id, "INCOMPLETE",
                           "master bound: no contradiction for m >= 13", ())
    recomputed = residual_set(case, rows)
    if list(residual) != recomputed:
        return CaseVerdict(case.case_id, "INCOMPLETE",
                           "residual set mismatch with table + p-adic bound",
                           ())
    checks = []
    for m, n in residual:
        chk = check_pair(case, sf, m, n)
        checks.append(chk)
        if not chk.verdict_nonzero:
            return CaseVerdict(case.case_id, "INCOMPLETE",
                               f"determinant check failed at (m, n) = ({m}, {n})",
                               tuple(checks))
        if not chk.consistent:
            return CaseVerdict(case.case_id, "INCOMPLETE",
                               f"ball/exact routes inconsistent at ({m}, {n})",
                               tuple(checks))
    return CaseVerdict(case.case_id, "PROVEN", None, tuple(checks))
