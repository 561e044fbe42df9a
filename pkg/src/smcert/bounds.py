"""The archimedean inequality pipeline: denominator positivity, the master
bound on n, the per-exponent constant table and the residual pair set.

All predicates are evaluated on certified ball edges. The collinearity
rearrangement bounds

    |x1/x2|^(-m) |y1/y2|^n  <=  (2 + |x3/x1|^m) / (|1 - beta^m| - |y3/y1|^n)

uniformly in n >= 1, since |y3/y2| = 1 exactly. For m >= 13 the
denominator is controlled by the two-logarithm lower bound with m replaced
by the p-adic exponent ceiling b(n) = e log(n)/log(p) + v0.

Tail certification: every "for all n > N" claim is closed by a discrete
derivative bound making the defining quantity monotone beyond an explicit
n, plus one certified evaluation there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .balls import ComplexBall, PrecisionError, RealBall
from .lmn import BakerConstant, direct_lower_bound
from .localfield import ValuationPattern
from .numfield import AlgebraicNumber, OrbitPairing

DEFAULT_PREC = 192
HARD_CAP = 10 ** 9

_F = Fraction


@dataclass(frozen=True)
class CaseData:
    """Everything the inequality pipeline consumes for one discriminant
    pair, with certified ratio moduli."""

    case_id: int
    pairing: OrbitPairing
    pattern: ValuationPattern
    beta: AlgebraicNumber   # x3/x2, |beta| = 1
    alpha: AlgebraicNumber  # y3/y2, |alpha| = 1
    log_x12: RealBall       # log |x1/x2| > 0
    log_y12: RealBall       # log |y1/y2| > 0
    mod_x31: RealBall       # |x3/x1| < 1
    mod_y31: RealBall       # |y3/y1| < 1
    ball_y31: ComplexBall   # y3/y1 as a complex ball
    baker: BakerConstant
    prec: int = DEFAULT_PREC

    def exponent_ceiling(self, n: int) -> RealBall:
        """b(n) = e log(n)/log(p) + v0 from the valuation pattern."""
        prec = self.prec
        pat = self.pattern
        log_n = RealBall.exact(n, prec).log() if n > 1 else RealBall.exact(0, prec)
        log_p = RealBall.exact(pat.p, prec).log()
        return (RealBall.exact(pat.e, prec) * log_n / log_p
                + RealBall.exact(pat.v0, prec))


def build_case_data(case_id, pairing, pattern, beta, alpha, baker,
                    prec: int = DEFAULT_PREC) -> CaseData:
    xprec = [a.at_precision(max(prec, 256)) for a in pairing.x]
    yprec = [a.at_precision(max(prec, 256)) for a in pairing.y]
    x1, x2, x3 = (a.ball() for a in xprec)
    y1, y2, y3 = (a.ball() for a in yprec)
    log_x12 = abs(x1 / x2).log()
    log_y12 = abs(y1 / y2).log()
    mod_x31 = abs(x3 / x1)
    ball_y31 = y3 / y1
    mod_y31 = abs(ball_y31)
    data = CaseData(case_id, pairing, pattern, beta, alpha,
                    log_x12, log_y12, mod_x31, mod_y31, ball_y31, baker, prec)
    if not log_x12.is_positive() or not log_y12.is_positive():
        raise PrecisionError("dominance ratios not certified > 1")
    one = RealBall.exact(1, prec)
    if not mod_x31.certainly_lt(one) or not mod_y31.certainly_lt(one):
        raise PrecisionError("small ratios not certified < 1")
    if not abs(y3 / y2).contains(1):
        raise PrecisionError("|y3/y2| ball lost the exact value 1")
    return data


# ---------------------------------------------------------------------------
# denominator of the collinearity rearrangement
# ---------------------------------------------------------------------------


def denominator_direct_ball(case: CaseData, m: int, n: int,
                            prec: int | None = None) -> RealBall:
    """|1 - (y3/y1)^n - (x3/x2)^m| by direct ball evaluation."""
    prec = prec or case.prec
    beta = case.beta.at_precision(prec)
    one = ComplexBall.exact(1, 0, prec)
    return abs(one - (case.ball_y31 ** n) - (beta.ball() ** m))


def denominator_lower_bound(case: CaseData, m: int, n: int,
                            thresholds: "PositivityThresholds | None" = None):
    """Certified positive lower bound for the denominator, or None.

    For n beyond the strong positivity threshold the asymptotic form
    0.98 exp(-c1 (log b(n))^2) applies on the m >= 13 branch; otherwise a
    direct ball evaluation decides.
    """
    if m >= 13:
        thresholds = thresholds or positivity_thresholds(case)
        if n > thresholds.strong:
            return asymptotic_denominator_bound(case, n)
        return None
    ball = denominator_direct_ball(case, m, n)
    if ball.is_positive():
        lo = ball.lower()
        return RealBall.from_endpoints(lo, lo, case.prec)
    return None


def asymptotic_denominator_bound(case: CaseData, n: int) -> RealBall:
    """0.98 exp(-c1 (log b(n))^2) with the conservative c1."""
    prec = case.prec
    log_b = case.exponent_ceiling(n).log()
    c1 = case.baker.c1_conservative()
    return (RealBall.exact(_F(98, 100), prec)
            * (-(c1 * log_b * log_b)).exp())


# ---------------------------------------------------------------------------
# tail-certified threshold search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PositivityThresholds:
    """weak: denominator certified positive for every n > weak;
    strong: the 0.98-form bound holds for every n > strong."""

    weak: int
    strong: int
    monotone_from: int


def _psi(case: CaseData, n: int, log_const: RealBall) -> RealBall:
    """n |log t| - c1 (log b(n))^2 + log_const, t = |y3/y1|."""
    prec = case.prec
    c1 = case.baker.c1_conservative()
    log_b = case.exponent_ceiling(n).log()
    # |log t| = log |y1/y3| = log |y1/y2| exactly (|y2| = |y3|)
    slope = case.log_y12
    return (RealBall.exact(n, prec) * slope - c1 * log_b * log_b + log_const)


def _monotone_from(case: CaseData, extra_slope: RealBall | None = None) -> int:
    """First n with a certified positive discrete derivative of psi (or of
    the master gap when extra_slope = log|x1/x2| is supplied):

    psi(n+1) - psi(n) >= slope - db (A_x + 2 c1 log b(n+1) / b(n)),
    db = e/(n log p) >= b(n+1) - b(n).

    The loss term is decreasing in n (db ~ 1/n dominates the slowly
    varying log b(n+1)/b(n) factor for p >= 11, b >= 2), so one certified
    n makes psi nondecreasing on [n, inf).
    """
    prec = case.prec
    pat = case.pattern
    c1 = case.baker.c1_conservative()
    slope = case.log_y12
    ax = extra_slope if extra_slope is not None else RealBall.exact(0, prec)
    log_p = RealBall.exact(pat.p, prec).log()
    e_over_logp = RealBall.exact(pat.e, prec) / log_p
    n = 16
    while n < HARD_CAP:
        b_next = case.exponent_ceiling(n + 1)
        db = e_over_logp / RealBall.exact(n, prec)
        loss = db * (ax + RealBall.exact(2, prec) * c1 * b_next.log()
                     / case.exponent_ceiling(n))
        if slope.certainly_gt(loss):
            return n
        n *= 2
    raise RuntimeError("no monotonicity threshold below the hard cap")


def _first_certified_positive(case: CaseData, func, lo: int) -> int:
    """Smallest n >= lo with func(n) certified positive, given func is
    nondecreasing on [lo, inf); doubling then binary search."""
    hi = lo
    while not func(hi).is_positive():
        hi *= 2
        if hi > HARD_CAP:
            raise RuntimeError("positivity never certified below hard cap")
    lo_edge = lo
    while lo_edge < hi:
        mid = (lo_edge + hi) // 2
        if func(mid).is_positive():
            hi = mid
        else:
            lo_edge = mid + 1
    return lo_edge


def positivity_thresholds(case: CaseData) -> PositivityThresholds:
    """Certified n-thresholds for the denominator positivity claims under
    the m >= 13 branch (m replaced by the exponent ceiling b(n))."""
    prec = case.prec
    n2 = _monotone_from(case)
    log_99 = RealBall.exact(_F(99, 100), prec).log()
    weak = _first_certified_positive(
        case, lambda n: _psi(case, n, log_99), n2)
    log_001 = -RealBall.exact(100, prec).log()
    strong = _first_certified_positive(
        case, lambda n: _psi(case, n, log_001), n2)
    return PositivityThresholds(weak=weak - 1, strong=strong - 1,
                                monotone_from=n2)


# ---------------------------------------------------------------------------
# master bound on n (and the implied exponent ceiling)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MasterBound:
    n_max: int
    m_implied: int
    contradiction: bool  # the m >= 13 assumption collapses
    monotone_from: int


def _master_gap(case: CaseData, n: int) -> RealBall:
    """n log|y1/y2| - b(n) log|x1/x2| - log((2 + |x3/x1|)/0.98)
    - c1 (log b(n))^2; positive once collinearity is impossible."""
    prec = case.prec
    c1 = case.baker.c1_conservative()
    b = case.exponent_ceiling(n)
    log_b = b.log()
    num_hi = RealBall.exact(2, prec) + case.mod_x31
    k_const = (num_hi / RealBall.exact(_F(98, 100), prec)).log()
    return (RealBall.exact(n, prec) * case.log_y12
            - b * case.log_x12 - k_const - c1 * log_b * log_b)


def master_n_bound(case: CaseData) -> MasterBound:
    """Largest n compatible with the master inequality on the m >= 13
    branch, by certified monotone bisection; also the exponent ceiling it
    implies through the p-adic bound."""
    n2 = _monotone_from(case, extra_slope=case.log_x12)
    first_violated = _first_certified_positive(
        case, lambda n: _master_gap(case, n), n2)
    n_max = first_violated - 1
    if first_violated <= n2:
        # monotonicity starts at n2; walk down explicitly
        n = n2 - 1
        while n >= 1 and _master_gap(case, n).is_positive():
            n -= 1
        n_max = n
    m_implied = case.exponent_ceiling(max(n_max, 1)).floor_upper()
    return MasterBound(n_max=n_max, m_implied=m_implied,
                       contradiction=m_implied < 13, monotone_from=n2)


# ---------------------------------------------------------------------------
# the c2 table for m < 13 and the residual pair set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundTableRow:
    m: int
    c2: RealBall
    n_max: int
    eliminated: bool  # removed by the p-adic exponent bound


def c2_table(case: CaseData) -> list[BoundTableRow]:
    """Certified c2(m) = (2 + |x3/x1|^m)/(|1 - beta^m| - |y3/y1|) and the
    induced ceiling n_max(m), rows m = 1..12."""
    prec = case.prec
    rows = []
    for m in range(1, 13):
        numer = RealBall.exact(2, prec) + case.mod_x31 ** m
        denom_ball = direct_lower_bound(case.beta, m) - case.mod_y31
        if not denom_ball.is_positive():
            raise PrecisionError(f"c2 denominator not certified positive, m={m}")
        c2 = numer / denom_ball
        ratio = (c2.log() + RealBall.exact(m, prec) * case.log_x12) / case.log_y12
        n_max = ratio.floor_upper()
        if n_max < 1:
            n_max = 1
        eliminated = RealBall.exact(m, prec).certainly_gt(
            case.exponent_ceiling(n_max))
        rows.append(BoundTableRow(m=m, c2=c2, n_max=n_max,
                                  eliminated=eliminated))
    return rows


def residual_set(case: CaseData, rows: list[BoundTableRow] | None = None
                 ) -> list[tuple[int, int]]:
    """Surviving (m, n) pairs after the p-adic row elimination."""
    rows = rows if rows is not None else c2_table(case)
    out = []
    for row in rows:
        if row.eliminated:
            continue
        for n in range(1, row.n_max + 1):
            out.append((row.m, n))
    return out
