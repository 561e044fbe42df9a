"""Exact algebraic numbers with certified labeled embeddings.

An AlgebraicNumber is an exact primitive integer minimal polynomial plus
certified root balls for all conjugates and the index of the conjugate the
value denotes. Root balls come from high-precision numeric roots wrapped in
the a-posteriori bound

    min_i |z - r_i| <= deg(p) |p(z) / p'(z)|,

which certifies one root per ball once the balls are pairwise disjoint.

Numeric-to-exact conversion is rational reconstruction (continued-fraction
convergents with a denominator cap) followed by an exact polynomial
identity check, so no numeric artifact is ever trusted on its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from gmpy2 import mpq

from . import exactpoly as xp
from .balls import ComplexBall, PrecisionError, RealBall

HEIGHT_TARGET_RADIUS = Fraction(1, 10**6)
RECON_LADDER_CAP = 4096


class ReconstructionError(RuntimeError):
    """Numeric-to-exact conversion failed at the maximum precision."""


# ---------------------------------------------------------------------------
# certified root balls of integer polynomials
# ---------------------------------------------------------------------------


def _mpf_to_fraction(x) -> Fraction:
    # read the dyadic mantissa/exponent directly; reconstructing through
    # mpmath.mpf(x) would re-round at the ambient 53-bit precision
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return Fraction(0)
    val = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -val if sign else val


def _coeff_bits(coeffs) -> int:
    return max(abs(int(c)).bit_length() for c in coeffs if c != 0)


def roots_of_int_poly(coeffs, prec: int, max_rounds: int = 6):
    """Certified, pairwise disjoint root balls, sorted by midpoint
    (re, im); radii at most 2^(-prec/2)."""
    coeffs = xp.normalize(coeffs)
    deg = xp.degree(coeffs)
    if deg < 1:
        raise ValueError("constant polynomial has no roots")
    dcoeffs = xp.derivative(coeffs)
    work = prec
    for _ in range(max_rounds):
        balls = _try_root_balls(coeffs, dcoeffs, deg, work, prec)
        if balls is not None:
            balls.sort(key=lambda b: (mpq(b.mid.real), mpq(b.mid.imag)))
            return balls
        work *= 2
    raise PrecisionError(f"could not certify roots of degree-{deg} polynomial")


def _try_root_balls(coeffs, dcoeffs, deg, work, prec):
    with mpmath.workprec(work + _coeff_bits(coeffs) + 64):
        try:
            approx = mpmath.polyroots(
                [mpmath.mpf(int(c)) for c in reversed(coeffs)],
                maxsteps=200, extraprec=work // 2,
            )
        except mpmath.libmp.libhyper.NoConvergence:
            return None
    balls = []
    for z in approx:
        re = z.real if hasattr(z, "imag") else z
        im = z.imag if hasattr(z, "imag") else mpmath.mpf(0)
        center = ComplexBall.exact(
            _mpf_to_fraction(re), _mpf_to_fraction(im), work
        )
        num = abs(_eval_int_poly(coeffs, center))
        den = abs(_eval_int_poly(dcoeffs, center))
        if not den.is_positive():
            return None
        rad = ((num / den) * RealBall.exact(deg, work)).upper()
        balls.append(ComplexBall(center.mid, rad, work))
    target = RealBall.exact(1, work) / (RealBall.exact(2, work) ** (prec // 2))
    for b in balls:
        if not RealBall.from_endpoints(b.rad, b.rad, work).certainly_lt(target):
            return None
    for i, b in enumerate(balls):
        for c in balls[i + 1:]:
            if not b.is_disjoint(c):
                return None
    return balls


def _eval_int_poly(coeffs, z: ComplexBall) -> ComplexBall:
    acc = ComplexBall.exact(0, 0, z.prec)
    for c in reversed(coeffs):
        acc = acc * z + ComplexBall.exact(int(c), 0, z.prec)
    return acc


# ---------------------------------------------------------------------------
# algebraic numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraicNumber:
    """Exact algebraic number: primitive irreducible integer minimal
    polynomial, certified embeddings of all conjugates, designated index."""

    minpoly: tuple[int, ...]
    embeddings: tuple[ComplexBall, ...]
    index: int

    @property
    def degree(self) -> int:
        return xp.degree(self.minpoly)

    @property
    def leading_coefficient(self) -> int:
        return int(self.minpoly[-1])

    def ball(self) -> ComplexBall:
        return self.embeddings[self.index]

    @property
    def prec(self) -> int:
        return self.ball().prec

    def at_precision(self, prec: int) -> "AlgebraicNumber":
        if prec <= self.prec:
            return self
        fresh = roots_of_int_poly(self.minpoly, prec)
        order = _match_balls(self.embeddings, fresh)
        new_embeddings = tuple(fresh[order[i]] for i in range(len(fresh)))
        return AlgebraicNumber(self.minpoly, new_embeddings, self.index)


def _match_balls(old, new):
    """Map old embedding order onto refined balls by unique overlap."""
    mapping = {}
    for i, ob in enumerate(old):
        hits = [j for j, nb in enumerate(new) if nb.overlaps(ob)]
        if len(hits) != 1:
            raise PrecisionError("embedding refinement ambiguous")
        mapping[i] = hits[0]
    if len(set(mapping.values())) != len(old):
        raise PrecisionError("embedding refinement not a bijection")
    return mapping


def algebraic_from_minpoly(coeffs, prec: int, select_ball: ComplexBall
                           ) -> AlgebraicNumber:
    """Algebraic number for the root of ``coeffs`` inside select_ball."""
    _, prim = xp.content_primitive(coeffs)
    if not xp.is_irreducible_int_poly(prim):
        raise ValueError("minimal polynomial must be irreducible")
    roots = roots_of_int_poly(prim, prec)
    hits = [i for i, r in enumerate(roots) if r.overlaps(select_ball)]
    if len(hits) != 1:
        raise PrecisionError("root selection ambiguous; refine the input ball")
    return AlgebraicNumber(prim, tuple(roots), hits[0])


def algebraic_integer_root(coeffs, prec: int, index: int,
                           embeddings) -> AlgebraicNumber:
    return AlgebraicNumber(xp.content_primitive(coeffs)[1],
                           tuple(embeddings), index)


# ---------------------------------------------------------------------------
# heights
# ---------------------------------------------------------------------------


def height(alpha: AlgebraicNumber, target_radius=HEIGHT_TARGET_RADIUS
           ) -> RealBall:
    """Logarithmic height (1/d)(log|lead| + sum log max(1, |conj|)),
    refined until the ball radius is below target_radius."""
    a = alpha
    while True:
        prec = a.prec
        acc = RealBall.exact(abs(a.leading_coefficient), prec).log()
        for ball in a.embeddings:
            acc = acc + abs(ball).log_plus()
        h = acc * RealBall.exact(Fraction(1, a.degree), prec)
        rad_ball = RealBall.from_endpoints(h.rad, h.rad, prec)
        if rad_ball.certainly_lt(RealBall.exact(target_radius, prec)):
            return h
        if prec >= 1 << 16:
            raise PrecisionError("height refinement exhausted")
        a = a.at_precision(prec * 2)


def mahler_measure(alpha: AlgebraicNumber) -> RealBall:
    """|lead| * prod max(1, |conj|); exp(d * height) up to ball width."""
    prec = alpha.prec
    acc = RealBall.exact(abs(alpha.leading_coefficient), prec)
    for ball in alpha.embeddings:
        m = abs(ball)
        one = RealBall.exact(1, prec)
        lo, hi = m.lower(), m.upper()
        clipped = RealBall.from_endpoints(max(lo, one.mid), max(hi, one.mid), prec)
        acc = acc * clipped
    return acc


# ---------------------------------------------------------------------------
# conjugate labeling for the class-polynomial cubics
# ---------------------------------------------------------------------------


def label_conjugates(hilbert_coeffs, prec: int
                     ) -> tuple[AlgebraicNumber, AlgebraicNumber, AlgebraicNumber]:
    """Cubic conjugate triple: index 0 real dominant, index 1 with
    Im > 0, index 2 its complex conjugate."""
    coeffs = xp.normalize(hilbert_coeffs)
    if xp.degree(coeffs) != 3:
        raise ValueError("labeling expects a cubic polynomial")
    if xp.discriminant(coeffs) > 0:
        raise ValueError("cubic has three real roots; no complex pair to label")
    work = prec
    while True:
        roots = roots_of_int_poly(coeffs, work)
        real = [r for r in roots if r.imag().contains_zero()]
        plus = [r for r in roots if r.imag().is_positive()]
        minus = [r for r in roots if r.imag().is_negative()]
        if len(real) == 1 and len(plus) == 1 and len(minus) == 1:
            ordered = (real[0], plus[0], minus[0])
            if abs(ordered[0]).certainly_gt(abs(ordered[1])):
                _, prim = xp.content_primitive(coeffs)
                return tuple(
                    AlgebraicNumber(prim, ordered, i) for i in range(3)
                )
        work *= 2
        if work > 1 << 16:
            raise PrecisionError("conjugate labeling did not separate roots")


# ---------------------------------------------------------------------------
# rational reconstruction and ball linear algebra
# ---------------------------------------------------------------------------


def reconstruct_fraction(ball: RealBall, max_den: int) -> Fraction | None:
    """Best continued-fraction approximation with bounded denominator,
    accepted only if it lies inside the ball."""
    mid = Fraction(int(mpq(ball.mid).numerator), int(mpq(ball.mid).denominator))
    cand = mid.limit_denominator(max_den)
    if ball.contains(cand):
        return cand
    return None


def reconstruct_real_coefficient(ball: ComplexBall, max_den: int
                                 ) -> Fraction | None:
    if not ball.imag().contains_zero():
        return None
    return reconstruct_fraction(ball.real(), max_den)


def solve_linear_ball(matrix, rhs):
    """Gaussian elimination with certified ball arithmetic; raises
    PrecisionError when a pivot cannot be certified nonzero."""
    n = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv, piv_mag = None, None
        for r in range(col, n):
            mag = abs(a[r][col])
            if mag.is_positive():
                m = mag.lower()
                if piv is None or m > piv_mag:
                    piv, piv_mag = r, m
        if piv is None:
            raise PrecisionError("singular or undecidable pivot in ball solve")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col:
                f = a[r][col]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# Galois orbit pairing y = P(x)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitPairing:
    """The 3-element Galois orbit of (x, y): y_i = P(x_i) with rational P.

    x and y are partner-ordered triples: y[i] is the partner of x[i];
    x[0], y[0] real, x[2] = conj(x[1]), y[2] = conj(y[1]).
    ``swapped`` records whether y[1] is the Im < 0 member of the y-pair.
    """

    x: tuple[AlgebraicNumber, AlgebraicNumber, AlgebraicNumber]
    y: tuple[AlgebraicNumber, AlgebraicNumber, AlgebraicNumber]
    relator: tuple[Fraction, ...]
    swapped: bool

    def hx(self):
        return self.x[0].minpoly

    def hy(self):
        return self.y[0].minpoly


def pair_orbit(x_triple, y_triple, prec_start: int = 1024,
               prec_cap: int = RECON_LADDER_CAP) -> OrbitPairing:
    """Find the rational relator P of degree <= 2 with y_i = P(x_i) and
    verify H_y(P(t)) = 0 mod H_x(t) exactly."""
    hx = x_triple[0].minpoly
    hy = y_triple[0].minpoly
    prec = prec_start
    while True:
        xs = [a.at_precision(prec) for a in x_triple]
        ys = [a.at_precision(prec) for a in y_triple]
        for swapped in (False, True):
            order = (0, 2, 1) if swapped else (0, 1, 2)
            try:
                relator = _solve_relator(xs, [ys[i] for i in order], prec)
            except PrecisionError:
                relator = None
            if relator is None:
                continue
            check = xp.compose_mod(
                tuple(Fraction(c) for c in hy), relator,
                tuple(Fraction(c) for c in hx),
            )
            if xp.normalize(check) != (0,):
                continue
            y_part = tuple(ys[i] for i in order)
            for xi, yi in zip(xs, y_part):
                pball = eval_q_poly(relator, xi.ball())
                if not pball.overlaps(yi.ball()):
                    raise PrecisionError("verified relator mismatches balls")
            return OrbitPairing(tuple(xs), y_part, relator, swapped)
        if prec >= prec_cap:
            raise ReconstructionError(
                "no rational relator found; the two cubic fields differ"
            )
        prec *= 2


def _solve_relator(xs, ys, prec):
    matrix = [[ComplexBall.exact(1, 0, prec), x.ball(), x.ball() ** 2]
              for x in xs]
    rhs = [y.ball() for y in ys]
    sol = solve_linear_ball(matrix, rhs)
    max_den = 1 << max(16, prec // 4)
    coeffs = []
    for ball in sol:
        f = reconstruct_real_coefficient(ball, max_den)
        if f is None:
            return None
        coeffs.append(f)
    return xp.normalize(tuple(coeffs))


def eval_q_poly(coeffs, z: ComplexBall) -> ComplexBall:
    acc = ComplexBall.exact(0, 0, z.prec)
    for c in reversed(coeffs):
        acc = acc * z + ComplexBall.exact(Fraction(c), 0, z.prec)
    return acc


# ---------------------------------------------------------------------------
# ratios, powers, products of algebraic numbers (resultant elimination)
# ---------------------------------------------------------------------------


def _select_vanishing_factor(int_poly, target_ball):
    """The unique irreducible factor whose ball evaluation contains zero;
    every other factor must certifiably not vanish on the ball."""
    factors = [f for f, _ in xp.factor_int_poly(int_poly)]
    hits = []
    for fac in factors:
        if _eval_int_poly(fac, target_ball).contains_zero():
            hits.append(fac)
    if len(hits) == 1:
        return hits[0]
    raise PrecisionError("factor selection ambiguous; refine the target ball")


def conjugate_ratio(u: AlgebraicNumber, v: AlgebraicNumber) -> AlgebraicNumber:
    """Exact u/v for two conjugates sharing a minimal polynomial.

    The candidate minimal polynomial divides Res_x(H(x), H(t x)), whose
    roots are exactly the conjugate ratios.
    """
    if u.minpoly != v.minpoly:
        raise ValueError("conjugate_ratio expects conjugates of one polynomial")
    if v.ball().contains_zero():
        raise ZeroDivisionError("denominator ball contains zero")
    h = u.minpoly
    ratio_poly = _ratio_resultant(h)
    prec = max(u.prec, 512)
    while True:
        uu, vv = u.at_precision(prec), v.at_precision(prec)
        target = uu.ball() / vv.ball()
        try:
            fac = _select_vanishing_factor(ratio_poly, target)
            return algebraic_from_minpoly(fac, prec, target)
        except PrecisionError:
            if prec >= RECON_LADDER_CAP * 4:
                raise
            prec *= 2


def _ratio_resultant(h) -> tuple[int, ...]:
    import sympy

    x, t = sympy.symbols("x t")
    hx = sum(int(c) * x ** i for i, c in enumerate(h))
    htx = sum(int(c) * (t * x) ** i for i, c in enumerate(h))
    res = sympy.Poly(sympy.resultant(hx, htx, x), t)
    return xp.content_primitive(tuple(int(c) for c in reversed(res.all_coeffs())))[1]


def product_algebraic(a: AlgebraicNumber, b: AlgebraicNumber) -> AlgebraicNumber:
    """Exact a*b via Res_x(A(x), x^degB B(t/x))."""
    import sympy

    x, t = sympy.symbols("x t")
    ax = sum(int(c) * x ** i for i, c in enumerate(a.minpoly))
    m = xp.degree(b.minpoly)
    bx = sum(int(c) * t ** i * x ** (m - i) for i, c in enumerate(b.minpoly))
    res = sympy.Poly(sympy.resultant(ax, bx, x), t)
    prod_poly = xp.content_primitive(
        tuple(int(c) for c in reversed(res.all_coeffs())))[1]
    prec = max(a.prec, b.prec, 512)
    aa, bb = a.at_precision(prec), b.at_precision(prec)
    target = aa.ball() * bb.ball()
    fac = _select_vanishing_factor(prod_poly, target)
    return algebraic_from_minpoly(fac, prec, target)


def inverse_algebraic(a: AlgebraicNumber) -> AlgebraicNumber:
    """Exact 1/a; minimal polynomial is the reversed coefficient tuple."""
    if a.ball().contains_zero():
        raise ZeroDivisionError("cannot invert zero")
    rev = xp.content_primitive(tuple(reversed(a.minpoly)))[1]
    prec = max(a.prec, 512)
    aa = a.at_precision(prec)
    return algebraic_from_minpoly(rev, prec, aa.ball().inverse())


def power_minimal_poly(x: AlgebraicNumber, n: int) -> tuple:
    """Minimal polynomial of x^n via exact quotient-ring linear algebra
    (the characteristic-polynomial route of resultant elimination)."""
    hq = tuple(Fraction(c, x.minpoly[-1]) for c in x.minpoly)  # monic over Q
    z = xp.pow_mod((Fraction(0), Fraction(1)), n, hq)
    return xp.minimal_poly_in_quotient(z, hq)


def degree_of_power(x: AlgebraicNumber, n: int) -> int:
    if not 1 <= n <= 50:
        raise ValueError("power degree check is a desk-scale tool; n <= 50")
    return xp.degree(power_minimal_poly(x, n))


def is_root_of_unity(alpha: AlgebraicNumber) -> bool:
    """Cyclotomic comparison of the exact minimal polynomial."""
    return xp.cyclotomic_order(alpha.minpoly) is not None
