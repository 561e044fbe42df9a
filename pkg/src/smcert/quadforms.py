"""Reduced binary quadratic forms, certified j-values, class polynomials.

The j-function is evaluated at CM points tau = (-b + sqrt(D))/(2a) through
the weight-4 Eisenstein series and the discriminant cusp form,

    j(tau) = E4(q)^3 / Delta(q),      q = e^{2 pi i tau},

both computed as certified balls with elementary tail bounds:

* E4(q) = 1 + 240 sum sigma_3(n) q^n, with sigma_3(n) < zeta(3) n^3 and a
  ratio test closing the geometric tail;
* Delta(q) = q prod (1 - q^n)^24, with |log prod_{n>N}| <= 24 r^{N+1}/(1-r)^2
  turning the truncated product into a multiplicative error factor.

Class polynomial coefficients are obtained from the ball product
prod (X - j(tau_i)) and accepted only when every coefficient ball contains
exactly one integer; otherwise the precision doubles up to a cap.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .balls import ComplexBall, PrecisionError, RealBall

DEFAULT_PREC = 256
PREC_CAP = 4096

# zeta(3) = 1.2020569...; any rational upper bound keeps the tail rigorous
_ZETA3_UP = Fraction(121, 100)


@dataclass(frozen=True)
class Discriminant:
    """Negative discriminant, == 0 or 1 mod 4."""

    value: int

    def __post_init__(self):
        v = self.value
        if not isinstance(v, int) or v >= 0 or v % 4 not in (0, 1):
            raise ValueError(f"invalid discriminant {v!r}")

    def __int__(self) -> int:
        return self.value


def _as_disc(disc) -> Discriminant:
    return disc if isinstance(disc, Discriminant) else Discriminant(int(disc))


@dataclass(frozen=True)
class QuadraticForm:
    """Reduced primitive positive-definite form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def reduced_forms(disc) -> list[QuadraticForm]:
    """All reduced primitive forms of the given discriminant, sorted by
    (a, b). The count is the class number."""
    d = _as_disc(disc).value
    forms = []
    a_max = math.isqrt(-d // 3)
    for a in range(1, a_max + 1):
        for b in range(-a, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            if (abs(b) == a or a == c) and b < 0:
                continue
            forms.append(QuadraticForm(a, b, c))
    forms.sort(key=lambda f: (f.a, f.b))
    return forms


def class_number(disc) -> int:
    return len(reduced_forms(disc))


# ---------------------------------------------------------------------------
# q-expansion coefficients (exact integers, generated, not transcribed)
# ---------------------------------------------------------------------------


def _sigma3_table(n: int) -> list[int]:
    sig = [0] * (n + 1)
    for d in range(1, n + 1):
        d3 = d * d * d
        for k in range(d, n + 1, d):
            sig[k] += d3
    return sig


def _series_mul(f: list[int], g: list[int], n: int) -> list[int]:
    out = [0] * n
    for i, fi in enumerate(f[:n]):
        if fi == 0:
            continue
        for j, gj in enumerate(g[: n - i]):
            if gj:
                out[i + j] += fi * gj
    return out


def _series_pow(f: list[int], e: int, n: int) -> list[int]:
    result = [1] + [0] * (n - 1)
    base = list(f[:n]) + [0] * max(0, n - len(f))
    while e:
        if e & 1:
            result = _series_mul(result, base, n)
        e >>= 1
        if e:
            base = _series_mul(base, base, n)
    return result


def _series_inverse(f: list[int], n: int) -> list[int]:
    if f[0] != 1:
        raise ValueError("series inverse requires constant term 1")
    inv = [1] + [0] * (n - 1)
    for k in range(1, n):
        acc = 0
        for i in range(1, min(k, len(f) - 1) + 1):
            acc += f[i] * inv[k - i]
        inv[k] = -acc
    return inv


def _euler_series(n: int) -> list[int]:
    """prod (1 - q^k) mod q^n via the pentagonal number theorem."""
    out = [0] * n
    out[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 >= n and g2 >= n:
            break
        sign = -1 if k % 2 else 1
        if g1 < n:
            out[g1] += sign
        if g2 < n:
            out[g2] += sign
        k += 1
    return out


@functools.lru_cache(maxsize=8)
def j_q_coefficients(count: int) -> tuple[int, ...]:
    """First ``count`` coefficients of q*j(q): c(-1)=1, c(0)=744, c(1), ...

    Derived exactly as E4^3 / (Delta/q); used for cross-checks of the ball
    evaluator against the classical expansion.
    """
    n = count
    sig = _sigma3_table(n)
    e4 = [1] + [240 * sig[k] for k in range(1, n)]
    e4c = _series_pow(e4, 3, n)
    deltaq = _series_pow(_euler_series(n), 24, n)
    return tuple(_series_mul(e4c, _series_inverse(deltaq, n), n))


# ---------------------------------------------------------------------------
# certified evaluation of j at CM points
# ---------------------------------------------------------------------------


def _q_ball(form: QuadraticForm, prec: int) -> ComplexBall:
    """q = e^{2 pi i tau} for tau = (-b + sqrt(D))/(2a), D = disc < 0."""
    d = form.discriminant()
    if d >= 0:
        raise ValueError("form must be positive definite")
    pi = RealBall.pi(prec)
    sqrt_abs_d = RealBall.exact(-d, prec).sqrt()
    inv_a = RealBall.exact(Fraction(1, form.a), prec)
    re = -(pi * sqrt_abs_d * inv_a)
    im = -(pi * RealBall.exact(form.b, prec) * inv_a)
    return ComplexBall.from_parts(re, im).exp()


def _ratio_poly_tail(r: RealBall, n_terms: int, prec: int) -> RealBall:
    """Upper bound of sum_{n > N} n^3 r^n via the ratio test."""
    n1 = n_terms + 1
    rho = r * RealBall.exact(Fraction((n1 + 1) ** 3, n1 ** 3), prec)
    if not rho.certainly_lt(RealBall.exact(1, prec)):
        raise PrecisionError("series tail ratio not below 1")
    first = (r ** n1) * RealBall.exact(n1 ** 3, prec)
    return first / (RealBall.exact(1, prec) - rho)


def eval_j(form: QuadraticForm, prec: int = DEFAULT_PREC) -> ComplexBall:
    """Certified ball containing j((-b + sqrt(D))/(2a)).

    Raises PrecisionError if the requested radius 2^(-prec/2) cannot be
    certified, so callers can escalate the working precision.
    """
    q = _q_ball(form, prec)
    r_hi = abs(q).upper()
    r = RealBall.from_endpoints(r_hi, r_hi, prec)
    if not r.certainly_lt(RealBall.exact(1, prec)):
        raise PrecisionError("|q| not certified below 1")

    # series length from the target 2^-(prec+guard) at geometric rate |q|
    log2_r = float(r.log().upper()) / math.log(2)
    n_terms = max(8, int((prec + 96) / (-log2_r)) + 8)

    one = ComplexBall.exact(1, 0, prec)

    # E4 = 1 + 240 sum sigma_3(n) q^n  (Horner) + certified tail
    sig = _sigma3_table(n_terms)
    acc = ComplexBall.exact(0, 0, prec)
    for k in range(n_terms, 0, -1):
        acc = (acc + ComplexBall.exact(sig[k], 0, prec)) * q
    e4 = one + ComplexBall.exact(240, 0, prec) * acc
    zeta_up = RealBall.exact(_ZETA3_UP, prec)
    e4_tail = (RealBall.exact(240, prec) * zeta_up
               * _ratio_poly_tail(r, n_terms, prec))
    e4 = e4 + ComplexBall(ComplexBall.exact(0, 0, prec).mid,
                          e4_tail.upper(), prec)

    # Delta = q prod (1 - q^n)^24 with multiplicative remainder bound
    prod = one
    qn = one
    for _ in range(n_terms):
        qn = qn * q
        prod = prod * (one - qn)
    delta = q * (prod ** 24)
    one_minus_r = RealBall.exact(1, prec) - r
    eps = (RealBall.exact(24, prec) * (r ** (n_terms + 1))
           / (one_minus_r * one_minus_r))
    rem_rad = (eps.exp() - RealBall.exact(1, prec)).upper()
    remainder = ComplexBall(ComplexBall.exact(1, 0, prec).mid, rem_rad, prec)
    delta = delta * remainder

    jball = (e4 ** 3) / delta
    target = RealBall.exact(1, prec) / (RealBall.exact(2, prec) ** (prec // 2))
    if not (RealBall.from_endpoints(jball.rad, jball.rad, prec)
            .certainly_lt(target)):
        raise PrecisionError(
            f"j-value radius {jball.rad} above target 2^-{prec // 2}"
        )
    return jball


def singular_moduli_balls(disc, prec: int = DEFAULT_PREC) -> list[ComplexBall]:
    """Certified j(tau) balls, one per reduced form, in form order."""
    return [eval_j(f, prec) for f in reduced_forms(disc)]


# ---------------------------------------------------------------------------
# Hilbert class polynomials with certified integer rounding
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=32)
def hilbert_class_poly(disc_value: int, prec: int = DEFAULT_PREC,
                       prec_cap: int = PREC_CAP) -> tuple[int, ...]:
    """Monic integer class polynomial, coefficients ascending.

    Each coefficient ball must contain exactly one integer and its
    imaginary part must contain zero; on failure the precision doubles,
    up to ``prec_cap``.
    """
    disc = _as_disc(disc_value)
    p = prec
    while True:
        try:
            roots = singular_moduli_balls(disc, p)
            coeffs = _poly_coeffs_from_roots(roots)
        except PrecisionError:
            coeffs = None
        if coeffs is not None:
            return coeffs
        if p >= prec_cap:
            raise PrecisionError(
                f"ambiguous class polynomial rounding for {disc.value} "
                f"at cap {prec_cap}"
            )
        p = min(2 * p, prec_cap)


def _poly_coeffs_from_roots(roots: list[ComplexBall]):
    coeff_balls = [ComplexBall.exact(1, 0, roots[0].prec)]
    for r in roots:
        nxt = [ComplexBall.exact(0, 0, r.prec) for _ in range(len(coeff_balls) + 1)]
        for i, ci in enumerate(coeff_balls):
            nxt[i + 1] = nxt[i + 1] + ci
            nxt[i] = nxt[i] - r * ci
        coeff_balls = nxt
    out = []
    for ball in coeff_balls:
        if not ball.imag().contains_zero():
            return None
        k = ball.real().unique_integer()
        if k is None:
            return None
        out.append(k)
    return tuple(out)


def eval_int_poly_ball(coeffs, z: ComplexBall) -> ComplexBall:
    """Horner evaluation of an exact integer polynomial on a ball."""
    acc = ComplexBall.exact(0, 0, z.prec)
    for c in reversed(coeffs):
        acc = acc * z + ComplexBall.exact(c, 0, z.prec)
    return acc


# ---------------------------------------------------------------------------
# advisory on-disk cache: one line per discriminant, re-verified on load
# ---------------------------------------------------------------------------


def cache_line(disc_value: int, coeffs: tuple[int, ...]) -> str:
    return f"{disc_value}: {','.join(str(c) for c in coeffs)}"


def parse_cache(text: str) -> dict[int, tuple[int, ...]]:
    table = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, _, tail = line.partition(":")
        table[int(head)] = tuple(int(t) for t in tail.strip().split(","))
    return table


def verified_class_poly(disc_value: int, cache_dir=None,
                        prec: int = DEFAULT_PREC) -> tuple[int, ...]:
    """Class polynomial; any cached copy is advisory and must match a
    fresh computation."""
    coeffs = hilbert_class_poly(disc_value, prec)
    if cache_dir is not None:
        path = Path(cache_dir) / "class_polys.txt"
        if path.exists():
            cached = parse_cache(path.read_text()).get(disc_value)
            if cached is not None and cached != coeffs:
                raise RuntimeError(
                    f"class polynomial cache mismatch for {disc_value}: "
                    f"cached {cached}, computed {coeffs}"
                )
        existing = parse_cache(path.read_text()) if path.exists() else {}
        existing[disc_value] = coeffs
        lines = [cache_line(d, c) for d, c in sorted(existing.items())]
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n")
    return coeffs
