"""Exact polynomial arithmetic over Z and Q.

Polynomials are tuples of ints or Fractions in ascending degree order.
Heavy algebra (factorization, resultants, discriminants, cyclotomics)
delegates to sympy; quotient-ring arithmetic and kernels stay in plain
Fraction arithmetic for speed and auditability.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

_X = sympy.symbols("x")


def normalize(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p) -> int:
    p = normalize(p)
    return len(p) - 1


def add(p, q):
    n = max(len(p), len(q))
    return normalize(
        tuple((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
              for i in range(n))
    )


def neg(p):
    return tuple(-c for c in p)


def sub(p, q):
    return add(p, neg(q))


def scale(p, s):
    return normalize(tuple(c * s for c in p))


def mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] += a * b
    return normalize(tuple(out))


def divmod_exact(f, g):
    """Quotient and remainder over Q; g need not be monic."""
    f = [Fraction(c) for c in f]
    g = normalize(g)
    dg = len(g) - 1
    lead = Fraction(g[-1])
    quo = [Fraction(0)] * max(1, len(f) - dg)
    while len(f) - 1 >= dg and any(f):
        if f[-1] == 0:
            f.pop()
            continue
        shift = len(f) - 1 - dg
        coef = f[-1] / lead
        quo[shift] = coef
        for i in range(dg + 1):
            f[shift + i] -= coef * Fraction(g[i])
        f.pop()
    return normalize(tuple(quo)), normalize(tuple(f))


def poly_mod(f, g):
    return divmod_exact(f, g)[1]


def mul_mod(p, q, m):
    return poly_mod(mul(p, q), m)


def pow_mod(p, e: int, m):
    result = (Fraction(1),)
    base = poly_mod(p, m)
    while e:
        if e & 1:
            result = mul_mod(result, base, m)
        e >>= 1
        if e:
            base = mul_mod(base, base, m)
    return result


def compose_mod(f, g, m):
    """f(g(t)) mod m(t) by Horner."""
    acc = (Fraction(0),)
    for c in reversed(f):
        acc = add(mul_mod(acc, g, m), (Fraction(c),))
    return poly_mod(acc, m)


def evaluate(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + Fraction(c)
    return acc


def derivative(p):
    return normalize(tuple(i * c for i, c in enumerate(p)))[1:] or (0,)


def content_primitive(p):
    """(content, primitive part) of an integer polynomial, leading
    coefficient made positive."""
    from math import gcd

    p = normalize(p)
    g = 0
    for c in p:
        g = gcd(g, abs(int(c)))
    if g == 0:
        return 0, (0,)
    sign = -1 if p[-1] < 0 else 1
    return g * sign, tuple(int(c) // (g * sign) for c in p)


def clear_denominators(p):
    """Integer polynomial proportional to the rational input."""
    from math import lcm

    den = 1
    for c in p:
        den = lcm(den, Fraction(c).denominator)
    return tuple(int(Fraction(c) * den) for c in p)


def to_sympy(p):
    coeffs = []
    for c in reversed(normalize(p)):
        f = Fraction(c)
        coeffs.append(sympy.Rational(f.numerator, f.denominator))
    return sympy.Poly(coeffs, _X)


def from_sympy(poly) -> tuple:
    coeffs = list(reversed(poly.all_coeffs()))
    out = []
    for c in coeffs:
        r = sympy.Rational(c)
        out.append(Fraction(int(r.p), int(r.q)))
    if all(f.denominator == 1 for f in out):
        return normalize(tuple(f.numerator for f in out))
    return normalize(tuple(out))


def factor_int_poly(p) -> list[tuple[tuple, int]]:
    """Irreducible integer factors with multiplicities, deterministic order."""
    _, prim = content_primitive(p)
    _, factors = to_sympy(prim).factor_list()
    out = []
    for fac, mult in factors:
        _, fac_prim = content_primitive(from_sympy(fac))
        out.append((fac_prim, int(mult)))
    out.sort(key=lambda fm: (degree(fm[0]), fm[0]))
    return out


def is_irreducible_int_poly(p) -> bool:
    facs = factor_int_poly(p)
    return len(facs) == 1 and facs[0][1] == 1


def resultant(f, g):
    r = sympy.Rational(sympy.resultant(to_sympy(f).as_expr(),
                                       to_sympy(g).as_expr(), _X))
    return Fraction(int(r.p), int(r.q))


def discriminant(p):
    d = sympy.Rational(sympy.discriminant(to_sympy(p).as_expr(), _X))
    f = Fraction(int(d.p), int(d.q))
    return f.numerator if f.denominator == 1 else f


def cyclotomic_order(p) -> int | None:
    """The k with p == k-th cyclotomic polynomial, if any."""
    p = normalize(p)
    d = degree(p)
    if p[-1] != 1:
        return None
    for k in range(1, 2 * d * d + 2):
        if sympy.totient(k) != d:
            continue
        cyc = from_sympy(sympy.Poly(sympy.cyclotomic_poly(k, _X), _X))
        if cyc == p:
            return k
    return None


def minimal_poly_in_quotient(z, modulus):
    """Monic minimal polynomial over Q of the residue class z in
    Q[x]/(modulus); exact linear algebra on the power vectors."""
    d = degree(modulus)
    z = poly_mod(tuple(Fraction(c) for c in z), modulus)
    rows = []
    current = (Fraction(1),)
    for _ in range(d + 1):
        rows.append([Fraction(c) for c in current] + [Fraction(0)] * (d - len(current)))
        dep = _first_dependency(rows)
        if dep is not None:
            monic = [c / dep[-1] for c in dep]
            return normalize(tuple(monic))
        current = mul_mod(current, z, modulus)
    raise RuntimeError("no dependency found; modulus not of degree d?")


def _first_dependency(rows):
    """If the last row depends on the previous ones, return combo coeffs
    c_0..c_k (c_k != 0) with sum c_i rows[i] = 0, else None."""
    k = len(rows) - 1
    n = len(rows[0])
    aug = [list(r) + [Fraction(1 if i == j else 0) for j in range(k + 1)]
           for i, r in enumerate(rows)]
    pivot_cols = []
    ri = 0
    for col in range(n):
        piv = None
        for r in range(ri, k + 1):
            if aug[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        aug[ri], aug[piv] = aug[piv], aug[ri]
        lead = aug[ri][col]
        aug[ri] = [v / lead for v in aug[ri]]
        for r in range(k + 1):
            if r != ri and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[ri])]
        pivot_cols.append(col)
        ri += 1
    for r in range(k + 1):
        if all(aug[r][c] == 0 for c in range(n)):
            combo = aug[r][n:]
            if combo[k] != 0:
                return combo
    return None
