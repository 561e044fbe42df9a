"""Machine-readable proof certificates.

A certificate is a stable, human-diffable key-value text document: exact
integers and rationals in decimal, real quantities as
(midpoint-decimal, 1e<radius-exponent>) pairs. Rendering is deterministic
for a fixed configuration, so repeated runs are byte-identical. The loader
rejects unknown schema versions.
"""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpfr

SCHEMA_VERSION = 1
HEADER = f"smcert-certificate v{SCHEMA_VERSION}"

_MID_DIGITS = 40


def fmt_mpfr(x: mpfr, digits: int = _MID_DIGITS) -> str:
    if x == 0:
        return "0"
    mant, exp, _ = x.digits(10, digits)
    sign = "-" if mant.startswith("-") else ""
    mant = mant.lstrip("-")
    return f"{sign}0.{mant}e{exp}"


def _radius_exponent(rad: mpfr):
    if rad == 0:
        return None
    _, exp, _ = rad.digits(10, 2)
    return exp  # rad <= 10^exp


def fmt_real(ball) -> str:
    exp = _radius_exponent(ball.rad)
    err = "exact" if exp is None else f"1e{exp}"
    return f"({fmt_mpfr(ball.mid)}, {err})"


def fmt_fraction(f: Fraction) -> str:
    f = Fraction(f)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def fmt_decimal(f: Fraction) -> str:
    """Exact decimal rendering for printed reference constants
    (denominators dividing a power of ten)."""
    f = Fraction(f)
    den = f.denominator
    places = 0
    while den % 2 == 0:
        den //= 2
        places += 1
    fives = 0
    while den % 5 == 0:
        den //= 5
        fives += 1
    places = max(places, fives)
    if den != 1:
        return fmt_fraction(f)
    scaled = f * 10 ** places
    digits = str(abs(int(scaled))).rjust(places + 1, "0")
    sign = "-" if f < 0 else ""
    if places == 0:
        return f"{sign}{digits}"
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _poly_line(coeffs) -> str:
    return ",".join(fmt_fraction(Fraction(c)) for c in coeffs)


def render_case(run, config) -> str:
    """One certificate document for a completed case run."""
    from .pipeline import PUBLISHED_VALUES

    ref = PUBLISHED_VALUES[run.case_id]
    pat = run.pattern
    baker = run.baker
    lines = [HEADER]
    push = lines.append

    push(f"case = {run.case_id}")
    push(f"verdict = {run.verdict.verdict}")
    if run.verdict.failing_stage:
        push(f"failing-stage = {run.verdict.failing_stage}")
    push("")
    push("[orientation]")
    push(f"x-discriminant = {run.disc_x}")
    push(f"y-discriminant = {run.disc_y}")
    push("note = pair oriented so disc(x) = 4 disc(y); the swapped "
         "orientation exchanges (A,m) with (B,n) in the same equation")
    push("labeling = Im(x2) > 0 fixed; y_i is the Galois partner P(x_i); "
         "the final bounds are invariant under swapping the complex pair")
    push("")
    push("[class-polynomials]")
    push(f"H({run.disc_x}) = {_poly_line(run.hx)}")
    push(f"H({run.disc_y}) = {_poly_line(run.hy)}")
    push("")
    push("[orbit-pairing]")
    push(f"relator = {_poly_line(run.pairing.relator)}")
    push(f"partner-swaps-complex-labels = {str(run.pairing.swapped).lower()}")
    push("")
    push("[splitting-field]")
    push(f"combiner = {run.sf.combiner}")
    push(f"min-poly = {_poly_line(run.sf.min_poly)}")
    for i in range(3):
        push(f"x{i + 1}-expr = {_poly_line(run.sf.x_exprs[i])}")
    for i in range(3):
        push(f"y{i + 1}-expr = {_poly_line(run.sf.y_exprs[i])}")
    push("")
    push("[valuation-pattern]")
    push(f"p = {pat.p}")
    push(f"place-index = {pat.place_index}")
    push(f"e = {pat.e}")
    push(f"f = {pat.f}")
    push(f"m0 = {pat.m0}")
    push(f"v0 = {pat.v0}")
    for name in ("x1", "x2", "x3", "y1", "y2", "y3"):
        push(f"v({name}) = {pat.valuations[name]}")
    for alt in pat.alternates:
        push(f"alternate = p={alt[0]} place={alt[1]} e={alt[2]} f={alt[3]} "
             f"m0={alt[4]} v0={alt[5]}")
    push(f"exponent-bound = m <= {pat.e} log(n)/log({pat.p}) + {pat.v0}")
    push("")
    push("[baker]")
    push(f"degree = {baker.d}")
    push(f"height-beta = {fmt_real(baker.h)}")
    push(f"c1-prime = {fmt_real(baker.c1_prime)}")
    push(f"c1 = {fmt_real(baker.c1)}")
    push(f"c1-printed = {fmt_decimal(ref['c1'])}")
    from .balls import RealBall

    gap = baker.c1 - RealBall.exact(ref["c1"], baker.c1.prec)
    within = abs(gap).certainly_lt(RealBall.exact(Fraction(1, 2), baker.c1.prec))
    push(f"c1-within-0.5-of-printed = {str(within).lower()}")
    push("note = downstream bounds use the computed c1; the printed value "
         "is recorded for comparison")
    push("")
    push("[thresholds]")
    push(f"positivity-threshold = {run.thresholds.weak}")
    push(f"positivity-threshold-strong = {run.thresholds.strong}")
    push(f"positivity-monotone-from = {run.thresholds.monotone_from}")
    push(f"positivity-threshold-printed = {ref['positivity_threshold']}")
    push(f"master-n-max = {run.master.n_max}")
    push(f"master-n-max-printed = {ref['n_max']}")
    push(f"implied-m-ceiling = {run.master.m_implied}")
    push(f"implied-m-ceiling-printed = {ref['m_implied']}")
    push(f"contradiction-m-ge-13 = {str(run.master.contradiction).lower()}")
    push("")
    push("[table]")
    for row, printed_c2, printed_n in zip(run.rows, ref["c2"],
                                          ref["n_ceilings"]):
        flag = ""
        if row.n_max > printed_n:
            flag = " ceiling-discrepancy"
        push(f"m={row.m} c2={fmt_real(row.c2)} n<={row.n_max} "
             f"printed-c2={fmt_decimal(printed_c2)} printed-n<={printed_n} "
             f"eliminated={'yes' if row.eliminated else 'no'}{flag}")
    push("")
    push("[residual]")
    push("pairs = " + " ".join(f"({m},{n})" for m, n in run.residual))
    push(f"printed-match = {str(list(run.residual) == ref['residual']).lower()}")
    push("")
    push("[nonvanishing]")
    for chk in run.verdict.checks:
        push(f"(m,n)=({chk.m},{chk.n}) ball={'nonzero' if chk.ball_nonzero else 'undecided'}"
             f"@prec{chk.prec_used} norm={fmt_fraction(chk.norm)} "
             f"consistent={'yes' if chk.consistent else 'no'}")
    push("")
    push("[meta]")
    push("tool = smcert 0.1.0")
    push(f"schema = {SCHEMA_VERSION}")
    push(f"base-precision = {config.base_prec}")
    push(f"precision-cap = {config.prec_cap}")
    push(f"prime-limit = {config.prime_limit}")
    push(f"jobs = {config.jobs}")
    push("stages = " + " ".join(run.precision_trace))
    push("")
    return "\n".join(lines)


def parse_certificates(text: str) -> list[dict]:
    """Split and parse certificate documents; rejects unknown schemas."""
    docs = []
    current = None
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("smcert-certificate "):
            if line != HEADER:
                raise ValueError(f"unsupported certificate version: {line!r}")
            current = {"_sections": {}}
            docs.append(current)
            section = None
            continue
        if current is None or not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1]
            current["_sections"][section] = []
            continue
        if section:
            current["_sections"][section].append(line)
        elif " = " in line:
            key, _, value = line.partition(" = ")
            current[key] = value
    if not docs:
        raise ValueError("no certificate header found")
    return docs


def section_values(doc: dict, section: str) -> dict:
    """key = value lines of one section as a dict (last wins)."""
    out = {}
    for line in doc["_sections"].get(section, ()):
        if " = " in line:
            key, _, value = line.partition(" = ")
            out[key] = value
    return out
