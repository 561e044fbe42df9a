"""Acceptance criteria, one test per criterion (sub-parts split out),
each printing a PASS/FAIL line.

Three published-value-anchored claims (criteria 5, 6, 7 strict parts) are
implemented exactly as stated and fail: the printed two-logarithm constant
c1 = 4973.14 / 4820.16 back-solves to a height of the conjugate ratio near
5.32 / 4.89, while the exact height of x3/x2 (verified by two independent
exact routes) is 14.6375... / 19.7717..., so the certified c1 is ~8295 /
~10126 and every threshold keyed to the printed value shifts. The
contradiction, the tables, the residual sets and the final verdicts are
unaffected.
"""

import random

from smcert import certificate as cert
from smcert.balls import RealBall
from smcert.localfield import brute_force_valuation, places_above, prop_valuation
from smcert.lmn import lower_bound
from smcert.numfield import label_conjugates
from smcert.pipeline import PUBLISHED_VALUES, RunConfig, run_case
from smcert.quadforms import (
    class_number,
    eval_int_poly_ball,
    hilbert_class_poly,
    singular_moduli_balls,
)

PIPELINE_DISCS = (-23, -92, -31, -124)


def report(criterion: str, ok: bool, detail: str = ""):
    line = f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


def test_criterion_1_class_numbers():
    counts = {d: class_number(d) for d in PIPELINE_DISCS}
    report("1 class-numbers", all(c == 3 for c in counts.values()),
           f"{counts}")


def test_criterion_2_class_polynomials():
    ok = True
    detail = []
    for d in PIPELINE_DISCS:
        stable = hilbert_class_poly(d, 256) == hilbert_class_poly(d, 512)
        coeffs = hilbert_class_poly(d, 256)
        balls = singular_moduli_balls(d, 256)
        membership = all(eval_int_poly_ball(coeffs, b).contains_zero()
                         for b in balls)
        x1, x2, x3 = label_conjugates(coeffs, 256)
        dominant = (abs(x1.ball()).certainly_gt(abs(x2.ball()))
                    and abs(x1.ball()).certainly_gt(abs(x3.ball()))
                    and x1.ball().imag().contains_zero())
        ok = ok and stable and membership and dominant
        detail.append(f"{d}: stable={stable} member={membership} dom={dominant}")
    report("2 class-polynomials", ok, "; ".join(detail))


def test_criterion_3_prime_pattern_case1(case1_run):
    pat = case1_run.pattern
    got = (pat.p, pat.e, pat.m0, pat.v0)
    report("3 prime-pattern-case1", got == (23, 2, 1, 1),
           f"(p,e,m0,v0)={got}, expected (23,2,1,1)")


def test_criterion_4_proposition_oracle(case1_run, case2_run):
    mismatches = []
    for run in (case1_run, case2_run):
        for m in range(1, 201):
            if prop_valuation(m, run.pattern) != brute_force_valuation(
                    run.pattern, m):
                mismatches.append((run.case_id, m))
    report("4 proposition-3.2-oracle", not mismatches,
           f"400/400 values match" if not mismatches else f"{mismatches}")


def test_criterion_5_baker_constants_strict(case1_run, case2_run):
    """Strict published-value comparison; unattainable, fails honestly."""
    details = []
    ok = True
    for run in (case1_run, case2_run):
        printed = PUBLISHED_VALUES[run.case_id]["c1"]
        gap = run.baker.c1 - RealBall.exact(printed, run.baker.c1.prec)
        within = abs(gap).certainly_lt(
            RealBall.exact(1, run.baker.c1.prec) / 2)
        ok = ok and within
        details.append(
            f"case {run.case_id}: computed {float(run.baker.c1.mid):.2f} "
            f"vs printed {float(printed):.2f}")
    report("5 baker-constants-within-0.5 [published value not "
           "reproducible from its own formula]", ok, "; ".join(details))


def test_criterion_5_fallback_recorded(case1_run, case2_run):
    """Fallback clause: certificate records both, downstream uses the
    computed value."""
    ok = True
    for run in (case1_run, case2_run):
        text = cert.render_case(run, RunConfig(case_selector=str(run.case_id)))
        doc = cert.parse_certificates(text)[0]
        baker = cert.section_values(doc, "baker")
        recorded = ("c1" in baker and "c1-printed" in baker
                    and baker["c1-within-0.5-of-printed"] == "false")
        # downstream used the computed value: the master bound reproduces
        # under the computed c1, not under the printed one
        downstream = run.master.n_max > PUBLISHED_VALUES[run.case_id]["n_max"]
        ok = ok and recorded and downstream
    report("5f baker-discrepancy-recorded", ok,
           "certificate records computed and printed c1; bounds use computed")


def test_criterion_6_positivity_threshold_strict(case1_run):
    """Stated tolerance: threshold within [2000, 2075]; keyed to the
    printed c1, hence unattainable with the certified constant."""
    th = case1_run.thresholds
    ok = 2000 <= th.weak <= 2075
    report("6 positivity-threshold-window [keyed to printed c1]", ok,
           f"computed threshold {th.weak}, window [2000, 2075]")


def test_criterion_6_positivity_structure(case1_run):
    """Attainable core: a certified threshold exists and positivity holds
    for every n beyond it (monotone tail + boundary checks)."""
    from smcert.bounds import _psi, denominator_lower_bound

    case = case1_run.case_data
    th = case1_run.thresholds
    prec = case.prec
    log99 = RealBall.exact(99, prec).log() - RealBall.exact(100, prec).log()
    boundary = (_psi(case, th.weak + 1, log99).is_positive()
                and not _psi(case, th.weak, log99).is_positive()
                and th.monotone_from <= th.weak)
    beyond = all(
        denominator_lower_bound(case, 13, n, thresholds=th) is not None
        for n in (th.strong + 1, th.strong + 500, th.strong * 3))
    report("6s positivity-certified-structure", boundary and beyond,
           f"threshold {th.weak}, strong {th.strong}, monotone from "
           f"{th.monotone_from}")


def test_criterion_7_master_bounds_strict(case1_run, case2_run):
    """Stated tolerance: n_max within +-10 of 2092 / 1720; keyed to the
    printed c1, hence unattainable with the certified constant."""
    ok = (abs(case1_run.master.n_max - 2092) <= 10
          and abs(case2_run.master.n_max - 1720) <= 10)
    report("7 master-n-max-printed-window [keyed to printed c1]", ok,
           f"computed {case1_run.master.n_max} vs 2092, "
           f"{case2_run.master.n_max} vs 1720")


def test_criterion_7_contradiction(case1_run, case2_run):
    """Attainable core: the m >= 13 branch collapses in both cases."""
    ok = True
    details = []
    for run in (case1_run, case2_run):
        mb = run.master
        ok = ok and mb.contradiction and mb.m_implied < 13
        details.append(f"case {run.case_id}: n_max={mb.n_max} "
                       f"m<={mb.m_implied} contradiction={mb.contradiction}")
    report("7c master-contradiction", ok, "; ".join(details))


def test_criterion_8_tables_and_residual_sets(case1_run, case2_run):
    ok = True
    details = []
    for run in (case1_run, case2_run):
        ref = PUBLISHED_VALUES[run.case_id]
        ceilings = tuple(row.n_max for row in run.rows)
        match_table = ceilings == ref["n_ceilings"]
        not_larger = all(got <= printed for got, printed
                         in zip(ceilings, ref["n_ceilings"]))
        match_residual = list(run.residual) == ref["residual"]
        ok = ok and (match_table or not_larger) and match_residual
        details.append(f"case {run.case_id}: table exact={match_table} "
                       f"residual exact={match_residual}")
    report("8 tables-and-residual-sets", ok, "; ".join(details))


def test_criterion_9_nonvanishing_and_verdicts(case1_run, case2_run):
    ok = True
    details = []
    for run in (case1_run, case2_run):
        checks_ok = all(c.ball_nonzero and c.norm_nonzero and c.consistent
                        for c in run.verdict.checks)
        complete = len(run.verdict.checks) == len(run.residual)
        proven = run.verdict.verdict == "PROVEN"
        ok = ok and checks_ok and complete and proven
        details.append(f"case {run.case_id}: {run.verdict.verdict}, "
                       f"{len(run.verdict.checks)} pairs dual-checked")
    report("9 nonvanishing-and-verdicts", ok, "; ".join(details))


def test_criterion_10_height_laws():
    from smcert import exactpoly as xp
    from smcert.numfield import (AlgebraicNumber, algebraic_from_minpoly,
                                 height, inverse_algebraic,
                                 power_minimal_poly, roots_of_int_poly)

    rng = random.Random(4242)
    failures = 0
    done = 0
    while done < 100:
        deg = rng.choice((1, 2, 2, 3))
        coeffs = [rng.randint(-9, 9) for _ in range(deg)] + [rng.randint(1, 9)]
        if coeffs[0] == 0:
            continue
        facs = xp.factor_int_poly(tuple(coeffs))
        fac = facs[rng.randrange(len(facs))][0]
        if xp.degree(fac) < 1:
            continue
        roots = roots_of_int_poly(fac, 192)
        ball = roots[rng.randrange(len(roots))]
        if ball.contains_zero():
            continue
        a = AlgebraicNumber(fac, tuple(roots), roots.index(ball))
        ha = height(a)
        if not ha.overlaps(height(inverse_algebraic(a))):
            failures += 1
        n = rng.choice((2, 3))
        pw_poly = xp.clear_denominators(power_minimal_poly(a, n))
        pw = algebraic_from_minpoly(pw_poly, a.prec, a.ball() ** n)
        if not height(pw).overlaps(ha * RealBall.exact(n, a.prec)):
            failures += 1
        done += 1
    report("10a height-laws", failures == 0, f"100 random inputs, "
           f"{failures} failures")


def test_criterion_10_lower_bound_soundness(case1_run):
    """lower_bound(beta, m) <= |1 - beta^m| for every m <= 5000."""
    beta = case1_run.beta.at_precision(512)
    baker = case1_run.baker
    ball = beta.ball()
    power = ball ** 0
    bad = []
    for m in range(1, 5001):
        power = power * ball
        from smcert.balls import ComplexBall

        actual = abs(ComplexBall.exact(1, 0, 512) - power)
        lb = lower_bound(beta, baker, m)
        if lb.bound.certainly_gt(actual):
            bad.append(m)
    report("10b lower-bound-soundness", not bad,
           f"m <= 5000 exhaustive, violations: {bad if bad else 'none'}")


def test_criterion_10_place_completeness(case1_run, case2_run):
    ok = True
    for run in (case1_run, case2_run):
        for p in (11, 13, 17, 19, 23, 29, 31, 37, 41):
            places = places_above(run.sf.min_poly, p)
            if sum(pl.e * pl.f for pl in places) != 6:
                ok = False
    report("10c place-completeness", ok, "sum e_i f_i = 6 at every "
           "scanned prime, both fields")


def test_criterion_10_determinism(case1_run):
    config = RunConfig(case_selector="23")
    fresh = run_case(23, config)
    same = (cert.render_case(fresh, config)
            == cert.render_case(case1_run, config))
    report("10d certificate-determinism", same,
           "byte-identical certificates across two runs")
