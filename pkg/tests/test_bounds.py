"""Archimedean pipeline: thresholds, master bound, table, residual set."""

import random

from smcert.balls import RealBall
from smcert.bounds import (
    asymptotic_denominator_bound,
    build_case_data,
    denominator_direct_ball,
    denominator_lower_bound,
    master_n_bound,
)

PUBLISHED_TABLE_1 = (2, 5, 8, 10, 13, 16, 18, 21, 24, 26, 29, 32)
PUBLISHED_TABLE_2 = (3, 6, 10, 13, 16, 19, 22, 26, 29, 32, 36, 39)


def test_case_data_invariants(case1_run, case2_run):
    for run in (case1_run, case2_run):
        case = run.case_data
        assert case.log_x12.is_positive()
        assert case.log_y12.is_positive()
        one = RealBall.exact(1, case.prec)
        assert case.mod_x31.certainly_lt(one)
        assert case.mod_y31.certainly_lt(one)


def test_positivity_thresholds(case1_run, case2_run):
    for run, printed in ((case1_run, 2074), (case2_run, 1440)):
        th = run.thresholds
        assert th.weak >= 1 and th.strong >= th.weak
        # under the certified (larger) c1 the threshold exceeds the
        # printed one; both certify positivity beyond themselves
        assert th.weak >= printed
        case = run.case_data
        from smcert.bounds import _psi

        log99 = RealBall.exact(99, case.prec).log() - RealBall.exact(100, case.prec).log()
        assert _psi(case, th.weak + 1, log99).is_positive()
        assert not _psi(case, th.weak, log99).is_positive()


def test_denominator_positive_beyond_strong_threshold(case1_run):
    case = case1_run.case_data
    th = case1_run.thresholds
    for n in (th.strong + 1, th.strong + 100, 10 * th.strong):
        bound = denominator_lower_bound(case, 13, n, thresholds=th)
        assert bound is not None and bound.is_positive()
    assert denominator_lower_bound(case, 13, th.strong - 1, thresholds=th) is None


def test_denominator_direct_small_pairs(case1_run):
    case = case1_run.case_data
    for m, n in ((1, 1), (2, 5), (5, 7)):
        ball = denominator_direct_ball(case, m, n)
        assert ball.is_positive(), (m, n)
        lb = denominator_lower_bound(case, m, n)
        assert lb is not None and lb.is_positive()


def test_asymptotic_bound_matches_formula(case1_run):
    case = case1_run.case_data
    n = case1_run.thresholds.strong + 10
    got = asymptotic_denominator_bound(case, n)
    c1 = case.baker.c1_conservative()
    log_b = case.exponent_ceiling(n).log()
    expect = (RealBall.exact(98, case.prec) / RealBall.exact(100, case.prec)
              * (-(c1 * log_b * log_b)).exp())
    assert got.overlaps(expect)


def test_master_bound_contradiction(case1_run, case2_run):
    for run in (case1_run, case2_run):
        mb = run.master
        assert mb.contradiction
        assert mb.m_implied < 13
        assert mb.n_max >= 1


def test_master_bound_edges(case1_run):
    from smcert.bounds import _master_gap

    case = case1_run.case_data
    mb = case1_run.master
    assert _master_gap(case, mb.n_max + 1).is_positive()
    assert not _master_gap(case, mb.n_max).is_positive()


def test_master_bound_exceeds_printed_under_certified_c1(case1_run, case2_run):
    # the printed 2092/1720 correspond to the printed (unreproducible) c1
    assert case1_run.master.n_max >= 2092
    assert case2_run.master.n_max >= 1720


def test_master_bound_reproducible_across_precisions(case1_run):
    case = case1_run.case_data
    again = build_case_data(case.case_id, case.pairing, case.pattern,
                            case.beta, case.alpha, case.baker, prec=384)
    assert master_n_bound(again).n_max == case1_run.master.n_max


def test_table_ceilings_match_published(case1_run, case2_run):
    for run, printed in ((case1_run, PUBLISHED_TABLE_1), (case2_run, PUBLISHED_TABLE_2)):
        got = tuple(row.n_max for row in run.rows)
        assert got == printed


def test_table_certified_c2_close_to_printed(case1_run):
    from smcert.pipeline import PUBLISHED_VALUES

    printed = PUBLISHED_VALUES[23]["c2"]
    for row, ref in zip(case1_run.rows, printed):
        # published constants are rounded outward at two decimals;
        # certified midpoints sit within 0.07 below them
        assert abs(float(row.c2.mid) - float(ref)) < 0.07, row.m


def test_elimination_pattern(case1_run, case2_run):
    for run in (case1_run, case2_run):
        eliminated = [row.m for row in run.rows if row.eliminated]
        assert eliminated == list(range(3, 13))


def test_eliminated_rows_certified(case1_run):
    case = case1_run.case_data
    for row in case1_run.rows:
        if row.eliminated:
            bound = case.exponent_ceiling(row.n_max)
            assert RealBall.exact(row.m, case.prec).certainly_gt(bound), row.m


def test_residual_sets_match_published(case1_run, case2_run):
    assert case1_run.residual == [(1, 1), (1, 2)] + [(2, n) for n in range(1, 6)]
    assert case2_run.residual == ([(1, n) for n in range(1, 4)]
                                  + [(2, n) for n in range(1, 7)])


def test_row_sampling_soundness(case1_run):
    """Sampled consistency of each table row (the full 100-sample law
    runs in the oracle; a reduced deterministic sample here)."""
    case = case1_run.case_data
    rng = random.Random(11)
    for row in case1_run.rows:
        for _ in range(20):
            n = rng.randint(1, row.n_max + 50)
            lhs = (RealBall.exact(n, case.prec) * case.log_y12
                   - RealBall.exact(row.m, case.prec) * case.log_x12)
            if n > row.n_max:
                assert lhs.certainly_gt(row.c2.log()), (row.m, n)
            else:
                assert not lhs.certainly_gt(row.c2.log()), (row.m, n)
