"""Command-line orchestration: certificate runs and oracle cross-checks.

Exit codes: 0 all requested cases PROVEN; 1 INCOMPLETE; 2 configuration or
usage error; 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from pathlib import Path

from . import certificate as cert
from .pipeline import RunConfig, StageError, run_case

EXIT_PROVEN = 0
EXIT_INCOMPLETE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smcert",
        description="Certified derivation of the linear-independence proof "
                    "for the two exceptional singular-moduli pairs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    certify = sub.add_parser("certify", help="run the proof pipeline and "
                                             "emit certificates")
    certify.add_argument("--case", choices=("23", "31", "both"),
                         default="both")
    certify.add_argument("--precision", type=int, default=256,
                         help="base working precision in bits")
    certify.add_argument("--precision-cap", type=int, default=4096)
    certify.add_argument("--prime-limit", type=int, default=200)
    certify.add_argument("--jobs", type=int, default=None,
                         help="parallelism degree (default: cores)")
    certify.add_argument("--out", type=str, default=None,
                         help="output file (single case) or directory (both)")
    certify.add_argument("--cache-dir", type=str, default=None)

    oracle = sub.add_parser("oracle", help="exhaustive and sampled "
                                           "cross-checks")
    oracle.add_argument("subcommand",
                        choices=("valuation-scan", "table-sample",
                                 "ball-vs-exact", "height-laws"))
    oracle.add_argument("--case", choices=("23", "31"), default="23")
    oracle.add_argument("--max-m", type=int, default=200)
    oracle.add_argument("--trials", type=int, default=100)
    return parser


def _config_from_args(args) -> RunConfig:
    cache = args.cache_dir or os.environ.get("SMCERT_CACHE_DIR")
    return RunConfig(
        case_selector=args.case,
        base_prec=args.precision,
        prec_cap=args.precision_cap,
        prime_limit=args.prime_limit,
        jobs=args.jobs,
        out_path=args.out,
        cache_dir=cache,
    )


def cmd_certify(args) -> int:
    try:
        config = _config_from_args(args)
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    runs = []
    for case_id in config.case_ids():
        try:
            runs.append(run_case(case_id, config))
        except StageError as exc:
            print(f"case {case_id}: {exc}", file=sys.stderr)
            if isinstance(exc.cause, RuntimeError):
                return EXIT_INTERNAL
            return EXIT_INCOMPLETE
        except Exception as exc:  # invariant violations
            print(f"case {case_id}: internal error: {exc}", file=sys.stderr)
            return EXIT_INTERNAL
    texts = {run.case_id: cert.render_case(run, config) for run in runs}
    if config.out_path is None:
        for run in runs:
            print(texts[run.case_id])
    elif len(runs) == 1:
        Path(config.out_path).write_text(texts[runs[0].case_id])
    else:
        out_dir = Path(config.out_path)
        out_dir.mkdir(parents=True, exist_ok=True)
        for run in runs:
            (out_dir / f"case-{run.case_id}.cert").write_text(
                texts[run.case_id])
    for run in runs:
        print(f"case {run.case_id}: {run.verdict.verdict}", file=sys.stderr)
    if all(run.verdict.verdict == "PROVEN" for run in runs):
        return EXIT_PROVEN
    return EXIT_INCOMPLETE


def _oracle_valuation_scan(case_id: int, max_m: int) -> int:
    from .localfield import brute_force_valuation, prop_valuation

    run = run_case(case_id, RunConfig(case_selector=str(case_id)))
    mismatches = []
    for m in range(1, max_m + 1):
        formula = prop_valuation(m, run.pattern)
        direct = brute_force_valuation(run.pattern, m)
        if formula != direct:
            mismatches.append((m, formula, direct))
    print(f"valuation-scan case {case_id}: {max_m - len(mismatches)}/{max_m} "
          f"matches")
    for m, formula, direct in mismatches:
        print(f"  mismatch at m={m}: formula {formula}, direct {direct}")
    return EXIT_PROVEN if not mismatches else EXIT_INTERNAL


def _oracle_table_sample(case_id: int, trials: int) -> int:
    from .balls import RealBall

    run = run_case(case_id, RunConfig(case_selector=str(case_id)))
    case = run.case_data
    rng = random.Random(2024)
    failures = 0
    for row in run.rows:
        for _ in range(trials):
            n = rng.randint(1, row.n_max + 50)
            lhs = (RealBall.exact(n, case.prec) * case.log_y12
                   - RealBall.exact(row.m, case.prec) * case.log_x12)
            if n > row.n_max:
                # beyond the ceiling the inequality must fail outright
                if not lhs.certainly_gt(row.c2.log()):
                    failures += 1
            elif lhs.certainly_gt(row.c2.log()):
                failures += 1
    total = 12 * trials
    print(f"table-sample case {case_id}: {total - failures}/{total} "
          f"consistent samples")
    return EXIT_PROVEN if failures == 0 else EXIT_INTERNAL


def _oracle_ball_vs_exact(case_id: int) -> int:
    run = run_case(case_id, RunConfig(case_selector=str(case_id)))
    bad = [c for c in run.verdict.checks
           if not (c.ball_nonzero and c.norm_nonzero and c.consistent)]
    n = len(run.verdict.checks)
    print(f"ball-vs-exact case {case_id}: {n - len(bad)}/{n} residual pairs "
          f"agree on both routes")
    for chk in bad:
        print(f"  disagreement at (m,n)=({chk.m},{chk.n})")
    return EXIT_PROVEN if not bad else EXIT_INTERNAL


def _oracle_height_laws(trials: int) -> int:
    import random as _random

    from smcert import exactpoly as xp
    from smcert.balls import RealBall
    from smcert.numfield import (AlgebraicNumber, algebraic_from_minpoly,
                                 height, inverse_algebraic,
                                 power_minimal_poly, roots_of_int_poly)

    rng = _random.Random(99)
    failures = 0
    done = 0
    while done < trials:
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
        sq_poly = xp.clear_denominators(power_minimal_poly(a, 2))
        sq = algebraic_from_minpoly(sq_poly, a.prec, a.ball() ** 2)
        if not height(sq).overlaps(ha * RealBall.exact(2, a.prec)):
            failures += 1
        done += 1
    print(f"height-laws: {trials - failures}/{trials} trials consistent")
    return EXIT_PROVEN if failures == 0 else EXIT_INTERNAL


def cmd_oracle(args) -> int:
    case_id = int(args.case)
    if args.subcommand == "valuation-scan":
        return _oracle_valuation_scan(case_id, args.max_m)
    if args.subcommand == "table-sample":
        return _oracle_table_sample(case_id, args.trials)
    if args.subcommand == "ball-vs-exact":
        return _oracle_ball_vs_exact(case_id)
    if args.subcommand == "height-laws":
        return _oracle_height_laws(args.trials)
    return EXIT_USAGE


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PROVEN
    if args.command == "certify":
        return cmd_certify(args)
    if args.command == "oracle":
        try:
            return cmd_oracle(args)
        except Exception as exc:
            print(f"oracle failure: {exc}", file=sys.stderr)
            return EXIT_INTERNAL
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
