"""End-to-end staged derivation for one discriminant pair.

Stages: class polynomials -> conjugate labeling -> orbit pairing ->
splitting-field generator -> valuation pattern -> ratio constants ->
archimedean bounds -> residual determinant checks -> verdict. Each stage
failure surfaces with its stage name.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction

from . import bounds, finale, lmn, localfield, numfield, quadforms

logger = logging.getLogger(__name__)

CASES = {23: (-92, -23), 31: (-124, -31)}

# published reference values the certificate compares against;
# the derivation never consumes them
PUBLISHED_VALUES = {
    23: {
        "c1": Fraction(497314, 100),
        "pattern": {"p": 23, "e": 2, "m0": 1, "v0": 1},
        "positivity_threshold": 2074,
        "n_max": 2092,
        "m_implied": 5,
        "c2": [Fraction(s, 100) for s in
               (115, 121, 1197, 110, 128, 600, 107, 138, 402, 104, 150, 304)],
        "n_ceilings": (2, 5, 8, 10, 13, 16, 18, 21, 24, 26, 29, 32),
        "residual": [(1, 1), (1, 2)] + [(2, n) for n in range(1, 6)],
    },
    31: {
        "c1": Fraction(482016, 100),
        "pattern": {"p": 11, "e": 1, "m0": None, "v0": 2},
        "positivity_threshold": 1440,
        "n_max": 1720,
        "m_implied": 5,
        "c2": [Fraction(s, 100) for s in
               (113, 125, 617, 106, 144, 313, 102, 176, 213, 101, 233, 165)],
        "n_ceilings": (3, 6, 10, 13, 16, 19, 22, 26, 29, 32, 36, 39),
        "residual": [(1, n) for n in range(1, 4)] + [(2, n) for n in range(1, 7)],
    },
}


@dataclass
class RunConfig:
    case_selector: str = "both"  # "23", "31", or "both"
    base_prec: int = 256
    prec_cap: int = 4096
    prime_limit: int = 200
    jobs: int | None = None
    out_path: str | None = None
    cache_dir: str | None = None

    def __post_init__(self):
        if self.jobs is None:
            self.jobs = os.cpu_count() or 1
        if self.base_prec > self.prec_cap:
            raise ValueError("base precision exceeds the cap")
        if self.case_selector not in ("23", "31", "both"):
            raise ValueError(f"unknown case selector {self.case_selector!r}")

    def case_ids(self):
        if self.case_selector == "both":
            return (23, 31)
        return (int(self.case_selector),)


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class CaseRun:
    case_id: int
    disc_x: int
    disc_y: int
    hx: tuple
    hy: tuple
    pairing: object
    sf: object
    pattern: object
    beta: object
    alpha: object
    baker: object
    case_data: object
    thresholds: object
    master: object
    rows: list
    residual: list
    verdict: object
    precision_trace: list = field(default_factory=list)


def _stage(name, trace, fn):
    logger.info("stage %s", name)
    try:
        out = fn()
    except Exception as exc:  # surfaced with the stage name
        raise StageError(name, exc) from exc
    trace.append(name)
    return out


def run_case(case_id: int, config: RunConfig | None = None) -> CaseRun:
    config = config or RunConfig()
    dx, dy = CASES[case_id]
    trace = []
    prec = config.base_prec

    hx = _stage("class-polynomial-x", trace,
                lambda: quadforms.verified_class_poly(dx, config.cache_dir, prec))
    hy = _stage("class-polynomial-y", trace,
                lambda: quadforms.verified_class_poly(dy, config.cache_dir, prec))
    x_triple = _stage("label-conjugates-x", trace,
                      lambda: numfield.label_conjugates(hx, prec))
    y_triple = _stage("label-conjugates-y", trace,
                      lambda: numfield.label_conjugates(hy, prec))
    pairing = _stage("orbit-pairing", trace,
                     lambda: numfield.pair_orbit(x_triple, y_triple,
                                                 prec_cap=config.prec_cap))
    sf = _stage("splitting-field", trace,
                lambda: localfield.splitting_field_generator(
                    pairing, prec_cap=config.prec_cap))
    pattern = _stage("valuation-pattern", trace,
                     lambda: localfield.find_valuation_pattern(
                         sf, prime_limit=config.prime_limit))
    beta = _stage("ratio-beta", trace,
                  lambda: numfield.conjugate_ratio(pairing.x[2], pairing.x[1]))
    alpha = _stage("ratio-alpha", trace,
                   lambda: numfield.conjugate_ratio(pairing.y[2], pairing.y[1]))
    baker = _stage("baker-constant", trace,
                   lambda: lmn.baker_constant(beta, unit_modulus=True))
    case_data = _stage("case-data", trace,
                       lambda: bounds.build_case_data(
                           case_id, pairing, pattern, beta, alpha, baker))
    thresholds = _stage("positivity-thresholds", trace,
                        lambda: bounds.positivity_thresholds(case_data))
    master = _stage("master-bound", trace,
                    lambda: bounds.master_n_bound(case_data))
    rows = _stage("c2-table", trace, lambda: bounds.c2_table(case_data))
    residual = _stage("residual-set", trace,
                      lambda: bounds.residual_set(case_data, rows))
    verdict = _stage("nonvanishing", trace,
                     lambda: finale.close_case(case_data, sf, master,
                                               thresholds, rows, residual))
    return CaseRun(
        case_id=case_id, disc_x=dx, disc_y=dy, hx=hx, hy=hy,
        pairing=pairing, sf=sf, pattern=pattern, beta=beta, alpha=alpha,
        baker=baker, case_data=case_data, thresholds=thresholds,
        master=master, rows=rows, residual=residual, verdict=verdict,
        precision_trace=trace,
    )
