"""Certificate rendering, determinism, schema validation, CLI exit codes."""

import pytest

from smcert import certificate as cert
from smcert.balls import RealBall
from smcert.pipeline import RunConfig


def test_fmt_real_roundtrippable():
    ball = RealBall.exact(1, 128) / RealBall.exact(3, 128)
    text = cert.fmt_real(ball)
    assert text.startswith("(0.3333333333")
    assert ", 1e-" in text


def test_fmt_decimal_exact():
    from fractions import Fraction

    assert cert.fmt_decimal(Fraction(497314, 100)) == "4973.14"
    assert cert.fmt_decimal(Fraction(6)) == "6"
    assert cert.fmt_decimal(Fraction(121, 100)) == "1.21"


def test_render_and_parse_roundtrip(case1_run):
    config = RunConfig(case_selector="23")
    text = cert.render_case(case1_run, config)
    docs = cert.parse_certificates(text)
    assert len(docs) == 1
    doc = docs[0]
    assert doc["case"] == "23"
    assert doc["verdict"] == "PROVEN"
    pat = cert.section_values(doc, "valuation-pattern")
    assert pat["p"] == "23"
    assert pat["e"] == "2"
    assert pat["m0"] == "1"
    assert pat["v0"] == "1"
    baker = cert.section_values(doc, "baker")
    assert baker["c1-printed"] == "4973.14"
    assert baker["c1-within-0.5-of-printed"] == "false"
    residual = cert.section_values(doc, "residual")
    assert residual["printed-match"] == "true"


def test_certificate_deterministic(case1_run):
    config = RunConfig(case_selector="23")
    assert (cert.render_case(case1_run, config)
            == cert.render_case(case1_run, config))


def test_certificates_byte_identical_across_runs(case1_run):
    """A fresh pipeline run renders the identical document."""
    from smcert.pipeline import run_case

    config = RunConfig(case_selector="23")
    fresh = run_case(23, config)
    assert (cert.render_case(fresh, config)
            == cert.render_case(case1_run, config))


def test_loader_rejects_unknown_versions():
    with pytest.raises(ValueError):
        cert.parse_certificates("smcert-certificate v999\ncase = 23\n")
    with pytest.raises(ValueError):
        cert.parse_certificates("not a certificate\n")


def test_cli_usage_error_exit_code():
    from smcert.cli import main

    assert main(["certify", "--case", "99"]) == 2


def test_cli_certify_both_writes_directory(tmp_path, case1_run, case2_run):
    # reuse the session fixtures only for warm caches; the CLI runs fresh
    from smcert.cli import main

    out = tmp_path / "certs"
    code = main(["certify", "--case", "both", "--out", str(out)])
    assert code == 0
    c23 = (out / "case-23.cert").read_text()
    c31 = (out / "case-31.cert").read_text()
    assert cert.parse_certificates(c23)[0]["verdict"] == "PROVEN"
    doc31 = cert.parse_certificates(c31)[0]
    assert doc31["verdict"] == "PROVEN"
    assert cert.section_values(doc31, "valuation-pattern")["p"] == "11"


def test_cli_oracle_valuation_scan_exit():
    from smcert.cli import main

    assert main(["oracle", "valuation-scan", "--case", "31",
                 "--max-m", "40"]) == 0
