import json
import math

import pytest

from lowdisc.harness import (
    CATALOG,
    CHECK_NAMES,
    SuiteConfig,
    alternating_constant,
    format_report,
    half_swap_constant,
    run_suite,
    t2_sequence_constant,
)

from fractions import Fraction


def test_catalog_names_unique():
    assert len(set(CHECK_NAMES)) == len(CHECK_NAMES)
    assert {c.kind for c in CATALOG} == {"assert", "report"}


def test_empty_selection_passes():
    rep = run_suite(SuiteConfig(select=[]))
    assert rep.checks == [] and rep.passed
    assert rep.to_json()["checks"] == []


def test_unknown_check_rejected():
    with pytest.raises(ValueError, match="nope"):
        run_suite(SuiteConfig(select=["nope"]))


def test_two_sided_check_small():
    rep = run_suite(SuiteConfig(select=["first-column-vs-vdc"], n_max=64))
    (c,) = rep.checks
    assert c.status == "pass" and c.records
    row = rep.to_json()["checks"][0]["results"][0]
    assert set(row) == {"check", "anchor", "params", "computed", "bound", "pass"}


def test_report_is_deterministic():
    cfg = SuiteConfig(select=["net-digit-bound", "worst-sequence"], m_max=4, n_max=32, samples=6)
    a = run_suite(cfg).to_json()
    b = run_suite(cfg).to_json()
    for c in a["checks"] + b["checks"]:
        c.pop("elapsed_s")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["seed"] == cfg.seed and a["config"]["m_max"] == 4


def test_seed_changes_samples():
    base = dict(select=["net-digit-bound"], m_max=3, samples=4)
    a = run_suite(SuiteConfig(seed=1, **base)).to_json()["checks"][0]["results"]
    b = run_suite(SuiteConfig(seed=2, **base)).to_json()["checks"][0]["results"]
    assert [r["params"] for r in a] != [r["params"] for r in b]


def test_time_budget_marks_skips():
    rep = run_suite(SuiteConfig(select=["first-column-vs-vdc", "repetition-bound"], n_max=16, time_budget=0.0))
    assert [c.status for c in rep.checks] == ["skipped", "skipped"]
    assert all(c.note == "time budget exceeded" and not c.records for c in rep.checks)
    roomy = run_suite(SuiteConfig(select=["first-column-vs-vdc"], n_max=16, time_budget=3600.0))
    assert roomy.checks[0].status == "pass"


def test_small_assert_checks_pass():
    cfg = SuiteConfig(
        select=[
            "base2-net-bound",
            "net-vs-hammersley",
            "interleave-vs-vdc",
            "repetition-bound",
            "hammersley-psi-window",
            "hammersley-vs-classical",
            "half-swap-hammersley",
            "alternating-hammersley",
            "block-net-lower-bound",
            "swap-family-lower-bound",
        ],
        m_max=4,
        n_max=27,
        samples=4,
    )
    rep = run_suite(cfg)
    assert rep.passed, format_report(rep)
    assert all(c.status == "pass" for c in rep.checks)


def test_leading_constants():
    assert half_swap_constant(2) == Fraction(1, 6)
    assert half_swap_constant(3) == Fraction(1, 4)
    assert alternating_constant(2) == Fraction(1, 5)
    assert alternating_constant(3) == Fraction(5, 16)


def test_report_constants_to_four_decimals():
    rep = run_suite(SuiteConfig(select=["pascal-sequence-trace", "all-ones-trace"], trace_n_max=64))
    pascal, ones = rep.checks
    assert pascal.status == ones.status == "report"
    assert pascal.records[-1].bound == {"lower_constant": "0.0867", "upper_constant": "0.1734"}
    assert ones.records[-1].bound == {"window": ["0.2885", "0.3265"]}
    text = format_report(rep)
    assert "0.0867" in text and "0.3265" in text


def test_rho_targets():
    rep = run_suite(SuiteConfig(select=["swap-family-rho-trace"], trace_n_max=81))
    targets = {r.params["b"]: r.bound["target"] for r in rep.checks[0].records}
    assert targets == {3: "0.2275", 2: "0.2404"}


def test_t2_constant():
    assert math.isclose(t2_sequence_constant(2), 1 / (12 * math.log(2) ** 2))


def test_witness_forms_report():
    rep = run_suite(SuiteConfig(select=["block-net-witness-forms"]))
    recs = rep.checks[0].records
    assert len(recs) == 19
    assert all(r.computed["corrected_matches"] for r in recs)
    assert not all(r.computed["stated_matches"] for r in recs)
