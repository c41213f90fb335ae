"""Acceptance criteria, one test each, at the stated parameters.

Each test records a one-line verdict; the lines are printed together at the
end of the session (see conftest.py) and immediately with ``pytest -s``.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from lowdisc.corebase import Constant, ExplicitThenTail, Perm
from lowdisc.discrepancy import disc_1d, prefix_reports, sequence_net_sandwich, star_disc_1d_sorted
from lowdisc.generators import GenMatrix, NUTSequence, digital_net, van_der_corput
from lowdisc.harness import SuiteConfig, format_report, run_suite
from lowdisc.netverify import digital_rank_check, is_net
from lowdisc.psi import alpha, closed_form_alpha, formula_disc
from lowdisc.walsh2 import (
    BlockNet,
    Net2Base2,
    local_delta_table,
    local_delta_walsh,
    random_net_matrix,
    witness_box,
    verify_block_net_bound,
    witness_closed_form,
)

SEED = 20130501
VERDICTS: list[str] = []

pytestmark = pytest.mark.acceptance


def verdict(number: int, title: str, ok: bool, detail: str, started: float) -> None:
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail} ({time.perf_counter() - started:.1f}s)"
    VERDICTS.append(line)
    print(line)
    assert ok, line


def random_perm(b, rng):
    return Perm(tuple(int(v) for v in rng.permutation(b)))


def test_criterion_01_formula_matches_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 1)
    mismatches = []
    for b in (2, 3, 5):
        for pair in range(50):
            head = tuple(random_perm(b, rng) for _ in range(int(rng.integers(0, 7))))
            sigmas = ExplicitThenTail(head, random_perm(b, rng))
            C = GenMatrix.random_strict_upper(b, 12, rng)
            reps = prefix_reports(NUTSequence(sigmas, C).exact_prefix(500))
            for N, ref in enumerate(reps, start=1):
                got = formula_disc(sigmas, C, b, N)
                if (got.dplus, got.dminus, got.dstar, got.dextreme) != (ref.dplus, ref.dminus, ref.dstar, ref.dextreme):
                    mismatches.append((b, pair, N))
    verdict(1, "formula = oracle", not mismatches, f"150 pairs x 500 N, {len(mismatches)} mismatches", t0)


def test_criterion_02_sorted_formula():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 2)
    bad = 0
    for N in range(1, 65):
        for _ in range(1000):
            den = int(rng.integers(1, 2 * N + 2))
            xs = [Fraction(int(v), den) for v in rng.integers(0, den, N)]
            if star_disc_1d_sorted(xs) != disc_1d(xs).dstar:
                bad += 1
    verdict(2, "sorted closed formula = D*", bad == 0, f"64000 multisets, {bad} mismatches", t0)


def test_criterion_03_alpha_constants():
    t0 = time.perf_counter()
    parts, ok = [], True
    for b in (2, 3, 4, 5):
        est = alpha(b, Perm.identity(b), 8).estimate
        lo = closed_form_alpha(b)
        ok &= lo <= est <= Fraction(11, 10) * lo
        parts.append(f"b={b} {float(est):.4f} in [{float(lo):.4f}, {float(lo) * 1.1:.4f}]")
    verdict(3, "alpha(b, id, 8)", ok, "; ".join(parts), t0)


def _suite_line(report) -> str:
    return ", ".join(f"{c.check}={c.status}({len(c.records)})" for c in report.checks)


def test_criterion_04_hammersley_windows():
    t0 = time.perf_counter()
    cfg = SuiteConfig(
        select=["hammersley-psi-window", "hammersley-vs-classical", "half-swap-hammersley", "alternating-hammersley"],
        m_max=12,
        seed=SEED,
    )
    rep = run_suite(cfg)
    ok = rep.passed and all(c.status == "pass" for c in rep.checks)
    ms = {r.params["m"] for c in rep.checks for r in c.records if "m" in r.params}
    ok &= max(ms) == 12
    verdict(4, "Hammersley windows, m <= 12", ok, _suite_line(rep), t0)


def test_criterion_05_net_upper_bounds():
    t0 = time.perf_counter()
    cfg = SuiteConfig(select=["net-digit-bound", "base2-net-bound", "net-vs-hammersley"], m_max=10, samples=100, seed=SEED)
    rep = run_suite(cfg)
    ok = rep.passed and all(c.status == "pass" and len(c.records) == 100 for c in rep.checks)
    verdict(5, "net upper bounds", ok, _suite_line(rep), t0)


def test_criterion_06_block_net_witness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 6)
    form_bad = []
    for m in range(2, 21):
        _, _, value = witness_box(BlockNet.random(m, rng))
        if value != witness_closed_form(m):
            form_bad.append(m)
    nets_ok = True
    for m in (4, 6, 8, 10):
        for _ in range(20):
            nets_ok &= verify_block_net_bound(BlockNet.random(m, rng)).ok
    detail = f"closed form mismatches at m={form_bad}; 80 BlockNets {'pass' if nets_ok else 'FAIL'}"
    verdict(6, "witness closed form and lower bound", not form_bad and nets_ok, detail, t0)


def test_criterion_07_walsh_formula():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 7)
    bad = 0
    for m in range(3, 7):
        for _ in range(10):
            net = Net2Base2(random_net_matrix(m, rng))
            table = local_delta_table(net)
            for e in range(2**m):
                for f in range(2**m):
                    bad += local_delta_walsh(net, e, f) != Fraction(int(table[e, f]), 2**m)
    verdict(7, "Walsh formula = direct count", bad == 0, f"40 nets, all 4^m pairs, {bad} mismatches", t0)


def test_criterion_08_rank_vs_count():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 8)
    bad = 0
    for p in (2, 3, 5):
        for trial in range(100):
            m = 1 + trial % 6
            mats = [rng.integers(0, p, (m, m)) for _ in range(2)]
            P = digital_net([GenMatrix.from_dense(c, p) for c in mats], m)
            for t in range(m + 1):
                bad += digital_rank_check(mats, p, m, t) != is_net(P, p, m, 2, t)
    verdict(8, "rank condition = counting", bad == 0, f"300 matrix pairs, {bad} disagreements", t0)


def test_criterion_09_sandwich():
    t0 = time.perf_counter()
    seqs = {
        "S_2^id": van_der_corput(2),
        "S_3^id": van_der_corput(3),
        "S_2^tau": NUTSequence(Constant(Perm((1, 0)))),
    }
    Ns = sorted({2**k for k in range(7)} | {3**k for k in range(7)})
    failures = [(name, N) for name, S in seqs.items() for N in Ns if not sequence_net_sandwich(S, N).ok]
    verdict(9, "sequence/net sandwich", not failures, f"{len(seqs) * len(Ns)} cases, failures {failures}", t0)


def test_criterion_10_sequence_bounds():
    t0 = time.perf_counter()
    rep = run_suite(SuiteConfig(select=["worst-sequence", "repetition-bound"], n_max=512, seed=SEED))
    ok = rep.passed and all(c.status == "pass" for c in rep.checks)
    verdict(10, "worst-sequence and repetition bounds", ok, _suite_line(rep), t0)


def test_criterion_11_report_traces():
    t0 = time.perf_counter()
    rep = run_suite(
        SuiteConfig(select=["pascal-sequence-trace", "all-ones-trace", "swap-family-rho-trace"], seed=SEED, trace_n_max=4096)
    )
    pascal, ones, rho = rep.checks
    consts = {
        "pascal lower": pascal.records[-1].bound["lower_constant"],
        "pascal upper": pascal.records[-1].bound["upper_constant"],
        "all-ones": ones.records[-1].bound["window"],
        "rho b=3": next(r.bound["target"] for r in rho.records if r.params["b"] == 3),
        "rho b=2": next(r.bound["target"] for r in rho.records if r.params["b"] == 2),
    }
    expected = {
        "pascal lower": "0.0867",
        "pascal upper": "0.1734",
        "all-ones": ["0.2885", "0.3265"],
        "rho b=3": "0.2275",
        "rho b=2": "0.2404",
    }
    ok = consts == expected and all(c.status == "report" and c.records for c in rep.checks)
    ok &= max(r.params["N"] for r in pascal.records) == 4096
    text = format_report(rep)
    print(text)
    verdict(11, "report-only traces", ok, str(consts), t0)
