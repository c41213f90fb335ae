"""Bound-regression suite.

Each check evaluates one inequality (or a two-sided estimate) on a seeded
grid of finite instances.  Assert checks fail the suite when any instance
violates its bound; report checks only record traces of quantities whose
behaviour is asymptotic.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import asdict, dataclass, field
from decimal import ROUND_DOWN, Decimal
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .corebase import Constant, ExplicitThenTail, Perm, SquareBlockSwap, SwapSet, digit_count
from .discrepancy import prefix_reports, star_disc_2d
from .generators import (
    AllOnesNUT,
    FirstColumnSequence,
    GenMatrix,
    IdTauInterleave,
    NUTSequence,
    PointSet2D,
    RepeatedSequence,
    ScrambledNUT,
    digital_net,
    digital_net_numerators,
    hammersley,
    swap_vector,
    van_der_corput,
)
from .netverify import digital_t
from .psi import alpha_pm, hammersley_psi_maxima
from .walsh2 import BlockNet, Net2Base2, random_net_matrix, verify_block_net_bound, witness_closed_form

DEFAULT_SEED = 20130501


@dataclass
class SuiteConfig:
    select: list[str] | None = None
    m_max: int = 10
    n_max: int = 512
    seed: int = DEFAULT_SEED
    samples: int = 100
    trace_n_max: int = 4096
    alpha_n: int = 8
    time_budget: float | None = None

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class Record:
    params: dict
    computed: dict
    bound: dict
    passed: bool | None


@dataclass
class CheckResult:
    check: str
    anchor: str
    kind: str
    status: str
    records: list[Record] = field(default_factory=list)
    elapsed: float = 0.0
    note: str = ""

    @property
    def failures(self) -> int:
        return sum(r.passed is False for r in self.records)

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "anchor": self.anchor,
            "kind": self.kind,
            "status": self.status,
            "instances": len(self.records),
            "failures": self.failures,
            "elapsed_s": round(self.elapsed, 3),
            "note": self.note,
            "results": [
                {
                    "check": self.check,
                    "anchor": self.anchor,
                    "params": r.params,
                    "computed": r.computed,
                    "bound": r.bound,
                    "pass": r.passed,
                }
                for r in self.records
            ],
        }


@dataclass
class SuiteReport:
    config: SuiteConfig
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.status not in ("fail",) for c in self.checks if c.kind == "assert")

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "seed": self.config.seed,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }


def fs(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def dec(x: float) -> str:
    """Four decimals, truncated toward zero."""
    return str(Decimal(x).quantize(Decimal("0.0001"), rounding=ROUND_DOWN))


class _Context:
    def __init__(self, cfg: SuiteConfig):
        self.cfg = cfg
        self.rng = np.random.default_rng(cfg.seed)
        self._ham: dict[tuple, Fraction] = {}
        self._vdc: dict[tuple[int, int], list] = {}
        self._alpha: dict[tuple, tuple[Fraction, Fraction]] = {}

    def hammersley_dstar(self, b: int, sigmas: list[Perm]) -> Fraction:
        key = (b, tuple(s.table for s in sigmas))
        if key not in self._ham:
            if not sigmas:
                self._ham[key] = star_disc_2d([(Fraction(0), Fraction(0))])
            else:
                self._ham[key] = star_disc_2d(hammersley(b, len(sigmas), sigmas))
        return self._ham[key]

    def vdc_reports(self, b: int, n: int) -> list:
        key = (b, n)
        if key not in self._vdc:
            self._vdc[key] = prefix_reports(van_der_corput(b).exact_prefix(n))
        return self._vdc[key]

    def alpha_pm(self, b: int, sigma: Perm) -> tuple[Fraction, Fraction]:
        key = (b, sigma.table)
        if key not in self._alpha:
            plus, minus = alpha_pm(b, sigma, self.cfg.alpha_n)
            self._alpha[key] = (plus.estimate, minus.estimate)
        return self._alpha[key]

    def random_perm(self, b: int) -> Perm:
        return Perm(tuple(int(v) for v in self.rng.permutation(b)))


# --------------------------------------------------------------------------
# nets


def _random_digital_net(ctx: _Context, b: int, m: int) -> tuple[PointSet2D, int, list[list[int]]]:
    mats = [ctx.rng.integers(0, b, (m, m)) for _ in range(2)]
    t = digital_t(mats, b, m)
    P = digital_net([GenMatrix.from_dense(c, b) for c in mats], m)
    return P, t, [c.tolist() for c in mats]


def _net_grid(ctx: _Context, bases=(2, 3), cap: int | None = None) -> list[tuple[int, int]]:
    top = ctx.cfg.m_max if cap is None else min(cap, ctx.cfg.m_max)
    return [(b, m) for m in range(1, top + 1) for b in bases]


def check_net_digit_bound(ctx: _Context) -> Iterator[Record]:
    grid = _net_grid(ctx)
    for i in range(ctx.cfg.samples if grid else 0):
        b, m = grid[i % len(grid)]
        P, t, mats = _random_digital_net(ctx, b, m)
        d = star_disc_2d(P)
        bound = math.floor(Fraction((b - 1) * (m - t), 2) + Fraction(3, 2)) * b**t
        yield Record({"b": b, "m": m, "t": t, "matrices": mats}, {"dstar": fs(d)}, {"upper": fs(bound)}, d <= bound)


def check_base2_net_bound(ctx: _Context) -> Iterator[Record]:
    ms = list(range(1, min(10, ctx.cfg.m_max) + 1))
    for i in range(ctx.cfg.samples if ms else 0):
        m = ms[i % len(ms)]
        c2 = random_net_matrix(m, ctx.rng)
        d = star_disc_2d(Net2Base2(c2).points())
        bound = Fraction(m, 3) + Fraction(19, 9)
        yield Record({"m": m, "C2": c2.tolist()}, {"dstar": fs(d)}, {"upper": fs(bound)}, d <= bound)


def check_net_vs_hammersley(ctx: _Context) -> Iterator[Record]:
    grid = _net_grid(ctx)
    for i in range(ctx.cfg.samples if grid else 0):
        b, m = grid[i % len(grid)]
        P, t, mats = _random_digital_net(ctx, b, m)
        d = star_disc_2d(P)
        h = ctx.hammersley_dstar(b, [Perm.identity(b)] * (m - t))
        bound = b**t * h + b**t
        yield Record(
            {"b": b, "m": m, "t": t, "matrices": mats},
            {"dstar": fs(d), "hammersley_dstar": fs(h)},
            {"upper": fs(bound)},
            d <= bound,
        )


# --------------------------------------------------------------------------
# one-dimensional sequences


def _random_nut(ctx: _Context, b: int, n: int) -> tuple[NUTSequence, dict]:
    head = digit_count(max(n - 1, 1), b) + 2
    sigmas = ExplicitThenTail(tuple(ctx.random_perm(b) for _ in range(head)), ctx.random_perm(b))
    C = GenMatrix.random_strict_upper(b, head + 1, ctx.rng)
    return NUTSequence(sigmas, C), {"sigmas": str(sigmas), "C": C.dense(head + 1).tolist()}


def check_worst_sequence(ctx: _Context) -> Iterator[Record]:
    n = ctx.cfg.n_max
    for b in (2, 3, 5):
        ref = ctx.vdc_reports(b, n)
        equal = all(r.dstar == r.dextreme for r in ref)
        yield Record({"b": b, "sequence": "van der Corput", "N_max": n}, {"dstar_equals_d": equal}, {}, equal)
        candidates = [_random_nut(ctx, b, n) for _ in range(4)]
        if b == 2:
            candidates.append((FirstColumnSequence(2), {"sequence": "first-column"}))
        if b == 3:
            candidates.append((IdTauInterleave(3), {"sequence": "id-tau-interleave"}))
        for seq, params in candidates:
            reps = prefix_reports(seq.exact_prefix(n))
            excess = max(x.dstar - r.dstar for x, r in zip(reps, ref))
            yield Record({"b": b, "N_max": n, **params}, {"max_excess": fs(excess)}, {"upper": "0/1"}, excess <= 0)


def _two_sided(ctx: _Context, seq, b: int, n: int, d_slack: Fraction, s_slack: Fraction) -> Iterator[Record]:
    ref = ctx.vdc_reports(b, n)
    reps = prefix_reports(seq.exact_prefix(n))
    pairs = list(zip(reps, ref))
    parts = {
        "D >= 2 D(vdc) - c": min(x.dextreme - (2 * r.dextreme - d_slack) for x, r in pairs),
        "D <= 2 D(vdc)": min(2 * r.dextreme - x.dextreme for x, r in pairs),
        "D* >= D*(vdc) - c": min(x.dstar - (r.dstar - s_slack) for x, r in pairs),
        "D* <= D*(vdc)": min(r.dstar - x.dstar for x, r in pairs),
        "D*(vdc) = D(vdc)": min(Fraction(int(r.dstar == r.dextreme)) - 1 for r in ref),
    }
    for name, slack in parts.items():
        yield Record(
            {"b": b, "N_max": n, "inequality": name, "c_D": fs(d_slack), "c_Dstar": fs(s_slack)},
            {"min_slack": fs(slack)},
            {"lower": "0/1"},
            slack >= 0,
        )


def check_first_column(ctx: _Context) -> Iterator[Record]:
    yield from _two_sided(ctx, FirstColumnSequence(2), 2, ctx.cfg.n_max, Fraction(5, 2), Fraction(3, 2))


def check_interleave(ctx: _Context) -> Iterator[Record]:
    n = min(729, max(ctx.cfg.n_max, 1))
    yield from _two_sided(ctx, IdTauInterleave(3), 3, n, Fraction(4), Fraction(2))


def check_repetition(ctx: _Context) -> Iterator[Record]:
    n = min(128, ctx.cfg.n_max)
    for b, t in itertools.product((2, 3), (1, 2)):
        ref = ctx.vdc_reports(b, n)
        rep = prefix_reports(RepeatedSequence(van_der_corput(b), t).exact_prefix(b**t * n))
        worst = min(b**t * ref[k - 1].dstar - rep[b**t * k - 1].dstar for k in range(1, n + 1))
        yield Record({"b": b, "t": t, "N_max": n}, {"min_slack": fs(worst)}, {"lower": "0/1"}, worst >= 0)


def check_swap_family(ctx: _Context) -> Iterator[Record]:
    n = ctx.cfg.n_max
    for b in (2, 3, 5):
        for _ in range(3):
            sigma = ctx.random_perm(b)
            width = digit_count(max(n - 1, 1), b) + 2
            mask = tuple(bool(v) for v in ctx.rng.integers(0, 2, width))
            sigmas = SwapSet(sigma, mask, bool(ctx.rng.integers(0, 2)))
            C = GenMatrix.random_strict_upper(b, width, ctx.rng)
            x = prefix_reports(NUTSequence(sigmas, C).exact_prefix(n))
            s = prefix_reports(NUTSequence(Constant(sigma)).exact_prefix(n))
            slack = min(a.dstar - r.dextreme / 2 for a, r in zip(x, s))
            yield Record(
                {"b": b, "sigma": str(sigma), "swapset": str(sigmas), "C": C.dense(width).tolist(), "N_max": n},
                {"min_slack": fs(slack)},
                {"lower": "0/1"},
                slack >= 0,
            )


# --------------------------------------------------------------------------
# permuted Hammersley sets


def _even_up(m: int) -> int:
    return m if m % 2 == 0 else m + 1


def _hammersley_vectors(ctx: _Context, b: int, m: int) -> list[tuple[str, list[Perm]]]:
    ident = Perm.identity(b)
    out = [("id", [ident] * m), ("id-tau", swap_vector("id-tau", m, ident))]
    if m % 2 == 0:
        out.append(("alternating", swap_vector("alternating", m, ident)))
    n_random = 3 if b**m <= 3**10 else 1
    for _ in range(n_random):
        out.append(("random", [ctx.random_perm(b) for _ in range(m)]))
    return out


def _ham_params(b: int, m: int, name: str, sigmas: list[Perm]) -> dict:
    return {"b": b, "m": m, "vector": name, "sigmas": [str(s) for s in sigmas]}


def _ham_grid(ctx: _Context) -> list[tuple[int, int]]:
    return [(b, m) for b in (2, 3) for m in range(1, min(12, ctx.cfg.m_max) + 1)]


def check_hammersley_psi(ctx: _Context) -> Iterator[Record]:
    ctx.ham_vectors = {}
    for b, m in _ham_grid(ctx):
        vectors = _hammersley_vectors(ctx, b, m)
        ctx.ham_vectors[(b, m)] = vectors
        for name, sigmas in vectors:
            d = ctx.hammersley_dstar(b, sigmas)
            plus, minus = hammersley_psi_maxima(b, sigmas)
            resid = d - max(plus, minus)
            yield Record(
                _ham_params(b, m, name, sigmas),
                {"dstar": fs(d), "psi_plus_max": fs(plus), "psi_minus_max": fs(minus), "residual": fs(resid)},
                {"residual_window": ["0/1", "2/1"]},
                0 <= resid <= 2,
            )


def check_hammersley_vs_classical(ctx: _Context) -> Iterator[Record]:
    vectors = getattr(ctx, "ham_vectors", None) or {bm: _hammersley_vectors(ctx, *bm) for bm in _ham_grid(ctx)}
    for (b, m), vs in vectors.items():
        base = ctx.hammersley_dstar(b, [Perm.identity(b)] * m)
        for name, sigmas in vs:
            d = ctx.hammersley_dstar(b, sigmas)
            yield Record(
                _ham_params(b, m, name, sigmas),
                {"dstar": fs(d), "classical_dstar": fs(base)},
                {"upper": fs(base + 2)},
                d <= base + 2,
            )


def half_swap_constant(b: int) -> Fraction:
    return Fraction(b - 1, 8) if b % 2 else Fraction(b * b, 8 * (b + 1))


def alternating_constant(b: int) -> Fraction:
    return Fraction((b - 1) * (b + 2), 8 * (b + 1)) if b % 2 else Fraction(b**3, 8 * (b * b + 1))


def check_half_swap(ctx: _Context) -> Iterator[Record]:
    for b, m in _ham_grid(ctx):
        sigmas = swap_vector("id-tau", m, Perm.identity(b))
        d = ctx.hammersley_dstar(b, sigmas)
        lead = half_swap_constant(b) * _even_up(m)
        resid = d - lead
        yield Record(
            _ham_params(b, m, "id-tau", sigmas),
            {"dstar": fs(d), "leading": fs(lead), "residual": fs(resid)},
            {"residual_window": ["0/1", "3/1"]},
            0 <= resid <= 3,
        )


def check_alternating(ctx: _Context) -> Iterator[Record]:
    c2 = alternating_constant(2)
    yield Record({"b": 2, "quantity": "leading constant"}, {"constant": fs(c2)}, {"equals": "1/5"}, c2 == Fraction(1, 5))
    for b, m in _ham_grid(ctx):
        if m % 2:
            continue
        sigmas = swap_vector("alternating", m, Perm.identity(b))
        d = ctx.hammersley_dstar(b, sigmas)
        lead = alternating_constant(b) * m
        resid = d - lead
        yield Record(
            _ham_params(b, m, "alternating", sigmas),
            {"dstar": fs(d), "leading": fs(lead), "residual": fs(resid)},
            {"residual_window": ["0/1", "3/1"]},
            0 <= resid <= 3,
        )


def check_sigma_bar(ctx: _Context) -> Iterator[Record]:
    """Residual against upper estimates of the constants.

    The estimates can only overshoot, which pushes the residual down; a value
    below -1 is therefore reported as inconclusive rather than failed.
    """
    for b in (2, 3):
        for table in itertools.permutations(range(b)):
            sigma = Perm(table)
            ap, am = ctx.alpha_pm(b, sigma)
            const = (ap + am) / 2
            for m in range(1, min(12, ctx.cfg.m_max) + 1):
                sigmas = swap_vector("sigma-bar", m, sigma)
                d = ctx.hammersley_dstar(b, sigmas)
                resid = d - const * _even_up(m)
                if resid > 4:
                    ok: bool | None = False
                elif resid < -1:
                    ok = None
                else:
                    ok = True
                yield Record(
                    {**_ham_params(b, m, "sigma-bar", sigmas), "sigma": str(sigma)},
                    {"dstar": fs(d), "alpha_plus_est": fs(ap), "alpha_minus_est": fs(am), "residual": fs(resid)},
                    {"residual_window": ["-1/1", "4/1"]},
                    ok,
                )


def check_block_net(ctx: _Context) -> Iterator[Record]:
    for m in (4, 6, 8, 10):
        if m > ctx.cfg.m_max:
            continue
        for _ in range(20):
            block = BlockNet.random(m, ctx.rng)
            rep = verify_block_net_bound(block)
            yield Record(
                {"m": m, "C2": block.C2.tolist()},
                {"dstar": fs(rep.dstar), "witness": fs(rep.witness)},
                {"lower": fs(rep.bound)},
                rep.ok,
            )


# --------------------------------------------------------------------------
# report-only traces


LN2 = math.log(2)
SOBOL_LOWER = 1 / (24 * LN2**2)
ALL_ONES_WINDOW = (1 / (5 * LN2), 5099 / (22528 * LN2))
RHO_BASE3 = 1 / (4 * math.log(3))
RHO_BASE2 = 1 / (6 * LN2)


def t2_sequence_constant(b: int, t: int = 0) -> float:
    """Leading constant of the (log N)^2 upper bound for (t,2)-sequences."""
    lb = math.log(b)
    if b % 2 == 0:
        return b**t / 16 * b * b * (b - 1) ** 2 / ((b * b - 1) * lb * lb)
    return b**t / 16 * (b - 1) ** 2 / (lb * lb)


def _prefix_trace(values: list[Fraction], b: int, denom: Callable[[int], float]) -> Iterator[tuple[int, float, float]]:
    """(N, value(N) / denom(N), max of value(M) / denom(M) over N/b < M <= N) at N = b^k."""
    N = b
    while N <= len(values):
        window = range(max(2, N // b + 1), N + 1)
        best = max(float(values[M - 1]) / denom(M) for M in window)
        yield N, float(values[N - 1]) / denom(N), best
        N *= b


def check_pascal_trace(ctx: _Context) -> Iterator[Record]:
    k_max = max(1, int(math.log2(ctx.cfg.trace_n_max)))
    mats = [GenMatrix.identity(2, k_max), GenMatrix.pascal(2, k_max)]
    num = digital_net_numerators(mats, 2, k_max)
    full = PointSet2D(2, k_max, num[:, 0], num[:, 1], "pascal-sequence")
    every = min(2**k_max, 1024)
    dvals = [star_disc_2d(PointSet2D(2, k_max, full.xnum[:N], full.ynum[:N])) for N in range(1, every + 1)]
    windows = {N: best for N, _, best in _prefix_trace(dvals, 2, lambda M: math.log(M) ** 2)}
    up = t2_sequence_constant(2)
    for k in range(1, k_max + 1):
        N = 2**k
        d = dvals[N - 1] if N <= every else star_disc_2d(PointSet2D(2, k_max, full.xnum[:N], full.ynum[:N]))
        computed = {
            "dstar": fs(d),
            "ratio_log2": dec(float(d) / math.log(N) ** 2),
            "ratio_to_upper": dec(float(d) / (up * math.log(N) ** 2)),
        }
        if N in windows:
            computed["window_max_ratio_log2"] = dec(windows[N])
        yield Record({"N": N}, computed, {"lower_constant": dec(SOBOL_LOWER), "upper_constant": dec(up)}, None)


def _sequence_trace(values, b, target: dict) -> Iterator[Record]:
    for N, ratio, best in _prefix_trace(values, b, math.log):
        yield Record({"N": N}, {"ratio_log": dec(ratio), "window_max_ratio_log": dec(best)}, target, None)


def check_all_ones_trace(ctx: _Context) -> Iterator[Record]:
    n = ctx.cfg.trace_n_max
    reps = prefix_reports(AllOnesNUT(2).exact_prefix(n))
    lo, hi = ALL_ONES_WINDOW
    yield from _sequence_trace([r.dstar for r in reps], 2, {"window": [dec(lo), dec(hi)]})


def check_rho_traces(ctx: _Context) -> Iterator[Record]:
    n = ctx.cfg.trace_n_max
    width = digit_count(n, 2) + 2
    pattern3 = SquareBlockSwap(Perm.identity(3)).as_swapset()
    C3 = GenMatrix.random_strict_upper(3, width, ctx.rng)
    x3 = prefix_reports(NUTSequence(pattern3, C3).exact_prefix(n))
    for rec in _sequence_trace([r.dstar for r in x3], 3, {"target": dec(RHO_BASE3)}):
        rec.params.update({"b": 3, "swapset": "square-blocks", "C": C3.dense(width).tolist()})
        yield rec
    pattern2 = SquareBlockSwap(Perm.identity(2)).as_swapset()
    C2 = GenMatrix.random_nut(2, width, ctx.rng, unit_diagonal=True)
    x2 = prefix_reports(ScrambledNUT(pattern2, C2).exact_prefix(n))
    for rec in _sequence_trace([r.dstar for r in x2], 2, {"target": dec(RHO_BASE2)}):
        rec.params.update({"b": 2, "shifts": "square-blocks", "C": C2.dense(width).tolist()})
        yield rec


def check_net_thresholds(ctx: _Context) -> Iterator[Record]:
    for b, m in _ham_grid(ctx):
        slope = 0.75 - math.sqrt(3 * b - 1) / (2 * b)
        for name, sigmas in (("id", [Perm.identity(b)] * m), ("id-tau", swap_vector("id-tau", m, Perm.identity(b)))):
            d = ctx.hammersley_dstar(b, sigmas)
            logn = m * math.log(b)
            yield Record(
                {"b": b, "m": m, "vector": name},
                {"dstar": fs(d), "over_generic": dec(float(d) / (0.03 * logn)), "over_permuted": dec(float(d) / (slope * m))},
                {"generic": dec(0.03 * logn), "permuted_hammersley": dec(slope * m), "permuted_slope": dec(slope)},
                None,
            )


def check_witness_forms(ctx: _Context) -> Iterator[Record]:
    from .walsh2 import witness_closed_form_corrected, witness_sum

    for m in range(2, 21):
        w = witness_sum(m)
        yield Record(
            {"m": m, "m0": m // 2},
            {"witness": fs(w), "stated_matches": w == witness_closed_form(m), "corrected_matches": w == witness_closed_form_corrected(m)},
            {"stated": fs(witness_closed_form(m)), "corrected": fs(witness_closed_form_corrected(m))},
            None,
        )


# --------------------------------------------------------------------------
# catalog and runner


@dataclass(frozen=True)
class BoundCheck:
    name: str
    anchor: str
    kind: str
    run: Callable[[_Context], Iterator[Record]]


CATALOG: tuple[BoundCheck, ...] = (
    BoundCheck("net-digit-bound", "D*(P) <= floor((b-1)(m-t)/2 + 3/2) b^t for digital (t,m,2)-nets", "assert", check_net_digit_bound),
    BoundCheck("base2-net-bound", "D*(P) <= m/3 + 19/9 for digital (0,m,2)-nets over Z_2", "assert", check_base2_net_bound),
    BoundCheck("net-vs-hammersley", "D*(P) <= b^t D*(H_{b,m-t}) + b^t for digital (t,m,2)-nets", "assert", check_net_vs_hammersley),
    BoundCheck("worst-sequence", "D*(N,X) <= D*(N,S_b^id) = D(N,S_b^id) for (0,1)-sequences", "assert", check_worst_sequence),
    BoundCheck(
        "first-column-vs-vdc",
        "2D(N,S_2^id) - 5/2 <= D(N,X) <= 2D(N,S_2^id), D*(N,S_2^id) - 3/2 <= D*(N,X) <= D*(N,S_2^id)",
        "assert",
        check_first_column,
    ),
    BoundCheck(
        "interleave-vs-vdc",
        "2D(N,S_b^id) - 2(b-1) <= D(N,X) <= 2D(N,S_b^id), D*(N,S_b^id) - (b-1) <= D*(N,X) <= D*(N,S_b^id), b = 3",
        "assert",
        check_interleave,
    ),
    BoundCheck("repetition-bound", "D*(b^t N, repeated S_b^id) <= b^t D*(N, S_b^id)", "assert", check_repetition),
    BoundCheck("hammersley-psi-window", "D*(H^sigma) - max(max_n sum psi+, max_n sum psi-) in [0, 2]", "assert", check_hammersley_psi),
    BoundCheck("hammersley-vs-classical", "D*(H^sigma) <= D*(H^id) + 2", "assert", check_hammersley_vs_classical),
    BoundCheck("half-swap-hammersley", "D*(H^{id..tau..}) - leading term in [0, 3]", "assert", check_half_swap),
    BoundCheck("alternating-hammersley", "D*(H^{id,tau,id,tau,..}) - leading term in [0, 3]; base-2 constant 1/5", "assert", check_alternating),
    BoundCheck("sigma-bar-hammersley", "D*(H^{sigma..sigma-bar..}) - (a+ + a-)/2 m' in [-1, 4]", "assert", check_sigma_bar),
    BoundCheck("block-net-lower-bound", "D*(P) >= |Delta(witness)| >= m/12 - 49/36", "assert", check_block_net),
    BoundCheck("swap-family-lower-bound", "D*(N, X with sigma / tau o sigma digits) >= D(N, S_b^sigma) / 2", "assert", check_swap_family),
    BoundCheck("pascal-sequence-trace", "D*(N)/(log N)^2 for the identity/Pascal (0,2)-sequence", "report", check_pascal_trace),
    BoundCheck("all-ones-trace", "D*(N)/log N for the all-ones NUT sequence in base 2", "report", check_all_ones_trace),
    BoundCheck("swap-family-rho-trace", "D*(N)/log N for square-block swap sequences, b = 2, 3", "report", check_rho_traces),
    BoundCheck("net-lower-thresholds", "D* of Hammersley nets against generic and permuted lower thresholds", "report", check_net_thresholds),
    BoundCheck("block-net-witness-forms", "witness value against the closed forms, m <= 20", "report", check_witness_forms),
)

CHECK_NAMES = tuple(c.name for c in CATALOG)


def _status(kind: str, records: list[Record]) -> str:
    if kind == "report":
        return "report"
    if any(r.passed is False for r in records):
        return "fail"
    if any(r.passed is None for r in records):
        return "inconclusive"
    return "pass"


def run_suite(config: SuiteConfig | None = None) -> SuiteReport:
    """Run the selected checks in catalog order."""
    cfg = config or SuiteConfig()
    if cfg.select is not None:
        unknown = sorted(set(cfg.select) - set(CHECK_NAMES))
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(unknown)}")
    chosen = [c for c in CATALOG if cfg.select is None or c.name in cfg.select]
    ctx = _Context(cfg)
    start = time.perf_counter()
    results = []
    for check in chosen:
        if cfg.time_budget is not None and time.perf_counter() - start > cfg.time_budget:
            results.append(CheckResult(check.name, check.anchor, check.kind, "skipped", note="time budget exceeded"))
            continue
        t0 = time.perf_counter()
        records = list(check.run(ctx))
        results.append(CheckResult(check.name, check.anchor, check.kind, _status(check.kind, records), records, time.perf_counter() - t0))
    return SuiteReport(cfg, results)


def format_report(report: SuiteReport) -> str:
    lines = []
    for c in report.checks:
        lines.append(f"{c.status.upper():12s} {c.check}  ({len(c.records)} instances, {c.failures} failures, {c.elapsed:.1f}s)")
        if c.kind == "report" and c.records:
            last = c.records[-1]
            where = ", ".join(f"{k}={v}" for k, v in last.params.items() if not isinstance(v, list))
            lines.append(f"             {where}: {last.computed} vs {last.bound}")
    lines.append("PASSED" if report.passed else "FAILED")
    return "\n".join(lines)
