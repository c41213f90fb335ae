"""Command-line front end.

Subcommands: gen, disc, check-net, psi, alpha, walsh, suite.  Points travel
as CSV with a header row ("x" or "x,y") and exact "p/q" cells; every JSON
report embeds the run configuration and seed.  Exit codes: 0 success,
1 failed assertion, 2 usage error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .corebase import Perm, as_fraction, parse_permseq
from .discrepancy import disc_1d, disc_2d_report, prefix_reports
from .generators import (
    GenMatrix,
    PointSet2D,
    RepeatedSequence,
    digital_net,
    hammersley,
    special_sequence,
    swap_vector,
)
from .harness import CHECK_NAMES, DEFAULT_SEED, SuiteConfig, format_report, run_suite
from .netverify import digital_t, minimal_t, net_violation
from .psi import alpha as alpha_estimate
from .psi import phi, psi_fns
from .walsh2 import (
    BlockNet,
    InvalidNetError,
    Net2Base2,
    local_delta_table,
    local_delta_walsh,
    random_net_matrix,
    witness_box,
    verify_block_net_bound,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

POINT_CAP = 1_000_000
DISC_2D_CAP = 600_000


class UsageError(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _cell(x: Fraction) -> str:
    return str(Fraction(x))


# --------------------------------------------------------------------------
# input and output


def _write(text: str, path: str | None) -> None:
    """Write to stdout, or atomically to ``path``."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".lowdisc-")
    with os.fdopen(fd, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _dump_json(obj: dict, path: str | None) -> None:
    _write(json.dumps(obj, indent=2) + "\n", path)


def points_to_csv(points: Sequence[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    dim = len(points[0]) if points else 1
    w.writerow(["x", "y"][:dim] if dim <= 2 else [f"x{j + 1}" for j in range(dim)])
    for p in points:
        w.writerow([_cell(c) for c in p])
    return buf.getvalue()


def read_points_csv(path: str) -> list[tuple[Fraction, ...]]:
    fh = sys.stdin if path == "-" else open(path, newline="")
    try:
        rows = [r for r in csv.reader(fh) if r]
    finally:
        if fh is not sys.stdin:
            fh.close()
    if not rows:
        raise UsageError(f"{path}: empty points file")
    body = rows[1:] if rows[0][0].strip().lower().startswith("x") else rows
    try:
        return [tuple(as_fraction(c.strip()) for c in r) for r in body]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{path}: bad cell ({exc})") from exc


def _load_json(path: str) -> object:
    with open(path) as fh:
        return json.load(fh)


def parse_bit_rows(text: str) -> np.ndarray:
    """Bit rows separated by commas or whitespace, e.g. "001,010,100"; "0x" rows are hex."""
    rows = [r for r in text.replace(",", " ").split() if r]
    if not rows:
        raise UsageError("empty matrix")
    if all(r.lower().startswith("0x") for r in rows):
        m = len(rows)
        out = [[(int(r, 16) >> (m - 1 - k)) & 1 for k in range(m)] for r in rows]
    else:
        out = [[int(c) for c in r] for r in rows]
    a = np.array(out, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or ((a != 0) & (a != 1)).any():
        raise UsageError("C2 must be a square 0/1 matrix")
    return a


def _matrix_payload(args) -> object:
    if args.matrix is None:
        return None
    if os.path.exists(args.matrix):
        return _load_json(args.matrix)
    try:
        return json.loads(args.matrix)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--matrix: neither a file nor JSON ({exc})") from exc


def _sigmas(args):
    text = args.sigmas or "const:id"
    try:
        return parse_permseq(text, args.base)
    except Exception as exc:  # parse errors come in several types
        raise UsageError(f"--sigmas: {exc}") from exc


def _sigma_vector(args) -> list[Perm]:
    b = args.base
    if args.swap:
        sigma = Perm.parse(args.sigma or "id", b)
        return swap_vector(args.swap, args.m, sigma)
    if args.sigma_vector:
        perms = [Perm.parse(p, b) for p in args.sigma_vector.split("/")]
        if len(perms) != args.m:
            raise UsageError(f"--sigma-vector: need {args.m} permutations separated by '/', got {len(perms)}")
        return perms
    return [Perm.identity(b)] * args.m


# --------------------------------------------------------------------------
# family construction


SEQUENCE_FAMILIES = ("vdc", "gvdc", "nut", "first-column", "id-tau-interleave", "all-ones", "repeat", "scrambled-nut", "sobol02")
NET_FAMILIES = ("hammersley", "digital-net", "block-net")
FAMILIES = SEQUENCE_FAMILIES + NET_FAMILIES


def build_sequence(args):
    fam, b = args.family, args.base
    rng = np.random.default_rng(args.seed)
    size = args.matrix_size
    payload = _matrix_payload(args)
    if fam == "vdc":
        return special_sequence("vdc", b=b)
    if fam == "gvdc":
        return special_sequence("gvdc", sigmas=_sigmas(args))
    if fam in ("nut", "scrambled-nut"):
        kind = "strict-upper" if fam == "nut" else "nut"
        if payload is not None:
            dense = payload["C"] if isinstance(payload, dict) else payload
            if fam == "nut":
                a = np.triu(np.asarray(dense, dtype=np.int64), 1)
                C = GenMatrix(b, kind, {r: {k: int(a[r, k]) for k in range(a.shape[1])} for r in range(a.shape[0])})
            else:
                C = GenMatrix.from_dense(np.triu(np.asarray(dense, dtype=np.int64)), b, "nut")
        elif fam == "nut":
            C = GenMatrix.random_strict_upper(b, size, rng)
        else:
            C = GenMatrix.random_nut(b, size, rng, unit_diagonal=True)
        if fam == "nut":
            return special_sequence("nut", sigmas=_sigmas(args), matrix=C)
        return special_sequence("scrambled-nut", pis=_sigmas(args), matrix=C)
    if fam == "first-column":
        if b != 2:
            raise UsageError("--base: first-column is defined for base 2")
        return special_sequence("first-column", b=2)
    if fam == "id-tau-interleave":
        if b < 3:
            raise UsageError("--base: id-tau-interleave needs base >= 3")
        return special_sequence("id-tau-interleave", b=b)
    if fam == "all-ones":
        return special_sequence("all-ones", b=b)
    if fam == "repeat":
        return RepeatedSequence(special_sequence("vdc", b=b), 1 if args.t is None else args.t)
    if fam == "sobol02":
        return special_sequence("pascal", p=2)
    raise UsageError(f"--family: {fam!r} is not a sequence family")


def build_net(args) -> PointSet2D:
    fam, b = args.family, args.base
    if args.m is None:
        raise UsageError(f"--m is required for family {fam}")
    if b**args.m > POINT_CAP:
        raise CapExceeded(f"b^m = {b**args.m} exceeds the point cap {POINT_CAP}")
    if fam == "hammersley":
        return hammersley(b, args.m, _sigma_vector(args))
    if fam == "digital-net":
        payload = _matrix_payload(args)
        if payload is None:
            raise UsageError("--matrix: digital-net needs {\"matrices\": [C1, C2]}")
        mats = payload["matrices"] if isinstance(payload, dict) else payload
        return digital_net([GenMatrix.from_dense(c, b) for c in mats], args.m)
    if fam == "block-net":
        if b != 2:
            raise UsageError("--base: block-net is defined for base 2")
        return BlockNet.random(args.m, np.random.default_rng(args.seed)).net().points()
    raise UsageError(f"--family: {fam!r} is not a net family")


def generate_points(args) -> list[tuple[Fraction, ...]]:
    if args.family in NET_FAMILIES:
        P = build_net(args)
        return [tuple(p) for p in P.fractions()]
    if args.count is None:
        raise UsageError("--count is required for sequence families")
    if args.count > POINT_CAP:
        raise CapExceeded(f"--count {args.count} exceeds the point cap {POINT_CAP}")
    S = build_sequence(args)
    if args.exact:
        pts = S.exact_prefix(args.count)
    else:
        pts = S.prefix(args.count, args.precision)
    return [tuple(as_fraction(c) for c in (p if isinstance(p, tuple) else (p,))) for p in pts]


# --------------------------------------------------------------------------
# subcommands


def _config(args) -> dict:
    skip = {"func", "config", "out"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def cmd_gen(args) -> int:
    pts = generate_points(args)
    _write(points_to_csv(pts), args.out)
    return EXIT_OK


def _input_points(args) -> list[tuple[Fraction, ...]]:
    if args.input:
        return read_points_csv(args.input)
    if args.family:
        return generate_points(args)
    raise UsageError("give --input or --family")


def cmd_disc(args) -> int:
    pts = _input_points(args)
    if not pts:
        raise UsageError("no points")
    dim = len(pts[0])
    if dim == 1:
        vals = [p[0] for p in pts]
        if args.prefixes:
            out = {"prefixes": [r.to_json() for r in prefix_reports(vals)]}
        else:
            out = disc_1d(vals).to_json()
    elif dim == 2:
        if len(pts) > DISC_2D_CAP:
            raise CapExceeded(f"{len(pts)} points exceed the 2D cap {DISC_2D_CAP}")
        out = disc_2d_report(pts).to_json()
    else:
        raise UsageError("disc supports one- and two-dimensional points")
    out["config"] = _config(args)
    out["seed"] = args.seed
    _dump_json(out, args.out)
    return EXIT_OK


def cmd_checknet(args) -> int:
    payload = _matrix_payload(args) if args.family is None else None
    if payload is not None and args.input is None:
        mats = payload["matrices"] if isinstance(payload, dict) else payload
        m = len(mats[0])
        t = digital_t([np.asarray(c) for c in mats], args.base, m)
        out = {"method": "rank", "b": args.base, "m": m, "s": len(mats), "t": t}
    else:
        pts = _input_points(args)
        b = args.base
        n = len(pts)
        m = 0
        while b**m < n:
            m += 1
        if b**m != n:
            raise UsageError(f"{n} points is not a power of the base {b}")
        s = len(pts[0])
        t = minimal_t(pts, b, m, s)
        out = {"method": "count", "b": b, "m": m, "s": s, "t": t}
        if args.t is not None:
            bad = net_violation(pts, b, m, s, args.t)
            out["requested_t"] = args.t
            out["is_net"] = bad is None
            if bad is not None:
                out["violation"] = str(bad)
    out["config"] = _config(args)
    out["seed"] = args.seed
    _dump_json(out, args.out)
    if "is_net" in out and not out["is_net"]:
        return EXIT_FAIL
    return EXIT_OK


def cmd_psi(args) -> int:
    b = args.base
    sigma = Perm.parse(args.sigma, b)
    plus, minus, both = psi_fns(b, sigma)
    phis = [phi(b, sigma, h) for h in range(b)]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x"] + [f"phi_{h}" for h in range(b)] + ["psi_plus", "psi_minus", "psi"])
    for i in range(args.grid + 1):
        x = Fraction(i, args.grid)
        w.writerow([_cell(x)] + [_cell(f(x)) for f in phis] + [_cell(plus(x)), _cell(minus(x)), _cell(both(x))])
    _write(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_alpha(args) -> int:
    sigma = Perm.parse(args.sigma, args.base)
    try:
        est = alpha_estimate(args.base, sigma, args.nmax, args.which)
    except OverflowError as exc:
        raise CapExceeded(str(exc)) from exc
    out = est.to_json()
    out["config"] = _config(args)
    out["seed"] = args.seed
    _dump_json(out, args.out)
    return EXIT_OK


def _c2(args) -> np.ndarray:
    if args.c2:
        return parse_bit_rows(args.c2)
    if args.m is None:
        raise UsageError("give --c2 or --m")
    rng = np.random.default_rng(args.seed)
    if args.mode == "witness":
        return BlockNet.random(args.m, rng).C2
    return random_net_matrix(args.m, rng)


def cmd_walsh(args) -> int:
    c2 = _c2(args)
    try:
        net = Net2Base2(c2)
    except InvalidNetError as exc:
        raise UsageError(f"--c2: {exc}") from exc
    m = net.m
    out: dict = {"m": m, "C2": ["".join(map(str, r)) for r in c2.tolist()]}
    if args.mode == "delta":
        if args.eta is None or args.beta is None:
            raise UsageError("--eta and --beta (numerators over 2^m) are required")
        out["eta"] = f"{args.eta}/{2**m}"
        out["beta"] = f"{args.beta}/{2**m}"
        out["delta"] = _frac(local_delta_walsh(net, args.eta, args.beta))
    elif args.mode == "table":
        if m > 10:
            raise CapExceeded("table mode is capped at m = 10")
        table = local_delta_table(net)
        out["denominator"] = 2**m
        out["delta_numerators"] = table.tolist()
    else:
        try:
            block = BlockNet.from_matrix(c2)
        except InvalidNetError as exc:
            raise UsageError(f"--c2: {exc}") from exc
        eta, beta, value = witness_box(block)
        rep = verify_block_net_bound(block)
        out.update(
            {
                "eta_bits": "".join(map(str, eta.tolist())),
                "beta_bits": "".join(map(str, beta.tolist())),
                "witness": _frac(value),
                "dstar": _frac(rep.dstar),
                "lower_bound": _frac(rep.bound),
                "pass": rep.ok,
            }
        )
    out["config"] = _config(args)
    out["seed"] = args.seed
    _dump_json(out, args.out)
    return EXIT_OK if out.get("pass", True) else EXIT_FAIL


def cmd_suite(args) -> int:
    select = None
    if args.select is not None:
        select = [s.strip() for s in args.select.split(",") if s.strip()]
        unknown = sorted(set(select) - set(CHECK_NAMES))
        if unknown:
            raise UsageError(f"--select: unknown checks {', '.join(unknown)}; known: {', '.join(CHECK_NAMES)}")
    cfg = SuiteConfig(
        select=select,
        m_max=args.m_max,
        n_max=args.n_max,
        seed=args.seed,
        samples=args.samples,
        time_budget=args.time_budget,
    )
    report = run_suite(cfg)
    out = report.to_json()
    out["run_config"] = _config(args)
    if args.out:
        _dump_json(out, args.out)
        print(format_report(report))
    else:
        _dump_json(out, None)
    return EXIT_OK if report.passed else EXIT_FAIL


# --------------------------------------------------------------------------
# parser


def _family_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--count", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--sigmas", help="permutation sequence, e.g. const:id or explicit:1,0/0,1;tail=id")
    p.add_argument("--sigma", help="single permutation for --swap sigma-bar")
    p.add_argument("--sigma-vector", help="m permutations separated by '/'")
    p.add_argument("--swap", choices=("id-tau", "alternating", "sigma-bar"))
    p.add_argument("--matrix", help="JSON file or inline JSON with the generating matrix")
    p.add_argument("--matrix-size", type=int, default=24)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--precision", type=int, default=None, help="digits kept per coordinate")
    p.add_argument("--exact", action="store_true", help="untruncated values of the infinite expansions")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lowdisc", description="Exact low-discrepancy constructions and discrepancy checks.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="JSON file of option defaults; command-line flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--config", default=argparse.SUPPRESS, help="JSON file of option defaults")

    p = sub.add_parser("gen", help="generate points as CSV")
    _family_options(p)
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("disc", help="exact discrepancy of a points file or family")
    p.add_argument("--input")
    p.add_argument("--prefixes", action="store_true", help="1D: report every prefix")
    _family_options(p)
    common(p)
    p.set_defaults(func=cmd_disc)

    p = sub.add_parser("check-net", help="minimal t of a point set or of generating matrices")
    p.add_argument("--input")
    _family_options(p)
    common(p)
    p.set_defaults(func=cmd_checknet)

    p = sub.add_parser("psi", help="tabulate phi and psi functions on a grid")
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--sigma", default="id")
    p.add_argument("--grid", type=int, default=12, help="denominator of the grid on [0, 1]")
    common(p)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("alpha", help="estimate the leading constant for a permutation")
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--sigma", default="id")
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--which", choices=("psi", "plus", "minus"), default="psi")
    common(p)
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("walsh", help="local discrepancy of base-2 (0,m,2)-nets")
    p.add_argument("--c2", help="bit rows, e.g. 001,010,100 (or hex rows 0x..)")
    p.add_argument("--m", type=int, help="random C2 of this size when --c2 is absent")
    p.add_argument("--mode", choices=("delta", "table", "witness"), default="witness")
    p.add_argument("--eta", type=int)
    p.add_argument("--beta", type=int)
    common(p)
    p.set_defaults(func=cmd_walsh)

    p = sub.add_parser("suite", help="run the bound-regression suite")
    p.add_argument("--select", help=f"comma-separated checks from: {', '.join(CHECK_NAMES)}")
    p.add_argument("--m-max", type=int, default=10)
    p.add_argument("--n-max", type=int, default=512)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--time-budget", type=float, default=None)
    common(p)
    p.set_defaults(func=cmd_suite)
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        defaults = _load_json(args.config)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--config: {exc}") from exc
    if not isinstance(defaults, dict):
        raise UsageError("--config: expected a JSON object")
    sub = parser._subparsers._group_actions[0].choices[args.command]  # type: ignore[union-attr]
    sub.set_defaults(**{k.replace("-", "_"): v for k, v in defaults.items()})
    return parser.parse_args(argv)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config_file(parser, argv)
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except CapExceeded as exc:
        print(f"lowdisc: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, ValueError, KeyError, OSError) as exc:
        print(f"lowdisc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
