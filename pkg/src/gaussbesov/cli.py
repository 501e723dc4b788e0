"""Command-line interface: ``gaussbesov {verify,norm,apply,kernel,table}``.

Results go to stdout as JSON (tables may also be CSV). Exit status is 0 on
success, 1 when a verification check fails, and 2 on invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .exceptions import DimensionError, ExpansionFormatError
from .expansion import load_expansion, save_expansion, sobolev_norm
from .fractional import bessel_potential, fractional_derivative, riesz_potential
from .hermite import as_exponent, grid_for, lp_norm
from .semigroup import poisson_kernel
from .spaces import SpaceParams, besov_norm, triebel_norm
from .verify import SUITES, SuiteConfig, hermite_norm_table, report_document, run_suite, stable_moment_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise _UsageError(f"expected comma-separated numbers, got {text!r}") from exc


def _emit(doc, out) -> None:
    json.dump(doc, out, indent=2, sort_keys=False)
    out.write("\n")


def _cmd_verify(args, out) -> int:
    cfg = SuiteConfig.from_env(seed=args.seed, tol_scale=args.tol_scale)
    reports = run_suite(cfg, args.suite)
    doc = report_document(reports, cfg, args.suite, timings=args.timings)
    if args.report:
        Path(args.report).write_text(json.dumps(doc, indent=2) + "\n")
    _emit(doc, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _cmd_norm(args, out) -> int:
    f = load_expansion(args.file)
    p = as_exponent(args.p)
    if args.space == "lp":
        value, error = lp_norm(f, p, grid_for(f.dim, f.degree(), p)), 0.0
        params = {"p": p}
    elif args.space == "sobolev":
        value, error = sobolev_norm(f, args.alpha, p, grid_for(f.dim, f.degree(), p)), 0.0
        params = {"alpha": args.alpha, "p": p}
    else:
        sp = SpaceParams(args.alpha, p, args.q, k=args.k)
        norm = besov_norm if args.space == "besov" else triebel_norm
        res = norm(f, sp, full_output=True)
        value, error = res.value, res.error
        params = sp.as_document()
    _emit({"space": args.space, "params": params, "value": value, "error": error}, out)
    return EXIT_OK


_OPS = {"riesz": riesz_potential, "dgamma": fractional_derivative, "bessel": bessel_potential}


def _cmd_apply(args, out) -> int:
    f = load_expansion(args.file)
    g = _OPS[args.op](f, args.alpha)
    if args.output:
        save_expansion(g, args.output)
    else:
        _emit(g.to_document(), out)
    return EXIT_OK


def _cmd_kernel(args, out) -> int:
    x, y = _floats(args.x), _floats(args.y)
    if len(x) != len(y) or not x:
        raise _UsageError("x and y must have the same positive dimension")
    res = poisson_kernel(args.t, x, y, full_output=True)
    _emit({"t": args.t, "x": x, "y": y, "value": res.value, "error": res.error}, out)
    return EXIT_OK


_TABLE_COLUMNS = {
    "hermite-norms": ["beta", "alpha", "p", "q", "k", "seminorm_numeric", "seminorm_closed_form", "rel_err"],
    "stable-moments": ["k", "t", "numeric", "closed_form", "rel_err"],
}


def _cmd_table(args, out) -> int:
    if args.name == "hermite-norms":
        # validate the exponents even when the beta range is empty
        SpaceParams(0.0, args.p, args.q, k=args.k)
        rows = hermite_norm_table(range(args.beta_min, args.beta_max + 1), _floats(args.alpha), args.p, args.q, args.k)
    else:
        rows = stable_moment_table(range(0, args.k_max + 1), _floats(args.t))
    if args.format == "json":
        _emit(rows, out)
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=_TABLE_COLUMNS[args.name], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        out.write(buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaussbesov", description="Gaussian Besov and Triebel-Lizorkin toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the numerical verification suite")
    v.add_argument("--suite", choices=("all",) + SUITES, default="all")
    v.add_argument("--seed", type=int, default=SuiteConfig.seed)
    v.add_argument("--tol-scale", type=float, default=1.0)
    v.add_argument("--report", metavar="PATH", help="also write the JSON report here")
    v.add_argument("--timings", action="store_true", help="include per-check runtimes (not reproducible)")
    v.set_defaults(run=_cmd_verify)

    n = sub.add_parser("norm", help="norm of an expansion read from a JSON file")
    n.add_argument("file")
    n.add_argument("--space", choices=("besov", "triebel", "sobolev", "lp"), required=True)
    n.add_argument("--alpha", type=float, default=0.0)
    n.add_argument("--p", default="2")
    n.add_argument("--q", default="2")
    n.add_argument("--k", type=int)
    n.set_defaults(run=_cmd_norm)

    a = sub.add_parser("apply", help="apply a fractional operator to an expansion")
    a.add_argument("file")
    a.add_argument("--op", choices=sorted(_OPS), required=True)
    a.add_argument("--alpha", type=float, required=True)
    a.add_argument("-o", "--output", metavar="OUT")
    a.set_defaults(run=_cmd_apply)

    k = sub.add_parser("kernel", help="evaluate the Poisson-Hermite kernel p(t, x, y)")
    k.add_argument("--t", type=float, required=True)
    k.add_argument("--x", required=True, help="comma-separated coordinates")
    k.add_argument("--y", required=True, help="comma-separated coordinates")
    k.set_defaults(run=_cmd_kernel)

    t = sub.add_parser("table", help="print a reference table")
    t.add_argument("name", choices=("hermite-norms", "stable-moments"))
    t.add_argument("--format", choices=("csv", "json"), default="csv")
    t.add_argument("--beta-min", type=int, default=1)
    t.add_argument("--beta-max", type=int, default=6)
    t.add_argument("--alpha", default="0.5,1.3")
    t.add_argument("--p", default="2")
    t.add_argument("--q", default="2")
    t.add_argument("--k", type=int)
    t.add_argument("--k-max", type=int, default=6)
    t.add_argument("--t", default="0.5,1,2")
    t.set_defaults(run=_cmd_table)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.run(args, out)
    except (_UsageError, ValueError, DimensionError, ExpansionFormatError, FileNotFoundError) as exc:
        print(f"gaussbesov: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
