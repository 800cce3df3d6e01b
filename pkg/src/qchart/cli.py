"""Command line entry point ``qchart``.

Subcommands
-----------
audit
    Run every relation check and print a report.
export NAME
    Write a catalog operator as a sparse matrix file.
integral TEXT
    Evaluate the weighted trace of an element written in the text notation.

Exit status is 0 on success, 1 when an audit check fails and 2 for usage,
parameter or input errors.
"""
from __future__ import annotations

import argparse
import sys

from .audit import run_audit
from .export import CATALOG, export_operator
from .integration import integral_alpha
from .params import ChartParams
from .parse import ParseError, parse_element

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=float, default=0.5, help="deformation parameter in (0, 1)")
    common.add_argument("--alpha", type=float, default=1.0, help="weight exponent, > 0")
    common.add_argument("--nmax", type=int, default=16, help="window size of the index n")
    common.add_argument("--kmax", type=int, default=16, help="window size of the index k")
    common.add_argument("--lmax", type=int, default=4, help="circle window -lmax..lmax")
    common.add_argument("--tol", type=float, default=1e-12, help="relative tolerance of the audit")
    common.add_argument("--out", default=None, help="write the output to this path instead of stdout")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="qchart", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("audit", parents=[common], help="run the relation audit")
    ex = sub.add_parser("export", parents=[common], help="export a catalog operator")
    ex.add_argument("operator", help="one of: " + ", ".join(CATALOG))
    it = sub.add_parser("integral", parents=[common], help="weighted trace of an element")
    it.add_argument("element", help="element text, e.g. \"s^2 * delta(q,3) + y\"")
    it.add_argument("--terms", type=int, default=64, help="number of series terms")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _params(args) -> ChartParams:
    return ChartParams(q=args.q, alpha=args.alpha, n_max=args.nmax, k_max=args.kmax,
                       l_max=args.lmax, tol=args.tol)


def cmd_audit(args) -> int:
    report = run_audit(_params(args))
    _emit(report.format(), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_export(args) -> int:
    params = _params(args)
    if args.operator not in CATALOG:
        print(f"qchart: unknown operator {args.operator!r}; choose one of: {', '.join(CATALOG)}",
              file=sys.stderr)
        return EXIT_USAGE
    _emit(export_operator(args.operator, params), args.out)
    return EXIT_OK


def cmd_integral(args) -> int:
    params = _params(args)
    if args.terms < 1:
        raise ValueError("--terms must be at least 1")
    # headroom so that products inside the expression still leave `terms` samples
    elem = parse_element(args.element, params, length=args.terms + 16)
    res = integral_alpha(elem, params, args.terms)
    v = complex(res.value)
    _emit(f"value: {v.real!r}\nimag: {v.imag!r}\ntail_bound: {res.tail_bound!r}\n"
          f"terms_used: {res.terms_used}\n", args.out)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    handler = {"audit": cmd_audit, "export": cmd_export, "integral": cmd_integral}[args.command]
    try:
        return handler(args)
    except ParseError as exc:
        print(f"qchart: cannot parse element: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"qchart: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
