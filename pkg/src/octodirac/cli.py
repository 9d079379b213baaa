"""Command-line driver: ``octodirac <command> [options]``.

Exit codes: 0 all checks pass, 1 a check failed, 2 input or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import suites
from .clifford_rep import CliffordError, load_tables
from .octonion import StructureConstantError, load_triples
from .perturbation import DEFAULT_LAMBDAS, random_seed
from .report import VerificationReport
from .textio import InputError, read_chain, read_matrix, read_seed

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("text", "json"), default="text",
                   help="report format; json prints exact values as rationals")
    p.add_argument("--seed", type=int, default=suites.DEFAULT_SEED,
                   help="PRNG seed for randomized checks (default %(default)s)")
    p.add_argument("--no-timing", action="store_true", help="omit elapsed times from reports")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="octodirac",
        description="Exact verification suites for octonion and real Dirac matrix algebra.",
        epilog="exit status: 0 all checks pass, 1 a check failed, 2 input or usage error",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-octonion", parents=[common], help="octonion table and algebra invariants")
    p.add_argument("--structure-file", help="JSON file of structure-constant triples (default: shipped table)")

    p = sub.add_parser("verify-clifford", parents=[common], help="real Dirac matrix systems")
    p.add_argument("target", choices=suites.CLIFFORD_TARGETS)
    p.add_argument("--table-file", help="JSON generator tables (default: shipped tables)")

    p = sub.add_parser("g2", parents=[common], help="G2 automorphisms of the octonion units")
    g2sub = p.add_subparsers(dest="g2_command", required=True)
    g2sub.add_parser("derivation-dim", parents=[common], help="dimension of the derivation algebra")
    q = g2sub.add_parser("check", parents=[common], help="check a 7x7 transform from a text file")
    q.add_argument("file")
    q = g2sub.add_parser("exp", parents=[common], help="exponentiate a basis derivation")
    q.add_argument("index", type=int)
    q.add_argument("t", type=float)

    p = sub.add_parser("perturb", parents=[common], help="first-order octonion Dirac symbols")
    p.add_argument("--lambda", dest="lambdas", type=_rational, action="append",
                   help="scale value (repeatable); default 1/64, 1/32, 1/16")
    p.add_argument("--seed-file", help="text file with [s0]..[s7] 4x4 blocks (overrides --seed)")
    p.add_argument("--gamma11", action="store_true", help="also run the 32x32 eleven-generator construction")

    p = sub.add_parser("fold", parents=[common], help="left/right folds of an amplitude chain")
    p.add_argument("file", help="one octonion per line, 8 coefficients")

    sub.add_parser("verify-all", parents=[common], help="every suite in dependency order")
    return parser


def _run(args) -> list[VerificationReport]:
    cmd = args.command
    if cmd == "verify-octonion":
        triples = load_triples(args.structure_file) if args.structure_file else None
        return [suites.octonion_suite(triples, seed=args.seed)]
    if cmd == "verify-clifford":
        tables = load_tables(args.table_file) if args.table_file else None
        return [suites.clifford_suite(args.target, tables)]
    if cmd == "g2":
        if args.g2_command == "derivation-dim":
            return [suites.g2_dimension_suite()]
        if args.g2_command == "check":
            return [suites.g2_check_suite(read_matrix(args.file, (7, 7)), args.file)]
        return [suites.g2_exp_suite(args.index, args.t)]
    if cmd == "perturb":
        seed = read_seed(args.seed_file) if args.seed_file else random_seed(args.seed)
        lambdas = args.lambdas or list(DEFAULT_LAMBDAS)
        return [suites.perturb_suite(seed, lambdas, with_gamma11=args.gamma11)]
    if cmd == "fold":
        return [suites.fold_suite(read_chain(args.file))]
    if cmd == "verify-all":
        return suites.verify_all(args.seed)
    raise AssertionError(cmd)


def _emit(reports: Sequence[VerificationReport], fmt: str, timing: bool, out) -> None:
    if fmt == "json":
        doc = {
            "status": "pass" if all(r.passed for r in reports) else "fail",
            "reports": [r.to_dict(timing) for r in reports],
        }
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write("\n".join(r.render_text(timing) for r in reports) + "\n")


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_PASS
    try:
        reports = _run(args)
    except InputError as e:
        err.write(f"input error: {e}\n")
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as e:
        err.write(f"input error: {type(e).__name__}: {e}\n")
        return EXIT_INPUT
    except (StructureConstantError, CliffordError) as e:
        err.write(f"input error: {e}\n")
        return EXIT_INPUT
    except (IndexError, ValueError) as e:
        err.write(f"input error: {e}\n")
        return EXIT_INPUT
    _emit(reports, args.format, not args.no_timing, out)
    return EXIT_PASS if all(r.passed for r in reports) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
