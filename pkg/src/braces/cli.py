"""Command-line front end: ``braces build | analyze | verify | ybe | quotient``.

Machine-readable output is JSON (to ``--out`` or stdout); short human-readable
summaries go to stderr.  Exit codes: 0 success, 1 property failure,
2 precondition or structural error, 3 size guard.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analysis as an
from . import families as fam
from .core import (
    FULL_CHECK_THRESHOLD,
    FiniteBrace,
    dumps,
    read_brace,
    resolve_max_order,
    trivial_brace,
    verify_brace_axioms,
)
from .errors import AxiomError, HypothesisError, SizeGuardError, StructureError
from .modular import QuadraticFormSpec
from .products import wreath_product
from .ybe import solution_from_brace, verify_all

EXIT_OK, EXIT_PROPERTY, EXIT_PRECONDITION, EXIT_SIZE = 0, 1, 2, 3

FAMILIES = (
    "trivial",
    "b3",
    "wreath",
    "wreath_simple",
    "perfect_not_simple",
    "concrete",
    "generalized",
    "h_brace",
    "matched",
)


@dataclass
class Config:
    max_order: int
    full_check_threshold: int = FULL_CHECK_THRESHOLD
    analysis_cap: int = an.ANALYSIS_CAP


class CliError(Exception):
    def __init__(self, code: int, message: str, payload: dict | None = None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _load_params(text: str | None) -> dict:
    if not text:
        return {}
    path = Path(text)
    raw = path.read_text(encoding="utf-8") if path.exists() else text
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PRECONDITION, f"--params is neither a JSON file nor JSON text: {exc}")


def _quadratic(d: dict) -> QuadraticFormSpec:
    return QuadraticFormSpec(d["p"], d.get("r", 1), d["n"], d["Q"])


def build_family(family: str, params: dict, cfg: Config) -> FiniteBrace:
    """Dispatch a family name plus parameter record to its builder."""
    mo = cfg.max_order
    try:
        if family == "trivial":
            return trivial_brace(params["orders"], max_order=mo)
        if family == "b3":
            return fam.build_b3()
        if family == "wreath":
            p1, p2 = params["p1"], params["p2"]
            return wreath_product(trivial_brace([p2]), trivial_brace([p1]), max_order=mo)
        if family == "wreath_simple":
            return fam.build_wreath_simple(params["p1"], params["p2"], max_order=mo)
        if family == "perfect_not_simple":
            base = fam.build_wreath_simple(params.get("p1", 3), params.get("p2", 2), max_order=mo)
            return fam.build_perfect_not_simple(base)
        if family == "concrete":
            return fam.build_concrete(params["p"], params["l"], max_order=mo)
        if family == "generalized":
            data = fam.GeneralizedData(
                params["p"], params["l"], params["b"], params["c"], params["f"], params.get("gamma")
            )
            return fam.build_generalized(data, max_order=mo).brace
        if family == "h_brace":
            return fam.build_H(_quadratic(params), params["f"], max_order=mo)
        if family == "matched":
            factors = [fam.MatchedFactor(_quadratic(d), d["f"], d["c"]) for d in params["factors"]]
            return fam.build_matched_and_phi_prime(fam.MatchedData(factors, params["v"]), max_order=mo).matched
    except KeyError as exc:
        raise CliError(EXIT_PRECONDITION, f"family {family!r} needs parameter {exc}")
    raise CliError(EXIT_PRECONDITION, f"unknown family {family!r}")


def _load_valid(path: str, cfg: Config) -> FiniteBrace:
    brace = read_brace(path)
    report = verify_brace_axioms(brace, full_check_threshold=cfg.full_check_threshold)
    if not report.valid:
        raise CliError(EXIT_PRECONDITION, f"{path} is not a valid left brace", report.to_dict())
    return brace


# --------------------------------------------------------------------------
# commands


def cmd_build(args, cfg: Config) -> int:
    params = _load_params(args.params)
    family = args.family or params.get("family")
    if family is None:
        raise CliError(EXIT_PRECONDITION, "no family given (use --family or a 'family' key in --params)")
    for key in ("p1", "p2", "p"):
        if getattr(args, key) is not None:
            params[key] = getattr(args, key)
    if args.orders:
        params["orders"] = _int_list(args.orders)
    if args.l:
        params["l"] = _int_list(args.l)
    brace = build_family(family, params, cfg)
    _emit(dumps(brace), args.out)
    _info(f"built {family}: order {brace.order}")
    return EXIT_OK


def cmd_analyze(args, cfg: Config) -> int:
    brace = _load_valid(args.file, cfg)
    report = an.analysis_report(brace, with_ideals=args.ideals, cap=cfg.analysis_cap)
    _emit(json.dumps(report, sort_keys=True) + "\n", args.out)
    _info(f"order {report['order']}: simple={report['simple']} solvable={report['solvable']}")
    return EXIT_OK


def cmd_verify(args, cfg: Config) -> int:
    brace = read_brace(args.file)
    report = verify_brace_axioms(brace, full_check_threshold=cfg.full_check_threshold, force_full=args.force_full)
    print(json.dumps(report.to_dict(), sort_keys=True))
    _info(f"{args.file}: {'valid' if report.valid else 'INVALID'} ({report.mode})")
    return EXIT_OK if report.valid else EXIT_PROPERTY


def cmd_ybe(args, cfg: Config) -> int:
    brace = _load_valid(args.file, cfg)
    sol = solution_from_brace(brace)
    _emit(sol.dumps() + "\n", args.out)
    if not args.verify:
        return EXIT_OK
    checks = verify_all(sol, threshold=cfg.full_check_threshold)
    summary = {k: v.to_dict() for k, v in checks.items()}
    print(json.dumps(summary, sort_keys=True), file=sys.stderr if args.out is None else sys.stdout)
    ok = all(checks.values())
    _info(f"solution of size {sol.size}: " + ", ".join(f"{k}={v.ok}" for k, v in checks.items()))
    return EXIT_OK if ok else EXIT_PROPERTY


def cmd_quotient(args, cfg: Config) -> int:
    brace = _load_valid(args.file, cfg)
    seed = _int_list(args.ideal) if args.ideal else []
    if any(x < 0 or x >= brace.order for x in seed):
        raise CliError(EXIT_PRECONDITION, f"ideal generators must lie in 0..{brace.order - 1}")
    ideal = an.ideal_closure(brace, seed)
    _info(f"ideal generated by {seed}: {ideal.size} elements")
    if args.proper and ideal.is_whole():
        raise CliError(EXIT_PRECONDITION, "the generated ideal is the whole brace", {"ideal_size": ideal.size})
    q = an.quotient(brace, ideal)
    _emit(dumps(q.brace), args.out)
    _info(f"quotient of order {q.brace.order}")
    return EXIT_OK


# --------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="braces", description="Finite left braces toolkit.")
    parser.add_argument("--max-order", type=int, default=None, help="size guard (default: $BRACE_MAX_ORDER or 4096)")
    parser.add_argument("--full-check-threshold", type=int, default=FULL_CHECK_THRESHOLD)
    parser.add_argument("--analysis-cap", type=int, default=an.ANALYSIS_CAP)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a brace family and write its JSON tables")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--params", help="JSON file or inline JSON with family parameters")
    p.add_argument("--orders", help="cyclic orders for the trivial family, e.g. 2,2")
    p.add_argument("--p1", type=int)
    p.add_argument("--p2", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--l", help="moduli for the concrete family, e.g. 3,3")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("analyze", help="structural report of a brace file")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--ideals", action="store_true", help="also count all ideals")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="check the brace axioms")
    p.add_argument("file")
    p.add_argument("--force-full", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ybe", help="write the associated Yang-Baxter solution")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_ybe)

    p = sub.add_parser("quotient", help="quotient by the ideal generated by some elements")
    p.add_argument("file")
    p.add_argument("--ideal", default="", help="comma separated generators")
    p.add_argument("--proper", action="store_true", help="fail if the ideal is the whole brace")
    p.add_argument("--out")
    p.set_defaults(func=cmd_quotient)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = Config(resolve_max_order(args.max_order), args.full_check_threshold, args.analysis_cap)
        return args.func(args, cfg)
    except CliError as exc:
        _info(f"error: {exc}")
        if exc.payload is not None:
            print(json.dumps(exc.payload, sort_keys=True))
        return exc.code
    except SizeGuardError as exc:
        _info(f"size guard: {exc}")
        return EXIT_SIZE
    except HypothesisError as exc:
        _info(f"precondition failed [{exc.condition}]: {exc}")
        print(json.dumps({"condition": exc.condition, "message": str(exc)}))
        return EXIT_PRECONDITION
    except (StructureError, AxiomError, OSError) as exc:
        _info(f"error: {exc}")
        witness = getattr(exc, "witness", None)
        if witness is not None:
            print(json.dumps({"witness": [int(w) for w in np.ravel(witness)]}))
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
