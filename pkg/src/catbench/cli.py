"""Command line: evaluate programs, check bounds, check derivations, run the suite.

Exit codes: 0 pass, 1 parse error, 2 stuck term, 3 fuel exhausted,
4 schema error, 5 property or bound failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .derivations import SchemaError, check_script
from .evaluation import FuelError, StuckError, eval_mode
from .harness import bundled_path, check_bound_over_domain
from .registry import EvalConfig, default_registry
from .semantics import TestBudget
from .suite import SuiteConfig, run_suite
from .syntax import ParseError, parse, print_expr

EXIT_PASS = 0
EXIT_PARSE = 1
EXIT_STUCK = 2
EXIT_FUEL = 3
EXIT_SCHEMA = 4
EXIT_PROPERTY = 5

DEFAULT_SEED = 0xC0571


def _seed(args) -> int:
    env = os.environ.get("CCTT_SEED")
    if env is not None:
        return int(env, 0)
    return args.seed


def _resolve(path: str, kind: str | None = None) -> Path:
    p = Path(path)
    if p.is_file():
        return p
    try:
        return bundled_path(path, kind)
    except FileNotFoundError:
        return p  # let the open() fail with the real name


def _load_expr(path: str):
    p = _resolve(path, "program")
    try:
        text = p.read_text()
    except OSError as err:
        raise ParseError(str(err), 0, 0) from None
    return parse(text)


def _emit(args, payload: dict, human: str):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(human)


def cmd_eval(args) -> int:
    try:
        expr = _load_expr(args.file)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    cfg = EvalConfig(word_size=args.word_size, mode=args.mode,
                     fuel=args.fuel, trace=args.trace)
    reg = default_registry()
    try:
        res = eval_mode(expr, reg, cfg)
    except StuckError as err:
        print(f"stuck: {err}", file=sys.stderr)
        return EXIT_STUCK
    except FuelError as err:
        print(f"fuel exhausted: {err}", file=sys.stderr)
        return EXIT_FUEL
    label = "span" if args.mode == "par" else "steps"
    payload = {"value": print_expr(res.value), label: res.steps,
               "mode": args.mode}
    if args.trace and res.trace is not None:
        payload["trace"] = [print_expr(t) for t in res.trace]
    human = f"value: {print_expr(res.value)}\n{label}: {res.steps}"
    if args.trace and res.trace is not None:
        human += "\n" + "\n".join(
            f"  {i + 1}: {print_expr(t)}" for i, t in enumerate(res.trace))
    _emit(args, payload, human)
    return EXIT_PASS


def cmd_check_bound(args) -> int:
    try:
        fn = _load_expr(args.program)
        bound = _load_expr(args.bound)
        domain = _load_expr(args.domain)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    budget = TestBudget(seed=_seed(args), samples=args.samples,
                        word_size=args.word_size, mode=args.mode,
                        fuel=args.fuel)
    reg = default_registry()
    try:
        report = check_bound_over_domain(fn, bound, args.var, domain, reg,
                                         budget, program=args.program)
    except StuckError as err:
        print(f"stuck: {err}", file=sys.stderr)
        return EXIT_STUCK
    except FuelError as err:
        print(f"fuel exhausted: {err}", file=sys.stderr)
        return EXIT_FUEL
    lines = [f"{'PASS' if s.holds else 'FAIL'}  {s.argument}  "
             f"steps {s.steps} <= {s.bound}" for s in report.samples]
    verdict = "pass" if report.passed else "fail"
    _emit(args, report.to_json(),
          "\n".join(lines + [f"bound check: {verdict} "
                             f"({len(report.samples)} samples)"]))
    return EXIT_PASS if report.passed else EXIT_PROPERTY


def cmd_check_derivation(args) -> int:
    reg = default_registry()
    budget = TestBudget(seed=_seed(args), fuel=args.fuel)
    overrides = {}
    if args.samples is not None:
        overrides["samples"] = args.samples
    try:
        report = check_script(_resolve(args.file, "derivation"), reg, budget,
                              overrides)
    except SchemaError as err:
        print(f"schema error: {err}", file=sys.stderr)
        return EXIT_SCHEMA
    counts = ", ".join(f"{r}:{n}" for r, n in sorted(report.rule_counts.items()))
    payload = {
        "verdict": report.verdict.status,
        "detail": report.verdict.witness or report.verdict.reason,
        "nodes": len(report.nodes),
        "rules": dict(report.rule_counts),
        "seconds": round(report.seconds, 3),
    }
    human = (f"derivation: {report.verdict}\n"
             f"nodes checked: {len(report.nodes)} ({counts})\n"
             f"elapsed: {report.seconds:.2f}s")
    _emit(args, payload, human)
    return EXIT_PASS if report.verdict.ok else EXIT_PROPERTY


def cmd_suite(args) -> int:
    cfg = SuiteConfig(seed=_seed(args), word_size=args.word_size,
                      samples=args.samples, fuel=args.fuel)
    results = run_suite(cfg)
    if args.json:
        print(json.dumps([{
            "criterion": r.name, "verdict": "pass" if r.passed else "fail",
            "detail": r.detail, "seconds": round(r.seconds, 3),
            "seed": cfg.seed,
        } for r in results], indent=2))
    else:
        width = max(len(r.name) for r in results)
        for r in results:
            mark = "PASS" if r.passed else "FAIL"
            print(f"{mark}  {r.name:<{width}}  {r.seconds:7.2f}s  {r.detail}")
        total = sum(r.seconds for r in results)
        bad = [r.name for r in results if not r.passed]
        print(f"{len(results) - len(bad)}/{len(results)} criteria passed "
              f"in {total:.1f}s")
    return EXIT_PASS if all(r.passed for r in results) else EXIT_PROPERTY


def _common_eval_flags(p):
    p.add_argument("--mode", choices=["seq", "par"], default="seq")
    p.add_argument("--word-size", type=int, default=2**31)
    p.add_argument("--fuel", type=int, default=10**7)
    p.add_argument("--json", action="store_true")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="catbench",
        description="Exact-step evaluator, cost-bound checker, and "
                    "derivation checker for the .cat language.")
    sub = ap.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate a .cat file")
    pe.add_argument("file")
    pe.add_argument("--trace", action="store_true")
    _common_eval_flags(pe)
    pe.set_defaults(fn=cmd_eval)

    pb = sub.add_parser("check-bound",
                        help="check steps(f v) <= 1 + bound[v] on samples")
    pb.add_argument("--program", required=True)
    pb.add_argument("--bound", required=True)
    pb.add_argument("--domain", required=True)
    pb.add_argument("--var", default="a",
                    help="argument variable of the bound (default: a)")
    pb.add_argument("--samples", type=int, default=256)
    pb.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _common_eval_flags(pb)
    pb.set_defaults(fn=cmd_check_bound)

    pd = sub.add_parser("check-derivation",
                        help="check a derivation document")
    pd.add_argument("file")
    pd.add_argument("--samples", type=int, default=None,
                    help="override the document's sample count")
    pd.add_argument("--seed", type=int, default=DEFAULT_SEED)
    pd.add_argument("--fuel", type=int, default=10**7)
    pd.add_argument("--json", action="store_true")
    pd.set_defaults(fn=cmd_check_derivation)

    ps = sub.add_parser("suite", help="run the acceptance criteria")
    ps.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ps.add_argument("--word-size", type=int, default=2**31)
    ps.add_argument("--samples", type=int, default=256)
    ps.add_argument("--fuel", type=int, default=10**7)
    ps.add_argument("--json", action="store_true")
    ps.set_defaults(fn=cmd_suite)

    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
