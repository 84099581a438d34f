#!/usr/bin/env python3
"""Print cost/span tables for the bundled examples against their bounds."""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from catbench import programs  # noqa: E402
from catbench.evaluation import eval_par, eval_seq  # noqa: E402
from catbench.registry import EvalConfig, default_registry  # noqa: E402
from catbench.semantics import TestBudget, measure  # noqa: E402
from catbench.syntax import Ap, Num, Pair, as_numeral  # noqa: E402


def main() -> None:
    reg = default_registry()
    cfg = EvalConfig()
    pcfg = EvalConfig(mode="par")
    budget = TestBudget()

    print("gcd: sequential cost vs 1 + bound")
    gcd, gp = programs.gcd_term(), programs.gcd_bound()
    print(f"{'x':>4} {'y':>4} {'value':>6} {'steps':>6} {'bound':>6}")
    for x, y in [(0, 9), (1, 5), (2, 4), (6, 4), (12, 18), (13, 21)]:
        arg = Pair(Num(x), Num(y))
        res = eval_seq(Ap(gcd, arg), reg, cfg)
        bound = 1 + measure(gp, "a", arg, reg, budget)
        print(f"{x:>4} {y:>4} {as_numeral(res.value):>6} "
              f"{res.steps:>6} {bound:>6}")

    print("\nfib: span vs 1 + bound")
    fib, fp = programs.fib_term(), programs.fib_bound()
    print(f"{'n':>4} {'value':>6} {'span':>6} {'bound':>6}")
    for n in range(11):
        res = eval_par(Ap(fib, Num(n)), reg, pcfg)
        bound = 1 + measure(fp, "n", Num(n), reg, budget)
        print(f"{n:>4} {as_numeral(res.value):>6} {res.steps:>6} {bound:>6}")

    print("\ncountdown: cost vs 1 + bound")
    cd, cp = programs.countdown_term(), programs.countdown_bound()
    print(f"{'a':>4} {'steps':>6} {'bound':>6}")
    for a in (0, 1, 2, 5, 10, 20):
        res = eval_seq(Ap(cd, Num(a)), reg, cfg)
        bound = 1 + measure(cp, "a", Num(a), reg, budget)
        print(f"{a:>4} {res.steps:>6} {bound:>6}")


if __name__ == "__main__":
    main()
