"""Bound reports over sampled inputs, and access to the bundled assets."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .evaluation import EvalError, eval_seq, eval_par
from .registry import FFIRegistry
from .semantics import (
    DenoteError, TestBudget, den_sample, type_denote,
)
from .syntax import Ap, Expr, as_numeral, is_value, print_expr, subst


def bundled_path(name: str, kind: Optional[str] = None) -> Path:
    """Path of a bundled program or derivation document by bare name.

    `kind` narrows the search to "program" or "derivation" assets.
    """
    root = resources.files("catbench") / "data"
    candidates = [name]
    if kind in (None, "program"):
        candidates += [f"programs/{name}", f"programs/{name}.cat"]
    if kind in (None, "derivation"):
        candidates += [f"derivations/{name}", f"derivations/{name}.deriv.json"]
    for rel in candidates:
        p = root / rel
        if p.is_file():
            return Path(str(p))
    raise FileNotFoundError(f"no bundled asset named {name!r}")


@dataclass(frozen=True)
class SampleRecord:
    argument: str
    value: str
    steps: int
    bound: int
    holds: bool

    def to_json(self) -> dict:
        return {"input": self.argument, "observed": self.value,
                "steps": self.steps, "bound": self.bound,
                "verdict": "pass" if self.holds else "fail"}


@dataclass(frozen=True)
class BoundReport:
    program: str
    mode: str
    samples: tuple[SampleRecord, ...]
    seed: int
    word_size: int

    @property
    def passed(self) -> bool:
        return all(s.holds for s in self.samples)

    def to_json(self) -> dict:
        return {
            "program": self.program,
            "mode": self.mode,
            "seed": self.seed,
            "word_size": self.word_size,
            "samples": [s.to_json() for s in self.samples],
            "verdict": "pass" if self.passed else "fail",
        }

    def failures(self) -> list[SampleRecord]:
        return [s for s in self.samples if not s.holds]


# Upper bound on uniform argument draws for bound checking.
WIDE_DRAW_CAP = 4096


def _numeral_weight(e: Expr) -> int:
    from dataclasses import fields
    from .syntax import Num
    if isinstance(e, Num):
        return e.value
    total = 0
    for f in fields(e):
        v = getattr(e, f.name)
        if isinstance(v, Expr):
            total += _numeral_weight(v)
    return total


def check_bound_over_domain(
    fn: Expr, bound: Expr, var: str, domain: Expr,
    reg: FFIRegistry, budget: TestBudget, *,
    program: str = "<program>",
    arguments: Optional[Sequence[Expr]] = None,
) -> BoundReport:
    """steps(fn V) <= 1 + bound[V/var] for sampled (or given) arguments V.

    The extra unit is the application step, matching the elimination form of
    the timed function type.
    """
    cfg = budget.eval_config()
    run = eval_par if budget.mode == "par" else eval_seq
    if arguments is None:
        den = type_denote(domain, reg, budget)
        rng = budget.rng()
        # Unlike derivation checking, bound checking wants arguments well
        # beyond the small-numeral pool, so seed the sampler with wide
        # draws.  They are capped: confirming a bound costs as many steps
        # as the bound allows, so huge arguments to a linear-cost program
        # would stall the check.  Word-boundary arguments still appear
        # wherever the domain carries a word-size refinement, via the
        # sampler's bound harvesting.
        cap = min(budget.word_size, WIDE_DRAW_CAP)
        wide = [rng.randrange(cap) for _ in range(budget.samples)]
        args = den_sample(den, rng, reg, budget, extra=wide)
        if args is None:
            raise DenoteError("argument domain is not samplable")
        # keep the structurally smallest arguments (bounds are tightest at
        # base cases), then fill the quota from the shuffled remainder
        head = sorted(args, key=_numeral_weight)[: max(4, budget.samples // 4)]
        seen = {id(a) for a in head}
        tail = [a for a in args if id(a) not in seen]
        arguments = (head + tail)[: budget.samples]
    rows = []
    for v in arguments:
        if not is_value(v):
            raise ValueError(f"argument is not a value: {print_expr(v)}")
        res = run(Ap(fn, v), reg, cfg)
        bnd = eval_seq(subst(bound, {var: v}), reg, cfg)
        k = as_numeral(bnd.value)
        if k is None:
            raise EvalError(
                f"bound is not a numeral at {print_expr(v)}: "
                f"{print_expr(bnd.value)}")
        rows.append(SampleRecord(print_expr(v), print_expr(res.value),
                                 res.steps, 1 + k, res.steps <= 1 + k))
    return BoundReport(program, budget.mode, tuple(rows),
                       budget.seed, budget.word_size)
