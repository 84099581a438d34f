"""Deterministic small-step evaluation with exact step counting.

Sequential mode counts every transition (the cost); parallel mode steps every
steppable child of an application, pair, binary foreign call, or binary
primitive simultaneously, so the count is the span.  The symbolic stepper
treats free variables as opaque values and stops on redexes blocked by them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .registry import EvalConfig, FFIRegistry, RegistryError
from .syntax import (
    Ap, Arith, Cff1, Cff2, Expr, Fst, Fun, Ifz, Let, Num, Op, Pair,
    Snd, Suc, Var, as_numeral, is_value, print_expr, subst, suc,
)


class EvalError(Exception):
    pass


class StuckError(EvalError):
    """No transition rule applies and the term is not a value."""

    def __init__(self, term: Expr, reason: str):
        super().__init__(f"stuck at {print_expr(term)}: {reason}")
        self.term = term
        self.reason = reason


class FuelError(EvalError):
    def __init__(self, term: Expr, steps: int,
                 trace: Optional[tuple[Expr, ...]] = None):
        super().__init__(f"fuel exhausted after {steps} steps")
        self.term = term
        self.steps = steps
        self.trace = trace  # partial trace when tracing was on


@dataclass(frozen=True)
class EvalResult:
    value: Expr
    steps: int
    trace: Optional[tuple[Expr, ...]] = None


# Observer invoked on every function application beta step with
# (function value, argument value); used to instrument recursive calls.
BetaObserver = Callable[[Fun, Expr], None]

_VALUE = "value"
_BLOCKED = "blocked"


def _step(e: Expr, reg: FFIRegistry, cfg: EvalConfig, symbolic: bool,
          parallel: bool, on_beta: Optional[BetaObserver]):
    """One transition: returns a new Expr, or _VALUE / _BLOCKED markers."""

    def rec(t):
        return _step(t, reg, cfg, symbolic, parallel, on_beta)

    def blocked_or_stuck(t, reason):
        if symbolic:
            return _BLOCKED
        raise StuckError(t, reason)

    if isinstance(e, Var):
        return _VALUE  # variables range over values

    match e:
        case Fun() | Num():
            return _VALUE
        case Suc(arg):
            r = rec(arg)
            if isinstance(r, Expr):
                return suc(r)
            return r if r == _BLOCKED else _VALUE

        case Ap(fn, arg):
            r = _two_place(e, fn, arg, lambda a, b: Ap(a, b), rec, parallel)
            if r is not None:
                return r
            if isinstance(fn, Fun):
                if on_beta is not None:
                    on_beta(fn, arg)
                return subst(fn.body, {fn.fname: fn, fn.aname: arg})
            if isinstance(fn, Var):
                return blocked_or_stuck(e, "application head is a variable")
            raise StuckError(e, "applied a non-function value")

        case Ifz(scrut, zbr, v, sbr):
            r = rec(scrut)
            if isinstance(r, Expr):
                return Ifz(r, zbr, v, sbr)
            if r == _BLOCKED:
                return _BLOCKED
            if isinstance(scrut, Num):
                if scrut.value == 0:
                    return zbr
                return subst(sbr, {v: Num(scrut.value - 1)})
            if isinstance(scrut, Suc):  # successor of a non-numeral value
                return subst(sbr, {v: scrut.arg})
            if isinstance(scrut, Var):
                return blocked_or_stuck(e, "case analysis on a variable")
            raise StuckError(e, "ifz scrutinee is not a numeral")

        case Pair(a, b):
            r = _two_place(e, a, b, lambda x, y: Pair(x, y), rec, parallel)
            return _VALUE if r is None else r

        case Fst(arg):
            r = rec(arg)
            if isinstance(r, Expr):
                return Fst(r)
            if r == _BLOCKED:
                return _BLOCKED
            if isinstance(arg, Pair):
                return arg.fst
            if isinstance(arg, Var):
                return blocked_or_stuck(e, "projection from a variable")
            raise StuckError(e, "fst of a non-pair value")

        case Snd(arg):
            r = rec(arg)
            if isinstance(r, Expr):
                return Snd(r)
            if r == _BLOCKED:
                return _BLOCKED
            if isinstance(arg, Pair):
                return arg.snd
            if isinstance(arg, Var):
                return blocked_or_stuck(e, "projection from a variable")
            raise StuckError(e, "snd of a non-pair value")

        case Let(bound, v, body):
            r = rec(bound)
            if isinstance(r, Expr):
                return Let(r, v, body)
            if r == _BLOCKED:
                return _BLOCKED
            return subst(body, {v: bound})

        case Cff1(f, arg):
            r = rec(arg)
            if isinstance(r, Expr):
                return Cff1(f, r)
            if r == _BLOCKED:
                return _BLOCKED
            m = as_numeral(arg)
            if m is None:
                if isinstance(arg, Var):
                    return blocked_or_stuck(e, "foreign call on a variable")
                raise StuckError(e, "foreign call on a non-numeral")
            return Num(_apply1(e, reg, f, m))

        case Cff2(f, a, b):
            r = _two_place(e, a, b, lambda x, y: Cff2(f, x, y), rec, parallel)
            if r is not None:
                return r
            m, n = as_numeral(a), as_numeral(b)
            if m is None or n is None:
                if isinstance(a, Var) or isinstance(b, Var):
                    return blocked_or_stuck(e, "foreign call on a variable")
                raise StuckError(e, "foreign call on a non-numeral")
            return Num(_apply2(e, reg, f, m, n))

        case Op(f, arg):
            r = rec(arg)
            if isinstance(r, Expr):
                return Op(f, r)
            if r == _BLOCKED:
                return _BLOCKED
            m = as_numeral(arg)
            if m is None:
                if isinstance(arg, Var):
                    return blocked_or_stuck(e, "primitive on a variable")
                raise StuckError(e, "primitive on a non-numeral")
            if m >= cfg.word_size:
                raise StuckError(e, f"operand {m} exceeds word size {cfg.word_size}")
            return Num(_apply1(e, reg, f, m))

        case Arith(f, a, b):
            r = _two_place(e, a, b, lambda x, y: Arith(f, x, y), rec, parallel)
            if r is not None:
                return r
            m, n = as_numeral(a), as_numeral(b)
            if m is None or n is None:
                if isinstance(a, Var) or isinstance(b, Var):
                    return blocked_or_stuck(e, "primitive on a variable")
                raise StuckError(e, "primitive on a non-numeral")
            if m >= cfg.word_size or n >= cfg.word_size:
                big = m if m >= cfg.word_size else n
                raise StuckError(e, f"operand {big} exceeds word size {cfg.word_size}")
            return Num(_apply2(e, reg, f, m, n))

        case _:
            # Type formers, triv, universes, relation types: all final.
            return _VALUE


def _two_place(e, a, b, rebuild, rec, parallel):
    """Congruence discipline for ap/pair/cff2/arith.

    Returns the stepped node, a marker, or None when both children are values
    (so the caller fires its beta rule).  Sequentially the left child steps
    first; in parallel mode both non-value children step simultaneously.
    """
    ra = rec(a) if not is_value(a) else _VALUE
    if parallel:
        rb = rec(b) if not is_value(b) else _VALUE
        if isinstance(ra, Expr) and isinstance(rb, Expr):
            return rebuild(ra, rb)
        if isinstance(ra, Expr) and rb == _VALUE:
            return rebuild(ra, b)
        if ra == _VALUE and isinstance(rb, Expr):
            return rebuild(a, rb)
        if ra == _BLOCKED or rb == _BLOCKED:
            return _BLOCKED
        return None
    if isinstance(ra, Expr):
        return rebuild(ra, b)
    if ra == _BLOCKED:
        return _BLOCKED
    if not is_value(b):
        rb = rec(b)
        if isinstance(rb, Expr):
            return rebuild(a, rb)
        if rb == _BLOCKED:
            return _BLOCKED
    return None


def _apply1(e, reg, f, m):
    try:
        return reg.apply_unary(f, m)
    except RegistryError as err:
        raise StuckError(e, str(err)) from None


def _apply2(e, reg, f, m, n):
    try:
        return reg.apply_binary(f, m, n)
    except RegistryError as err:
        raise StuckError(e, str(err)) from None


def step_seq(e: Expr, reg: FFIRegistry, cfg: EvalConfig) -> Optional[Expr]:
    """The unique sequential successor, or None when e is a value."""
    r = _step(e, reg, cfg, symbolic=False, parallel=False, on_beta=None)
    return r if isinstance(r, Expr) else None


def step_par(e: Expr, reg: FFIRegistry, cfg: EvalConfig) -> Optional[Expr]:
    """The maximal-parallel successor, or None when e is a value."""
    r = _step(e, reg, cfg, symbolic=False, parallel=True, on_beta=None)
    return r if isinstance(r, Expr) else None


def step_symbolic(e: Expr, reg: FFIRegistry, cfg: EvalConfig) -> Optional[Expr]:
    """One sequential step with variables as opaque values; None if blocked or a value."""
    r = _step(e, reg, cfg, symbolic=True, parallel=False, on_beta=None)
    return r if isinstance(r, Expr) else None


def _eval(e: Expr, reg: FFIRegistry, cfg: EvalConfig, parallel: bool,
          on_beta: Optional[BetaObserver] = None) -> EvalResult:
    steps = 0
    trace: Optional[list[Expr]] = [] if cfg.trace else None
    while True:
        r = _step(e, reg, cfg, symbolic=False, parallel=parallel, on_beta=on_beta)
        if not isinstance(r, Expr):
            return EvalResult(e, steps, tuple(trace) if trace is not None else None)
        e = r
        steps += 1
        if trace is not None:
            trace.append(e)
        if steps > cfg.fuel:
            raise FuelError(e, steps,
                            tuple(trace) if trace is not None else None)


def eval_seq(e: Expr, reg: FFIRegistry, cfg: EvalConfig,
             on_beta: Optional[BetaObserver] = None) -> EvalResult:
    """Iterate step_seq to a value; `steps` is the exact cost."""
    return _eval(e, reg, cfg, parallel=False, on_beta=on_beta)


def eval_par(e: Expr, reg: FFIRegistry, cfg: EvalConfig,
             on_beta: Optional[BetaObserver] = None) -> EvalResult:
    """Iterate step_par to a value; `steps` is the span."""
    return _eval(e, reg, cfg, parallel=True, on_beta=on_beta)


def eval_mode(e: Expr, reg: FFIRegistry, cfg: EvalConfig) -> EvalResult:
    return eval_par(e, reg, cfg) if cfg.mode == "par" else eval_seq(e, reg, cfg)


def eval_symbolic(e: Expr, reg: FFIRegistry, cfg: EvalConfig) -> tuple[Expr, int]:
    """Run the symbolic stepper to a value or blocked term; returns (term, steps)."""
    steps = 0
    while True:
        r = step_symbolic(e, reg, cfg)
        if r is None:
            return e, steps
        e = r
        steps += 1
        if steps > cfg.fuel:
            raise FuelError(e, steps)


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of one cost-bound comparison: steps of M against the numeral of P."""

    value: Expr
    steps: int
    bound: int
    holds: bool


def check_bound(m: Expr, p: Expr, reg: FFIRegistry, cfg: EvalConfig) -> BoundCheck:
    """Evaluate M and the bound P; the verdict is steps(M) <= value(P)."""
    res = eval_mode(m, reg, cfg)
    bound_res = eval_seq(p, reg, cfg)
    bound = as_numeral(bound_res.value)
    if bound is None:
        raise EvalError(f"bound did not evaluate to a numeral: {print_expr(bound_res.value)}")
    return BoundCheck(res.value, res.steps, bound, res.steps <= bound)
