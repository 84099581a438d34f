"""The acceptance suite: the reproducible results, one function per criterion.

Each criterion returns a result row; the CLI prints them as a table and the
test suite asserts each one.  All randomness is seeded, so reports are
deterministic for a given (seed, word size, samples) configuration.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from random import Random
from typing import Callable, Optional

from . import programs
from .derivations import check_derivation, soundness_probe
from .evaluation import (
    StuckError, eval_par, eval_seq, step_par, step_seq,
)
from .generators import NAT_T, PAIR_T, gen_closed_term
from .judgments import CostMemberEqJ
from .proofs import countdown_derivation, fib_derivation, gcd_derivation
from .registry import EvalConfig, FFIRegistry, default_registry, register
from .rulecases import cases, mutations
from .semantics import (
    EqDen, NatDen, Rel2Den, SigmaDen, SubsetDen, TestBudget, member_cost,
    member_eq, measure, type_denote,
)
from .syntax import (
    Ap, Arith, Cff2, Expr, Let, Num, Op, Pair, Rel2, TRIV, Var, ZERO,
    alpha_eq, as_numeral, is_value, parin, parse, print_expr, subst,
)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str
    seconds: float


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0xC0571
    word_size: int = 2**31
    samples: int = 256
    fuel: int = 10**7

    def budget(self, **kw) -> TestBudget:
        base = TestBudget(seed=self.seed, word_size=self.word_size,
                          fuel=self.fuel)
        return replace(base, **kw) if kw else base

    def eval_config(self, mode="seq") -> EvalConfig:
        return EvalConfig(word_size=self.word_size, mode=mode, fuel=self.fuel)


def _criterion(fn: Callable[..., tuple[bool, str]]):
    def run(cfg: SuiteConfig, reg: FFIRegistry) -> CriterionResult:
        start = time.perf_counter()
        try:
            passed, detail = fn(cfg, reg)
        except Exception as err:  # a crash is a failure with its reason
            passed, detail = False, f"error: {err}"
        return CriterionResult(fn.__name__.replace("_", "-"), passed, detail,
                               time.perf_counter() - start)
    run.__name__ = fn.__name__
    return run


@_criterion
def gcd_measure(cfg, reg):
    """measure at (0, y) is exactly 5; at (x>0, y) exactly 8 + 8x."""
    bud = cfg.budget()
    p = programs.gcd_bound()
    rng = Random(cfg.seed)
    bad = []
    ys = [0, 1, 7, cfg.word_size - 1] + [rng.randrange(cfg.word_size)
                                         for _ in range(28)]
    for y in ys:
        m = measure(p, "a", Pair(ZERO, Num(y)), reg, bud)
        if m != 5:
            bad.append((0, y, m))
    xs = [1, 2, cfg.word_size - 1] + [rng.randrange(1, cfg.word_size)
                                      for _ in range(29)]
    for x in xs:
        y = rng.randrange(cfg.word_size)
        m = measure(p, "a", Pair(Num(x), Num(y)), reg, bud)
        if m != 8 + 8 * x:
            bad.append((x, y, m))
    return not bad, f"{len(ys) + len(xs)} arguments" if not bad else f"wrong at {bad[:3]}"


@_criterion
def gcd_verification(cfg, reg):
    """On the 16x16 grid: the right gcd, within one step of the measure."""
    bud = cfg.budget()
    ecfg = cfg.eval_config()
    gcd = programs.gcd_term()
    p = programs.gcd_bound()
    for x in range(16):
        for y in range(16):
            res = eval_seq(Ap(gcd, Pair(Num(x), Num(y))), reg, ecfg)
            want = y if x == 0 else math.gcd(x, y)
            bound = 1 + measure(p, "a", Pair(Num(x), Num(y)), reg, bud)
            if as_numeral(res.value) != want:
                return False, f"gcd({x},{y}) = {print_expr(res.value)}"
            if res.steps > bound:
                return False, f"gcd({x},{y}) took {res.steps} > {bound}"
    return True, "256 inputs"


@_criterion
def fib_span_measure(cfg, reg):
    """The span bound takes the values 1, 2, 24 at 0, 1, 2."""
    bud = cfg.budget()
    p = programs.fib_bound()
    got = [measure(p, "n", Num(n), reg, bud) for n in (0, 1, 2)]
    return got == [1, 2, 24], f"measure(0,1,2) = {got}"


@_criterion
def fib_verification(cfg, reg):
    """For n in 0..10: the right Fibonacci number within the span bound."""
    bud = cfg.budget()
    ecfg = cfg.eval_config(mode="par")
    fib = programs.fib_term()
    p = programs.fib_bound()
    for n in range(11):
        res = eval_par(Ap(fib, Num(n)), reg, ecfg)
        bound = 1 + measure(p, "n", Num(n), reg, bud)
        if as_numeral(res.value) != programs.metatheoretic_fib(n):
            return False, f"fib({n}) = {print_expr(res.value)}"
        if res.steps > bound:
            return False, f"fib({n}) span {res.steps} > {bound}"
    return True, "n in 0..10"


@_criterion
def parin_overhead(cfg, reg):
    """Desugared binary sequencing reaches the body in max(c1,c2)+5 spans."""
    ecfg = cfg.eval_config(mode="par")
    rng = Random(cfg.seed)
    checked = 0
    for i in range(100):
        m1 = gen_closed_term(rng, NAT_T, depth=3)
        m2 = gen_closed_term(rng, NAT_T, depth=3)
        body = Cff2("+", Var("u"), Var("v"))
        term = parin(m1, m2, "u", "v", body)
        r1 = eval_par(m1, reg, ecfg)
        r2 = eval_par(m2, reg, ecfg)
        expected_at = max(r1.steps, r2.steps) + 5
        target = subst(body, {"u": r1.value, "v": r2.value})
        t = term
        for _ in range(expected_at):
            t = step_par(t, reg, ecfg)
            if t is None:
                return False, f"case {i}: finished early"
        if not alpha_eq(t, target):
            return False, f"case {i}: not at the substituted body"
        checked += 1
    # value inputs specialize to exactly five steps
    t = parin(Num(3), Num(4), "u", "v", Cff2("+", Var("u"), Var("v")))
    for _ in range(5):
        t = step_par(t, reg, ecfg)
    if not alpha_eq(t, Cff2("+", Num(3), Num(4))):
        return False, "value inputs did not take exactly 5 steps"
    return True, f"{checked} generated cases + value-input case"


@_criterion
def head_expansion(cfg, reg):
    """Prepended steps preserve cost membership once the bound is padded."""
    bud = cfg.budget()
    ecfg = cfg.eval_config()
    rng = Random(cfg.seed)
    tight_refuted = False
    for i in range(500):
        m = gen_closed_term(rng, NAT_T, depth=3)
        c = eval_seq(m, reg, ecfg).steps
        slack = rng.randrange(4)
        p = Num(c + slack)
        if not member_cost(m, m, NatDen(), p, reg, bud).ok:
            return False, f"case {i}: base membership failed"
        k = rng.randrange(1, 5)
        wrapped = m
        for _ in range(k):
            wrapped = Let(ZERO, "pad", wrapped)
        padded = Cff2("+", Num(k), p)
        if not member_cost(wrapped, wrapped, NatDen(), padded, reg, bud).ok:
            return False, f"case {i}: padded membership failed"
        if slack == 0 and not tight_refuted:
            short = Cff2("+", Num(k - 1), p) if k > 1 else Num(c)
            ver = member_cost(wrapped, wrapped, NatDen(), short, reg, bud)
            if ver.ok:
                return False, f"case {i}: under-padded bound accepted"
            tight_refuted = True
    if not tight_refuted:
        return False, "no tight witness case was generated"
    return True, "500 cases, under-padding refuted"


@_criterion
def determinism_and_dominance(cfg, reg):
    """Steps are unique, values are normal, and span never exceeds cost."""
    ecfg = cfg.eval_config()
    pcfg = cfg.eval_config(mode="par")
    rng = Random(cfg.seed)
    for i in range(1000):
        ty = PAIR_T if rng.random() < 0.25 else NAT_T
        e = gen_closed_term(rng, ty, depth=4)
        t: Optional[Expr] = e
        seq_steps = 0
        while t is not None:
            s1 = step_seq(t, reg, ecfg)
            s2 = step_seq(t, reg, ecfg)
            if (s1 is None) != (s2 is None) or \
                    (s1 is not None and not alpha_eq(s1, s2)):
                return False, f"case {i}: successor not unique"
            if s1 is None:
                if not is_value(t):
                    return False, f"case {i}: normal form is not a value"
                if step_par(t, reg, pcfg) is not None:
                    return False, f"case {i}: value steps in parallel mode"
                break
            if is_value(t):
                return False, f"case {i}: value has a successor"
            t = s1
            seq_steps += 1
            if seq_steps > 10_000:
                return False, f"case {i}: runaway evaluation"
        seq = eval_seq(e, reg, ecfg)
        par = eval_par(e, reg, pcfg)
        if not alpha_eq(seq.value, par.value):
            return False, f"case {i}: modes disagree on the value"
        if par.steps > seq.steps:
            return False, f"case {i}: span {par.steps} > cost {seq.steps}"
    return True, "1000 terms"


@_criterion
def word_guard(cfg, reg):
    """Primitives are stuck at the word size and cost one step below it."""
    w = cfg.word_size
    ecfg = cfg.eval_config()
    reg2 = register(reg, "unary", "double", lambda k: 2 * k)
    for bad in (Arith("+", Num(w), Num(1)), Arith("+", Num(1), Num(w)),
                Arith("*", Num(w + 7), Num(2)), Op("double", Num(w))):
        try:
            eval_seq(bad, reg2, ecfg)
            return False, f"not stuck: {print_expr(bad)}"
        except StuckError:
            pass
    rng = Random(cfg.seed)
    for i in range(200):
        m = gen_closed_term(rng, NAT_T, depth=2)
        n = gen_closed_term(rng, NAT_T, depth=2)
        cm = eval_seq(m, reg2, ecfg)
        cn = eval_seq(n, reg2, ecfg)
        r = eval_seq(Arith("max", m, n), reg2, ecfg)
        if r.steps != cm.steps + cn.steps + 1:
            return False, f"case {i}: arith took {r.steps}, " \
                          f"operands {cm.steps}+{cn.steps}"
        ru = eval_seq(Op("double", m), reg2, ecfg)
        if ru.steps != cm.steps + 1:
            return False, f"case {i}: op took {ru.steps}"
    return True, "4 stuck cases, 200 unit-step cases"


@_criterion
def derivation_soundness(cfg, reg):
    """Bundled scripts and fixtures check; mutations are rejected in place."""
    scripts = {
        "gcd": (gcd_derivation(cfg.word_size), "seq"),
        "fib": (fib_derivation(), "par"),
        "countdown": (countdown_derivation(), "seq"),
    }
    for name, (deriv, mode) in scripts.items():
        bud = cfg.budget(mode=mode, samples=8)
        v = check_derivation(deriv, reg, bud)
        if not v.ok:
            return False, f"{name}: {v}"
        probe = soundness_probe(deriv, reg, bud)
        if not probe.ok:
            return False, f"{name} probe: {probe}"
    fixture_count = 0
    for case in cases(cfg.word_size):
        bud = cfg.budget(mode=case.mode, samples=6)
        v = check_derivation(case.derivation, reg, bud)
        if v.ok != case.accepted:
            return False, f"fixture {case.rule}/{case.name}: {v}"
        fixture_count += 1
        if case.accepted:
            for node_j in _closed_cost_conclusions(case.derivation):
                den = type_denote(node_j.ty, reg, bud)
                ver = member_cost(node_j.lhs, node_j.rhs, den, node_j.cost,
                                  reg, bud)
                if ver.failed:
                    return False, f"fixture {case.name}: oracle refutes {node_j}"
    mutation_count = 0
    for m in mutations():
        root, mode = scripts[m.script]
        bud = cfg.budget(mode=mode, samples=6)
        v = check_derivation(m.build(root), reg, bud)
        if not v.failed or f"node {m.fails_at} " not in (v.witness or ""):
            return False, f"mutation {m.name!r}: {v}"
        mutation_count += 1
    return True, (f"3 scripts, {fixture_count} fixtures, "
                  f"{mutation_count} mutations")


def _closed_cost_conclusions(deriv):
    out = []

    def walk(node):
        j = node.conclusion
        if isinstance(j, CostMemberEqJ) and len(j.tel) == 0:
            out.append(j)
        for p in node.premises:
            walk(p)

    walk(deriv)
    return out


@_criterion
def per_and_unicity(cfg, reg):
    """Symmetry/transitivity of decided membership; denotation is a function."""
    bud = cfg.budget(samples=6)
    rng = Random(cfg.seed)
    dens = [
        NatDen(),
        Rel2Den("<", Num(2), Num(3)),
        Rel2Den("<=", Num(3), Num(3)),
        EqDen(NatDen(), Num(4), Cff2("+", Num(2), Num(2))),
        SubsetDen(NatDen(), "v", Rel2("<", Var("v"), Num(9))),
        SigmaDen(NatDen(), "v", Rel2("<=", Var("v"), Var("v"))),
    ]

    def sample_member(den) -> Expr:
        if isinstance(den, NatDen):
            return gen_closed_term(rng, NAT_T, depth=2)
        if isinstance(den, SubsetDen):
            return Num(rng.randrange(9))
        if isinstance(den, SigmaDen):
            return Pair(Num(rng.randrange(6)), TRIV)
        return TRIV

    triples = 0
    while triples < 200:
        den = rng.choice(dens)
        m1, m2, m3 = (sample_member(den) for _ in range(3))
        v12 = member_eq(m1, m2, den, reg, bud)
        v21 = member_eq(m2, m1, den, reg, bud)
        if v12.status == "unknown" or v21.status == "unknown":
            continue
        if v12.ok != v21.ok:
            return False, f"symmetry broken on {print_expr(m1)}, {print_expr(m2)}"
        v23 = member_eq(m2, m3, den, reg, bud)
        v13 = member_eq(m1, m3, den, reg, bud)
        if "unknown" in (v23.status, v13.status):
            continue
        if v12.ok and v23.ok and not v13.ok:
            return False, "transitivity broken"
        triples += 1
    types = 0
    while types < 200:
        src = rng.choice([
            "nat", "(univ 0)", "(subset v nat (rel2 < v 9))",
            "(sigma v nat (eq nat v v))", "(eq nat 1 1)",
            "(let zero u nat)", "(funtime v nat nat (suc v))",
            "(rel3 gcdProp 2 2 4)",
        ])
        a = parse(src)
        d1 = type_denote(a, reg, bud)
        d2 = type_denote(a, reg, bud)
        if d1 != d2:
            return False, f"denotation not a function on {src}"
        types += 1
    return True, "200 membership triples, 200 denotations"


ALL_CRITERIA = [
    gcd_measure,
    gcd_verification,
    fib_span_measure,
    fib_verification,
    parin_overhead,
    head_expansion,
    determinism_and_dominance,
    word_guard,
    derivation_soundness,
    per_and_unicity,
]


def run_suite(cfg: SuiteConfig = SuiteConfig(),
              reg: Optional[FFIRegistry] = None) -> list[CriterionResult]:
    reg = reg if reg is not None else default_registry()
    return [crit(cfg, reg) for crit in ALL_CRITERIA]
