"""Derivation trees over judgments, and the rule-by-rule checker.

A derivation is a tree of rule applications.  Checking a node matches the
rule's conclusion/premise templates exactly (up to alpha) and discharges its
side conditions by symbolic stepping, numeral evaluation, or the registry.
Rules that identify metatheoretic numbers (rel-i, rel-e, subset-e part 2)
are closed-context only.  The `instances` rule is the semantic escape hatch:
it checks its conclusion directly on sampled telescope instances, which is
how the example verifications discharge obligations that the inference rules
do not reach.

Inside the recursion premise of `funtime-i`, the function being introduced
is recorded so that `instances` nodes there may instantiate the recursion
hypothesis with it; this mirrors the well-founded induction that justifies
the rule, checked pointwise on samples.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Optional

from .evaluation import StuckError, step_symbolic
from .judgments import (
    CostMemberEqJ, Judgment, MemberEqJ, TypeEqJ, ValueMemberEqJ,
    judgment_from_json, judgment_to_json,
)
from .registry import FFIRegistry, RegistryError
from .semantics import (
    DenoteError, EqDen, Rel2Den, Rel3Den, TestBudget, Verdict, check_open,
    type_denote,
)
from .syntax import (
    Ap, Arith, Cff1, Cff2, Eq, Expr, Fst, Fun, Funtime, Ifz, Let, Num,
    Op, Pair, Rel2, Rel3, Sigma, Snd, Subset, SubstitutionError, Telescope,
    TRIV, Univ, Var, NAT, ZERO, alpha_eq, as_numeral, free_vars, fresh_name,
    is_value, parin, print_expr, subst, suc,
)

RULES = frozenset({
    "hyp", "weaken", "seq", "open-head-exp", "head-exp", "cost-step-pad",
    "cost-replace", "resp-eq", "conversion",
    "univ-f", "univ-e", "eq-f", "eq-i", "eq-e",
    "nat-f", "nat-i-zero", "nat-i-suc", "ffe1", "ffe2", "nat-e1", "nat-e2",
    "subset-f", "subset-i", "subset-e", "rel-f", "rel-i", "rel-e",
    "sigma-f", "sigma-i", "sigma-e",
    "funtime-f", "funtime-i", "funtime-e",
    "cost-weaken", "arith-e", "bin-seq", "instances",
})


class SchemaError(Exception):
    pass


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Judgment
    premises: tuple["Derivation", ...] = ()
    payload: Mapping[str, object] = field(default_factory=dict)

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


@dataclass(frozen=True)
class NodeReport:
    path: str
    rule: str
    seconds: float


@dataclass(frozen=True)
class ScriptReport:
    verdict: Verdict
    nodes: tuple[NodeReport, ...]
    rule_counts: Mapping[str, int]
    seconds: float


class RuleError(Exception):
    pass


class _NodeFailure(Exception):
    def __init__(self, path: tuple[int, ...], rule: str, message: str):
        self.path = path
        self.rule = rule
        self.message = message
        super().__init__(message)

    def located(self) -> str:
        where = ".".join(map(str, self.path)) or "root"
        return f"node {where} ({self.rule}): {self.message}"


@dataclass
class _Env:
    reg: FFIRegistry
    budget: TestBudget
    fun_hyps: dict[str, Expr]


def _fail(msg: str):
    raise RuleError(msg)


def _expect(cond: bool, msg: str):
    if not cond:
        raise RuleError(msg)


def _aeq(a: Expr, b: Expr, what: str):
    if not alpha_eq(a, b):
        _expect(False, f"{what}: expected {print_expr(b)}, found {print_expr(a)}")


def _same_tel(t1: Telescope, t2: Telescope, what: str):
    _expect(t1 == t2, f"{what}: telescopes differ")


def _is_prefix(small: Telescope, big: Telescope) -> bool:
    if len(small) > len(big):
        return False
    for (v1, t1), (v2, t2) in zip(small.entries, big.entries):
        if v1 != v2 or not alpha_eq(t1, t2):
            return False
    return True


def _member_view(j: Judgment, what: str):
    """Subjects/type of a membership premise; value membership coerces."""
    if isinstance(j, (MemberEqJ, ValueMemberEqJ)):
        return j.tel, j.lhs, j.rhs, j.ty
    _fail(f"{what}: expected a membership judgment, found {type(j).__name__}")


def _cost_view(j: Judgment, what: str):
    if isinstance(j, CostMemberEqJ):
        return j.tel, j.lhs, j.rhs, j.ty, j.cost
    _fail(f"{what}: expected a cost-membership judgment, found {type(j).__name__}")


def _value_view(j: Judgment, what: str):
    if isinstance(j, ValueMemberEqJ):
        return j.tel, j.lhs, j.rhs, j.ty
    _fail(f"{what}: expected a value-membership judgment, found {type(j).__name__}")


def _conclude(expected: Judgment, actual: Judgment):
    if expected != actual:
        _fail(f"conclusion mismatch: expected {expected}, found {actual}")


def _univ_level(ty: Expr, what: str) -> int:
    _expect(isinstance(ty, Univ), f"{what}: expected a universe, found {print_expr(ty)}")
    return ty.level


def _replay(start: Expr, goal: Expr, steps: int, env: _Env, what: str):
    """Symbolic replay of a claimed reduction with an exact step count."""
    cfg = env.budget.eval_config()
    t = start
    for i in range(steps):
        try:
            nxt = step_symbolic(t, env.reg, cfg)
        except StuckError as err:
            _fail(f"{what}: stuck after {i} steps: {err}")
        if nxt is None:
            _fail(f"{what}: no step possible after {i} of {steps} steps "
                  f"at {print_expr(t)}")
        t = nxt
    _aeq(t, goal, f"{what}: replay of {steps} steps landed elsewhere")


def _eval_numeral(e: Expr, env: _Env, what: str) -> int:
    cfg = env.budget.eval_config()
    try:
        t = e
        for _ in range(cfg.fuel):
            nxt = step_symbolic(t, env.reg, cfg)
            if nxt is None:
                break
            t = nxt
    except StuckError as err:
        _fail(f"{what}: evaluation stuck: {err}")
    k = as_numeral(t)
    if k is None:
        _fail(f"{what}: expected a numeral, got {print_expr(t)}")
    return k


def _payload_int(d: Derivation, key: str, what: str) -> int:
    v = d.payload.get(key)
    _expect(isinstance(v, int) and not isinstance(v, bool) and v >= 0,
            f"{what}: payload {key!r} must be a nonnegative integer")
    return v


# ---------------------------------------------------------------------------
# Rule handlers: (node, checked premise conclusions, env) -> None or RuleError
# ---------------------------------------------------------------------------


def _rule_hyp(d, ps, env):
    tel, lhs, rhs, ty, cost = _cost_view(d.conclusion, "hyp")
    _expect(isinstance(lhs, Var) and isinstance(rhs, Var) and lhs.name == rhs.name,
            "hyp: subjects must be one variable")
    declared = tel.type_of(lhs.name)
    _expect(declared is not None, f"hyp: {lhs.name} not in telescope")
    _aeq(ty, declared, "hyp: declared type")
    _aeq(cost, ZERO, "hyp: cost")


def _rule_weaken(d, ps, env):
    (p,) = ps
    c = d.conclusion
    _expect(type(p) is type(c), "weaken: judgment form changed")
    _expect(_is_prefix(p.tel, c.tel), "weaken: premise telescope is not a prefix")
    for a, b in zip(p.parts(), c.parts()):
        _aeq(b, a, "weaken: judgment body changed")


def _rule_conversion(d, ps, env):
    (p,) = ps
    c = d.conclusion
    _same_tel(p.tel, c.tel, "conversion")

    def view(j):
        if isinstance(j, CostMemberEqJ):
            _aeq(j.cost, ZERO, "conversion: cost judgment must carry cost zero")
            return j.lhs, j.rhs, j.ty
        if isinstance(j, (MemberEqJ, ValueMemberEqJ)):
            return j.lhs, j.rhs, j.ty
        _fail("conversion: only membership forms convert")

    l1, r1, t1 = view(p)
    l2, r2, t2 = view(c)
    _aeq(l2, l1, "conversion: left subject")
    _aeq(r2, r1, "conversion: right subject")
    _aeq(t2, t1, "conversion: type")
    if not isinstance(p, ValueMemberEqJ):
        # Adding value/zero-cost information requires syntactic values.
        if isinstance(c, (ValueMemberEqJ, CostMemberEqJ)):
            _expect(is_value(l2) and is_value(r2),
                    "conversion: subjects must be values")


def _rule_seq(d, ps, env):
    p1, p2 = ps
    c = d.conclusion
    if isinstance(c, TypeEqJ):
        tel, m, m2, a = _member_view(p1, "seq premise 1")
        _expect(isinstance(p2, TypeEqJ), "seq premise 2: expected type equality")
        x, xty = p2.tel.entries[-1] if len(p2.tel) else (None, None)
        _expect(x is not None and _is_prefix(tel, p2.tel) and len(p2.tel) == len(tel) + 1,
                "seq premise 2: telescope must extend premise 1 by the cut variable")
        _aeq(xty, a, "seq: cut type")
        expected = TypeEqJ(tel, Let(m, x, p2.lhs), Let(m2, x, p2.rhs))
    elif isinstance(c, MemberEqJ):
        tel, m, m2, a = _member_view(p1, "seq premise 1")
        tel2, n, n2, b = _member_view(p2, "seq premise 2")
        x, xty = tel2.entries[-1]
        _expect(_is_prefix(tel, tel2) and len(tel2) == len(tel) + 1,
                "seq premise 2: telescope must extend premise 1 by the cut variable")
        _aeq(xty, a, "seq: cut type")
        expected = MemberEqJ(tel, Let(m, x, n), Let(m2, x, n2), Let(m, x, b))
    else:
        tel, m, m2, a, p = _cost_view(p1, "seq premise 1")
        tel2, n, n2, b, q = _cost_view(p2, "seq premise 2")
        x, xty = tel2.entries[-1]
        _expect(_is_prefix(tel, tel2) and len(tel2) == len(tel) + 1,
                "seq premise 2: telescope must extend premise 1 by the cut variable")
        _aeq(xty, a, "seq: cut type")
        expected = CostMemberEqJ(
            tel, Let(m, x, n), Let(m2, x, n2), Let(m, x, b),
            Cff2("+", p, suc(Let(m, x, q))))
    _conclude(expected, c)


def _rule_open_head_exp(d, ps, env):
    (p,) = ps
    c = d.conclusion
    steps = _payload_int(d, "steps", "open-head-exp")
    _same_tel(p.tel, c.tel, "open-head-exp")
    _expect(type(p) is type(c) and isinstance(c, (TypeEqJ, MemberEqJ)),
            "open-head-exp: forms must match and be type or member equality")
    if isinstance(c, MemberEqJ):
        _aeq(c.ty, p.ty, "open-head-exp: type")
    _aeq(c.rhs, p.rhs, "open-head-exp: right subject")
    _replay(c.lhs, p.lhs, steps, env, "open-head-exp")


def _rule_head_exp(d, ps, env):
    (p,) = ps
    c = d.conclusion
    _same_tel(p.tel, c.tel, "head-exp")
    _expect(type(p) is type(c), "head-exp: judgment form changed")
    if isinstance(c, TypeEqJ):
        _aeq(c.rhs, p.rhs, "head-exp: right subject")
        _replay(c.lhs, p.lhs, 1, env, "head-exp")
    elif isinstance(c, MemberEqJ):
        _aeq(c.rhs, p.rhs, "head-exp: right subject")
        _aeq(c.ty, p.ty, "head-exp: type")
        _replay(c.lhs, p.lhs, 1, env, "head-exp")
    elif isinstance(c, CostMemberEqJ):
        _aeq(c.rhs, p.rhs, "head-exp: right subject")
        _aeq(c.ty, p.ty, "head-exp: type")
        _aeq(c.cost, suc(p.cost), "head-exp: cost must be the successor")
        _replay(c.lhs, p.lhs, 1, env, "head-exp")
    else:
        _fail("head-exp: value membership does not head-expand")


def _rule_cost_step_pad(d, ps, env):
    (p,) = ps
    tel, m, m2, a, pcost = _cost_view(p, "cost-step-pad premise")
    c = d.conclusion
    tel2, l, r, ty, cost = _cost_view(c, "cost-step-pad conclusion")
    _same_tel(tel, tel2, "cost-step-pad")
    _aeq(ty, a, "cost-step-pad: type")
    c1 = _payload_int(d, "left_steps", "cost-step-pad")
    c2 = _payload_int(d, "right_steps", "cost-step-pad")
    _replay(l, m, c1, env, "cost-step-pad left")
    _replay(r, m2, c2, env, "cost-step-pad right")
    _expect(isinstance(cost, Cff2) and cost.fn == "+",
            "cost-step-pad: cost must be an addition")
    _aeq(cost.rhs, pcost, "cost-step-pad: padded bound")
    q = _eval_numeral(cost.lhs, env, "cost-step-pad: pad")
    _expect(q >= max(c1, c2),
            f"cost-step-pad: pad {q} is below the step count {max(c1, c2)}")


def _rule_cost_replace(d, ps, env):
    p1, p2 = ps
    tel, m, m2, a, pcost = _cost_view(p1, "cost-replace premise 1")
    tel2, q, q2, nat = _member_view(p2, "cost-replace premise 2")
    _same_tel(tel, tel2, "cost-replace")
    _aeq(nat, NAT, "cost-replace: premise 2 type")
    _aeq(q, pcost, "cost-replace: premise 2 must equate the old bound")
    _conclude(CostMemberEqJ(tel, m, m2, a, q2), d.conclusion)


def _rule_resp_eq(d, ps, env):
    p1, p2 = ps
    _expect(isinstance(p1, TypeEqJ), "resp-eq premise 1: expected type equality")
    c = d.conclusion
    _same_tel(p1.tel, p2.tel, "resp-eq")
    if isinstance(p2, CostMemberEqJ):
        _aeq(p2.ty, p1.lhs, "resp-eq: premise type")
        expected: Judgment = CostMemberEqJ(p2.tel, p2.lhs, p2.rhs, p1.rhs, p2.cost)
    elif isinstance(p2, (MemberEqJ, ValueMemberEqJ)):
        _aeq(p2.ty, p1.lhs, "resp-eq: premise type")
        expected = type(p2)(p2.tel, p2.lhs, p2.rhs, p1.rhs)
    else:
        _fail("resp-eq: premise 2 must be a membership judgment")
    _conclude(expected, c)


def _rule_univ_f(d, ps, env):
    tel, lhs, rhs, ty = _value_view(d.conclusion, "univ-f")
    i = _payload_int(d, "level", "univ-f")
    _aeq(lhs, Univ(i), "univ-f: left subject")
    _aeq(rhs, Univ(i), "univ-f: right subject")
    _expect(_univ_level(ty, "univ-f") == i + 1,
            "univ-f: conclusion universe must be one level up")


def _rule_univ_e(d, ps, env):
    (p,) = ps
    tel, a, a2, ty = _member_view(p, "univ-e premise")
    _univ_level(ty, "univ-e premise")
    _conclude(TypeEqJ(tel, a, a2), d.conclusion)


def _rule_eq_f(d, ps, env):
    p1, p2, p3 = ps
    tel, a, a2, u = _member_view(p1, "eq-f premise 1")
    i = _univ_level(u, "eq-f premise 1")
    tel2, m, m2, ty2 = _member_view(p2, "eq-f premise 2")
    tel3, n, n2, ty3 = _member_view(p3, "eq-f premise 3")
    _same_tel(tel, tel2, "eq-f")
    _same_tel(tel, tel3, "eq-f")
    _aeq(ty2, a, "eq-f premise 2: type")
    _aeq(ty3, a, "eq-f premise 3: type")
    _conclude(ValueMemberEqJ(tel, Eq(a, m, n), Eq(a2, m2, n2), Univ(i)),
              d.conclusion)


def _rule_eq_i(d, ps, env):
    (p,) = ps
    tel, m, n, a = _member_view(p, "eq-i premise")
    _conclude(ValueMemberEqJ(tel, TRIV, TRIV, Eq(a, m, n)), d.conclusion)


def _rule_eq_e(d, ps, env):
    (p,) = ps
    tel, _, _, ty = _member_view(p, "eq-e premise")
    _expect(isinstance(ty, Eq), "eq-e: premise type must be an equality type")
    _conclude(MemberEqJ(tel, ty.lhs, ty.rhs, ty.ty), d.conclusion)


def _rule_nat_f(d, ps, env):
    tel, lhs, rhs, ty = _value_view(d.conclusion, "nat-f")
    _aeq(lhs, NAT, "nat-f: left subject")
    _aeq(rhs, NAT, "nat-f: right subject")
    _univ_level(ty, "nat-f")


def _rule_nat_i_zero(d, ps, env):
    c = d.conclusion
    _expect(isinstance(c, MemberEqJ), "nat-i-zero: conclusion form")
    _aeq(c.lhs, ZERO, "nat-i-zero: left subject")
    _aeq(c.rhs, ZERO, "nat-i-zero: right subject")
    _aeq(c.ty, NAT, "nat-i-zero: type")


def _rule_nat_i_suc(d, ps, env):
    (p,) = ps
    tel, m, m2, ty = _member_view(p, "nat-i-suc premise")
    _aeq(ty, NAT, "nat-i-suc premise: type")
    _conclude(MemberEqJ(tel, suc(m), suc(m2), NAT), d.conclusion)


def _rule_ffe1(d, ps, env):
    c = d.conclusion
    _expect(isinstance(c, MemberEqJ), "ffe1: conclusion form")
    if isinstance(c.lhs, Cff1):
        (p,) = ps
        tel, m, m2, ty = _member_view(p, "ffe1 premise")
        _aeq(ty, NAT, "ffe1 premise: type")
        f = c.lhs.fn
        env.reg.lookup_unary(f)
        _conclude(MemberEqJ(tel, Cff1(f, m), Cff1(f, m2), NAT), c)
    elif isinstance(c.lhs, Cff2):
        p1, p2 = ps
        tel, m, m2, ty1 = _member_view(p1, "ffe1 premise 1")
        tel2, n, n2, ty2 = _member_view(p2, "ffe1 premise 2")
        _same_tel(tel, tel2, "ffe1")
        _aeq(ty1, NAT, "ffe1 premise 1: type")
        _aeq(ty2, NAT, "ffe1 premise 2: type")
        f = c.lhs.fn
        env.reg.lookup_binary(f)
        _conclude(MemberEqJ(tel, Cff2(f, m, n), Cff2(f, m2, n2), NAT), c)
    else:
        _fail("ffe1: conclusion subject must be a foreign call")


def _rule_ffe2(d, ps, env):
    c = d.conclusion
    _expect(isinstance(c, CostMemberEqJ), "ffe2: conclusion form")
    if isinstance(c.lhs, Cff1):
        (p,) = ps
        tel, v, v2, ty = _value_view(p, "ffe2 premise")
        _aeq(ty, NAT, "ffe2 premise: type")
        f = c.lhs.fn
        env.reg.lookup_unary(f)
        _conclude(CostMemberEqJ(tel, Cff1(f, v), Cff1(f, v2), NAT, Num(1)), c)
    elif isinstance(c.lhs, Cff2):
        p1, p2 = ps
        tel, v, v2, ty1 = _value_view(p1, "ffe2 premise 1")
        tel2, u, u2, ty2 = _value_view(p2, "ffe2 premise 2")
        _same_tel(tel, tel2, "ffe2")
        _aeq(ty1, NAT, "ffe2 premise 1: type")
        _aeq(ty2, NAT, "ffe2 premise 2: type")
        f = c.lhs.fn
        env.reg.lookup_binary(f)
        _conclude(CostMemberEqJ(tel, Cff2(f, v, u), Cff2(f, v2, u2), NAT, Num(1)), c)
    else:
        _fail("ffe2: conclusion subject must be a foreign call")


def _family(p1: Judgment, what: str):
    """Premise `tel, a : nat |- A in univ i`: returns (tel, a, A)."""
    telA, a_fam, _, u = _member_view(p1, what)
    _univ_level(u, what)
    _expect(len(telA) >= 1, f"{what}: telescope must end with the family variable")
    avar, avty = telA.entries[-1]
    _aeq(avty, NAT, f"{what}: family variable must have type nat")
    return Telescope(telA.entries[:-1]), avar, a_fam


def _rule_nat_e1(d, ps, env):
    p1, p2, p3, p4 = ps
    tel, avar, fam = _family(p1, "nat-e1 premise 1")
    tel2, m, m2, ty2 = _member_view(p2, "nat-e1 premise 2")
    _same_tel(tel, tel2, "nat-e1")
    _aeq(ty2, NAT, "nat-e1 premise 2: type")

    tel3, m0, m02, ty3 = _member_view(p3, "nat-e1 premise 3")
    _expect(len(tel3) == len(tel) + 1, "nat-e1 premise 3: telescope shape")
    pv, pty = tel3.entries[-1]
    _expect(_is_prefix(tel, tel3), "nat-e1 premise 3: telescope prefix")
    _aeq(pty, Eq(NAT, ZERO, m), "nat-e1 premise 3: hypothesis type")
    _aeq(ty3, subst(fam, {avar: ZERO}), "nat-e1 premise 3: type")

    tel4, m1, m12, ty4 = _member_view(p4, "nat-e1 premise 4")
    _expect(len(tel4) == len(tel) + 2 and _is_prefix(tel, tel4),
            "nat-e1 premise 4: telescope shape")
    nvar, nty = tel4.entries[-2]
    qv, qty = tel4.entries[-1]
    _aeq(nty, NAT, "nat-e1 premise 4: predecessor type")
    _aeq(qty, Eq(NAT, suc(Var(nvar)), m), "nat-e1 premise 4: hypothesis type")
    _aeq(ty4, subst(fam, {avar: suc(Var(nvar))}), "nat-e1 premise 4: type")

    expected = MemberEqJ(
        tel, Ifz(m, m0, nvar, m1), Ifz(m2, m02, nvar, m12), Let(m, avar, fam))
    _conclude(expected, d.conclusion)


def _rule_nat_e2(d, ps, env):
    p1, p2, p3, p4, p5, p6 = ps
    tel, avar, fam = _family(p1, "nat-e2 premise 1")
    tel2, v, v2, ty2 = _value_view(p2, "nat-e2 premise 2")
    _same_tel(tel, tel2, "nat-e2")
    _aeq(ty2, NAT, "nat-e2 premise 2: type")

    tel3, p0, p0b, ty3 = _member_view(p3, "nat-e2 premise 3")
    _same_tel(tel, tel3, "nat-e2")
    _aeq(ty3, NAT, "nat-e2 premise 3: type")
    _aeq(p0b, p0, "nat-e2 premise 3: must be reflexive")

    tel4, pc1, pc1b, ty4 = _member_view(p4, "nat-e2 premise 4")
    _expect(len(tel4) == len(tel) + 1 and _is_prefix(tel, tel4),
            "nat-e2 premise 4: telescope shape")
    cvar, cty = tel4.entries[-1]
    _aeq(cty, NAT, "nat-e2 premise 4: cost family variable type")
    _aeq(ty4, NAT, "nat-e2 premise 4: type")

    tel5, m0, m02, ty5, c5 = _cost_view(p5, "nat-e2 premise 5")
    _expect(len(tel5) == len(tel) + 1 and _is_prefix(tel, tel5),
            "nat-e2 premise 5: telescope shape")
    _, p5ty = tel5.entries[-1]
    _aeq(p5ty, Eq(NAT, ZERO, v), "nat-e2 premise 5: hypothesis type")
    _aeq(ty5, subst(fam, {avar: ZERO}), "nat-e2 premise 5: type")
    _aeq(c5, p0, "nat-e2 premise 5: cost must be the zero-branch bound")

    tel6, m1, m12, ty6, c6 = _cost_view(p6, "nat-e2 premise 6")
    _expect(len(tel6) == len(tel) + 2 and _is_prefix(tel, tel6),
            "nat-e2 premise 6: telescope shape")
    nvar, nty = tel6.entries[-2]
    _, qty = tel6.entries[-1]
    _aeq(nty, NAT, "nat-e2 premise 6: predecessor type")
    _aeq(qty, Eq(NAT, suc(Var(nvar)), v), "nat-e2 premise 6: hypothesis type")
    _aeq(ty6, subst(fam, {avar: suc(Var(nvar))}), "nat-e2 premise 6: type")
    p1n = subst(pc1, {cvar: Var(nvar)})
    _aeq(c6, p1n, "nat-e2 premise 6: cost must be the successor-branch bound")

    expected = CostMemberEqJ(
        tel, Ifz(v, m0, nvar, m1), Ifz(v2, m02, nvar, m12),
        subst(fam, {avar: v}),
        Ifz(v, suc(p0), nvar, suc(p1n)))
    _conclude(expected, d.conclusion)


def _binder_premise(tel: Telescope, p: Judgment, dom: Expr, what: str):
    """Premise `tel, x : dom |- B = B' in univ i`: returns (x, B, B', i)."""
    tel2, b, b2, u = _member_view(p, what)
    i = _univ_level(u, what)
    _expect(len(tel2) == len(tel) + 1 and _is_prefix(tel, tel2),
            f"{what}: telescope must extend by the binder")
    x, xty = tel2.entries[-1]
    _aeq(xty, dom, f"{what}: binder type")
    return x, b, b2, i


def _rule_subset_f(d, ps, env):
    p1, p2 = ps
    tel, a, a2, u = _member_view(p1, "subset-f premise 1")
    i = _univ_level(u, "subset-f premise 1")
    x, b, b2, i2 = _binder_premise(tel, p2, a, "subset-f premise 2")
    _expect(i == i2, "subset-f: universe levels differ")
    _conclude(ValueMemberEqJ(tel, Subset(x, a, b), Subset(x, a2, b2), Univ(i)),
              d.conclusion)


def _rule_sigma_f(d, ps, env):
    p1, p2 = ps
    tel, a, a2, u = _member_view(p1, "sigma-f premise 1")
    i = _univ_level(u, "sigma-f premise 1")
    x, b, b2, i2 = _binder_premise(tel, p2, a, "sigma-f premise 2")
    _expect(i == i2, "sigma-f: universe levels differ")
    _conclude(ValueMemberEqJ(tel, Sigma(x, a, b), Sigma(x, a2, b2), Univ(i)),
              d.conclusion)


def _rule_funtime_f(d, ps, env):
    p1, p2, p3 = ps
    tel, a, a2, u = _member_view(p1, "funtime-f premise 1")
    i = _univ_level(u, "funtime-f premise 1")
    x, b, b2, i2 = _binder_premise(tel, p2, a, "funtime-f premise 2")
    _expect(i == i2, "funtime-f: universe levels differ")
    tel3, p, p2_, ty3 = _member_view(p3, "funtime-f premise 3")
    _expect(len(tel3) == len(tel) + 1 and _is_prefix(tel, tel3),
            "funtime-f premise 3: telescope must extend by the binder")
    x3, x3ty = tel3.entries[-1]
    _aeq(x3ty, a, "funtime-f premise 3: binder type")
    _aeq(ty3, NAT, "funtime-f premise 3: type")
    px = subst(p, {x3: Var(x)})
    px2 = subst(p2_, {x3: Var(x)})
    _conclude(ValueMemberEqJ(tel, Funtime(x, a, b, px), Funtime(x, a2, b2, px2),
                             Univ(i)), d.conclusion)


def _rule_subset_i(d, ps, env):
    p1, p2, p3, p4 = ps
    tel, a, _, u = _member_view(p1, "subset-i premise 1")
    _univ_level(u, "subset-i premise 1")
    x, b, _, _ = _binder_premise(tel, p2, a, "subset-i premise 2")
    tel3, m, m2, ty3, cost = _cost_view(p3, "subset-i premise 3")
    _same_tel(tel, tel3, "subset-i")
    _aeq(ty3, a, "subset-i premise 3: type")
    tel4, n, n2, ty4 = _member_view(p4, "subset-i premise 4")
    _same_tel(tel, tel4, "subset-i")
    _aeq(ty4, Let(m, x, b), "subset-i premise 4: witness type")
    _conclude(CostMemberEqJ(tel, m, m2, Subset(x, a, b), cost), d.conclusion)


def _rule_subset_e(d, ps, env):
    (p,) = ps
    part = _payload_int(d, "part", "subset-e")
    if part == 1:
        # Forgetting the refinement is functional in instances, so this part
        # is allowed in ambient contexts and at any membership form.
        if isinstance(p, CostMemberEqJ):
            tel, m, m2, ty, cost = _cost_view(p, "subset-e premise")
            _expect(isinstance(ty, Subset), "subset-e: premise type must be a subset")
            _conclude(CostMemberEqJ(tel, m, m2, ty.dom, cost), d.conclusion)
        else:
            tel, m, m2, ty = _member_view(p, "subset-e premise")
            _expect(isinstance(ty, Subset), "subset-e: premise type must be a subset")
            _conclude(type(p)(tel, m, m2, ty.dom), d.conclusion)
    elif part == 2:
        tel, v, v2, ty = _value_view(p, "subset-e premise")
        _expect(len(tel) == 0, "subset-e part 2 only applies in the empty context")
        _expect(isinstance(ty, Subset), "subset-e: premise type must be a subset")
        inst = subst(ty.body, {ty.var: v})
        try:
            den = type_denote(inst, env.reg, env.budget)
        except DenoteError as err:
            _fail(f"subset-e: refinement does not denote: {err}")
        _expect(isinstance(den, (EqDen, Rel2Den, Rel3Den)),
                "subset-e part 2 requires a proof-irrelevant refinement")
        _conclude(ValueMemberEqJ(tel, TRIV, TRIV, inst), d.conclusion)
    else:
        _fail("subset-e: payload part must be 1 or 2")


def _rule_rel_f(d, ps, env):
    c = d.conclusion
    tel, lhs, rhs, u = _value_view(c, "rel-f")
    i = _univ_level(u, "rel-f")
    if isinstance(lhs, Rel2):
        p1, p2 = ps
        env.reg.lookup_rel2(lhs.rel)
        _, m, m2, t1 = _member_view(p1, "rel-f premise 1")
        _, n, n2, t2 = _member_view(p2, "rel-f premise 2")
        for pp, t in ((p1, t1), (p2, t2)):
            _same_tel(tel, pp.tel, "rel-f")
            _aeq(t, NAT, "rel-f premise: type")
        _conclude(ValueMemberEqJ(tel, Rel2(lhs.rel, m, n), Rel2(lhs.rel, m2, n2),
                              Univ(i)), c)
    elif isinstance(lhs, Rel3):
        p1, p2, p3 = ps
        env.reg.lookup_rel3(lhs.rel)
        _, m, m2, t1 = _member_view(p1, "rel-f premise 1")
        _, n, n2, t2 = _member_view(p2, "rel-f premise 2")
        _, o, o2, t3 = _member_view(p3, "rel-f premise 3")
        for pp, t in ((p1, t1), (p2, t2), (p3, t3)):
            _same_tel(tel, pp.tel, "rel-f")
            _aeq(t, NAT, "rel-f premise: type")
        _conclude(ValueMemberEqJ(tel, Rel3(lhs.rel, m, n, o),
                              Rel3(lhs.rel, m2, n2, o2), Univ(i)), c)
    else:
        _fail("rel-f: conclusion subject must be a relation type")


def _rel_operands(env, ty: Expr, what: str) -> list[int]:
    if isinstance(ty, Rel2):
        ops = [ty.lhs, ty.rhs]
        pred = env.reg.lookup_rel2(ty.rel)
    elif isinstance(ty, Rel3):
        ops = [ty.a, ty.b, ty.c]
        pred = env.reg.lookup_rel3(ty.rel)
    else:
        _fail(f"{what}: expected a relation type, found {print_expr(ty)}")
    vals = [_eval_numeral(o, env, what) for o in ops]
    _expect(pred(*vals), f"{what}: relation {ty.rel}{tuple(vals)} does not hold")
    return vals


def _rule_rel_i(d, ps, env):
    c = d.conclusion
    tel, lhs, rhs, ty = _value_view(c, "rel-i")
    _expect(len(tel) == 0, "rel-i only applies in the empty context")
    _aeq(lhs, TRIV, "rel-i: left subject")
    _aeq(rhs, TRIV, "rel-i: right subject")
    vals = _rel_operands(env, ty, "rel-i")
    claimed = d.payload.get("operands")
    if claimed is not None:
        _expect(list(claimed) == vals,
                f"rel-i: claimed operands {claimed} but evaluation gives {vals}")


def _rule_rel_e(d, ps, env):
    (p,) = ps
    part = _payload_int(d, "part", "rel-e")
    tel, _, _, ty = _member_view(p, "rel-e premise")
    _expect(len(tel) == 0, "rel-e only applies in the empty context")
    vals = _rel_operands(env, ty, "rel-e")
    ops = [ty.lhs, ty.rhs] if isinstance(ty, Rel2) else [ty.a, ty.b, ty.c]
    _expect(1 <= part <= len(ops), "rel-e: part out of range")
    _conclude(MemberEqJ(tel, ops[part - 1], Num(vals[part - 1]), NAT),
              d.conclusion)


def _rule_sigma_i(d, ps, env):
    p1, p2, p3, p4 = ps
    tel, a, _, u = _member_view(p1, "sigma-i premise 1")
    _univ_level(u, "sigma-i premise 1")
    x, b, _, _ = _binder_premise(tel, p2, a, "sigma-i premise 2")
    tel3, v, v2, ty3 = _value_view(p3, "sigma-i premise 3")
    _same_tel(tel, tel3, "sigma-i")
    _aeq(ty3, a, "sigma-i premise 3: type")
    tel4, w, w2, ty4 = _value_view(p4, "sigma-i premise 4")
    _same_tel(tel, tel4, "sigma-i")
    _aeq(ty4, subst(b, {x: v}), "sigma-i premise 4: type")
    _conclude(ValueMemberEqJ(tel, Pair(v, w), Pair(v2, w2), Sigma(x, a, b)),
              d.conclusion)


def _rule_sigma_e(d, ps, env):
    (p,) = ps
    part = _payload_int(d, "part", "sigma-e")
    tel, v, v2, ty = _value_view(p, "sigma-e premise")
    _expect(isinstance(ty, Sigma), "sigma-e: premise type must be a sigma")
    if part == 1:
        expected = CostMemberEqJ(tel, Fst(v), Fst(v2), ty.fst, Num(1))
    elif part == 2:
        expected = CostMemberEqJ(tel, Snd(v), Snd(v2),
                                 Let(Fst(v), ty.var, ty.snd), Num(1))
    else:
        _fail("sigma-e: payload part must be 1 or 2")
    _conclude(expected, d.conclusion)


def restricted_self_type(avar: str, a: Expr, b: Expr, p: Expr, hyp_var: str) -> Expr:
    """The recursion hypothesis type of funtime-i.

    Arguments are drawn from the subset of the domain whose cost bound is
    strictly below the bound at the current argument `hyp_var`.
    """
    a2 = fresh_name(avar, free_vars(p) | free_vars(a) | {avar, hyp_var})
    decrease = Rel2("<", subst(p, {avar: Var(a2)}), subst(p, {avar: Var(hyp_var)}))
    return Funtime(avar, Subset(a2, a, decrease), b, p)


def _rule_funtime_i(d, ps, env):
    p1, p2, p3, p4 = ps
    c = d.conclusion
    tel, f1, f2, ty = _value_view(c, "funtime-i")
    _expect(isinstance(ty, Funtime), "funtime-i: conclusion type must be a funtime")
    _expect(isinstance(f1, Fun) and isinstance(f2, Fun),
            "funtime-i: subjects must be function values")
    avar, a, b, p = ty.var, ty.dom, ty.cod, ty.cost

    tel1, a_, a2_, u = _member_view(p1, "funtime-i premise 1")
    _univ_level(u, "funtime-i premise 1")
    _same_tel(tel, tel1, "funtime-i")
    _aeq(a_, a, "funtime-i premise 1: domain")

    x2, b2, _, _ = _binder_premise(tel, p2, a, "funtime-i premise 2")
    _aeq(b2, subst(b, {avar: Var(x2)}), "funtime-i premise 2: codomain family")

    tel3, p3l, _, ty3 = _member_view(p3, "funtime-i premise 3")
    _expect(len(tel3) == len(tel) + 1 and _is_prefix(tel, tel3),
            "funtime-i premise 3: telescope must extend by the binder")
    x3, x3ty = tel3.entries[-1]
    _aeq(x3ty, a, "funtime-i premise 3: binder type")
    _aeq(ty3, NAT, "funtime-i premise 3: type")
    _aeq(p3l, subst(p, {avar: Var(x3)}), "funtime-i premise 3: cost family")

    tel4, n1, n2, ty4, c4 = _cost_view(p4, "funtime-i premise 4")
    _expect(len(tel4) == len(tel) + 2 and _is_prefix(tel, tel4),
            "funtime-i premise 4: telescope shape")
    a4, a4ty = tel4.entries[-2]
    fv, fvty = tel4.entries[-1]
    _aeq(a4ty, a, "funtime-i premise 4: argument hypothesis type")
    _aeq(fvty, restricted_self_type(avar, a, b, p, a4),
         "funtime-i premise 4: recursion hypothesis type")
    _aeq(ty4, subst(b, {avar: Var(a4)}), "funtime-i premise 4: type")
    _aeq(c4, subst(p, {avar: Var(a4)}), "funtime-i premise 4: cost")
    _aeq(n1, subst(f1.body, {f1.fname: Var(fv), f1.aname: Var(a4)}),
         "funtime-i premise 4: left body")
    _aeq(n2, subst(f2.body, {f2.fname: Var(fv), f2.aname: Var(a4)}),
         "funtime-i premise 4: right body")


def _funtime_i_hyp(d: Derivation) -> Optional[tuple[str, Expr]]:
    """Recursion-hypothesis binding a funtime-i node provides to premise 4."""
    if len(d.premises) != 4:
        return None
    p4 = d.premises[3].conclusion
    c = d.conclusion
    if not isinstance(p4, CostMemberEqJ) or len(p4.tel) < 1:
        return None
    fv = p4.tel.entries[-1][0]
    if not isinstance(c, (ValueMemberEqJ, MemberEqJ)):
        return None
    fun = c.lhs
    if isinstance(fun, Fun) and not free_vars(fun):
        return fv, fun
    return None


def _rule_funtime_e(d, ps, env):
    p1, p2 = ps
    tel, f1, f2, ty = _value_view(p1, "funtime-e premise 1")
    _expect(isinstance(ty, Funtime), "funtime-e: premise 1 type must be a funtime")
    tel2, v, v2, ty2 = _value_view(p2, "funtime-e premise 2")
    _same_tel(tel, tel2, "funtime-e")
    _aeq(ty2, ty.dom, "funtime-e premise 2: type")
    expected = CostMemberEqJ(
        tel, Ap(f1, v), Ap(f2, v2),
        subst(ty.cod, {ty.var: v}), suc(subst(ty.cost, {ty.var: v})))
    _conclude(expected, d.conclusion)


def _rule_cost_weaken(d, ps, env):
    p1, p2 = ps
    tel, m, m2, a, p = _cost_view(p1, "cost-weaken premise 1")
    tel2, _, _, rel = _member_view(p2, "cost-weaken premise 2")
    _same_tel(tel, tel2, "cost-weaken")
    _expect(isinstance(rel, Rel2) and rel.rel == "<=",
            "cost-weaken: premise 2 must be a <= relation")
    _aeq(rel.lhs, p, "cost-weaken: relation must bound the old cost")
    _conclude(CostMemberEqJ(tel, m, m2, a, rel.rhs), d.conclusion)


def _word_numeral(env) -> Num:
    return Num(env.budget.word_size)


def _rule_arith_e(d, ps, env):
    c = d.conclusion
    _expect(isinstance(c, CostMemberEqJ), "arith-e: conclusion form")
    if isinstance(c.lhs, Op):
        p1, p2 = ps
        tel, v, v2, ty1 = _value_view(p1, "arith-e premise 1")
        _aeq(ty1, NAT, "arith-e premise 1: type")
        _, _, _, rel = _member_view(p2, "arith-e premise 2")
        _same_tel(tel, p2.tel, "arith-e")
        _expect(isinstance(rel, Rel2) and rel.rel == "<",
                "arith-e premise 2: must be a < relation")
        _aeq(rel.lhs, v, "arith-e premise 2: guards the operand")
        _aeq(rel.rhs, _word_numeral(env), "arith-e premise 2: word bound")
        f = c.lhs.fn
        env.reg.lookup_unary(f)
        _conclude(CostMemberEqJ(tel, Op(f, v), Op(f, v2), NAT, Num(1)), c)
    elif isinstance(c.lhs, Arith):
        p1, p2, p3, p4 = ps
        tel, v, v2, ty1 = _value_view(p1, "arith-e premise 1")
        tel2, u, u2, ty2 = _value_view(p2, "arith-e premise 2")
        _same_tel(tel, tel2, "arith-e")
        _aeq(ty1, NAT, "arith-e premise 1: type")
        _aeq(ty2, NAT, "arith-e premise 2: type")
        for pp, operand, label in ((p3, v, "3"), (p4, u, "4")):
            _, _, _, rel = _member_view(pp, f"arith-e premise {label}")
            _same_tel(tel, pp.tel, "arith-e")
            _expect(isinstance(rel, Rel2) and rel.rel == "<",
                    f"arith-e premise {label}: must be a < relation")
            _aeq(rel.lhs, operand, f"arith-e premise {label}: guards the operand")
            _aeq(rel.rhs, _word_numeral(env), f"arith-e premise {label}: word bound")
        f = c.lhs.fn
        env.reg.lookup_binary(f)
        _conclude(CostMemberEqJ(tel, Arith(f, v, u), Arith(f, v2, u2), NAT,
                                Num(1)), c)
    else:
        _fail("arith-e: conclusion subject must be a machine primitive")


def _rule_bin_seq(d, ps, env):
    _expect(env.budget.mode == "par",
            "bin-seq: binary sequencing requires parallel mode")
    p1, p2, p3 = ps
    tel, m1, m1b, a1, q1 = _cost_view(p1, "bin-seq premise 1")
    tel2, m2, m2b, a2, q2 = _cost_view(p2, "bin-seq premise 2")
    _same_tel(tel, tel2, "bin-seq")
    tel3, n, nb, b, q = _cost_view(p3, "bin-seq premise 3")
    _expect(len(tel3) == len(tel) + 2 and _is_prefix(tel, tel3),
            "bin-seq premise 3: telescope shape")
    x1, x1ty = tel3.entries[-2]
    x2, x2ty = tel3.entries[-1]
    _aeq(x1ty, a1, "bin-seq premise 3: first binder type")
    _aeq(x2ty, a2, "bin-seq premise 3: second binder type")
    cost = Cff2("+", Cff2("+", Cff2("max", q1, q2), Num(5)),
                Let(m1, x1, Let(m2, x2, q)))
    expected = CostMemberEqJ(
        tel, parin(m1, m2, x1, x2, n), parin(m1b, m2b, x1, x2, nb),
        Let(m1, x1, Let(m2, x2, b)), cost)
    _conclude(expected, d.conclusion)


def _rule_instances(d, ps, env):
    budget = env.budget
    samples = d.payload.get("samples")
    if samples is not None:
        _expect(isinstance(samples, int) and samples > 0,
                "instances: payload samples must be positive")
        budget = replace(budget, samples=samples)
    ver = check_open(d.conclusion, env.reg, budget, fixed=env.fun_hyps)
    if not ver.ok:
        _fail(f"instances: {ver}")


_HANDLERS = {
    "hyp": (_rule_hyp, 0),
    "weaken": (_rule_weaken, 1),
    "conversion": (_rule_conversion, 1),
    "seq": (_rule_seq, 2),
    "open-head-exp": (_rule_open_head_exp, 1),
    "head-exp": (_rule_head_exp, 1),
    "cost-step-pad": (_rule_cost_step_pad, 1),
    "cost-replace": (_rule_cost_replace, 2),
    "resp-eq": (_rule_resp_eq, 2),
    "univ-f": (_rule_univ_f, 0),
    "univ-e": (_rule_univ_e, 1),
    "eq-f": (_rule_eq_f, 3),
    "eq-i": (_rule_eq_i, 1),
    "eq-e": (_rule_eq_e, 1),
    "nat-f": (_rule_nat_f, 0),
    "nat-i-zero": (_rule_nat_i_zero, 0),
    "nat-i-suc": (_rule_nat_i_suc, 1),
    "ffe1": (_rule_ffe1, None),
    "ffe2": (_rule_ffe2, None),
    "nat-e1": (_rule_nat_e1, 4),
    "nat-e2": (_rule_nat_e2, 6),
    "subset-f": (_rule_subset_f, 2),
    "subset-i": (_rule_subset_i, 4),
    "subset-e": (_rule_subset_e, 1),
    "rel-f": (_rule_rel_f, None),
    "rel-i": (_rule_rel_i, 0),
    "rel-e": (_rule_rel_e, 1),
    "sigma-f": (_rule_sigma_f, 2),
    "sigma-i": (_rule_sigma_i, 4),
    "sigma-e": (_rule_sigma_e, 1),
    "funtime-f": (_rule_funtime_f, 3),
    "funtime-i": (_rule_funtime_i, 4),
    "funtime-e": (_rule_funtime_e, 2),
    "cost-weaken": (_rule_cost_weaken, 2),
    "arith-e": (_rule_arith_e, None),
    "bin-seq": (_rule_bin_seq, 3),
    "instances": (_rule_instances, 0),
}


def _check(d: Derivation, env: _Env, path: tuple[int, ...],
           report: list[NodeReport]) -> None:
    if d.rule not in RULES:
        raise _NodeFailure(path, d.rule, f"unknown rule tag {d.rule!r}")
    handler, arity = _HANDLERS[d.rule]
    if arity is not None and len(d.premises) != arity:
        raise _NodeFailure(path, d.rule,
                           f"expected {arity} premises, found {len(d.premises)}")

    hyp = _funtime_i_hyp(d) if d.rule == "funtime-i" else None
    for i, prem in enumerate(d.premises):
        sub_env = env
        if hyp is not None and i == 3:
            sub_env = _Env(env.reg, env.budget, {**env.fun_hyps, hyp[0]: hyp[1]})
        _check(prem, sub_env, path + (i,), report)

    started = time.perf_counter()
    try:
        handler(d, tuple(p.conclusion for p in d.premises), env)
    except RuleError as err:
        raise _NodeFailure(path, d.rule, str(err)) from None
    except (ValueError, SubstitutionError, RegistryError) as err:
        raise _NodeFailure(path, d.rule, str(err)) from None
    report.append(NodeReport(".".join(map(str, path)) or "root", d.rule,
                             time.perf_counter() - started))


def check_derivation(d: Derivation, reg: FFIRegistry,
                     budget: TestBudget) -> Verdict:
    """Validate every node of a derivation against its rule."""
    report: list[NodeReport] = []
    try:
        _check(d, _Env(reg, budget, {}), (), report)
    except _NodeFailure as err:
        return Verdict.fails(err.located(), tested=len(report))
    return Verdict.holds(tested=len(report))


def soundness_probe(d: Derivation, reg: FFIRegistry,
                    budget: TestBudget) -> Verdict:
    """Semantic reading of the conclusion, checked on sampled instances.

    Presupposes the derivation itself checks; this only probes the claim.
    """
    return check_open(d.conclusion, reg, budget)


# ---------------------------------------------------------------------------
# Document format
# ---------------------------------------------------------------------------

SCHEMA = "catbench-derivation/1"


def derivation_to_json(d: Derivation) -> dict:
    doc: dict = {
        "rule": d.rule,
        "conclusion": judgment_to_json(d.conclusion),
    }
    if d.payload:
        doc["payload"] = dict(d.payload)
    if d.premises:
        doc["premises"] = [derivation_to_json(p) for p in d.premises]
    return doc


def derivation_from_json(doc, path: str = "root") -> Derivation:
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: derivation node must be an object")
    rule = doc.get("rule")
    if not isinstance(rule, str):
        raise SchemaError(f"{path}: missing rule tag")
    if rule not in RULES:
        raise SchemaError(f"{path}: unknown rule tag {rule!r}")
    if "conclusion" not in doc:
        raise SchemaError(f"{path}: missing conclusion")
    try:
        conclusion = judgment_from_json(doc["conclusion"])
    except Exception as err:
        raise SchemaError(f"{path}: bad conclusion: {err}") from None
    payload = doc.get("payload", {})
    if not isinstance(payload, dict):
        raise SchemaError(f"{path}: payload must be an object")
    raw_premises = doc.get("premises", [])
    if not isinstance(raw_premises, list):
        raise SchemaError(f"{path}: premises must be a list")
    premises = tuple(
        derivation_from_json(p, f"{path}.{i}") for i, p in enumerate(raw_premises))
    return Derivation(rule, conclusion, premises, payload)


def script_to_json(d: Derivation, *, mode: str = "seq",
                   word_size: int = 2**31, samples: Optional[int] = None) -> dict:
    config: dict = {"mode": mode, "word_size": word_size}
    if samples is not None:
        config["samples"] = samples
    return {"schema": SCHEMA, "config": config,
            "derivation": derivation_to_json(d)}


def load_script(path) -> tuple[Derivation, dict]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as err:
        raise SchemaError(f"cannot load {path}: {err}") from None
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise SchemaError(f"{path}: expected schema {SCHEMA!r}")
    config = doc.get("config", {})
    if not isinstance(config, dict):
        raise SchemaError(f"{path}: config must be an object")
    return derivation_from_json(doc.get("derivation"), "root"), config


def budget_with_config(budget: TestBudget, config: Mapping) -> TestBudget:
    kwargs = {}
    for key in ("mode", "word_size", "samples", "seed", "fuel", "max_level"):
        if key in config:
            kwargs[key] = config[key]
    return replace(budget, **kwargs) if kwargs else budget


def check_script(path, reg: FFIRegistry, budget: TestBudget,
                 overrides: Optional[Mapping] = None) -> ScriptReport:
    """Load and check a derivation document, with per-node stats.

    The document's config is applied over the given budget; `overrides`
    (e.g. an explicit sample count from the command line) win over both.
    """
    started = time.perf_counter()
    derivation, config = load_script(path)
    budget = budget_with_config(budget, config)
    if overrides:
        budget = budget_with_config(budget, overrides)
    report: list[NodeReport] = []
    try:
        _check(derivation, _Env(reg, budget, {}), (), report)
        verdict = Verdict.holds(tested=len(report))
    except _NodeFailure as err:
        verdict = Verdict.fails(err.located(), tested=len(report))
    counts: dict[str, int] = {}
    for row in report:
        counts[row.rule] = counts.get(row.rule, 0) + 1
    return ScriptReport(verdict, tuple(report), counts,
                        time.perf_counter() - started)
