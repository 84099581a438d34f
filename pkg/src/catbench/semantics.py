"""Bounded semantic oracle: type denotations, membership, and open judgments.

Closed types evaluate to a value and are matched against one structural
clause per constructor; the infinitary construction is replaced by structural
recursion with a universe-level ceiling and evaluation fuel.  Membership of
function types is refuted soundly and confirmed only up to sampling, so
positive verdicts there are sample-qualified.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from random import Random
from typing import Mapping, Optional, Sequence

from .evaluation import (
    EvalResult, FuelError, StuckError, eval_par, eval_seq,
)
from .judgments import (
    CostMemberEqJ, Judgment, MemberEqJ, TypeEqJ, ValueMemberEqJ,
)
from .registry import EvalConfig, FFIRegistry, RegistryError
from .syntax import (
    Ap, Eq, Expr, Fun, Funtime, Nat, Num, Pair, Pi, Rel2, Rel3, Sigma,
    Subset, Suc, Telescope, Triv, TRIV, Univ, Var, as_numeral,
    free_vars, is_value, print_expr, subst,
)


class DenoteError(Exception):
    pass


class PresuppositionError(Exception):
    """The cost expression of a cost judgment is not a natural number."""


class MeasureError(Exception):
    pass


class UnsamplableError(Exception):
    def __init__(self, binder: str, why: str):
        super().__init__(f"cannot sample binder {binder!r}: {why}")
        self.binder = binder


class EmptyTelescopeError(Exception):
    """No instance found before the sampling budget ran out."""


# ---------------------------------------------------------------------------
# Verdicts and budgets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    status: str  # "holds" | "fails" | "unknown"
    witness: Optional[str] = None
    reason: Optional[str] = None
    tested: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "holds"

    @property
    def failed(self) -> bool:
        return self.status == "fails"

    @staticmethod
    def holds(tested: int = 0) -> "Verdict":
        return Verdict("holds", tested=tested)

    @staticmethod
    def fails(witness: str, tested: int = 0) -> "Verdict":
        return Verdict("fails", witness=witness, tested=tested)

    @staticmethod
    def unknown(reason: str) -> "Verdict":
        return Verdict("unknown", reason=reason)

    def __str__(self) -> str:
        if self.ok:
            extra = f" ({self.tested} instances)" if self.tested else ""
            return f"holds{extra}"
        if self.status == "fails":
            return f"fails: {self.witness}"
        return f"unknown: {self.reason}"


def _combine(*vs: Verdict) -> Verdict:
    tested = max((v.tested for v in vs), default=0)
    for v in vs:
        if v.failed:
            return replace(v, tested=tested)
    for v in vs:
        if v.status == "unknown":
            return v
    return Verdict.holds(tested)


@dataclass(frozen=True)
class TestBudget:
    """Fuel, sampling counts, universe ceiling, and rng seed for the oracle."""

    __test__ = False  # not a pytest class, despite the name

    fuel: int = 10**7
    samples: int = 12
    max_level: int = 8
    seed: int = 0xC0571
    word_size: int = 2**31
    mode: str = "seq"
    nat_cap: int = 12  # size cap for size-biased numeral draws
    probe: int = 8  # exhaustive probe width for inhabitation search

    def eval_config(self) -> EvalConfig:
        return EvalConfig(word_size=self.word_size, mode=self.mode, fuel=self.fuel)

    def rng(self) -> Random:
        return Random(self.seed)


def _eval(e: Expr, reg: FFIRegistry, budget: TestBudget) -> EvalResult:
    cfg = budget.eval_config()
    return eval_par(e, reg, cfg) if budget.mode == "par" else eval_seq(e, reg, cfg)


# ---------------------------------------------------------------------------
# Type denotations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TypeDen:
    pass


@dataclass(frozen=True)
class NatDen(TypeDen):
    pass


@dataclass(frozen=True)
class EqDen(TypeDen):
    inner: TypeDen
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Rel2Den(TypeDen):
    rel: str
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Rel3Den(TypeDen):
    rel: str
    a: Expr
    b: Expr
    c: Expr


@dataclass(frozen=True)
class SubsetDen(TypeDen):
    dom: TypeDen
    var: str
    body: Expr  # open type, re-denoted per instance


@dataclass(frozen=True)
class SigmaDen(TypeDen):
    fst: TypeDen
    var: str
    snd: Expr


@dataclass(frozen=True)
class FuntimeDen(TypeDen):
    dom: TypeDen
    var: str
    cod: Expr
    cost: Expr


@dataclass(frozen=True)
class PiDen(TypeDen):
    dom: TypeDen
    var: str
    cod: Expr


@dataclass(frozen=True)
class UnivDen(TypeDen):
    level: int


def type_denote(a: Expr, reg: FFIRegistry, budget: TestBudget,
                max_level: Optional[int] = None) -> TypeDen:
    """Evaluate a closed type to a value and match a structural clause."""
    ceiling = budget.max_level if max_level is None else max_level
    try:
        v = _eval(a, reg, budget).value
    except StuckError as err:
        raise DenoteError(f"type expression stuck: {err}") from None
    except FuelError:
        raise DenoteError("fuel exhausted while evaluating a type") from None
    match v:
        case Nat():
            return NatDen()
        case Eq(ty, lhs, rhs):
            return EqDen(type_denote(ty, reg, budget, ceiling), lhs, rhs)
        case Rel2(r, lhs, rhs):
            try:
                reg.lookup_rel2(r)
            except RegistryError as err:
                raise DenoteError(str(err)) from None
            return Rel2Den(r, lhs, rhs)
        case Rel3(r, x, y, z):
            try:
                reg.lookup_rel3(r)
            except RegistryError as err:
                raise DenoteError(str(err)) from None
            return Rel3Den(r, x, y, z)
        case Subset(var, dom, body):
            return SubsetDen(type_denote(dom, reg, budget, ceiling), var, body)
        case Sigma(var, fst, snd):
            return SigmaDen(type_denote(fst, reg, budget, ceiling), var, snd)
        case Funtime(var, dom, cod, cost):
            return FuntimeDen(type_denote(dom, reg, budget, ceiling), var, cod, cost)
        case Pi(var, dom, cod):
            return PiDen(type_denote(dom, reg, budget, ceiling), var, cod)
        case Univ(i):
            if i >= ceiling:
                raise DenoteError(f"universe level {i} reaches the ceiling {ceiling}")
            return UnivDen(i)
        case _:
            raise DenoteError(f"not a type value: {print_expr(v)}")


def _denote_at(body: Expr, var: str, value: Expr, reg: FFIRegistry,
               budget: TestBudget, max_level: Optional[int] = None) -> TypeDen:
    return type_denote(subst(body, {var: value}), reg, budget, max_level)


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------


def member_eq(m: Expr, m2: Expr, den: TypeDen, reg: FFIRegistry,
              budget: TestBudget) -> Verdict:
    """Do both terms evaluate to related values in the denotation?"""
    try:
        v = _eval(m, reg, budget).value
        v2 = _eval(m2, reg, budget).value
    except StuckError as err:
        return Verdict.fails(f"evaluation stuck: {err}")
    except FuelError:
        return Verdict.unknown("fuel exhausted")
    return _value_eq(v, v2, den, reg, budget)


def member_cost(m: Expr, m2: Expr, den: TypeDen, p: Expr, reg: FFIRegistry,
                budget: TestBudget) -> Verdict:
    """Membership plus the cost comparison max(c, c') <= value of P."""
    pv = member_eq(p, p, NatDen(), reg, budget)
    if not pv.ok:
        raise PresuppositionError(
            f"cost bound is not a natural number: {print_expr(p)} ({pv})")
    try:
        r1 = _eval(m, reg, budget)
        r2 = _eval(m2, reg, budget)
        bound = as_numeral(_eval(p, reg, budget).value)
    except StuckError as err:
        return Verdict.fails(f"evaluation stuck: {err}")
    except FuelError:
        return Verdict.unknown("fuel exhausted")
    assert bound is not None
    ver = _value_eq(r1.value, r2.value, den, reg, budget)
    if not ver.ok:
        return ver
    if max(r1.steps, r2.steps) > bound:
        return Verdict.fails(
            f"cost {max(r1.steps, r2.steps)} exceeds bound {bound} "
            f"for {print_expr(m)}", tested=ver.tested)
    return ver


def _value_eq(v: Expr, v2: Expr, den: TypeDen, reg: FFIRegistry,
              budget: TestBudget) -> Verdict:
    match den:
        case NatDen():
            k, k2 = as_numeral(v), as_numeral(v2)
            if k is None or k2 is None:
                return Verdict.fails(f"not a numeral: {print_expr(v if k is None else v2)}")
            if k != k2:
                return Verdict.fails(f"distinct numerals {k} and {k2}")
            return Verdict.holds()

        case EqDen(inner, lhs, rhs):
            if not (isinstance(v, Triv) and isinstance(v2, Triv)):
                return Verdict.fails("equality proofs must be triv")
            return member_eq(lhs, rhs, inner, reg, budget)

        case Rel2Den(r, lhs, rhs):
            if not (isinstance(v, Triv) and isinstance(v2, Triv)):
                return Verdict.fails("relation proofs must be triv")
            return _rel_holds(reg, budget, r, (lhs, rhs))

        case Rel3Den(r, x, y, z):
            if not (isinstance(v, Triv) and isinstance(v2, Triv)):
                return Verdict.fails("relation proofs must be triv")
            return _rel_holds(reg, budget, r, (x, y, z))

        case SubsetDen(dom, var, body):
            dv = _value_eq(v, v2, dom, reg, budget)
            if not dv.ok:
                return dv
            try:
                bden = _denote_at(body, var, v, reg, budget)
            except DenoteError as err:
                return Verdict.unknown(str(err))
            return _combine(dv, inhabited(bden, reg, budget))

        case SigmaDen(fden, var, sbody):
            if not (isinstance(v, Pair) and isinstance(v2, Pair)):
                return Verdict.fails("sigma members must be pairs")
            c1 = _value_eq(v.fst, v2.fst, fden, reg, budget)
            if not c1.ok:
                return c1
            try:
                sden = _denote_at(sbody, var, v.fst, reg, budget)
            except DenoteError as err:
                return Verdict.unknown(str(err))
            return _combine(c1, _value_eq(v.snd, v2.snd, sden, reg, budget))

        case FuntimeDen(dom, var, cod, cost):
            return _fun_eq(v, v2, dom, var, cod, cost, reg, budget)

        case PiDen(dom, var, cod):
            return _fun_eq(v, v2, dom, var, cod, None, reg, budget)

        case UnivDen(level):
            try:
                type_denote(v, reg, budget, level)
                type_denote(v2, reg, budget, level)
            except DenoteError as err:
                return Verdict.fails(f"not a type at level {level}: {err}")
            return _type_eq_values(v, v2, reg, budget, level)

        case _:
            return Verdict.unknown(f"no membership clause for {den}")


def _rel_holds(reg, budget, r, operands) -> Verdict:
    nums = []
    for e in operands:
        try:
            k = as_numeral(_eval(e, reg, budget).value)
        except StuckError as err:
            return Verdict.fails(f"relation operand stuck: {err}")
        except FuelError:
            return Verdict.unknown("fuel exhausted")
        if k is None:
            return Verdict.fails(f"relation operand is not a numeral: {print_expr(e)}")
        nums.append(k)
    pred = reg.lookup_rel2(r) if len(nums) == 2 else reg.lookup_rel3(r)
    if pred(*nums):
        return Verdict.holds()
    return Verdict.fails(f"{r}{tuple(nums)} does not hold")


def _fun_eq(v: Expr, v2: Expr, dom: TypeDen, var: str, cod: Expr,
            cost: Optional[Expr], reg: FFIRegistry, budget: TestBudget) -> Verdict:
    if not (isinstance(v, Fun) and isinstance(v2, Fun)):
        return Verdict.fails("function-type members must be fun values")
    args = den_sample(dom, budget.rng(), reg, budget)
    if args is None:
        return Verdict.unknown("function domain is not samplable")
    if not args:
        return Verdict.unknown("no domain samples found")
    tested = 0
    for w in args[: budget.samples]:
        try:
            r1 = _eval(Ap(v, w), reg, budget)
            r2 = _eval(Ap(v2, w), reg, budget)
        except StuckError as err:
            return Verdict.fails(f"application stuck at {print_expr(w)}: {err}", tested)
        except FuelError:
            return Verdict.unknown(f"fuel exhausted at {print_expr(w)}")
        try:
            cden = _denote_at(cod, var, w, reg, budget)
        except DenoteError as err:
            return Verdict.unknown(str(err))
        ver = _value_eq(r1.value, r2.value, cden, reg, budget)
        if not ver.ok:
            return replace(ver, witness=f"at argument {print_expr(w)}: {ver.witness}",
                           tested=tested) if ver.failed else ver
        if cost is not None:
            try:
                bound = as_numeral(_eval(subst(cost, {var: w}), reg, budget).value)
            except (StuckError, FuelError) as err:
                return Verdict.unknown(f"cost bound did not evaluate: {err}")
            if bound is None:
                return Verdict.fails(f"cost bound not a numeral at {print_expr(w)}")
            # One application step on top of the body's own cost.
            if max(r1.steps, r2.steps) > 1 + bound:
                return Verdict.fails(
                    f"cost {max(r1.steps, r2.steps)} exceeds {1 + bound} "
                    f"at argument {print_expr(w)}", tested)
        tested += 1
    return Verdict.holds(tested)


# ---------------------------------------------------------------------------
# Inhabitation search (decidable fragment)
# ---------------------------------------------------------------------------


def _complete_inhabitants(den: TypeDen, reg, budget) -> tuple[list[Expr], bool]:
    """Candidate inhabitants and whether the candidate set is exhaustive."""
    match den:
        case EqDen(inner, lhs, rhs):
            ver = member_eq(lhs, rhs, inner, reg, budget)
            if ver.ok:
                return [TRIV], True
            if ver.failed:
                return [], True
            return [], False
        case Rel2Den() | Rel3Den():
            ver = _value_eq(TRIV, TRIV, den, reg, budget)
            return ([TRIV], True) if ver.ok else ([], ver.failed)
        case NatDen():
            return [Num(i) for i in range(budget.probe)], False
        case SigmaDen(fden, var, sbody):
            firsts, fcomp = _complete_inhabitants(fden, reg, budget)
            out: list[Expr] = []
            scomp = True
            for w in firsts:
                try:
                    sden = _denote_at(sbody, var, w, reg, budget)
                except DenoteError:
                    scomp = False
                    continue
                snds, sc = _complete_inhabitants(sden, reg, budget)
                scomp = scomp and sc
                out.extend(Pair(w, u) for u in snds)
            return out, fcomp and scomp
        case SubsetDen(dom, var, body):
            cands, dcomp = _complete_inhabitants(dom, reg, budget)
            out = []
            bcomp = True
            for w in cands:
                try:
                    bden = _denote_at(body, var, w, reg, budget)
                except DenoteError:
                    bcomp = False
                    continue
                ver = inhabited(bden, reg, budget)
                if ver.ok:
                    out.append(w)
                elif not ver.failed:
                    bcomp = False
            return out, dcomp and bcomp
        case _:
            return [], False


def inhabited(den: TypeDen, reg: FFIRegistry, budget: TestBudget) -> Verdict:
    """Search for an inhabitant; Unknown outside the decidable fragment."""
    cands, complete = _complete_inhabitants(den, reg, budget)
    if cands:
        return Verdict.holds()
    if complete:
        return Verdict.fails(f"uninhabited: {den}")
    return Verdict.unknown(f"inhabitation undecided for {den}")


# ---------------------------------------------------------------------------
# Type equality
# ---------------------------------------------------------------------------


def type_eq(a: Expr, a2: Expr, reg: FFIRegistry, budget: TestBudget,
            max_level: Optional[int] = None) -> Verdict:
    """Equality of closed types, sample-qualified at dependent positions."""
    try:
        v = _eval(a, reg, budget).value
        v2 = _eval(a2, reg, budget).value
    except StuckError as err:
        return Verdict.fails(f"type evaluation stuck: {err}")
    except FuelError:
        return Verdict.unknown("fuel exhausted")
    return _type_eq_values(v, v2, reg, budget, max_level)


def _type_eq_values(v: Expr, v2: Expr, reg, budget, max_level=None) -> Verdict:
    try:
        d1 = type_denote(v, reg, budget, max_level)
        d2 = type_denote(v2, reg, budget, max_level)
    except DenoteError as err:
        return Verdict.fails(str(err))

    match (d1, d2):
        case (NatDen(), NatDen()):
            return Verdict.holds()
        case (UnivDen(i), UnivDen(j)):
            return Verdict.holds() if i == j else Verdict.fails(
                f"universe levels {i} and {j} differ")
        case (EqDen(in1, l1, r1), EqDen(in2, l2, r2)):
            return _combine(
                _den_eq(in1, in2, reg, budget, max_level),
                member_eq(l1, l2, in1, reg, budget),
                member_eq(r1, r2, in1, reg, budget),
            )
        case (Rel2Den(r, a1, b1), Rel2Den(r2_, a2, b2)):
            if r != r2_:
                return Verdict.fails(f"relations {r} and {r2_} differ")
            return _combine(member_eq(a1, a2, NatDen(), reg, budget),
                            member_eq(b1, b2, NatDen(), reg, budget))
        case (Rel3Den(r, a1, b1, c1), Rel3Den(r2_, a2, b2, c2)):
            if r != r2_:
                return Verdict.fails(f"relations {r} and {r2_} differ")
            return _combine(member_eq(a1, a2, NatDen(), reg, budget),
                            member_eq(b1, b2, NatDen(), reg, budget),
                            member_eq(c1, c2, NatDen(), reg, budget))
        case (SubsetDen(dm1, x1, b1), SubsetDen(dm2, x2, b2)) | \
             (SigmaDen(dm1, x1, b1), SigmaDen(dm2, x2, b2)):
            dv = _den_eq(dm1, dm2, reg, budget, max_level)
            if not dv.ok:
                return dv
            return _combine(dv, _sampled_body_eq(
                dm1, [(x1, b1, x2, b2)], reg, budget, max_level))
        case (PiDen(dm1, x1, c1), PiDen(dm2, x2, c2)):
            dv = _den_eq(dm1, dm2, reg, budget, max_level)
            if not dv.ok:
                return dv
            return _combine(dv, _sampled_body_eq(
                dm1, [(x1, c1, x2, c2)], reg, budget, max_level))
        case (FuntimeDen(dm1, x1, c1, p1), FuntimeDen(dm2, x2, c2, p2)):
            dv = _den_eq(dm1, dm2, reg, budget, max_level)
            if not dv.ok:
                return dv
            body = _sampled_body_eq(dm1, [(x1, c1, x2, c2)], reg, budget, max_level)
            if not body.ok:
                return body
            costs = _sampled_cost_eq(dm1, x1, p1, x2, p2, reg, budget)
            return _combine(dv, body, costs)
        case _:
            return Verdict.fails(
                f"type constructors differ: {type(d1).__name__} vs {type(d2).__name__}")


def _den_eq(d1: TypeDen, d2: TypeDen, reg, budget, max_level=None) -> Verdict:
    return _type_eq_values(_den_to_expr(d1), _den_to_expr(d2), reg, budget, max_level)


def _den_to_expr(d: TypeDen) -> Expr:
    match d:
        case NatDen():
            return Nat()
        case UnivDen(i):
            return Univ(i)
        case EqDen(inner, l, r):
            return Eq(_den_to_expr(inner), l, r)
        case Rel2Den(r, a, b):
            return Rel2(r, a, b)
        case Rel3Den(r, a, b, c):
            return Rel3(r, a, b, c)
        case SubsetDen(dom, v, b):
            return Subset(v, _den_to_expr(dom), b)
        case SigmaDen(dom, v, b):
            return Sigma(v, _den_to_expr(dom), b)
        case FuntimeDen(dom, v, c, p):
            return Funtime(v, _den_to_expr(dom), c, p)
        case PiDen(dom, v, c):
            return Pi(v, _den_to_expr(dom), c)
    raise TypeError(f"unexpected denotation {d}")


def _sampled_body_eq(dom: TypeDen, bodies, reg, budget, max_level=None) -> Verdict:
    ws = den_sample(dom, budget.rng(), reg, budget)
    if ws is None:
        return Verdict.unknown("dependent body over an unsamplable domain")
    if not ws:
        return Verdict.unknown("no domain samples for a dependent body")
    tested = 0
    for w in ws[: budget.samples]:
        for x1, b1, x2, b2 in bodies:
            ver = type_eq(subst(b1, {x1: w}), subst(b2, {x2: w}), reg, budget, max_level)
            if not ver.ok:
                return replace(ver, witness=f"at {print_expr(w)}: {ver.witness}") \
                    if ver.failed else ver
        tested += 1
    return Verdict.holds(tested)


def _sampled_cost_eq(dom: TypeDen, x1, p1, x2, p2, reg, budget) -> Verdict:
    ws = den_sample(dom, budget.rng(), reg, budget)
    if not ws:
        return Verdict.unknown("no domain samples for a cost comparison")
    tested = 0
    for w in ws[: budget.samples]:
        ver = member_eq(subst(p1, {x1: w}), subst(p2, {x2: w}), NatDen(), reg, budget)
        if not ver.ok:
            return ver
        tested += 1
    return Verdict.holds(tested)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def _size_biased(rng: Random, cap: int) -> int:
    # Geometric-ish: half the mass near zero, tail up to cap.
    k = 0
    while k < cap and rng.random() < 0.62:
        k += 1
    return k


def den_sample(den: TypeDen, rng: Random, reg: FFIRegistry, budget: TestBudget,
               extra: Sequence[int] = ()) -> Optional[list[Expr]]:
    """Sample values of a denotation; None when the type is unsamplable."""
    match den:
        case NatDen():
            pool = {0, 1}
            pool.update(k for k in extra if k >= 0)
            for _ in range(budget.samples * 3):
                if len(pool) >= budget.samples + 2:
                    break
                pool.add(_size_biased(rng, budget.nat_cap))
            rest = sorted(pool - {0, 1})
            rng.shuffle(rest)
            # boundary values first so they survive downstream truncation
            return [Num(0), Num(1)] + [Num(k) for k in rest]
        case EqDen() | Rel2Den() | Rel3Den():
            ver = _value_eq(TRIV, TRIV, den, reg, budget)
            return [TRIV] if ver.ok else []
        case SubsetDen(dom, var, body):
            forced, bounds = _harvest_ints(var, body, reg, budget)
            base = den_sample(dom, rng, reg, budget,
                              extra=list(extra) + forced + bounds)
            if base is None:
                return None
            out = [w for w in base if _value_eq(w, w, den, reg, budget).ok]
            return out
        case SigmaDen(fden, var, sbody):
            firsts = den_sample(fden, rng, reg, budget, extra)
            if firsts is None:
                return None
            out = []
            extra = list(extra)
            for w in firsts[: budget.samples]:
                try:
                    sden = _denote_at(sbody, var, w, reg, budget)
                except DenoteError:
                    continue
                # a small varying slice keeps the candidate filtering cheap
                snd_extra = rng.sample(extra, min(4, len(extra)))
                snds = den_sample(sden, rng, reg, budget, snd_extra)
                if snds is None:
                    return None
                out.extend(Pair(w, u) for u in snds[:3])
            rng.shuffle(out)
            return out
        case _:
            return None


def _suc_depth(e: Expr) -> tuple[int, Expr]:
    j = 0
    while isinstance(e, Suc):
        j += 1
        e = e.arg
    return j, e


def _harvest_ints(var: str, ty: Expr, reg, budget) -> tuple[list[int], list[int]]:
    """Solve numeral constraints on `var` inside a refinement or later type.

    Returns (forced, boundary): equalities pin suc^j(var) to a closed value
    (forced candidates), while upper bounds only seed boundary candidates.
    """
    forced: list[int] = []
    boundary: list[int] = []

    def closed_val(e: Expr) -> Optional[int]:
        if free_vars(e):
            return None
        try:
            return as_numeral(_eval(e, reg, budget).value)
        except (StuckError, FuelError):
            return None

    def visit(e: Expr) -> None:
        pairs: list[tuple[Expr, Expr]] = []
        match e:
            case Eq(_, lhs, rhs):
                pairs = [(lhs, rhs), (rhs, lhs)]
            case Rel2("=", lhs, rhs):
                pairs = [(lhs, rhs), (rhs, lhs)]
            case Rel2("<", lhs, rhs):
                j, core = _suc_depth(lhs)
                if isinstance(core, Var) and core.name == var:
                    k = closed_val(rhs)
                    if k is not None and k - 1 - j >= 0:
                        boundary.append(k - 1 - j)
            case Rel2("<=", lhs, rhs):
                j, core = _suc_depth(lhs)
                if isinstance(core, Var) and core.name == var:
                    k = closed_val(rhs)
                    if k is not None and k - j >= 0:
                        boundary.append(k - j)
        for lhs, rhs in pairs:
            j, core = _suc_depth(lhs)
            if isinstance(core, Var) and core.name == var:
                k = closed_val(rhs)
                if k is not None and k - j >= 0:
                    forced.append(k - j)
        for f_, child in _expr_children(e):
            visit(child)

    visit(ty)
    return forced, boundary


def _expr_children(e: Expr):
    from dataclasses import fields as _fields
    for f in _fields(e):
        v = getattr(e, f.name)
        if isinstance(v, Expr):
            yield f.name, v


def sample_instances(tel: Telescope, reg: FFIRegistry, budget: TestBudget,
                     fixed: Mapping[str, Expr] = {}) -> list[dict[str, Expr]]:
    """Diagonal instances of a telescope: bindings satisfying each type in turn.

    `fixed` pins chosen values for binders (used for function hypotheses);
    their types are not re-checked here.
    """
    rng = budget.rng()
    found: list[dict[str, Expr]] = []
    seen: set = set()
    attempts = 0
    max_attempts = budget.samples * 10 + 20
    while len(found) < budget.samples and attempts < max_attempts:
        attempts += 1
        gamma = _sample_once(tel, rng, reg, budget, fixed)
        if gamma is None:
            continue
        key = tuple(sorted((k, v) for k, v in gamma.items()))
        if key in seen:
            continue
        seen.add(key)
        found.append(gamma)
    if not found:
        raise EmptyTelescopeError(
            f"no instance of [{', '.join(v for v, _ in tel)}] found "
            f"after {attempts} attempts (empty type?)")
    return found


def _sample_once(tel, rng, reg, budget, fixed) -> Optional[dict[str, Expr]]:
    gamma: dict[str, Expr] = {}
    entries = list(tel.entries)
    for idx, (v, ty) in enumerate(entries):
        if v in fixed:
            gamma[v] = fixed[v]
            continue
        ty_inst = subst(ty, {k: w for k, w in gamma.items() if k in free_vars(ty)})
        try:
            den = type_denote(ty_inst, reg, budget)
        except DenoteError as err:
            raise UnsamplableError(v, f"type does not denote: {err}") from None
        if isinstance(den, (FuntimeDen, PiDen, UnivDen)):
            raise UnsamplableError(v, f"{type(den).__name__} hypothesis")
        forced: list[int] = []
        bounds: list[int] = []
        for u, ty_later in entries[idx + 1:]:
            later = subst(ty_later, {k: w for k, w in gamma.items()
                                     if k in free_vars(ty_later)})
            f2, b2 = _harvest_ints(v, later, reg, budget)
            forced.extend(f2)
            bounds.extend(b2)
        cands = den_sample(den, rng, reg, budget, extra=forced + bounds)
        if cands is None:
            raise UnsamplableError(v, "unsamplable denotation")
        if not cands:
            return None
        # A later equality hypothesis pins this binder; honor it when the
        # solved value passed the membership filter.
        solved = [Num(k) for k in forced if Num(k) in cands]
        gamma[v] = rng.choice(solved) if solved else rng.choice(cands)
    return gamma


# ---------------------------------------------------------------------------
# Open judgments and the measure
# ---------------------------------------------------------------------------


def _prune(tel: Telescope, needed: set[str]) -> Telescope:
    """Drop entries irrelevant to the needed variables.

    An entry is kept when its variable is needed, or when its type mentions a
    needed variable (it constrains the instances).  Function- and
    universe-type hypotheses whose variable is unused are skipped: they are
    not samplable and are treated as assumptions on the instance space.
    """
    keep: list[tuple[str, Expr]] = []
    want = set(needed)
    for v, ty in reversed(tel.entries):
        fv = free_vars(ty)
        constrains = bool(fv & want) and not isinstance(ty, (Funtime, Pi, Univ))
        if v in want or constrains:
            keep.append((v, ty))
            want.add(v)
            want |= fv
    return Telescope(tuple(reversed(keep)))


def check_open(j: Judgment, reg: FFIRegistry, budget: TestBudget,
               fixed: Mapping[str, Expr] = {}) -> Verdict:
    """Check a judgment on sampled instances of its (pruned) telescope."""
    tel = _prune(j.tel, j.free_subject_vars())
    unbound = j.free_subject_vars() - set(tel.vars()) - set(fixed)
    if unbound:
        return Verdict.unknown(f"unbound variables {sorted(unbound)}")
    if len(tel) == 0 and not (set(fixed) & j.free_subject_vars()):
        ver = _check_instance(j, {}, reg, budget)
        return replace(ver, tested=max(ver.tested, 1)) if ver.ok else ver
    try:
        gammas = sample_instances(tel, reg, budget, fixed=fixed)
    except UnsamplableError as err:
        return Verdict.unknown(str(err))
    except EmptyTelescopeError as err:
        return Verdict.unknown(str(err))
    tested = 0
    for gamma in gammas:
        ver = _check_instance(j, gamma, reg, budget)
        if ver.failed:
            shown = {k: print_expr(v) for k, v in gamma.items()}
            return Verdict.fails(f"{ver.witness} at instance {shown}", tested)
        if ver.status == "unknown":
            return ver
        tested += 1
    return Verdict.holds(tested)


def _check_instance(j: Judgment, gamma: Mapping[str, Expr], reg, budget) -> Verdict:
    def inst(e: Expr) -> Expr:
        live = {k: v for k, v in gamma.items() if k in free_vars(e)}
        return subst(e, live) if live else e

    try:
        if isinstance(j, TypeEqJ):
            return type_eq(inst(j.lhs), inst(j.rhs), reg, budget)
        den = type_denote(inst(j.ty), reg, budget)
        if isinstance(j, CostMemberEqJ):
            return member_cost(inst(j.lhs), inst(j.rhs), den, inst(j.cost), reg, budget)
        if isinstance(j, ValueMemberEqJ):
            lhs, rhs = inst(j.lhs), inst(j.rhs)
            if not (is_value(lhs) and is_value(rhs)):
                return Verdict.fails("value-membership subject is not a value")
            return member_eq(lhs, rhs, den, reg, budget)
        if isinstance(j, MemberEqJ):
            return member_eq(inst(j.lhs), inst(j.rhs), den, reg, budget)
    except DenoteError as err:
        return Verdict.unknown(str(err))
    except PresuppositionError as err:
        return Verdict.fails(str(err))
    raise TypeError(f"unknown judgment {j!r}")


def measure(p: Expr, var: str, value: Expr, reg: FFIRegistry,
            budget: TestBudget) -> int:
    """The numeral the cost bound takes at one argument value."""
    if not is_value(value):
        raise MeasureError(f"measure argument must be a value: {print_expr(value)}")
    try:
        res = eval_seq(subst(p, {var: value}), reg, budget.eval_config())
    except (StuckError, FuelError) as err:
        raise MeasureError(f"cost bound did not evaluate: {err}") from None
    k = as_numeral(res.value)
    if k is None:
        raise MeasureError(f"cost bound evaluated to a non-numeral: "
                           f"{print_expr(res.value)}")
    return k
