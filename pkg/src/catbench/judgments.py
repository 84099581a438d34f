"""Judgment forms: type equality, membership, cost membership, value membership.

Judgments carry a telescope and compare up to alpha across telescope binders,
which is implemented by encoding a judgment as one expression with the
telescope folded into nested let-binders.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    Expr, Let, Num, Pair, Telescope, TRIV, free_vars, is_value, parse,
    print_expr,
)


@dataclass(frozen=True, eq=False)
class Judgment:
    tel: Telescope

    def parts(self) -> tuple[Expr, ...]:
        raise NotImplementedError

    def with_parts(self, parts: tuple[Expr, ...]) -> "Judgment":
        raise NotImplementedError

    def encode(self) -> Expr:
        body: Expr = TRIV
        for p in reversed(self.parts()):
            body = Pair(p, body)
        body = Pair(Num(_FORM_CODE[type(self).__name__]), body)
        for v, ty in reversed(self.tel.entries):
            body = Let(ty, v, body)
        return body

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Judgment):
            return NotImplemented
        return self.encode() == other.encode()

    def __hash__(self) -> int:
        return hash(self.encode())

    def free_subject_vars(self) -> set[str]:
        out: set[str] = set()
        for p in self.parts():
            out |= free_vars(p)
        return out

    def __str__(self) -> str:
        ctx = ", ".join(f"{v}:{print_expr(t)}" for v, t in self.tel)
        return f"[{ctx}] |- {self.describe()}"

    def describe(self) -> str:
        raise NotImplementedError


_FORM_CODE = {"TypeEqJ": 1, "MemberEqJ": 2, "CostMemberEqJ": 3, "ValueMemberEqJ": 4}


@dataclass(frozen=True, eq=False)
class TypeEqJ(Judgment):
    lhs: Expr
    rhs: Expr

    def parts(self):
        return (self.lhs, self.rhs)

    def with_parts(self, parts):
        return TypeEqJ(self.tel, *parts)

    def describe(self):
        return f"{print_expr(self.lhs)} = {print_expr(self.rhs)} type"


@dataclass(frozen=True, eq=False)
class MemberEqJ(Judgment):
    lhs: Expr
    rhs: Expr
    ty: Expr

    def parts(self):
        return (self.lhs, self.rhs, self.ty)

    def with_parts(self, parts):
        return MemberEqJ(self.tel, *parts)

    def describe(self):
        return f"{print_expr(self.lhs)} = {print_expr(self.rhs)} in {print_expr(self.ty)}"


@dataclass(frozen=True, eq=False)
class CostMemberEqJ(Judgment):
    lhs: Expr
    rhs: Expr
    ty: Expr
    cost: Expr

    def parts(self):
        return (self.lhs, self.rhs, self.ty, self.cost)

    def with_parts(self, parts):
        return CostMemberEqJ(self.tel, *parts)

    def describe(self):
        return (f"{print_expr(self.lhs)} = {print_expr(self.rhs)} in "
                f"{print_expr(self.ty)} [{print_expr(self.cost)}]")


@dataclass(frozen=True, eq=False)
class ValueMemberEqJ(Judgment):
    """Membership of values; subjects must satisfy is_value (variables count)."""

    lhs: Expr
    rhs: Expr
    ty: Expr

    def __post_init__(self):
        if not (is_value(self.lhs) and is_value(self.rhs)):
            raise ValueError("value-membership subjects must be values")

    def parts(self):
        return (self.lhs, self.rhs, self.ty)

    def with_parts(self, parts):
        return ValueMemberEqJ(self.tel, *parts)

    def describe(self):
        return (f"{print_expr(self.lhs)} = {print_expr(self.rhs)} in0 "
                f"{print_expr(self.ty)}")


# ---------------------------------------------------------------------------
# JSON form (concrete-syntax strings for expressions)
# ---------------------------------------------------------------------------

_FORM_NAMES = {
    "TypeEqJ": "type-eq",
    "MemberEqJ": "member",
    "CostMemberEqJ": "cost-member",
    "ValueMemberEqJ": "value-member",
}


def judgment_to_json(j: Judgment) -> dict:
    doc: dict = {
        "form": _FORM_NAMES[type(j).__name__],
        "tel": [[v, print_expr(t)] for v, t in j.tel],
        "lhs": print_expr(j.parts()[0]),
        "rhs": print_expr(j.parts()[1]),
    }
    if isinstance(j, (MemberEqJ, ValueMemberEqJ, CostMemberEqJ)):
        doc["type"] = print_expr(j.ty)
    if isinstance(j, CostMemberEqJ):
        doc["cost"] = print_expr(j.cost)
    return doc


def judgment_from_json(doc: dict) -> Judgment:
    tel = Telescope(tuple((v, parse(t)) for v, t in doc.get("tel", [])))
    lhs = parse(doc["lhs"])
    rhs = parse(doc["rhs"])
    form = doc["form"]
    if form == "type-eq":
        return TypeEqJ(tel, lhs, rhs)
    if form == "member":
        return MemberEqJ(tel, lhs, rhs, parse(doc["type"]))
    if form == "value-member":
        return ValueMemberEqJ(tel, lhs, rhs, parse(doc["type"]))
    if form == "cost-member":
        return CostMemberEqJ(tel, lhs, rhs, parse(doc["type"]), parse(doc["cost"]))
    raise ValueError(f"unknown judgment form {form!r}")
