"""Seeded random generators for closed terminating terms and decided members.

The term generator is typed (nat, unit, or a pair shape) so every generated
term evaluates to a value in both modes: applications only ever use
non-recursive functions and word-guarded primitives stay on small numerals.
"""

from __future__ import annotations

from random import Random
from .syntax import (
    Ap, Arith, Cff2, Expr, Fst, Fun, Ifz, Let, Num, Pair, Snd, TRIV, Var,
    suc,
)

NAT_T = "nat"
UNIT_T = "unit"
PAIR_T = "pair"  # pair of nat and nat


def gen_closed_term(rng: Random, ty: str = NAT_T, depth: int = 4) -> Expr:
    """A closed term of the given shape that evaluates in both modes."""
    if depth <= 0:
        return _leaf(rng, ty)
    pick = rng.random()
    if ty == NAT_T:
        if pick < 0.12:
            return _leaf(rng, ty)
        if pick < 0.24:
            return suc(gen_closed_term(rng, NAT_T, depth - 1))
        if pick < 0.38:
            return Ifz(gen_closed_term(rng, NAT_T, depth - 1),
                       gen_closed_term(rng, NAT_T, depth - 1),
                       "i", _open_nat(rng, "i", depth - 1))
        if pick < 0.5:
            side = Fst if rng.random() < 0.5 else Snd
            return side(gen_closed_term(rng, PAIR_T, depth - 1))
        if pick < 0.64:
            fn = rng.choice(["+", "max", "*"])
            return Cff2(fn, gen_closed_term(rng, NAT_T, depth - 1),
                        gen_closed_term(rng, NAT_T, depth - 1))
        if pick < 0.74:
            fn = rng.choice(["+", "max"])
            return Arith(fn, Num(rng.randrange(8)), Num(rng.randrange(8)))
        if pick < 0.8:
            return Arith("%", gen_closed_term(rng, NAT_T, depth - 1),
                         Num(rng.randrange(7) + 1))
        if pick < 0.9:
            return Let(gen_closed_term(rng, NAT_T, depth - 1), "v",
                       _open_nat(rng, "v", depth - 1))
        return Ap(Fun("g", "v", _open_nat(rng, "v", depth - 1)),
                  gen_closed_term(rng, NAT_T, depth - 1))
    if ty == PAIR_T:
        if pick < 0.75 or depth <= 1:
            return Pair(gen_closed_term(rng, NAT_T, depth - 1),
                        gen_closed_term(rng, NAT_T, depth - 1))
        return Let(gen_closed_term(rng, NAT_T, depth - 1), "v",
                   Pair(Var("v"), gen_closed_term(rng, NAT_T, depth - 1)))
    return TRIV


def _leaf(rng: Random, ty: str) -> Expr:
    if ty == NAT_T:
        return Num(rng.randrange(9))
    if ty == PAIR_T:
        return Pair(Num(rng.randrange(9)), Num(rng.randrange(9)))
    return TRIV


def _open_nat(rng: Random, var: str, depth: int) -> Expr:
    """A nat-shaped term that may use `var` (bound to a nat value)."""
    if depth <= 0 or rng.random() < 0.4:
        return Var(var) if rng.random() < 0.7 else Num(rng.randrange(9))
    pick = rng.random()
    if pick < 0.3:
        return suc(_open_nat(rng, var, depth - 1))
    if pick < 0.6:
        return Cff2(rng.choice(["+", "max"]), Var(var),
                    _open_nat(rng, var, depth - 1))
    return Ifz(Var(var), _open_nat(rng, var, depth - 1), "j",
               Cff2("+", Var("j"), Num(1)))
