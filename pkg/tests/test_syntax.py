from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catbench.programs import gcd_term
from catbench.syntax import (
    Ap, Arith, Cff1, Cff2, Eq, Expr, Fst, Fun, Funtime, Ifz, Let, Num,
    Pair, ParseError, Pi, Rel2, Rel3, Sigma, Snd, Subset, SubstitutionError,
    Telescope, TRIV, Univ, Var, NAT, ZERO, alpha_eq, as_numeral,
    free_vars, is_value, parse, print_expr, subst, suc,
)


def test_numeral_desugaring():
    assert parse("(suc zero)") == Num(1)
    assert parse("3") == Num(3)
    assert parse("zero") == ZERO
    assert suc(Num(4)) == Num(5)
    assert as_numeral(Num(7)) == 7
    assert as_numeral(suc(Var("x"))) is None


def test_par_desugars_to_lets():
    got = parse("(par x y a b (arith + a b))")
    want = Let(Pair(Var("x"), Var("y")), "c",
               Let(Fst(Var("c")), "a",
                   Let(Snd(Var("c")), "b", Arith("+", Var("a"), Var("b")))))
    assert got == want


def test_direct_constructor_mapping():
    assert parse("(fst (pair zero triv))") == Fst(Pair(ZERO, TRIV))


def test_print_examples():
    assert print_expr(Num(3)) == "3"
    assert print_expr(Fun("f", "a", Ap(Var("f"), Var("a")))) == \
        "(fun f a (ap f a))"


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse("(fst (pair zero\n  ))")
    assert e.value.line == 2
    with pytest.raises(ParseError):
        parse("(frobnicate 1 2)")
    with pytest.raises(ParseError):
        parse("(fst zero triv)")  # arity
    with pytest.raises(ParseError):
        parse("")


def test_keyword_is_not_a_variable():
    with pytest.raises(ParseError):
        parse("(fun let a zero)")


def test_unicode_operator_aliases():
    assert parse("(cff2 × 2 3)") == Cff2("*", Num(2), Num(3))
    assert parse("(rel2 ≤ 1 2)") == Rel2("<=", Num(1), Num(2))


def _random_expr(rng: Random, depth: int, scope: tuple[str, ...]) -> Expr:
    atoms = [NAT, ZERO, TRIV, Num(rng.randrange(50)), Univ(rng.randrange(3))]
    if scope:
        atoms.append(Var(rng.choice(scope)))
    if depth <= 0:
        return rng.choice(atoms)

    def sub(extra=()):
        return _random_expr(rng, depth - 1, scope + tuple(extra))

    v = f"v{rng.randrange(4)}"
    w = f"w{rng.randrange(4)}"
    choice = rng.randrange(16)
    if choice == 0:
        return Fun(v, w, sub((v, w)))
    if choice == 1:
        return Ap(sub(), sub())
    if choice == 2:
        return suc(sub())
    if choice == 3:
        return Ifz(sub(), sub(), v, sub((v,)))
    if choice == 4:
        return Pair(sub(), sub())
    if choice == 5:
        return Fst(sub()) if rng.random() < 0.5 else Snd(sub())
    if choice == 6:
        return Let(sub(), v, sub((v,)))
    if choice == 7:
        return Eq(sub(), sub(), sub())
    if choice == 8:
        return Sigma(v, sub(), sub((v,)))
    if choice == 9:
        return Subset(v, sub(), sub((v,)))
    if choice == 10:
        return Pi(v, sub(), sub((v,)))
    if choice == 11:
        return Funtime(v, sub(), sub((v,)), sub((v,)))
    if choice == 12:
        return Rel2("<", sub(), sub())
    if choice == 13:
        return Rel3("gcdProp", sub(), sub(), sub())
    if choice == 14:
        return Cff1("double", sub()) if rng.random() < 0.5 else \
            Cff2("+", sub(), sub())
    return Arith("%", sub(), sub())


def test_print_parse_round_trip_1000():
    rng = Random(0xC0571)
    for _ in range(1000):
        e = _random_expr(rng, rng.randrange(5), ())
        assert parse(print_expr(e)) == e


@st.composite
def exprs(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    depth = draw(st.integers(0, 4))
    return _random_expr(Random(seed), depth, ())


@settings(max_examples=200)
@given(exprs())
def test_round_trip_property(e):
    assert parse(print_expr(e)) == e


@settings(max_examples=200)
@given(exprs(), exprs())
def test_alpha_eq_is_reflexive_and_symmetric(a, b):
    assert alpha_eq(a, a)
    assert alpha_eq(a, b) == alpha_eq(b, a)


def test_subst_examples():
    assert subst(Var("a"), {"a": Num(2)}) == Num(2)
    assert subst(Fun("f", "a", Var("a")), {"a": Num(2)}) == \
        Fun("f", "a", Var("a"))
    f = Fun("f", "a", Var("a"))
    assert subst(Ap(Var("f"), Var("a")), {"f": f, "a": Num(1)}) == \
        Ap(f, Num(1))


def test_subst_rejects_non_values():
    with pytest.raises(SubstitutionError):
        subst(Var("a"), {"a": Fst(Pair(ZERO, ZERO))})


def test_subst_avoids_capture():
    # [x := v] in (fun g v. x) must not capture the image.
    e = Fun("g", "v", Var("x"))
    out = subst(e, {"x": Var("v")})
    assert isinstance(out, Fun)
    assert out.aname != "v"
    assert out.body == Var("v")


def test_subst_normalizes_numerals():
    assert subst(suc(Var("x")), {"x": Num(2)}) == Num(3)


def test_simultaneous_substitution_composes():
    rng = Random(5)
    for _ in range(200):
        e = _random_expr(rng, 3, ("a", "b"))
        b1 = {"a": Num(rng.randrange(5))}
        b2 = {"b": Num(rng.randrange(5))}
        lhs = subst(subst(e, b1), b2)
        rhs = subst(e, {**b1, **b2})
        assert lhs == rhs


def test_alpha_respected_by_subst():
    e1 = parse("(fun f a (ap f a))")
    e2 = parse("(fun g b (ap g b))")
    assert e1 == e2
    assert subst(e1, {}) == subst(e2, {})


def test_is_value_examples():
    assert is_value(Pair(Num(1), TRIV))
    assert not is_value(Ap(Fun("f", "a", Var("a")), ZERO))
    assert not is_value(suc(Fst(Pair(ZERO, ZERO))))
    assert is_value(Var("x"))  # variables range over values
    assert is_value(parse("(subset x nat (rel2 < x 4))"))


def test_free_vars():
    assert free_vars(Var("a")) == {"a"}
    assert free_vars(Fun("f", "a", Ap(Var("f"), Var("b")))) == {"b"}
    assert free_vars(gcd_term()) == set()


def test_telescope_invariants():
    Telescope((("a", NAT), ("b", Eq(NAT, Var("a"), ZERO))))
    with pytest.raises(ValueError):
        Telescope((("a", NAT), ("a", NAT)))
    with pytest.raises(ValueError):
        Telescope((("a", Eq(NAT, Var("b"), ZERO)),))
