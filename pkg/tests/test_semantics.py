from random import Random

import pytest

from catbench.generators import NAT_T, gen_closed_term
from catbench.judgments import CostMemberEqJ, MemberEqJ
from catbench.programs import fib_bound, gcd_bound
from catbench.registry import EvalConfig
from catbench.semantics import (
    DenoteError, EmptyTelescopeError, EqDen, FuntimeDen, MeasureError,
    NatDen, PresuppositionError, Rel2Den, SigmaDen, SubsetDen, UnivDen,
    UnsamplableError, check_open, inhabited, measure, member_cost,
    member_eq, sample_instances, type_denote, type_eq,
)
from catbench.syntax import (
    Ap, Cff1, Cff2, Eq, Fst, Fun, Funtime, Let, Num, Pair, Rel2,
    Telescope, TRIV, Univ, Var, NAT, ZERO, as_numeral, parse, subst, suc,
)
from catbench.registry import register


def test_denote_base_types(reg, budget):
    assert type_denote(NAT, reg, budget) == NatDen()
    den = type_denote(parse("(subset x nat (rel2 < x 16))"), reg, budget)
    assert isinstance(den, SubsetDen) and den.dom == NatDen()


def test_denote_evaluates_the_type_first(reg, budget):
    assert type_denote(Let(ZERO, "x", NAT), reg, budget) == NatDen()


def test_denote_rejects_non_types(reg, budget):
    with pytest.raises(DenoteError):
        type_denote(ZERO, reg, budget)
    with pytest.raises(DenoteError):
        type_denote(Rel2("nosuch", ZERO, ZERO), reg, budget)


def test_denote_universe_ceiling(reg, budget):
    assert type_denote(Univ(2), reg, budget) == UnivDen(2)
    with pytest.raises(DenoteError):
        type_denote(Univ(budget.max_level), reg, budget)


def test_member_eq_numerals(reg, budget):
    assert member_eq(ZERO, ZERO, NatDen(), reg, budget).ok
    assert member_eq(Num(1), Num(2), NatDen(), reg, budget).failed


def test_member_eq_relation(reg, budget):
    den = Rel2Den("<", Num(2), Num(3))
    assert member_eq(TRIV, TRIV, den, reg, budget).ok
    den_bad = Rel2Den("<", Num(3), Num(3))
    assert member_eq(TRIV, TRIV, den_bad, reg, budget).failed


def test_member_eq_subset_searches_the_refinement(reg, budget):
    den = type_denote(parse("(subset x nat (rel2 < x 4))"), reg, budget)
    assert member_eq(Num(3), Num(3), den, reg, budget).ok
    assert member_eq(Num(9), Num(9), den, reg, budget).failed


def test_member_eq_funtime_is_sample_qualified(reg, budget):
    ident = Fun("g", "v", Var("v"))
    den = FuntimeDen(NatDen(), "v", NAT, ZERO)
    v = member_eq(ident, ident, den, reg, budget)
    assert v.ok and v.tested > 0
    slow = Fun("g", "v", Fst(Pair(Var("v"), ZERO)))
    assert member_eq(slow, slow, den, reg, budget).failed  # costs 1 > 0


def test_member_eq_universe(reg, budget):
    den = UnivDen(1)
    assert member_eq(NAT, NAT, den, reg, budget).ok
    assert member_eq(NAT, Univ(0), den, reg, budget).failed
    assert member_eq(Univ(0), Univ(0), den, reg, budget).ok


def test_member_cost_examples(reg, budget):
    assert member_cost(ZERO, ZERO, NatDen(), ZERO, reg, budget).ok
    reg2 = register(reg, "unary", "double", lambda k: 2 * k)
    v = member_cost(Cff1("double", Num(3)), Cff1("double", Num(3)),
                    NatDen(), Num(1), reg2, budget)
    assert v.ok
    v = member_cost(Fst(Pair(ZERO, ZERO)), ZERO, NatDen(), ZERO, reg, budget)
    assert v.failed


def test_member_cost_presupposition(reg, budget):
    with pytest.raises(PresuppositionError):
        member_cost(ZERO, ZERO, NatDen(), TRIV, reg, budget)


def test_conversion_between_value_membership_and_zero_cost(reg, budget):
    rng = Random(17)
    dens = [NatDen(), Rel2Den("<=", Num(1), Num(1)),
            type_denote(parse("(subset x nat (rel2 < x 6))"), reg, budget)]
    for _ in range(100):
        den = rng.choice(dens)
        v = Num(rng.randrange(6)) if not isinstance(den, Rel2Den) else TRIV
        eq = member_eq(v, v, den, reg, budget)
        cost = member_cost(v, v, den, ZERO, reg, budget)
        assert eq.status == cost.status


def test_inhabited_fragment(reg, budget):
    assert inhabited(Rel2Den("<", Num(1), Num(2)), reg, budget).ok
    assert inhabited(Rel2Den("<", Num(2), Num(2)), reg, budget).failed
    assert inhabited(EqDen(NatDen(), Num(2), Cff2("+", Num(1), Num(1))),
                     reg, budget).ok
    sig = SigmaDen(Rel2Den("<", Num(0), Num(1)), "q",
                   Eq(NAT, Num(2), Num(2)))
    assert inhabited(sig, reg, budget).ok
    fun = FuntimeDen(NatDen(), "v", NAT, ZERO)
    assert inhabited(fun, reg, budget).status == "unknown"


def test_type_eq(reg, budget):
    assert type_eq(NAT, Let(ZERO, "x", NAT), reg, budget).ok
    assert type_eq(NAT, Univ(0), reg, budget).failed
    a = parse("(subset x nat (rel2 < x 9))")
    b = parse("(subset y nat (rel2 < y (cff2 + 4 5)))")
    assert type_eq(a, b, reg, budget).ok
    c = parse("(subset y nat (rel2 < y 8))")
    assert type_eq(a, c, reg, budget).failed


def test_sample_instances_nat(reg, budget):
    tel = Telescope((("a", NAT),))
    for gamma in sample_instances(tel, reg, budget):
        assert as_numeral(gamma["a"]) is not None


def test_sample_instances_respects_refinements(reg, budget):
    tel = Telescope((("x", parse("(subset x nat (rel2 < x 16))")),))
    vals = {as_numeral(g["x"]) for g in sample_instances(tel, reg, budget)}
    assert all(v < 16 for v in vals)
    assert 15 in vals  # boundary case is forced


def test_sample_instances_empty_refinement(reg, budget):
    tel = Telescope((("x", parse("(subset x nat (rel2 < x 0))")),))
    with pytest.raises(EmptyTelescopeError):
        sample_instances(tel, reg, budget)


def test_sample_instances_unsamplable_binder(reg, budget):
    tel = Telescope((("f", Funtime("v", NAT, NAT, ZERO)),))
    with pytest.raises(UnsamplableError) as e:
        sample_instances(tel, reg, budget)
    assert e.value.binder == "f"


def test_sample_instances_solves_later_equalities(reg, budget):
    tel = Telescope((
        ("a", NAT),
        ("b", NAT),
        ("p", Eq(NAT, suc(Var("b")), Var("a"))),
    ))
    gammas = sample_instances(tel, reg, budget)
    assert gammas
    for g in gammas:
        assert as_numeral(g["a"]) == as_numeral(g["b"]) + 1


def test_check_open_examples(reg, budget):
    tel = Telescope((("a", NAT),))
    assert check_open(MemberEqJ(tel, suc(Var("a")), suc(Var("a")), NAT),
                      reg, budget).ok
    assert check_open(CostMemberEqJ(tel, Var("a"), Var("a"), NAT, ZERO),
                      reg, budget).ok
    v = check_open(MemberEqJ(tel, Fst(Var("a")), Fst(Var("a")), NAT),
                   reg, budget)
    assert v.failed and "stuck" in v.witness


def test_check_open_prunes_function_hypotheses(reg, budget):
    tel = Telescope((
        ("a", NAT),
        ("f", Funtime("v", NAT, NAT, Var("a"))),
    ))
    assert check_open(MemberEqJ(tel, suc(Var("a")), suc(Var("a")), NAT),
                      reg, budget).ok
    # but a judgment mentioning f is honestly unknown
    v = check_open(MemberEqJ(tel, Ap(Var("f"), ZERO), Ap(Var("f"), ZERO),
                             NAT), reg, budget)
    assert v.status == "unknown"


def test_measure_examples(reg, budget):
    p = gcd_bound()
    assert measure(p, "a", Pair(ZERO, Num(9)), reg, budget) == 5
    for x in (1, 3, 12):
        assert measure(p, "a", Pair(Num(x), Num(4)), reg, budget) == 8 + 8 * x
    assert measure(fib_bound(), "n", Num(2), reg, budget) == 24
    with pytest.raises(MeasureError):
        measure(TRIV, "a", ZERO, reg, budget)


def test_measure_agrees_with_evaluation(reg, budget, cfg):
    from catbench.evaluation import eval_seq
    rng = Random(23)
    for _ in range(100):
        body = gen_closed_term(rng, NAT_T, 3)
        p = Cff2("+", Var("a"), body)
        v = Num(rng.randrange(50))
        direct = eval_seq(subst(p, {"a": v}), reg, cfg).value
        assert measure(p, "a", v, reg, budget) == as_numeral(direct)


def test_head_expansion_invariance(reg, budget):
    rng = Random(29)
    for _ in range(150):
        e = gen_closed_term(rng, NAT_T, 3)
        from catbench.evaluation import eval_seq
        c = eval_seq(e, reg, EvalConfig()).steps
        p = Num(c + rng.randrange(3))
        assert member_cost(e, e, NatDen(), p, reg, budget).ok
        wrapped = Let(ZERO, "u", e)
        assert member_cost(wrapped, wrapped, NatDen(), suc(p),
                           reg, budget).ok


def test_per_symmetry_and_transitivity(reg, budget):
    rng = Random(31)
    den = NatDen()
    for _ in range(150):
        ms = [gen_closed_term(rng, NAT_T, 2) for _ in range(3)]
        v12 = member_eq(ms[0], ms[1], den, reg, budget)
        v21 = member_eq(ms[1], ms[0], den, reg, budget)
        assert v12.ok == v21.ok
        v23 = member_eq(ms[1], ms[2], den, reg, budget)
        v13 = member_eq(ms[0], ms[2], den, reg, budget)
        if v12.ok and v23.ok:
            assert v13.ok


def test_denotation_is_a_function(reg, budget):
    for src in ("nat", "(univ 1)", "(sigma v nat (eq nat v v))",
                "(funtime v nat nat (suc v))", "(pi v nat nat)"):
        a = parse(src)
        assert type_denote(a, reg, budget) == type_denote(a, reg, budget)


def test_gcd_result_membership(reg, budget):
    # the oracle accepts the gcd application's result at its subset type
    from catbench.evaluation import eval_seq
    b_inst = parse("(subset d nat (rel3 gcdProp d 6 4))")
    den = type_denote(b_inst, reg, budget)
    assert member_eq(Num(2), Num(2), den, reg, budget).ok
    assert member_eq(Num(3), Num(3), den, reg, budget).failed


def test_registered_ternary_relation_via_denotation(reg, budget):
    reg2 = register(reg, "rel3", "sums", lambda a, b, c: a + b == c)
    den = type_denote(parse("(rel3 sums 1 2 3)"), reg2, budget)
    assert member_eq(TRIV, TRIV, den, reg2, budget).ok
    den_bad = type_denote(parse("(rel3 sums 1 2 4)"), reg2, budget)
    assert member_eq(TRIV, TRIV, den_bad, reg2, budget).failed


def test_type_eq_function_types(reg, budget):
    a = parse("(funtime v nat nat (cff2 * 2 v))")
    b = parse("(funtime u nat nat (cff2 + u u))")
    assert type_eq(a, b, reg, budget).ok  # bounds agree pointwise
    c = parse("(funtime u nat nat (cff2 + u 1))")
    assert type_eq(a, c, reg, budget).failed
    assert type_eq(parse("(pi v nat nat)"), parse("(pi u nat nat)"),
                   reg, budget).ok
    assert type_eq(parse("(pi v nat nat)"), a, reg, budget).failed


def test_member_eq_pi_ignores_cost(reg, budget):
    from catbench.semantics import PiDen
    slow = Fun("g", "v", Fst(Pair(Var("v"), ZERO)))
    den = PiDen(NatDen(), "v", NAT)
    assert member_eq(slow, slow, den, reg, budget).ok
    wrong = Fun("g", "v", TRIV)
    assert member_eq(wrong, wrong, den, reg, budget).failed
