from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catbench.evaluation import (
    FuelError, StuckError, check_bound, eval_par, eval_seq, eval_symbolic,
    step_par, step_seq, step_symbolic,
)
from catbench.generators import NAT_T, PAIR_T, gen_closed_term
from catbench.programs import fib_bound, fib_term, gcd_bound, gcd_term
from catbench.registry import EvalConfig, register
from catbench.semantics import TestBudget, measure
from catbench.syntax import (
    Ap, Arith, Cff2, Fst, Fun, Ifz, Let, Num, Op, Pair, Snd, Var,
    ZERO, alpha_eq, as_numeral, is_value, parin, parse, subst,
)


def test_values_take_no_steps(reg, cfg):
    res = eval_seq(ZERO, reg, cfg)
    assert res.value == ZERO and res.steps == 0


def test_single_beta_step(reg, cfg):
    res = eval_seq(Ap(Fun("f", "a", Var("a")), ZERO), reg, cfg)
    assert res.value == ZERO and res.steps == 1


def test_projection_steps(reg, cfg):
    assert step_seq(Fst(Pair(ZERO, Num(1))), reg, cfg) == ZERO
    assert step_seq(Snd(Pair(ZERO, Num(1))), reg, cfg) == Num(1)


def test_machine_mod(reg, cfg):
    res = eval_seq(Arith("%", Num(7), Num(3)), reg, cfg)
    assert res.value == Num(1) and res.steps == 1


def test_word_guard_blocks_large_operands(reg, cfg):
    with pytest.raises(StuckError):
        eval_seq(Arith("+", Num(cfg.word_size), Num(1)), reg, cfg)
    with pytest.raises(StuckError):
        eval_seq(Arith("+", Num(1), Num(cfg.word_size)), reg, cfg)
    reg2 = register(reg, "unary", "double", lambda k: 2 * k)
    with pytest.raises(StuckError):
        eval_seq(Op("double", Num(cfg.word_size)), reg2, cfg)


def test_foreign_calls_ignore_the_word_guard(reg, cfg):
    res = eval_seq(Cff2("+", Num(cfg.word_size), Num(1)), reg, cfg)
    assert as_numeral(res.value) == cfg.word_size + 1 and res.steps == 1


def test_stuck_cases(reg, cfg):
    for bad in ("(fst zero)", "(ap zero zero)", "(ifz triv 0 a a)",
                "(arith / 1 0)", "(cff1 nosuch 3)"):
        with pytest.raises(StuckError):
            eval_seq(parse(bad), reg, cfg)


def test_fuel_exhaustion_reports(reg):
    omega = Fun("f", "a", Ap(Var("f"), Var("a")))
    with pytest.raises(FuelError) as e:
        eval_seq(Ap(omega, ZERO), reg, EvalConfig(fuel=50))
    assert e.value.steps == 51


def test_trace_length_matches_steps(reg):
    cfg = EvalConfig(trace=True)
    res = eval_seq(parse("(fst (pair (suc (fst (pair zero zero))) 4))"),
                   reg, cfg)
    assert res.trace is not None and len(res.trace) == res.steps


def test_gcd_example_run(reg, cfg):
    res = eval_seq(Ap(gcd_term(), Pair(Num(2), Num(4))), reg, cfg)
    assert res.value == Num(2)
    assert res.steps <= 25  # one application step over the measure 24


def test_parallel_pair_steps_both_children(reg, pcfg):
    t = Pair(Fst(Pair(ZERO, ZERO)), Snd(Pair(ZERO, ZERO)))
    assert step_par(t, reg, pcfg) == Pair(ZERO, ZERO)


def test_parin_value_inputs_take_five_steps(reg, pcfg):
    t = parin(Num(3), Num(4), "u", "v", Cff2("+", Var("u"), Var("v")))
    body = Cff2("+", Num(3), Num(4))
    for i in range(5):
        assert not alpha_eq(t, body)
        t = step_par(t, reg, pcfg)
    assert alpha_eq(t, body)


def test_parin_cost_is_max_plus_five(reg, pcfg):
    rng = Random(11)
    for _ in range(60):
        m1 = gen_closed_term(rng, NAT_T, 3)
        m2 = gen_closed_term(rng, NAT_T, 3)
        c1 = eval_par(m1, reg, pcfg).steps
        c2 = eval_par(m2, reg, pcfg).steps
        v1 = eval_par(m1, reg, pcfg).value
        v2 = eval_par(m2, reg, pcfg).value
        body = Cff2("max", Var("u"), Var("v"))
        t = parin(m1, m2, "u", "v", body)
        for _ in range(max(c1, c2) + 5):
            t = step_par(t, reg, pcfg)
        assert alpha_eq(t, subst(body, {"u": v1, "v": v2}))


def test_fib_span_example(reg, pcfg, budget, reg_budget=None):
    res = eval_par(Ap(fib_term(), Num(2)), reg, pcfg)
    assert as_numeral(res.value) == 1
    assert res.steps <= 1 + measure(fib_bound(), "n", Num(2),
                                    reg, TestBudget())


def test_span_never_exceeds_cost(reg, cfg, pcfg):
    rng = Random(3)
    for _ in range(500):
        e = gen_closed_term(rng, NAT_T if rng.random() < 0.8 else PAIR_T, 4)
        seq = eval_seq(e, reg, cfg)
        par = eval_par(e, reg, pcfg)
        assert par.steps <= seq.steps
        assert alpha_eq(par.value, seq.value)


def test_values_are_normal_in_both_modes(reg, cfg, pcfg):
    rng = Random(4)
    for _ in range(300):
        e = gen_closed_term(rng, NAT_T, 3)
        v = eval_seq(e, reg, cfg).value
        assert is_value(v)
        assert step_seq(v, reg, cfg) is None
        assert step_par(v, reg, pcfg) is None


def test_step_count_additivity(reg, cfg):
    rng = Random(9)
    for _ in range(200):
        e = gen_closed_term(rng, NAT_T, 4)
        total = eval_seq(e, reg, cfg).steps
        k = rng.randrange(total + 1)
        t = e
        for _ in range(k):
            t = step_seq(t, reg, cfg)
        assert k + eval_seq(t, reg, cfg).steps == total


def test_symbolic_let_fires_on_variable_pairs(reg, cfg):
    t = Let(Pair(Var("x"), Var("y")), "c", Fst(Var("c")))
    assert step_symbolic(t, reg, cfg) == Fst(Pair(Var("x"), Var("y")))


def test_symbolic_blocked_on_variable_scrutinee(reg, cfg):
    assert step_symbolic(Ifz(Var("x"), ZERO, "a", ZERO), reg, cfg) is None
    assert step_symbolic(Var("x"), reg, cfg) is None


def test_symbolic_replay_of_gcd_bound_chains(reg, cfg):
    # The bound at (0, y) reduces to 5 and at (x, y) to 8 + 8x even with
    # the second component left opaque.
    p = gcd_bound()
    v, _ = eval_symbolic(subst(p, {"a": Pair(ZERO, Var("y"))}), reg, cfg)
    assert v == Num(5)
    for x in (1, 2, 7):
        v, _ = eval_symbolic(subst(p, {"a": Pair(Num(x), Var("y"))}), reg, cfg)
        assert v == Num(8 + 8 * x)


def test_check_bound(reg, cfg):
    assert check_bound(ZERO, ZERO, reg, cfg).holds
    r = check_bound(Fst(Pair(ZERO, ZERO)), ZERO, reg, cfg)
    assert not r.holds and r.steps == 1


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_head_expansion_pads_bounds(seed):
    from catbench.registry import default_registry
    reg = default_registry()
    cfg = EvalConfig()
    rng = Random(seed)
    e = gen_closed_term(rng, NAT_T, 3)
    c = eval_seq(e, reg, cfg).steps
    wrapped = Let(ZERO, "pad", e)
    assert eval_seq(wrapped, reg, cfg).steps == c + 1


def test_fuel_error_carries_partial_trace(reg):
    omega = Fun("f", "a", Ap(Var("f"), Var("a")))
    with pytest.raises(FuelError) as e:
        eval_seq(Ap(omega, ZERO), reg, EvalConfig(fuel=10, trace=True))
    assert e.value.trace is not None and len(e.value.trace) == e.value.steps


def test_bound_examples_at_base_points(reg, cfg, pcfg):
    # the base cost line of gcd: 1 application step over the measure 5
    for y in (0, 3, 11):
        r = check_bound(Ap(gcd_term(), Pair(ZERO, Num(y))), Num(1 + 5),
                        reg, cfg)
        assert r.holds
    # the second Fibonacci point in span mode: measure 2 plus the step
    r = check_bound(Ap(fib_term(), Num(1)), Num(1 + 2), reg, pcfg)
    assert r.holds
