import json
from dataclasses import replace

import pytest

from catbench.derivations import (
    Derivation, SchemaError, check_derivation, check_script,
    derivation_from_json, derivation_to_json, load_script, soundness_probe,
)
from catbench.evaluation import eval_par, eval_seq
from catbench.harness import bundled_path
from catbench.judgments import CostMemberEqJ
from catbench.programs import (
    countdown_term, fib_term, gcd_term,
)
from catbench.proofs import (
    countdown_derivation, fib_derivation, gcd_derivation,
)
from catbench.rulecases import mutations
from catbench.semantics import TestBudget, den_sample, measure, type_denote
from catbench.syntax import (
    Ap, Expr, Fun, Var, ZERO, alpha_eq, parse, subst,
)

WORD = 2**31

SCRIPTS = {
    "gcd": ("seq", lambda: gcd_derivation(WORD)),
    "fib": ("par", lambda: fib_derivation()),
    "countdown": ("seq", lambda: countdown_derivation()),
}


@pytest.mark.parametrize("name", sorted(SCRIPTS))
def test_bundled_script_checks_and_probes(name, reg):
    mode, build = SCRIPTS[name]
    budget = TestBudget(samples=8, mode=mode)
    deriv = build()
    verdict = check_derivation(deriv, reg, budget)
    assert verdict.ok, str(verdict)
    probe = soundness_probe(deriv, reg, budget)
    assert probe.ok, str(probe)


@pytest.mark.parametrize("name", sorted(SCRIPTS))
def test_shipped_documents_match_the_builders(name, reg):
    mode, build = SCRIPTS[name]
    deriv, config = load_script(bundled_path(name, "derivation"))
    assert config["mode"] == mode
    assert deriv == build()


@pytest.mark.parametrize("name", sorted(SCRIPTS))
def test_check_script_on_shipped_documents(name, reg):
    report = check_script(bundled_path(name, "derivation"), reg,
                          TestBudget())
    assert report.verdict.ok, str(report.verdict)
    assert len(report.nodes) == sum(report.rule_counts.values())


def test_script_schema_errors(tmp_path, reg):
    bad = tmp_path / "bad.deriv.json"
    bad.write_text("{not json")
    with pytest.raises(SchemaError):
        check_script(bad, reg, TestBudget())

    doc = json.loads(bundled_path("countdown", "derivation").read_text())
    doc["derivation"]["rule"] = "made-up-rule"
    corrupted = tmp_path / "corrupted.deriv.json"
    corrupted.write_text(json.dumps(doc))
    with pytest.raises(SchemaError) as e:
        check_script(corrupted, reg, TestBudget())
    assert "made-up-rule" in str(e.value)

    doc2 = json.loads(bundled_path("countdown", "derivation").read_text())
    doc2["schema"] = "something/else"
    wrong_schema = tmp_path / "wrong.deriv.json"
    wrong_schema.write_text(json.dumps(doc2))
    with pytest.raises(SchemaError):
        check_script(wrong_schema, reg, TestBudget())


def test_json_round_trip():
    deriv = countdown_derivation()
    doc = derivation_to_json(deriv)
    assert derivation_from_json(doc) == deriv


@pytest.mark.parametrize(
    "mutation", mutations(), ids=[m.name for m in mutations()])
def test_mutations_rejected_at_the_right_node(mutation, reg):
    mode, build = SCRIPTS[mutation.script]
    budget = TestBudget(samples=6, mode=mode)
    verdict = check_derivation(mutation.build(build()), reg, budget)
    assert verdict.failed, "mutation was accepted"
    assert f"node {mutation.fails_at} " in verdict.witness, verdict.witness


def _rename_binders(e: Expr) -> Expr:
    """Rename every expression-level binder; alpha-equal result."""
    from dataclasses import fields
    from catbench.syntax import _BINDERS  # noqa: SLF001 (test-only probe)

    spec = _BINDERS.get(type(e).__name__)
    kw = {}
    renames = {}
    if spec:
        binder_fields = {n for body in spec for n in spec[body]}
        for bf in binder_fields:
            old = getattr(e, bf)
            renames.setdefault(old, old + "_rn")
    for f in fields(e):
        v = getattr(e, f.name)
        if isinstance(v, Expr):
            if spec and f.name in spec:
                v = subst(v, {old: Var(new) for old, new in renames.items()})
            kw[f.name] = _rename_binders(v)
        elif isinstance(v, str) and v in renames:
            kw[f.name] = renames[v]
        else:
            kw[f.name] = v
    return type(e)(**kw)


def _rename_tree(node: Derivation) -> Derivation:
    j = node.conclusion
    renamed = type(j)(j.tel, *[_rename_binders(p) for p in j.parts()])
    return replace(node, conclusion=renamed,
                   premises=tuple(_rename_tree(p) for p in node.premises))


def test_alpha_robustness_of_checking(reg):
    deriv = countdown_derivation()
    renamed = _rename_tree(deriv)
    assert renamed.conclusion == deriv.conclusion  # alpha-equal
    verdict = check_derivation(renamed, reg, TestBudget(samples=6))
    assert verdict.ok, str(verdict)


@pytest.mark.parametrize("name", sorted(SCRIPTS))
def test_recursive_calls_decrease_the_measure(name, reg):
    """Dynamic probe of the recursion rule: every argument passed to the
    introduced function during a run has a smaller measure than the root's."""
    mode, build = SCRIPTS[name]
    deriv = build()
    fun = deriv.conclusion.lhs
    ft = deriv.conclusion.ty
    assert isinstance(fun, Fun)
    budget = TestBudget(samples=5, mode=mode, nat_cap=8)
    dom = type_denote(ft.dom, reg, budget)
    args = den_sample(dom, budget.rng(), reg, budget)
    assert args
    run = eval_par if mode == "par" else eval_seq
    for v in args[:5]:
        root_measure = measure(ft.cost, ft.var, v, reg, budget)
        recorded: list[Expr] = []

        def on_beta(fn, arg):
            if alpha_eq(fn, fun):
                recorded.append(arg)

        run(Ap(fun, v), reg, budget.eval_config(), on_beta=on_beta)
        assert recorded and alpha_eq(recorded[0], v)
        for u in recorded[1:]:
            assert measure(ft.cost, ft.var, u, reg, budget) < root_measure


def test_probe_refutes_a_false_cost_claim(reg):
    """If an unsound rule admitted cost zero, the probe would catch it."""
    from catbench.syntax import Fst, Pair, NAT, Telescope
    bogus = Derivation(
        "instances",
        CostMemberEqJ(Telescope(), Fst(Pair(ZERO, ZERO)),
                      Fst(Pair(ZERO, ZERO)), NAT, ZERO))
    verdict = soundness_probe(bogus, reg, TestBudget())
    assert verdict.failed


def test_probe_on_open_hypothesis_judgment(reg):
    from catbench.proofs import hyp, tel
    from catbench.syntax import NAT
    node = hyp(tel(("a", NAT)), "a")
    assert soundness_probe(node, reg, TestBudget(samples=6)).ok


def test_golden_program_transcriptions(reg):
    for name, builder in [("gcd", gcd_term), ("fib", fib_term),
                          ("countdown", countdown_term)]:
        shipped = parse(bundled_path(name, "program").read_text())
        assert shipped == builder()


@pytest.mark.parametrize("name", sorted(SCRIPTS))
def test_oracle_never_refutes_an_accepted_node(name, reg):
    """Differential soundness: probe every node conclusion semantically.

    Judgments over function hypotheses come back unknown (they are not
    samplable without the recursion instantiation); nothing may fail.
    """
    mode, build = SCRIPTS[name]
    budget = TestBudget(samples=4, mode=mode, nat_cap=8)
    from catbench.semantics import check_open

    def walk(node, path):
        verdict = check_open(node.conclusion, reg, budget)
        assert not verdict.failed, f"{path} ({node.rule}): {verdict}"
        for i, p in enumerate(node.premises):
            walk(p, path + (i,))

    walk(build(), ())


def test_judgment_json_all_forms():
    from catbench.judgments import (
        MemberEqJ, TypeEqJ, ValueMemberEqJ, judgment_from_json,
        judgment_to_json,
    )
    from catbench.syntax import NAT, Num, Telescope
    tel = Telescope((("a", NAT),))
    forms = [
        TypeEqJ(tel, NAT, NAT),
        MemberEqJ(tel, Var("a"), Var("a"), NAT),
        ValueMemberEqJ(tel, Var("a"), Var("a"), NAT),
        CostMemberEqJ(tel, Var("a"), Var("a"), NAT, Num(0)),
    ]
    for j in forms:
        assert judgment_from_json(judgment_to_json(j)) == j
