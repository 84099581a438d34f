import pytest

from catbench.derivations import RULES, check_derivation
from catbench.rulecases import cases
from catbench.semantics import TestBudget

ALL_CASES = cases()


@pytest.mark.parametrize(
    "case", ALL_CASES, ids=[f"{c.rule}-{c.name}-{c.accepted}" for c in ALL_CASES])
def test_rule_case(case, reg):
    budget = TestBudget(samples=6, mode=case.mode)
    verdict = check_derivation(case.derivation, reg, budget)
    assert verdict.ok == case.accepted, str(verdict)


def test_every_rule_has_accept_and_reject_fixtures():
    seen_ok = {c.rule for c in ALL_CASES if c.accepted}
    seen_bad = {c.rule for c in ALL_CASES if not c.accepted}
    assert seen_ok == RULES
    assert seen_bad == RULES


def test_unknown_rule_tag_rejected(reg):
    from dataclasses import replace
    case = next(c for c in ALL_CASES if c.accepted)
    bad = replace(case.derivation, rule="frobnicate")
    verdict = check_derivation(bad, reg, TestBudget(samples=4))
    assert verdict.failed and "unknown rule" in verdict.witness
