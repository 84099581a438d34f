"""Unit fixtures for every derivation rule, plus the bundled-script mutations.

Each rule has at least one derivation the checker must accept and one it
must reject.  The mutation set corrupts single nodes of the bundled scripts;
every mutation records the path at which the checker must report failure.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

from .derivations import Derivation
from .judgments import (
    CostMemberEqJ, Judgment, MemberEqJ, TypeEqJ, ValueMemberEqJ,
)
from .proofs import (
    countdown_derivation, d, fib_derivation, gcd_derivation, hyp, hyp_mem,
    hyp_val, inst, member_as_cost0, nat_f, nat_f_mem, num_mem, suc_mem, tel,
)
from .syntax import (
    Ap, Arith, Cff1, Cff2, Eq, Expr, Fst, Fun, Funtime, Ifz, Let, Num,
    Pair, Rel2, Rel3, Sigma, Snd, Subset, Telescope, TRIV, Univ, Var, NAT,
    ZERO, parin, suc,
)


@dataclass(frozen=True)
class RuleCase:
    rule: str
    name: str
    derivation: Derivation
    accepted: bool
    mode: str = "seq"


def num_val(t: Telescope, k: int) -> Derivation:
    return d("conversion", ValueMemberEqJ(t, Num(k), Num(k), NAT),
             num_mem(t, k))


def _pair00() -> Expr:
    return Pair(ZERO, ZERO)


def _id_fun() -> Expr:
    return Fun("g", "v", Var("v"))


def _fst_cost1(t: Telescope) -> Derivation:
    """t |- fst (pair 0 0) = 0 in nat [1], by one head-expansion step."""
    base = member_as_cost0(t, d("nat-i-zero", MemberEqJ(t, ZERO, ZERO, NAT)))
    return d("head-exp",
             CostMemberEqJ(t, Fst(_pair00()), ZERO, NAT, Num(1)), base)


def cases(word_size: int = 2**31) -> list[RuleCase]:
    t0 = tel()
    ta = tel(("a", NAT))
    w = Num(word_size)
    out: list[RuleCase] = []

    def ok(rule, name, deriv, mode="seq"):
        out.append(RuleCase(rule, name, deriv, True, mode))

    def bad(rule, name, deriv, mode="seq"):
        out.append(RuleCase(rule, name, deriv, False, mode))

    # hyp
    ok("hyp", "variable at cost zero", hyp(ta, "a"))
    bad("hyp", "nonzero cost",
        d("hyp", CostMemberEqJ(ta, Var("a"), Var("a"), NAT, Num(1))))

    # weaken
    zero_mem = d("nat-i-zero", MemberEqJ(t0, ZERO, ZERO, NAT))
    ok("weaken", "append a binder",
       d("weaken", MemberEqJ(ta, ZERO, ZERO, NAT), zero_mem))
    bad("weaken", "body changed",
        d("weaken", MemberEqJ(ta, Num(1), Num(1), NAT), zero_mem))

    # conversion
    ok("conversion", "member to value member",
       d("conversion", ValueMemberEqJ(t0, ZERO, ZERO, NAT), zero_mem))
    nonvalue = d("instances", MemberEqJ(t0, Fst(_pair00()), ZERO, NAT))
    bad("conversion", "non-value subject",
        d("conversion", CostMemberEqJ(t0, Fst(_pair00()), ZERO, NAT, ZERO),
          nonvalue))

    # seq
    p1 = _fst_cost1(ta)
    tx = ta.extend("v", NAT)
    p2 = member_as_cost0(tx, suc_mem(tx, hyp_mem(tx, "v")))
    seq_ok = d("seq",
               CostMemberEqJ(ta,
                             Let(Fst(_pair00()), "v", suc(Var("v"))),
                             Let(ZERO, "v", suc(Var("v"))),
                             Let(Fst(_pair00()), "v", NAT),
                             Cff2("+", Num(1),
                                  suc(Let(Fst(_pair00()), "v", ZERO)))),
               p1, p2)
    ok("seq", "cost sequencing", seq_ok)
    bad("seq", "wrong cost template",
        d("seq",
          CostMemberEqJ(ta,
                        Let(Fst(_pair00()), "v", suc(Var("v"))),
                        Let(ZERO, "v", suc(Var("v"))),
                        Let(Fst(_pair00()), "v", NAT),
                        Cff2("+", Num(1), Let(Fst(_pair00()), "v", ZERO))),
          p1, p2))

    # open-head-exp
    nat_eq = d("univ-e", TypeEqJ(ta, NAT, NAT), nat_f_mem(ta))
    ok("open-head-exp", "collapse a let type",
       d("open-head-exp", TypeEqJ(ta, Let(Var("a"), "v", NAT), NAT),
         nat_eq, steps=1))
    bad("open-head-exp", "wrong step count",
        d("open-head-exp", TypeEqJ(ta, Let(Var("a"), "v", NAT), NAT),
          nat_eq, steps=2))

    # head-exp
    ok("head-exp", "projection step", _fst_cost1(t0))
    base0 = member_as_cost0(t0, zero_mem)
    bad("head-exp", "cost not a successor",
        d("head-exp", CostMemberEqJ(t0, Fst(_pair00()), ZERO, NAT, Num(2)),
          base0))

    # cost-step-pad
    two_lets = Let(ZERO, "u", Let(ZERO, "u", ZERO))
    ok("cost-step-pad", "two explicit steps",
       d("cost-step-pad",
         CostMemberEqJ(t0, two_lets, ZERO, NAT, Cff2("+", Num(2), ZERO)),
         base0, left_steps=2, right_steps=0))
    bad("cost-step-pad", "pad below the step count",
        d("cost-step-pad",
          CostMemberEqJ(t0, two_lets, ZERO, NAT, Cff2("+", Num(1), ZERO)),
          base0, left_steps=2, right_steps=0))

    # cost-replace
    eq_bounds = inst(MemberEqJ(t0, ZERO, Cff2("+", ZERO, ZERO), NAT))
    ok("cost-replace", "equal bound swap",
       d("cost-replace",
         CostMemberEqJ(t0, ZERO, ZERO, NAT, Cff2("+", ZERO, ZERO)),
         base0, eq_bounds))
    bad("cost-replace", "premise equates the wrong bound",
        d("cost-replace",
          CostMemberEqJ(t0, ZERO, ZERO, NAT, Cff2("+", ZERO, ZERO)),
          _fst_cost1(t0), eq_bounds))

    # resp-eq
    let_nat = Let(ZERO, "v", NAT)
    ok("resp-eq", "transport along type equality",
       d("resp-eq", MemberEqJ(t0, ZERO, ZERO, let_nat),
         inst(TypeEqJ(t0, NAT, let_nat)), zero_mem))
    bad("resp-eq", "premise type mismatch",
        d("resp-eq", MemberEqJ(t0, ZERO, ZERO, let_nat),
          inst(TypeEqJ(t0, let_nat, NAT)), zero_mem))

    # univ-f
    ok("univ-f", "universe in the next universe",
       d("univ-f", ValueMemberEqJ(t0, Univ(1), Univ(1), Univ(2)), level=1))
    bad("univ-f", "level off by one",
        d("univ-f", ValueMemberEqJ(t0, Univ(1), Univ(1), Univ(3)), level=1))

    # univ-e
    ok("univ-e", "membership gives type equality",
       d("univ-e", TypeEqJ(t0, NAT, NAT), nat_f_mem(t0)))
    bad("univ-e", "conclusion subjects differ",
        d("univ-e", TypeEqJ(t0, NAT, Univ(0)), nat_f_mem(t0)))

    # eq-f / eq-i / eq-e
    eqty = Eq(NAT, ZERO, ZERO)
    ok("eq-f", "equality type formation",
       d("eq-f", ValueMemberEqJ(t0, eqty, eqty, Univ(0)),
         nat_f_mem(t0), zero_mem, zero_mem))
    bad("eq-f", "operand type mismatch",
        d("eq-f", ValueMemberEqJ(t0, eqty, eqty, Univ(0)),
          nat_f_mem(t0), zero_mem,
          d("instances", MemberEqJ(t0, TRIV, TRIV, Eq(NAT, ZERO, ZERO)))))
    ok("eq-i", "reflexivity proof",
       d("eq-i", ValueMemberEqJ(t0, TRIV, TRIV, eqty), zero_mem))
    bad("eq-i", "wrong subjects",
        d("eq-i", ValueMemberEqJ(t0, ZERO, ZERO, eqty), zero_mem))
    eq_triv = d("eq-i", ValueMemberEqJ(t0, TRIV, TRIV, eqty), zero_mem)
    ok("eq-e", "equality elimination",
       d("eq-e", MemberEqJ(t0, ZERO, ZERO, NAT), eq_triv))
    bad("eq-e", "wrong conclusion type",
        d("eq-e", MemberEqJ(t0, ZERO, ZERO, Univ(0)), eq_triv))

    # nat-f / nat-i
    ok("nat-f", "nat in any universe", nat_f(t0, 3))
    bad("nat-f", "subject is not nat",
        d("nat-f", ValueMemberEqJ(t0, TRIV, TRIV, Univ(0))))
    ok("nat-i-zero", "zero", zero_mem)
    bad("nat-i-zero", "wrong numeral",
        d("nat-i-zero", MemberEqJ(t0, Num(1), Num(1), NAT)))
    ok("nat-i-suc", "canonical successor",
       d("nat-i-suc", MemberEqJ(t0, Num(1), Num(1), NAT), zero_mem))
    bad("nat-i-suc", "skipped a successor",
        d("nat-i-suc", MemberEqJ(t0, Num(2), Num(2), NAT), zero_mem))

    # ffe1 / ffe2
    one_mem = num_mem(t0, 1)
    ok("ffe1", "binary foreign call",
       d("ffe1", MemberEqJ(t0, Cff2("+", ZERO, Num(1)),
                           Cff2("+", ZERO, Num(1)), NAT),
         zero_mem, one_mem))
    bad("ffe1", "unregistered name",
        d("ffe1", MemberEqJ(t0, Cff1("frob", ZERO), Cff1("frob", ZERO), NAT),
          zero_mem))
    ok("ffe2", "unit-cost foreign call",
       d("ffe2", CostMemberEqJ(t0, Cff2("max", ZERO, Num(1)),
                               Cff2("max", ZERO, Num(1)), NAT, Num(1)),
         num_val(t0, 0), num_val(t0, 1)))
    bad("ffe2", "wrong cost",
        d("ffe2", CostMemberEqJ(t0, Cff2("max", ZERO, Num(1)),
                                Cff2("max", ZERO, Num(1)), NAT, Num(2)),
          num_val(t0, 0), num_val(t0, 1)))

    # nat-e1
    tfam = ta.extend("c", NAT)
    tz = ta.extend("pz", Eq(NAT, ZERO, Var("a")))
    tn = ta.extend("i", NAT).extend("pq", Eq(NAT, suc(Var("i")), Var("a")))
    nat_e1_ok = d("nat-e1",
                  MemberEqJ(ta, Ifz(Var("a"), ZERO, "i", Var("i")),
                            Ifz(Var("a"), ZERO, "i", Var("i")),
                            Let(Var("a"), "c", NAT)),
                  nat_f_mem(tfam),
                  hyp_mem(ta, "a"),
                  d("nat-i-zero", MemberEqJ(tz, ZERO, ZERO, NAT)),
                  hyp_mem(tn, "i"))
    ok("nat-e1", "case analysis at nat", nat_e1_ok)
    bad("nat-e1", "conclusion type not sequenced",
        d("nat-e1",
          MemberEqJ(ta, Ifz(Var("a"), ZERO, "i", Var("i")),
                    Ifz(Var("a"), ZERO, "i", Var("i")), NAT),
          nat_f_mem(tfam), hyp_mem(ta, "a"),
          d("nat-i-zero", MemberEqJ(tz, ZERO, ZERO, NAT)),
          hyp_mem(tn, "i")))

    # nat-e2
    e2_zero = member_as_cost0(tz, d("nat-i-zero", MemberEqJ(tz, ZERO, ZERO, NAT)))
    e2_suc = member_as_cost0(tn, suc_mem(tn, hyp_mem(tn, "i")))
    e2_cost = Ifz(Var("a"), suc(ZERO), "i", suc(ZERO))
    nat_e2_ok = d("nat-e2",
                  CostMemberEqJ(ta, Ifz(Var("a"), ZERO, "i", suc(Var("i"))),
                                Ifz(Var("a"), ZERO, "i", suc(Var("i"))),
                                NAT, e2_cost),
                  nat_f_mem(tfam),
                  hyp_val(ta, "a"),
                  d("nat-i-zero", MemberEqJ(ta, ZERO, ZERO, NAT)),
                  d("nat-i-zero", MemberEqJ(tfam, ZERO, ZERO, NAT)),
                  e2_zero, e2_suc)
    ok("nat-e2", "costed case analysis", nat_e2_ok)
    bad("nat-e2", "missing successor on a branch bound",
        d("nat-e2",
          CostMemberEqJ(ta, Ifz(Var("a"), ZERO, "i", suc(Var("i"))),
                        Ifz(Var("a"), ZERO, "i", suc(Var("i"))),
                        NAT, Ifz(Var("a"), ZERO, "i", suc(ZERO))),
          nat_f_mem(tfam), hyp_val(ta, "a"),
          d("nat-i-zero", MemberEqJ(ta, ZERO, ZERO, NAT)),
          d("nat-i-zero", MemberEqJ(tfam, ZERO, ZERO, NAT)),
          e2_zero, e2_suc))

    # subset-f / subset-i / subset-e
    tb = ta.extend("b", NAT)
    rel_ab = Rel2("<", Var("b"), suc(Var("a")))
    sub_ty = Subset("b", NAT, rel_ab)
    rel_univ = d("conversion", MemberEqJ(tb, rel_ab, rel_ab, Univ(0)),
                 d("rel-f", ValueMemberEqJ(tb, rel_ab, rel_ab, Univ(0)),
                   hyp_mem(tb, "b"), suc_mem(tb, hyp_mem(tb, "a"))))
    ok("subset-f", "refinement formation",
       d("subset-f", ValueMemberEqJ(ta, sub_ty, sub_ty, Univ(0)),
         nat_f_mem(ta), rel_univ))
    bad("subset-f", "universe level mismatch",
        d("subset-f", ValueMemberEqJ(ta, sub_ty, sub_ty, Univ(1)),
          nat_f_mem(ta), rel_univ))
    subset_i_ok = d("subset-i",
                    CostMemberEqJ(ta, ZERO, ZERO, sub_ty, ZERO),
                    nat_f_mem(ta), rel_univ,
                    member_as_cost0(ta, zero_mem_at(ta)),
                    inst(MemberEqJ(ta, TRIV, TRIV, Let(ZERO, "b", rel_ab))))
    ok("subset-i", "refinement introduction", subset_i_ok)
    bad("subset-i", "witness at the wrong type",
        d("subset-i",
          CostMemberEqJ(ta, ZERO, ZERO, sub_ty, ZERO),
          nat_f_mem(ta), rel_univ,
          member_as_cost0(ta, zero_mem_at(ta)),
          inst(MemberEqJ(ta, TRIV, TRIV, rel_ab))))
    subset_val = d("conversion", ValueMemberEqJ(ta, ZERO, ZERO, sub_ty),
                   subset_i_ok)
    ok("subset-e", "forget the refinement",
       d("subset-e", ValueMemberEqJ(ta, ZERO, ZERO, NAT), subset_val, part=1))
    closed_sub = Subset("b", NAT, Rel2("<", Var("b"), Num(4)))
    closed_intro = d(
        "subset-i", CostMemberEqJ(t0, ZERO, ZERO, closed_sub, ZERO),
        nat_f_mem(t0),
        d("conversion",
          MemberEqJ(tel(("b", NAT)), Rel2("<", Var("b"), Num(4)),
                    Rel2("<", Var("b"), Num(4)), Univ(0)),
          d("rel-f", ValueMemberEqJ(tel(("b", NAT)), Rel2("<", Var("b"), Num(4)),
                                    Rel2("<", Var("b"), Num(4)), Univ(0)),
            hyp_mem(tel(("b", NAT)), "b"), num_mem(tel(("b", NAT)), 4))),
        member_as_cost0(t0, zero_mem),
        inst(MemberEqJ(t0, TRIV, TRIV,
                       Let(ZERO, "b", Rel2("<", Var("b"), Num(4))))))
    closed_val = d("conversion", ValueMemberEqJ(t0, ZERO, ZERO, closed_sub),
                   closed_intro)
    ok("subset-e", "extract the refinement proof",
       d("subset-e", ValueMemberEqJ(t0, TRIV, TRIV, Rel2("<", ZERO, Num(4))),
         closed_val, part=2))
    bad("subset-e", "part 2 in a nonempty context",
        d("subset-e", ValueMemberEqJ(ta, TRIV, TRIV, rel_ab_at_zero(rel_ab)),
          subset_val, part=2))

    # rel-f / rel-i / rel-e
    rel23 = Rel2("<", Num(2), Num(3))
    ok("rel-f", "relation type formation",
       d("rel-f", ValueMemberEqJ(t0, rel23, rel23, Univ(0)),
         num_mem(t0, 2), num_mem(t0, 3)))
    bad("rel-f", "unregistered relation",
        d("rel-f", ValueMemberEqJ(t0, Rel2("divides", Num(2), Num(4)),
                                  Rel2("divides", Num(2), Num(4)), Univ(0)),
          num_mem(t0, 2), num_mem(t0, 4)))
    ok("rel-i", "relation holds",
       d("rel-i", ValueMemberEqJ(t0, TRIV, TRIV, rel23), operands=[2, 3]))
    bad("rel-i", "relation refuted",
        d("rel-i", ValueMemberEqJ(t0, TRIV, TRIV, Rel2("<", Num(3), Num(3)))))
    ok("rel-i", "ternary relation",
       d("rel-i", ValueMemberEqJ(t0, TRIV, TRIV,
                                 Rel3("gcdProp", Num(2), Num(2), Num(4)))))
    rel_member = d("conversion", MemberEqJ(t0, TRIV, TRIV, rel23),
                   d("rel-i", ValueMemberEqJ(t0, TRIV, TRIV, rel23)))
    ok("rel-e", "first operand numeral",
       d("rel-e", MemberEqJ(t0, Num(2), Num(2), NAT), rel_member, part=1))
    bad("rel-e", "wrong numeral",
        d("rel-e", MemberEqJ(t0, Num(2), Num(3), NAT), rel_member, part=1))

    # sigma-f / sigma-i / sigma-e
    sig_ty = Sigma("b", NAT, NAT)
    ok("sigma-f", "pair type formation",
       d("sigma-f", ValueMemberEqJ(t0, sig_ty, sig_ty, Univ(0)),
         nat_f_mem(t0), nat_f_mem(tel(("b", NAT)))))
    bad("sigma-f", "component universe mismatch",
        d("sigma-f", ValueMemberEqJ(t0, sig_ty, sig_ty, Univ(0)),
          nat_f_mem(t0), nat_f_mem(tel(("b", NAT)), 1)))
    sigma_i_ok = d("sigma-i",
                   ValueMemberEqJ(t0, _pair00(), _pair00(), sig_ty),
                   nat_f_mem(t0), nat_f_mem(tel(("b", NAT))),
                   num_val(t0, 0), num_val(t0, 0))
    ok("sigma-i", "pair introduction", sigma_i_ok)
    bad("sigma-i", "component at the wrong type",
        d("sigma-i", ValueMemberEqJ(t0, Pair(ZERO, TRIV),
                                    Pair(ZERO, TRIV), sig_ty),
          nat_f_mem(t0), nat_f_mem(tel(("b", NAT))),
          num_val(t0, 0),
          d("instances", ValueMemberEqJ(t0, TRIV, TRIV, NAT))))
    ok("sigma-e", "first projection",
       d("sigma-e", CostMemberEqJ(t0, Fst(_pair00()), Fst(_pair00()),
                                  NAT, Num(1)),
         sigma_i_ok, part=1))
    ok("sigma-e", "second projection",
       d("sigma-e", CostMemberEqJ(t0, Snd(_pair00()), Snd(_pair00()),
                                  Let(Fst(_pair00()), "b", NAT), Num(1)),
         sigma_i_ok, part=2))
    bad("sigma-e", "cost must be one",
        d("sigma-e", CostMemberEqJ(t0, Fst(_pair00()), Fst(_pair00()),
                                   NAT, ZERO),
          sigma_i_ok, part=1))

    # funtime-f / funtime-i / funtime-e
    ft_ty = Funtime("v", NAT, NAT, ZERO)
    ok("funtime-f", "timed function type formation",
       d("funtime-f", ValueMemberEqJ(t0, ft_ty, ft_ty, Univ(0)),
         nat_f_mem(t0), nat_f_mem(tel(("v", NAT))),
         d("nat-i-zero", MemberEqJ(tel(("v", NAT)), ZERO, ZERO, NAT))))
    bad("funtime-f", "bound not a natural",
        d("funtime-f", ValueMemberEqJ(t0, Funtime("v", NAT, NAT, TRIV),
                                      Funtime("v", NAT, NAT, TRIV), Univ(0)),
          nat_f_mem(t0), nat_f_mem(tel(("v", NAT))),
          d("instances", MemberEqJ(tel(("v", NAT)), TRIV, TRIV, NAT))))

    ok("funtime-i", "countdown verification", countdown_derivation())
    cd_bad = countdown_derivation()
    bad("funtime-i", "recursion hypothesis not restricted",
        replace(cd_bad, premises=cd_bad.premises[:3] + (
            _rebind_hyp_type(cd_bad.premises[3]),)))

    id_member = inst(ValueMemberEqJ(t0, _id_fun(), _id_fun(), ft_ty))
    ok("funtime-e", "apply a timed function",
       d("funtime-e",
         CostMemberEqJ(t0, Ap(_id_fun(), Num(3)), Ap(_id_fun(), Num(3)),
                       NAT, suc(ZERO)),
         id_member, num_val(t0, 3)))
    bad("funtime-e", "application step not counted",
        d("funtime-e",
          CostMemberEqJ(t0, Ap(_id_fun(), Num(3)), Ap(_id_fun(), Num(3)),
                        NAT, ZERO),
          id_member, num_val(t0, 3)))

    # cost-weaken
    le_rel = d("conversion",
               MemberEqJ(t0, TRIV, TRIV, Rel2("<=", Num(1), Num(5))),
               d("rel-i", ValueMemberEqJ(t0, TRIV, TRIV,
                                         Rel2("<=", Num(1), Num(5)))))
    ok("cost-weaken", "relax a bound",
       d("cost-weaken", CostMemberEqJ(t0, Fst(_pair00()), ZERO, NAT, Num(5)),
         _fst_cost1(t0), le_rel))
    bad("cost-weaken", "relation bounds the wrong cost",
        d("cost-weaken", CostMemberEqJ(t0, Fst(_pair00()), ZERO, NAT, Num(5)),
          base0, le_rel))

    # arith-e
    lt_w = lambda k: d("conversion",
                       MemberEqJ(t0, TRIV, TRIV, Rel2("<", Num(k), w)),
                       d("rel-i", ValueMemberEqJ(t0, TRIV, TRIV,
                                                 Rel2("<", Num(k), w))))
    ok("arith-e", "guarded machine addition",
       d("arith-e", CostMemberEqJ(t0, Arith("+", Num(2), Num(3)),
                                  Arith("+", Num(2), Num(3)), NAT, Num(1)),
         num_val(t0, 2), num_val(t0, 3), lt_w(2), lt_w(3)))
    not_w = d("conversion", MemberEqJ(t0, TRIV, TRIV, Rel2("<", Num(2), Num(16))),
              d("rel-i", ValueMemberEqJ(t0, TRIV, TRIV,
                                        Rel2("<", Num(2), Num(16)))))
    bad("arith-e", "guard against the wrong bound",
        d("arith-e", CostMemberEqJ(t0, Arith("+", Num(2), Num(3)),
                                   Arith("+", Num(2), Num(3)), NAT, Num(1)),
          num_val(t0, 2), num_val(t0, 3), not_w, lt_w(3)))

    # bin-seq (parallel mode)
    txy = tel(("x", NAT), ("y", NAT))
    add = d("ffe2",
            CostMemberEqJ(txy, Cff2("+", Var("x"), Var("y")),
                          Cff2("+", Var("x"), Var("y")), NAT, Num(1)),
            hyp_val(txy, "x"), hyp_val(txy, "y"))
    bin_concl = CostMemberEqJ(
        t0,
        parin(ZERO, ZERO, "x", "y", Cff2("+", Var("x"), Var("y"))),
        parin(ZERO, ZERO, "x", "y", Cff2("+", Var("x"), Var("y"))),
        Let(ZERO, "x", Let(ZERO, "y", NAT)),
        Cff2("+", Cff2("+", Cff2("max", ZERO, ZERO), Num(5)),
             Let(ZERO, "x", Let(ZERO, "y", Num(1)))))
    bin_ok = d("bin-seq", bin_concl,
               member_as_cost0(t0, zero_mem), member_as_cost0(t0, zero_mem),
               add)
    ok("bin-seq", "parallel pair sequencing", bin_ok, mode="par")
    bad("bin-seq", "sequential mode", bin_ok, mode="seq")

    # instances
    ok("instances", "open successor membership",
       inst(MemberEqJ(ta, suc(Var("a")), suc(Var("a")), NAT)))
    bad("instances", "projection from a natural",
        inst(MemberEqJ(ta, Fst(Var("a")), Fst(Var("a")), NAT)))

    return out


def zero_mem_at(t: Telescope) -> Derivation:
    return d("nat-i-zero", MemberEqJ(t, ZERO, ZERO, NAT))


def rel_ab_at_zero(rel: Expr) -> Expr:
    from .syntax import subst
    return subst(rel, {"b": ZERO})


def _rebind_hyp_type(p4: Derivation) -> Derivation:
    """Corrupt a funtime-i recursion premise: unrestricted self type."""
    tel_entries = list(p4.conclusion.tel.entries)
    fv, fvty = tel_entries[-1]
    assert isinstance(fvty, Funtime)
    unrestricted = Funtime(fvty.var, NAT, fvty.cod, fvty.cost)
    tel_entries[-1] = (fv, unrestricted)
    return _retel(p4, Telescope(tuple(tel_entries)), depth=0)


def _retel(node: Derivation, new_tel: Telescope, depth: int) -> Derivation:
    j = node.conclusion
    return replace(node, conclusion=type(j)(new_tel, *j.parts()))


# ---------------------------------------------------------------------------
# Mutations of the bundled scripts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Mutation:
    name: str
    script: str  # "gcd" | "fib" | "countdown"
    build: Callable[[Derivation], Derivation]
    fails_at: str  # path at which the checker must report the failure


def _node_at(root: Derivation, path: tuple[int, ...]) -> Derivation:
    node = root
    for i in path:
        node = node.premises[i]
    return node


def _replace_at(root: Derivation, path: tuple[int, ...],
                fn: Callable[[Derivation], Derivation]) -> Derivation:
    if not path:
        return fn(root)
    head, rest = path[0], path[1:]
    prems = list(root.premises)
    prems[head] = _replace_at(prems[head], rest, fn)
    return replace(root, premises=tuple(prems))


def find_paths(root: Derivation,
               pred: Callable[[Derivation], bool]) -> list[tuple[int, ...]]:
    found: list[tuple[int, ...]] = []

    def walk(node: Derivation, path: tuple[int, ...]):
        if pred(node):
            found.append(path)
        for i, p in enumerate(node.premises):
            walk(p, path + (i,))

    walk(root, ())
    return found


def _swap_judgment(fn: Callable[[Judgment], Judgment]):
    def go(node: Derivation) -> Derivation:
        return replace(node, conclusion=fn(node.conclusion))
    return go


def mutations() -> list[Mutation]:
    """Corrupted bundled scripts; each must be rejected at the given node."""
    muts: list[Mutation] = []

    def add(name, script, path, change, fails_at=None):
        muts.append(Mutation(
            name, script,
            (lambda root, p=path, c=change: _replace_at(root, p, c)),
            fails_at if fails_at is not None else ".".join(map(str, path)) or "root"))

    def is_rule(rule):
        return lambda n: n.rule == rule

    # --- gcd ---------------------------------------------------------------
    gcd = gcd_derivation(2**31)

    # 1. leaf numeral introduction claims the wrong numeral
    p_natz = find_paths(gcd, is_rule("nat-i-zero"))[0]
    add("gcd: zero introduction claims one", "gcd", p_natz,
        _swap_judgment(lambda j: type(j)(j.tel, Num(1), Num(1), j.ty)))

    # 2. hypothesis rule at a type other than the declared one
    p_hyp = find_paths(gcd, lambda n: n.rule == "hyp"
                       and n.conclusion.ty != NAT)[0]
    add("gcd: hypothesis at the wrong type", "gcd", p_hyp,
        _swap_judgment(lambda j: CostMemberEqJ(j.tel, j.lhs, j.rhs, NAT,
                                               j.cost)))

    # 3. the zero branch claims gcd(1, y) instead of gcd(0, y)
    def bad_zero_witness(n: Derivation) -> bool:
        if n.rule != "instances":
            return False
        j = n.conclusion
        return (isinstance(j, MemberEqJ) and isinstance(j.ty, Let)
                and isinstance(j.ty.bound, Var) and j.ty.bound.name == "y")

    p_zw = find_paths(gcd, bad_zero_witness)[0]
    add("gcd: zero branch with a false divisor fact", "gcd", p_zw,
        _swap_judgment(lambda j: type(j)(
            j.tel, j.lhs, j.rhs, _subst_let_body(j.ty, _bump_rel3))))

    # 4. the recursive call claims a too-small bound
    def rec_call(n: Derivation) -> bool:
        if n.rule != "instances":
            return False
        j = n.conclusion
        return isinstance(j, CostMemberEqJ) and isinstance(j.lhs, Ap)

    p_rec = find_paths(gcd, rec_call)[0]
    add("gcd: recursive call bound shrunk", "gcd", p_rec,
        _swap_judgment(lambda j: CostMemberEqJ(j.tel, j.lhs, j.rhs, j.ty,
                                               Num(3))))

    # 5. machine guard against a non-word bound
    def arith_guard(n: Derivation) -> bool:
        if n.rule != "instances":
            return False
        j = n.conclusion
        return (isinstance(j, MemberEqJ) and isinstance(j.ty, Rel2)
                and j.ty.rel == "<" and isinstance(j.ty.lhs, Var)
                and j.ty.lhs.name == "y")

    p_guard = find_paths(gcd, arith_guard)[0]
    add("gcd: word guard against zero", "gcd", p_guard,
        _swap_judgment(lambda j: type(j)(
            j.tel, j.lhs, j.rhs, Rel2("<", j.ty.lhs, ZERO))))

    # 6. projection eliminator invoked for the wrong component
    p_sige = find_paths(gcd, is_rule("sigma-e"))[0]
    add("gcd: projection part swapped", "gcd", p_sige,
        lambda n: replace(n, payload={"part": 2}))

    # --- fib ---------------------------------------------------------------
    fib = fib_derivation()

    def weaken_line(n: Derivation) -> bool:
        if n.rule != "instances":
            return False
        j = n.conclusion
        return (isinstance(j, MemberEqJ) and isinstance(j.ty, Rel2)
                and j.ty.rel == "<=")

    # 7. the dropped application step from the example's own bound:
    # weakening to a slope-8 line is refuted at sampled instances.
    p_weak = find_paths(fib, weaken_line)[0]

    def to_slope8(j: Judgment) -> Judgment:
        ty = j.ty
        assert isinstance(ty, Rel2) and isinstance(ty.rhs, Cff2)
        return type(j)(j.tel, j.lhs, j.rhs,
                       Rel2("<=", ty.lhs, Cff2("*", Num(8), ty.rhs.rhs)))

    add("fib: weakened to the slope-8 line", "fib", p_weak,
        _swap_judgment(to_slope8))

    # 8. binary sequencing overhead miscounted
    p_bin = find_paths(fib, is_rule("bin-seq"))[0]

    def shrink_bin(n: Derivation) -> Derivation:
        j = n.conclusion
        assert isinstance(j, CostMemberEqJ) and isinstance(j.cost, Cff2)
        outer = j.cost
        inner = outer.lhs
        assert isinstance(inner, Cff2)
        new_cost = Cff2("+", Cff2("+", inner.lhs, Num(4)), outer.rhs)
        return replace(n, conclusion=CostMemberEqJ(j.tel, j.lhs, j.rhs,
                                                   j.ty, new_cost))

    add("fib: sequencing overhead of four", "fib", p_bin, shrink_bin)

    # 9. decrease witness reversed
    def decrease(n: Derivation) -> bool:
        if n.rule != "instances":
            return False
        j = n.conclusion
        return (isinstance(j, MemberEqJ) and isinstance(j.ty, Let)
                and isinstance(j.ty.body, Rel2) and j.ty.body.rel == "<")

    p_dec = find_paths(fib, decrease)[0]

    def reverse_decrease(j: Judgment) -> Judgment:
        ty = j.ty
        body = ty.body
        return type(j)(j.tel, j.lhs, j.rhs,
                       Let(ty.bound, ty.var,
                           Rel2("<", body.rhs, body.lhs)))

    add("fib: measure increase instead of decrease", "fib", p_dec,
        _swap_judgment(reverse_decrease))

    # 10. outer case scrutinee hypothesis broken
    p_hv = find_paths(fib, lambda n: n.rule == "conversion"
                      and isinstance(n.conclusion, ValueMemberEqJ)
                      and n.conclusion.lhs == Var("n"))[0]
    add("fib: scrutinee claimed at the universe", "fib", p_hv,
        _swap_judgment(lambda j: ValueMemberEqJ(j.tel, j.lhs, j.rhs, Univ(0))))

    # --- countdown ----------------------------------------------------------
    cd = countdown_derivation()

    # 11. the application step of the recursive call dropped
    p_fe = find_paths(cd, is_rule("funtime-e"))[0]

    def drop_suc(n: Derivation) -> Derivation:
        j = n.conclusion
        assert isinstance(j, CostMemberEqJ)
        from .syntax import Suc
        assert isinstance(j.cost, Suc)
        return replace(n, conclusion=CostMemberEqJ(j.tel, j.lhs, j.rhs,
                                                   j.ty, j.cost.arg))

    add("countdown: missing application step", "countdown", p_fe, drop_suc)

    # 12. total bound halved
    p_cr = find_paths(cd, is_rule("cost-replace"))[0]

    def halve(n: Derivation) -> Derivation:
        j = n.conclusion
        new_cost = suc(Cff2("*", Num(1), Var("a")))
        prem2 = n.premises[1]
        pj = prem2.conclusion
        new_prem2 = replace(prem2, conclusion=MemberEqJ(
            pj.tel, pj.lhs, new_cost, NAT))
        return replace(n, conclusion=CostMemberEqJ(j.tel, j.lhs, j.rhs, j.ty,
                                                   new_cost),
                       premises=(n.premises[0], new_prem2))

    add("countdown: bound halved", "countdown", p_cr, halve,
        fails_at=".".join(map(str, p_cr + (1,))))

    return muts


def _parent_str(path: tuple[int, ...]) -> str:
    return ".".join(map(str, path)) or "root"


def _subst_let_body(ty: Expr, fn: Callable[[Expr], Expr]) -> Expr:
    assert isinstance(ty, Let)
    return Let(ty.bound, ty.var, fn(ty.body))


def _bump_rel3(body: Expr) -> Expr:
    assert isinstance(body, Rel3)
    return Rel3(body.rel, body.a, Num(1), body.c)
