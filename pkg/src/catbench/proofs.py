"""Builders for the bundled derivations: countdown, fib (span), and gcd.

The trees follow the structure of the example verifications: the recursion
rule at the root, sequencing and case analysis along the spine, and
`instances` leaves exactly where the arguments drop into instance-level
semantic reasoning (arithmetic side conditions, measure decrease, witness
types).  Everything else is discharged by the inference rules proper.
"""

from __future__ import annotations

from typing import Callable

from .derivations import Derivation, restricted_self_type
from .judgments import (
    CostMemberEqJ, Judgment, MemberEqJ, TypeEqJ, ValueMemberEqJ,
)
from .programs import (
    countdown_bound, countdown_term, fib_bound_slope9, fib_term,
    gcd_bound, gcd_domain, gcd_result_type, gcd_term,
)
from .syntax import (
    Ap, Arith, Cff2, Eq, Expr, Fst, Funtime, Ifz, Let, Num, Pair, Rel2,
    Rel3, Sigma, Snd, Subset, Telescope, TRIV, Univ, Var, NAT, ZERO,
    parin, subst, suc,
)


def d(rule: str, conclusion: Judgment, *premises: Derivation,
      **payload) -> Derivation:
    return Derivation(rule, conclusion, tuple(premises), payload)


def tel(*entries: tuple[str, Expr]) -> Telescope:
    return Telescope(tuple(entries))


def hyp(t: Telescope, v: str) -> Derivation:
    ty = t.type_of(v)
    assert ty is not None, v
    return d("hyp", CostMemberEqJ(t, Var(v), Var(v), ty, ZERO))


def hyp_val(t: Telescope, v: str) -> Derivation:
    return d("conversion", ValueMemberEqJ(t, Var(v), Var(v), t.type_of(v)),
             hyp(t, v))


def hyp_mem(t: Telescope, v: str) -> Derivation:
    return d("conversion", MemberEqJ(t, Var(v), Var(v), t.type_of(v)),
             hyp(t, v))


def nat_f(t: Telescope, level: int = 0) -> Derivation:
    return d("nat-f", ValueMemberEqJ(t, NAT, NAT, Univ(level)))


def nat_f_mem(t: Telescope, level: int = 0) -> Derivation:
    return d("conversion", MemberEqJ(t, NAT, NAT, Univ(level)), nat_f(t, level))


def num_mem(t: Telescope, k: int) -> Derivation:
    node = d("nat-i-zero", MemberEqJ(t, ZERO, ZERO, NAT))
    for i in range(1, k + 1):
        node = d("nat-i-suc", MemberEqJ(t, Num(i), Num(i), NAT), node)
    return node


def suc_mem(t: Telescope, prem: Derivation) -> Derivation:
    c = prem.conclusion
    return d("nat-i-suc", MemberEqJ(t, suc(c.lhs), suc(c.rhs), NAT), prem)


def cff2_mem(t: Telescope, fn: str, left: Derivation,
             right: Derivation) -> Derivation:
    l, r = left.conclusion, right.conclusion
    return d("ffe1", MemberEqJ(t, Cff2(fn, l.lhs, r.lhs),
                               Cff2(fn, l.rhs, r.rhs), NAT), left, right)


def inst(j: Judgment, samples: int | None = None) -> Derivation:
    payload = {"samples": samples} if samples is not None else {}
    return Derivation("instances", j, (), payload)


def member_as_cost0(t: Telescope, prem: Derivation) -> Derivation:
    c = prem.conclusion
    return d("conversion", CostMemberEqJ(t, c.lhs, c.rhs, c.ty, ZERO), prem)


def cost0_of_subset_member(t: Telescope, v: str) -> Derivation:
    """`v` declared at a subset type: forget the refinement, keep cost zero."""
    ty = t.type_of(v)
    assert isinstance(ty, Subset), v
    return d("subset-e", CostMemberEqJ(t, Var(v), Var(v), ty.dom, ZERO),
             hyp(t, v), part=1)


def subset_member_val(t: Telescope, v: str) -> Derivation:
    ty = t.type_of(v)
    assert isinstance(ty, Subset)
    return d("conversion", ValueMemberEqJ(t, Var(v), Var(v), ty.dom),
             cost0_of_subset_member(t, v))


def subset_member_mem(t: Telescope, v: str) -> Derivation:
    ty = t.type_of(v)
    assert isinstance(ty, Subset)
    return d("conversion", MemberEqJ(t, Var(v), Var(v), ty.dom),
             cost0_of_subset_member(t, v))


Branch = Callable[[Telescope], Derivation]


def ifz_nat_member(t: Telescope, scrut_var: str, nvar: str, eqname: str,
                   zero_branch: Branch, suc_branch: Branch) -> Derivation:
    """`ifz` at the constant family nat, with the lsub type collapsed.

    The branch builders receive the eliminator's hypothesis telescopes.
    """
    m = Var(scrut_var)
    tz = t.extend(eqname, Eq(NAT, ZERO, m))
    zb = zero_branch(tz)
    tn = t.extend(nvar, NAT)
    ts = tn.extend(eqname, Eq(NAT, suc(Var(nvar)), m))
    sb = suc_branch(ts)

    fam_tel = t.extend("ifz_a", NAT)
    raw = d("nat-e1",
            MemberEqJ(t,
                      Ifz(m, zb.conclusion.lhs, nvar, sb.conclusion.lhs),
                      Ifz(m, zb.conclusion.rhs, nvar, sb.conclusion.rhs),
                      Let(m, "ifz_a", NAT)),
            nat_f_mem(fam_tel), hyp_mem(t, scrut_var), zb, sb)
    nat_eq = d("univ-e", TypeEqJ(t, NAT, NAT), nat_f_mem(t))
    collapse = d("open-head-exp", TypeEqJ(t, Let(m, "ifz_a", NAT), NAT),
                 nat_eq, steps=1)
    out = MemberEqJ(t, raw.conclusion.lhs, raw.conclusion.rhs, NAT)
    return d("resp-eq", out, collapse, raw)


# ---------------------------------------------------------------------------
# countdown
# ---------------------------------------------------------------------------


def countdown_derivation() -> Derivation:
    """fun f a. ifz a 0 a'. f a'  at  (a : nat) -> nat [suc (2 * a)]."""
    cd = countdown_term()
    p = countdown_bound()  # suc (2 *^ a)

    t0 = tel()
    c = restricted_self_type("a", NAT, NAT, p, "a")
    g1 = tel(("a", NAT), ("f", c))

    # premise 3: a : nat |- suc (2 *^ a) in nat
    ga = tel(("a", NAT))
    p3 = suc_mem(ga, cff2_mem(ga, "*", num_mem(ga, 2), hyp_mem(ga, "a")))

    # recursive branch: g2 = g1, a':nat, q : eq nat (suc a') a
    g2 = g1.extend("a'", NAT).extend("q", Eq(NAT, suc(Var("a'")), Var("a")))
    gm = g2.extend("m", NAT)
    rel_m = Rel2("<", suc(Cff2("*", Num(2), Var("m"))),
                 suc(Cff2("*", Num(2), Var("a"))))
    arg_subset = d(
        "subset-i",
        CostMemberEqJ(g2, Var("a'"), Var("a'"), Subset("m", NAT, rel_m), ZERO),
        nat_f_mem(g2),
        d("rel-f", ValueMemberEqJ(gm, rel_m, rel_m, Univ(0)),
          suc_mem(gm, cff2_mem(gm, "*", num_mem(gm, 2), hyp_mem(gm, "m"))),
          suc_mem(gm, cff2_mem(gm, "*", num_mem(gm, 2), hyp_mem(gm, "a")))),
        hyp(g2, "a'"),
        inst(MemberEqJ(g2, TRIV, TRIV, Let(Var("a'"), "m", rel_m))),
    )
    arg_val = d("conversion",
                ValueMemberEqJ(g2, Var("a'"), Var("a'"),
                               Subset("m", NAT, rel_m)),
                arg_subset)

    call = d("funtime-e",
             CostMemberEqJ(g2, Ap(Var("f"), Var("a'")), Ap(Var("f"), Var("a'")),
                           NAT, suc(subst(p, {"a": Var("a'")}))),
             hyp_val(g2, "f"), arg_val)

    # case analysis with cost tracking
    gc = g1.extend("cd_c", NAT)
    gz = g1.extend("pz", Eq(NAT, ZERO, Var("a")))
    body = Ifz(Var("a"), ZERO, "a'", Ap(Var("f"), Var("a'")))
    ifz_cost = Ifz(Var("a"), suc(ZERO), "a'",
                   suc(suc(suc(Cff2("*", Num(2), Var("a'"))))))
    case = d("nat-e2",
             CostMemberEqJ(g1, body, body, NAT, ifz_cost),
             nat_f_mem(gc),
             hyp_val(g1, "a"),
             d("nat-i-zero", MemberEqJ(g1, ZERO, ZERO, NAT)),
             suc_mem(gc, suc_mem(gc, cff2_mem(gc, "*", num_mem(gc, 2),
                                              hyp_mem(gc, "cd_c")))),
             member_as_cost0(gz, d("nat-i-zero",
                                   MemberEqJ(gz, ZERO, ZERO, NAT))),
             call)

    body_at_bound = d("cost-replace",
                      CostMemberEqJ(g1, body, body, NAT, p),
                      case,
                      inst(MemberEqJ(g1, ifz_cost, p, NAT)))

    return d("funtime-i",
             ValueMemberEqJ(t0, cd, cd, Funtime("a", NAT, NAT, p)),
             nat_f_mem(t0),
             nat_f_mem(tel(("a", NAT))),
             p3,
             body_at_bound)


# ---------------------------------------------------------------------------
# fib (parallel span)
# ---------------------------------------------------------------------------


def _pp9(n1: Expr, n2: Expr) -> Expr:
    """max(9 * suc n1, 9 * suc n2) + 5 + 1, the binary-sequencing line."""
    return Cff2("+", Cff2("+", Cff2("max",
                                    Cff2("*", Num(9), suc(n1)),
                                    Cff2("*", Num(9), suc(n2))),
                          Num(5)), Num(1))


def _pp9_mem(t: Telescope, left: Derivation, right: Derivation) -> Derivation:
    inner = cff2_mem(t, "max",
                     cff2_mem(t, "*", num_mem(t, 9), suc_mem(t, left)),
                     cff2_mem(t, "*", num_mem(t, 9), suc_mem(t, right)))
    return cff2_mem(t, "+", cff2_mem(t, "+", inner, num_mem(t, 5)),
                    num_mem(t, 1))


def _p9_inner_member(t: Telescope, scrut: str) -> Derivation:
    """t |- ifz scrut 1 m''. suc(line(scrut, m'')) in nat."""
    return ifz_nat_member(
        t, scrut, "m''", "e2",
        lambda tz: num_mem(tz, 1),
        lambda ts: suc_mem(ts, _pp9_mem(ts, hyp_mem(ts, scrut),
                                        hyp_mem(ts, "m''"))))


def _p9_member(t: Telescope, nv: str) -> Derivation:
    """t |- P9 in nat, by two nested nat eliminations."""
    return ifz_nat_member(
        t, nv, "m'", "e1",
        lambda tz: num_mem(tz, 1),
        lambda ts: suc_mem(ts, _p9_inner_member(ts, "m'")))


def fib_derivation() -> Derivation:
    fib = fib_term()
    p9 = fib_bound_slope9()

    t0 = tel()
    c9 = restricted_self_type("n", NAT, NAT, p9, "n")
    g1 = tel(("n", NAT), ("f", c9))
    g2 = g1.extend("n'", NAT).extend("p", Eq(NAT, suc(Var("n'")), Var("n")))
    g3 = g2.extend("n''", NAT).extend("q", Eq(NAT, suc(Var("n''")), Var("n'")))

    p3 = _p9_member(tel(("n", NAT)), "n")

    def rec_call(arg: str) -> Derivation:
        gm = g3.extend("m", NAT)
        rel_m = Rel2("<", subst(p9, {"n": Var("m")}), p9)
        arg_subset = d(
            "subset-i",
            CostMemberEqJ(g3, Var(arg), Var(arg), Subset("m", NAT, rel_m),
                          ZERO),
            nat_f_mem(g3),
            inst(MemberEqJ(gm, rel_m, rel_m, Univ(0))),
            hyp(g3, arg),
            inst(MemberEqJ(g3, TRIV, TRIV, Let(Var(arg), "m", rel_m))),
        )
        arg_val = d("conversion",
                    ValueMemberEqJ(g3, Var(arg), Var(arg),
                                   Subset("m", NAT, rel_m)),
                    arg_subset)
        applied = d("funtime-e",
                    CostMemberEqJ(g3, Ap(Var("f"), Var(arg)),
                                  Ap(Var("f"), Var(arg)), NAT,
                                  suc(subst(p9, {"n": Var(arg)}))),
                    hyp_val(g3, "f"), arg_val)
        line = Cff2("*", Num(9), suc(Var(arg)))
        return d("cost-weaken",
                 CostMemberEqJ(g3, Ap(Var("f"), Var(arg)),
                               Ap(Var("f"), Var(arg)), NAT, line),
                 applied,
                 inst(MemberEqJ(g3, TRIV, TRIV,
                                Rel2("<=", suc(subst(p9, {"n": Var(arg)})),
                                     line))))

    m1 = Ap(Var("f"), Var("n'"))
    m2 = Ap(Var("f"), Var("n''"))
    gxy = g3.extend("x", NAT).extend("y", NAT)
    add = d("ffe2",
            CostMemberEqJ(gxy, Cff2("+", Var("x"), Var("y")),
                          Cff2("+", Var("x"), Var("y")), NAT, Num(1)),
            hyp_val(gxy, "x"), hyp_val(gxy, "y"))

    q1 = Cff2("*", Num(9), suc(Var("n'")))
    q2 = Cff2("*", Num(9), suc(Var("n''")))
    par_body = parin(m1, m2, "x", "y", Cff2("+", Var("x"), Var("y")))
    bin_cost = Cff2("+", Cff2("+", Cff2("max", q1, q2), Num(5)),
                    Let(m1, "x", Let(m2, "y", Num(1))))
    bs = d("bin-seq",
           CostMemberEqJ(g3, par_body, par_body,
                         Let(m1, "x", Let(m2, "y", NAT)), bin_cost),
           rec_call("n'"), rec_call("n''"), add)

    retype = d("resp-eq",
               CostMemberEqJ(g3, par_body, par_body, NAT, bin_cost),
               inst(TypeEqJ(g3, Let(m1, "x", Let(m2, "y", NAT)), NAT)),
               bs)
    pp_closed = _pp9(Var("n'"), Var("n''"))
    recost = d("cost-replace",
               CostMemberEqJ(g3, par_body, par_body, NAT, pp_closed),
               retype,
               inst(MemberEqJ(g3, bin_cost, pp_closed, NAT)))

    # inner case on n'
    gc2 = g2.extend("fib_c", NAT)
    gz2 = g2.extend("p0", Eq(NAT, ZERO, Var("n'")))
    n1_body = Ifz(Var("n'"), Num(1), "n''", par_body)
    p1_inner = Ifz(Var("n'"), suc(ZERO), "n''", suc(pp_closed))
    inner_case = d("nat-e2",
                   CostMemberEqJ(g2, n1_body, n1_body, NAT, p1_inner),
                   nat_f_mem(gc2),
                   hyp_val(g2, "n'"),
                   d("nat-i-zero", MemberEqJ(g2, ZERO, ZERO, NAT)),
                   _pp9_mem(gc2, hyp_mem(gc2, "n'"), hyp_mem(gc2, "fib_c")),
                   member_as_cost0(gz2, num_mem(gz2, 1)),
                   recost)

    # outer case on n
    gc1 = g1.extend("fib_c", NAT)
    gz1 = g1.extend("p0", Eq(NAT, ZERO, Var("n")))
    body = Ifz(Var("n"), ZERO, "n'", n1_body)
    outer_case = d("nat-e2",
                   CostMemberEqJ(g1, body, body, NAT, p9),
                   nat_f_mem(gc1),
                   hyp_val(g1, "n"),
                   d("nat-i-zero", MemberEqJ(g1, ZERO, ZERO, NAT)),
                   _p9_inner_member(gc1, "fib_c"),
                   member_as_cost0(gz1, d("nat-i-zero",
                                          MemberEqJ(gz1, ZERO, ZERO, NAT))),
                   inner_case)

    return d("funtime-i",
             ValueMemberEqJ(t0, fib, fib, Funtime("n", NAT, NAT, p9)),
             nat_f_mem(t0),
             nat_f_mem(tel(("n", NAT))),
             p3,
             outer_case)


# ---------------------------------------------------------------------------
# gcd
# ---------------------------------------------------------------------------


def gcd_derivation(word_size: int) -> Derivation:
    gcd = gcd_term()
    a_ty = gcd_domain(word_size)
    b_ty = gcd_result_type()
    p = gcd_bound()
    w = Num(word_size)

    t0 = tel()
    assert isinstance(a_ty, Sigma)
    s1, s2 = a_ty.fst, a_ty.snd

    def subset_lt_w_univ(t: Telescope, sub: Subset) -> Derivation:
        tv = t.extend(sub.var, NAT)
        rel = Rel2("<", Var(sub.var), w)
        node = d("subset-f", ValueMemberEqJ(t, sub, sub, Univ(0)),
                 nat_f_mem(t),
                 d("rel-f", ValueMemberEqJ(tv, rel, rel, Univ(0)),
                   hyp_mem(tv, sub.var),
                   inst(MemberEqJ(tv, w, w, NAT))))
        return d("conversion", MemberEqJ(t, sub, sub, Univ(0)), node)

    gp = tel((a_ty.var, s1))
    p1 = d("conversion", MemberEqJ(t0, a_ty, a_ty, Univ(0)),
           d("sigma-f", ValueMemberEqJ(t0, a_ty, a_ty, Univ(0)),
             subset_lt_w_univ(t0, s1),
             subset_lt_w_univ(gp, s2)))

    c_ty = restricted_self_type("a", a_ty, b_ty, p, "a")
    g1 = tel(("a", a_ty), ("f", c_ty))

    p2 = inst(MemberEqJ(tel(("a", a_ty)), b_ty, b_ty, Univ(0)))
    p3 = inst(MemberEqJ(tel(("a", a_ty)), p, p, NAT))

    # --- strengthened projection types -----------------------------------
    def proj_subset(base: Expr, bind: str) -> Subset:
        refinement = Sigma("s", Rel2("<", Var(bind), w),
                           Eq(NAT, Var(bind), base))
        return Subset(bind, NAT, refinement)

    def strengthened_intro(t: Telescope, proj: Expr, bind: str,
                           proj_cost1: Derivation) -> Derivation:
        """t |- proj in {bind : nat | (bind < w) * (bind = proj)} [1]."""
        sub = proj_subset(proj, bind)
        tv = t.extend(bind, NAT)
        ts = tv.extend("s", Rel2("<", Var(bind), w))
        rel = Rel2("<", Var(bind), w)
        refinement_univ = d(
            "sigma-f",
            ValueMemberEqJ(tv, sub.body, sub.body, Univ(0)),
            d("conversion", MemberEqJ(tv, rel, rel, Univ(0)),
              d("rel-f", ValueMemberEqJ(tv, rel, rel, Univ(0)),
                hyp_mem(tv, bind), inst(MemberEqJ(tv, w, w, NAT)))),
            d("eq-f", ValueMemberEqJ(ts, Eq(NAT, Var(bind), proj),
                                     Eq(NAT, Var(bind), proj), Univ(0)),
              nat_f_mem(ts), hyp_mem(ts, bind),
              inst(MemberEqJ(ts, proj, proj, NAT))))
        witness = Pair(TRIV, TRIV)
        return d("subset-i",
                 CostMemberEqJ(t, proj, proj, sub, Num(1)),
                 nat_f_mem(t),
                 d("conversion", MemberEqJ(tv, sub.body, sub.body, Univ(0)),
                   refinement_univ),
                 proj_cost1,
                 inst(MemberEqJ(t, witness, witness,
                                Let(proj, bind, sub.body))))

    # fst a in nat [1], via the pair eliminator then forgetting the refinement
    fst_sigma = d("sigma-e",
                  CostMemberEqJ(g1, Fst(Var("a")), Fst(Var("a")), s1, Num(1)),
                  hyp_val(g1, "a"), part=1)
    fst_nat = d("subset-e",
                CostMemberEqJ(g1, Fst(Var("a")), Fst(Var("a")), NAT, Num(1)),
                fst_sigma, part=1)
    a1 = proj_subset(Fst(Var("a")), "x")
    prem_a = strengthened_intro(g1, Fst(Var("a")), "x", fst_nat)

    g2 = g1.extend("x", a1)
    a2 = proj_subset(Snd(Var("a")), "y")

    # snd a in nat [1]: the projected type needs one semantic collapse
    snd_raw = d("sigma-e",
                CostMemberEqJ(g2, Snd(Var("a")), Snd(Var("a")),
                              Let(Fst(Var("a")), a_ty.var, s2), Num(1)),
                hyp_val(g2, "a"), part=2)
    snd_retyped = d("resp-eq",
                    CostMemberEqJ(g2, Snd(Var("a")), Snd(Var("a")), s2, Num(1)),
                    inst(TypeEqJ(g2, Let(Fst(Var("a")), a_ty.var, s2), s2)),
                    snd_raw)
    snd_nat = d("subset-e",
                CostMemberEqJ(g2, Snd(Var("a")), Snd(Var("a")), NAT, Num(1)),
                snd_retyped, part=1)
    prem_a2 = strengthened_intro(g2, Snd(Var("a")), "y", snd_nat)

    g3 = g2.extend("y", a2)

    # --- the case analysis ------------------------------------------------
    b2 = Subset("d", NAT, Rel3("gcdProp", Var("d"), Var("x"), Var("y")))
    fam = Subset("d", NAT, Rel3("gcdProp", Var("d"), Var("gcd_c"), Var("y")))
    gc = g3.extend("gcd_c", NAT)
    gcd_d = gc.extend("d", NAT)

    fam_univ = d(
        "conversion", MemberEqJ(gc, fam, fam, Univ(0)),
        d("subset-f", ValueMemberEqJ(gc, fam, fam, Univ(0)),
          nat_f_mem(gc),
          d("conversion", MemberEqJ(gcd_d, fam.body, fam.body, Univ(0)),
            d("rel-f", ValueMemberEqJ(gcd_d, fam.body, fam.body, Univ(0)),
              hyp_mem(gcd_d, "d"), hyp_mem(gcd_d, "gcd_c"),
              subset_member_mem(gcd_d, "y")))))

    x_val_nat = d("conversion", ValueMemberEqJ(g3, Var("x"), Var("x"), NAT),
                  cost0_of_subset_member(g3, "x"))

    p1c = Cff2("+", Num(1), suc(suc(Cff2("*", Num(8), suc(Var("gcd_c"))))))
    p1c_mem = cff2_mem(gc, "+", num_mem(gc, 1),
                       suc_mem(gc, suc_mem(gc, cff2_mem(
                           gc, "*", num_mem(gc, 8),
                           suc_mem(gc, hyp_mem(gc, "gcd_c"))))))

    # zero branch: y is the gcd of (0, y)
    gz = g3.extend("pz", Eq(NAT, ZERO, Var("x")))
    fam0 = subst(fam, {"gcd_c": ZERO})
    gz_d = gz.extend("d", NAT)
    zero_branch = d(
        "subset-i",
        CostMemberEqJ(gz, Var("y"), Var("y"), fam0, ZERO),
        nat_f_mem(gz),
        d("conversion", MemberEqJ(gz_d, fam0.body, fam0.body, Univ(0)),
          d("rel-f", ValueMemberEqJ(gz_d, fam0.body, fam0.body, Univ(0)),
            hyp_mem(gz_d, "d"),
            d("nat-i-zero", MemberEqJ(gz_d, ZERO, ZERO, NAT)),
            subset_member_mem(gz_d, "y"))),
        cost0_of_subset_member(gz, "y"),
        inst(MemberEqJ(gz, TRIV, TRIV, Let(Var("y"), "d", fam0.body))),
    )

    # successor branch: the machine mod, then the recursive call
    g4 = g3.extend("x'", NAT).extend("px", Eq(NAT, suc(Var("x'")), Var("x")))
    modexp = Arith("%", Var("y"), suc(Var("x'")))
    a3 = proj_subset(modexp, "z")
    t6 = subst(fam, {"gcd_c": suc(Var("x'"))})

    suc_x_val = d("conversion",
                  ValueMemberEqJ(g4, suc(Var("x'")), suc(Var("x'")), NAT),
                  suc_mem(g4, hyp_mem(g4, "x'")))
    mod_cost1 = d("arith-e",
                  CostMemberEqJ(g4, modexp, modexp, NAT, Num(1)),
                  d("conversion", ValueMemberEqJ(g4, Var("y"), Var("y"), NAT),
                    cost0_of_subset_member(g4, "y")),
                  suc_x_val,
                  inst(MemberEqJ(g4, TRIV, TRIV, Rel2("<", Var("y"), w))),
                  inst(MemberEqJ(g4, TRIV, TRIV,
                                 Rel2("<", suc(Var("x'")), w))))
    prem_mod = strengthened_intro(g4, modexp, "z", mod_cost1)

    g5 = g4.extend("z", a3)
    qz = suc(Cff2("*", Num(8), suc(Var("x'"))))
    rec_subject = Ap(Var("f"), Pair(Var("z"), suc(Var("x'"))))
    rec = inst(CostMemberEqJ(g5, rec_subject, rec_subject, t6, qz))

    seq_cost = Cff2("+", Num(1), suc(Let(modexp, "z", qz)))
    let_subject = Let(modexp, "z", rec_subject)
    seq_node = d("seq",
                 CostMemberEqJ(g4, let_subject, let_subject,
                               Let(modexp, "z", t6), seq_cost),
                 prem_mod, rec)
    retyped = d("resp-eq",
                CostMemberEqJ(g4, let_subject, let_subject, t6, seq_cost),
                inst(TypeEqJ(g4, Let(modexp, "z", t6), t6)),
                seq_node)
    suc_branch = d("cost-replace",
                   CostMemberEqJ(g4, let_subject, let_subject, t6,
                                 subst(p1c, {"gcd_c": Var("x'")})),
                   retyped,
                   inst(MemberEqJ(g4, seq_cost,
                                  subst(p1c, {"gcd_c": Var("x'")}), NAT)))

    n2_body = Ifz(Var("x"), Var("y"), "x'", let_subject)
    p2g = Ifz(Var("x"), suc(ZERO), "x'",
              suc(subst(p1c, {"gcd_c": Var("x'")})))
    case = d("nat-e2",
             CostMemberEqJ(g3, n2_body, n2_body, b2, p2g),
             fam_univ,
             x_val_nat,
             d("nat-i-zero", MemberEqJ(g3, ZERO, ZERO, NAT)),
             p1c_mem,
             zero_branch,
             suc_branch)

    # --- sequencing back up to the full body ------------------------------
    b1 = Let(Snd(Var("a")), "y", b2)
    n1 = Let(Snd(Var("a")), "y", n2_body)
    p1g = Cff2("+", Num(1), suc(Let(Snd(Var("a")), "y", p2g)))
    seq2 = d("seq", CostMemberEqJ(g2, n1, n1, b1, p1g), prem_a2, case)

    n0 = Let(Fst(Var("a")), "x", n1)
    seq1 = d("seq",
             CostMemberEqJ(g1, n0, n0, Let(Fst(Var("a")), "x", b1),
                           Cff2("+", Num(1),
                                suc(Let(Fst(Var("a")), "x", p1g)))),
             prem_a, seq2)

    return d("funtime-i",
             ValueMemberEqJ(t0, gcd, gcd, Funtime("a", a_ty, b_ty, p)),
             p1, p2, p3, seq1)
