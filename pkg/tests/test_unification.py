from hypothesis import given, settings, strategies as st

from gen import A, B, F, I, II, X, Y, Z, Gen, grounding
from oracles import G3, completeness
from optisup.terms import (
    BOOL, DB, Lam, TCon, TVar, Var, apply_subst, arrow, free_vars, mk_app, normalize,
)
from optisup.unification import (
    Sat, UnifConfig, csu, csu_upto, match_types, satisfiable, unify_pairs, unify_types,
)

rngs = st.randoms(use_true_random=False)


def inst(t, *subs):
    for s in subs:
        t = apply_subst(t, s)
    return normalize(t)


def test_first_order_mgu():
    s = normalize(mk_app(F, [X, B]))
    t = normalize(mk_app(F, [A, Y]))
    (sigma,) = csu([(s, t)]).unifiers
    assert inst(s, sigma) is inst(t, sigma) is mk_app(F, [A, B])


def test_occurs_check_is_unsatisfiable():
    g = normalize(mk_app(F, [X, A]))
    assert not csu([(X, g)]).unifiers
    assert satisfiable([(X, g)]).status is Sat.UNSAT


def test_symbol_clash():
    assert satisfiable([(A, B)]).status is Sat.UNSAT
    assert satisfiable([]).status is Sat.SAT


def test_pattern_fragment_solves_directly():
    zx = normalize(Lam(I, mk_app(Z, [DB(0, I)])))
    target = normalize(Lam(I, mk_app(F, [DB(0, I), A])))
    r = csu([(zx, target)])
    assert r.complete and len(r.unifiers) == 1
    assert inst(Z, r.unifiers[0]) is target


def test_flex_rigid_enumerates_imitation_and_projection():
    # Z a ≡ a has the two solutions λx. a and λx. x
    r = csu([(normalize(mk_app(Z, [A])), A)], UnifConfig(pattern=False, fixpoint=False))
    got = {inst(Z, s) for s in r.unifiers}
    assert got == {normalize(Lam(I, A)), normalize(Lam(I, DB(0, I)))}


def test_preunification_example_keeps_flex_flex_residual():
    # y a ≡ g (z b): the only alternative is y ↦ λ g (w 0) with residual w a ≡ z b
    y, z = Var("y", II), Var("z", II)
    lhs = normalize(mk_app(y, [A]))
    rhs = normalize(mk_app(G3, [mk_app(z, [B])]))
    alts = csu_upto([(lhs, rhs)])
    assert len(alts) == 1
    sigma, rest = alts[0]
    yv = inst(y, sigma)
    (w,) = free_vars(yv)
    assert yv is normalize(Lam(I, mk_app(G3, [mk_app(w, [DB(0, I)])])))
    assert len(rest) == 1
    assert set(rest[0]) == {normalize(mk_app(w, [A])), normalize(mk_app(z, [B]))}


def test_flex_flex_pairs_are_satisfiable_by_constant_functions():
    w, z = Var("w", II), Var("z", II)
    r = satisfiable([(normalize(mk_app(w, [A])), normalize(mk_app(z, [B])))])
    assert r.status is Sat.SAT
    assert inst(mk_app(w, [A]), r.witness) is inst(mk_app(z, [B]), r.witness)


@given(rngs)
@settings(max_examples=150, deadline=None)
def test_csu_upto_alternatives_are_sound(rng):
    g = Gen(rng, vars=True)
    ty = rng.choice([I, II])
    s, t = g(ty, 2), g(ty, 2)
    if rng.random() < 0.5:
        th = grounding(rng, 1)
        th.terms.pop(rng.choice(["X", "Y", "Z"]))
        t = inst(s, th)
    for sigma, rest in csu_upto([(s, t)]):
        r = satisfiable(rest)
        if r.status is Sat.SAT:
            assert inst(s, sigma, r.witness) is inst(t, sigma, r.witness)


@given(rngs)
@settings(max_examples=150, deadline=None)
def test_witnesses_satisfy_the_original_constraints(rng):
    g = Gen(rng, vars=True)
    s, t = g(I, 2), g(I, 2)
    r = satisfiable([(s, t)])
    if r.status is Sat.SAT:
        assert inst(s, r.witness) is inst(t, r.witness)
    th = grounding(rng)
    if inst(s, th) is inst(t, th):
        assert r.status is not Sat.UNSAT


def test_completeness_oracle_finds_no_misses():
    problems, unifiers, misses = completeness()
    assert problems == 210 and unifiers > 0
    assert misses == 0


def test_completeness_oracle_detects_a_truncated_solver():
    _, _, misses = completeness(lambda pairs: csu_upto(pairs)[:1])
    assert misses > 0


def test_type_unification_and_matching():
    a, b = TVar("A"), TVar("B")
    i = TCon("i")
    m = unify_types([(arrow(a, i), arrow(BOOL, b))])
    assert m["A"] is BOOL and m["B"] is i
    assert unify_types([(a, arrow(a, i))]) is None
    assert match_types(arrow(a, a), arrow(i, i)) == {"A": i}
    assert match_types(arrow(a, a), arrow(i, BOOL)) is None


def test_unify_pairs_returns_some_unifier():
    s = normalize(mk_app(Var("Q", II), [A]))
    sigma = unify_pairs([(s, mk_app(G3, [A]))])
    assert sigma is not None and inst(s, sigma) is mk_app(G3, [A])
    assert unify_pairs([(A, B)]) is None
