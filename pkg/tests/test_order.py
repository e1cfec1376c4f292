from hypothesis import given, settings, strategies as st

from gen import A, B, F, I, II, P, SIG, X, Y, Z, Gen, grounding
from optisup.clause import Literal
from optisup.order import EQ, GT, INC, LT, OrderParams, TermOrder, multiset_compare
from optisup.terms import (
    BOOL, Lam, Var, apply_subst, bot, diff_term, mk_app, normalize, redex, replace_at, top,
    yellow_positions,
)

ORDER = TermOrder(OrderParams.from_signature(SIG))
rngs = st.randoms(use_true_random=False)


def ground(rng, ty=None, depth=3):
    return Gen(rng)(ty or rng.choice([I, I, BOOL, II]), depth)


@given(rngs)
@settings(max_examples=300, deadline=None)
def test_ground_order_is_total_and_antisymmetric(rng):
    ty = rng.choice([I, BOOL, II])
    s, t = ground(rng, ty), ground(rng, ty)
    r = ORDER.compare_ground(s, t)
    assert r is (EQ if s is t else r)
    assert r is not INC
    assert ORDER.compare_ground(t, s) is r.flip()


@given(rngs)
@settings(max_examples=150, deadline=None)
def test_transitivity(rng):
    ts = [ground(rng, I) for _ in range(6)]
    for s in ts:
        for t in ts:
            for u in ts:
                if ORDER.gt(s, t) and ORDER.gt(t, u):
                    assert ORDER.gt(s, u)


@given(rngs)
@settings(max_examples=200, deadline=None)
def test_yellow_context_compatibility(rng):
    u = ground(rng, depth=4)
    s, t = ground(rng, I), ground(rng, I)
    r = ORDER.compare_ground(s, t)
    for p, sub in yellow_positions(u):
        if sub.ty is I:
            us, ut = normalize(replace_at(u, p, s)), normalize(replace_at(u, p, t))
            assert ORDER.compare_ground(us, ut) is r


@given(rngs)
@settings(max_examples=200, deadline=None)
def test_yellow_subterm_property(rng):
    u = ground(rng, depth=4)
    for p, sub in yellow_positions(u):
        if p:
            assert ORDER.compare_ground(u, sub) is GT


@given(rngs)
@settings(max_examples=200, deadline=None)
def test_false_and_true_are_smallest(rng):
    u = ground(rng)
    if u is not top() and u is not bot():
        assert ORDER.gt(u, bot())
    assert ORDER.gt(bot(), top())


@given(rngs)
@settings(max_examples=200, deadline=None)
def test_application_to_diff_decreases(rng):
    u, s, t = (ground(rng, II) for _ in range(3))
    assert ORDER.gt(u, normalize(redex(u, [diff_term(s, t)])))


@given(rngs)
@settings(max_examples=200, deadline=None)
def test_nonground_verdicts_are_stable_under_grounding(rng):
    g = Gen(rng, vars=True)
    ty = rng.choice([I, BOOL])
    s, t = g(ty, 3), g(ty, 3)
    r = ORDER.compare(s, t)
    if r in (GT, LT, EQ):
        for _ in range(5):
            th = grounding(rng)
            assert ORDER.compare_ground(apply_subst(s, th), apply_subst(t, th)) is r


def test_applied_variable_with_different_arguments_is_incomparable():
    x = Var("W", II)
    assert ORDER.compare(normalize(mk_app(x, [B])), normalize(mk_app(x, [A]))) is INC


def test_variable_below_term_containing_it_outside_parameters():
    assert ORDER.compare(mk_app(F, [X, A]), X) is GT
    assert ORDER.compare(X, Y) is INC
    assert ORDER.compare(mk_app(F, [X, A]), mk_app(F, [Y, A])) is INC


def test_applied_variable_is_not_below_arbitrary_terms():
    zx = normalize(mk_app(Z, [X]))
    assert ORDER.compare(mk_app(F, [X, X]), zx) is INC


def test_literal_order_prefers_negative_on_equal_terms():
    pos = Literal(mk_app(F, [A, B]), A)
    neg = Literal(mk_app(F, [A, B]), A, False)
    assert ORDER.compare_literals(neg, pos) is GT
    assert ORDER.compare_literals(Literal(mk_app(P, [A]), top()), Literal(mk_app(P, [A]), bot())) is LT


def test_clause_order_is_the_multiset_extension():
    l1, l2 = Literal(mk_app(F, [A, B]), A), Literal(B, A)
    assert ORDER.compare_clauses([l1], [l2, l2, l2]) is GT
    assert ORDER.compare_clauses([l1, l2], [l1]) is GT
    assert ORDER.compare_clauses([l2, l1], [l1, l2]) is EQ


def test_multiset_compare_on_integers():
    def cmp(a, b):
        return GT if a > b else LT if a < b else EQ
    assert multiset_compare([3], [2, 2, 1], cmp) is GT
    assert multiset_compare([2, 2], [2, 1, 1], cmp) is GT
    assert multiset_compare([1, 2], [2, 1], cmp) is EQ
    assert multiset_compare([1], [1, 1], cmp) is LT


def test_lambda_terms_are_ordered_by_their_bodies():
    la = normalize(Lam(I, mk_app(F, [A, A])))
    lb = normalize(Lam(I, A))
    assert ORDER.gt(la, lb)
