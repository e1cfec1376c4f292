import pytest
from hypothesis import given, settings, strategies as st

from gen import A, B, F, G, H, I, II, P, SIG, X, Y, Gen
from optisup.clause import Clause, Literal
from optisup.order import OrderParams, TermOrder
from optisup.simplify import (
    FTerm, Simplifier, delete_duplicates, delete_resolved, fol_decode, fol_encode, is_tautology,
    is_variant, match_terms, neg_ext, not_false, not_true, subsumes,
)
from optisup.terms import BOOL, DB, Lam, bot, conj, diff_term, mk_app, neg, normalize, top

ORDER = TermOrder(OrderParams.from_signature(SIG))
S = Simplifier(ORDER)
PA, PB, PX = mk_app(P, [A]), mk_app(P, [B]), mk_app(P, [X])
rngs = st.randoms(use_true_random=False)


# -- first-order encoding ----------------------------------------------------------

@given(rngs)
@settings(max_examples=300, deadline=None)
def test_encoding_round_trip(rng):
    t = Gen(rng)(rng.choice([I, BOOL, II]), 4)
    assert fol_decode(fol_encode(t)) is t


@given(rngs)
@settings(max_examples=200, deadline=None)
def test_encoding_is_injective(rng):
    g = Gen(rng)
    s, t = g(I, 3), g(I, 3)
    assert (fol_encode(s) == fol_encode(t)) == (s is t)


def test_nonfunctional_terms_keep_their_shape():
    t = mk_app(F, [A, mk_app(H(B), [A])])
    ft = fol_encode(t)
    assert ft.sym == ("f", "f", (), ())
    assert ft.args[1].sym == ("f", "h", (), (B,))
    assert [s.sym[1] for s in ft.subterms()] == ["f", "a", "h", "a"]


def test_functional_terms_become_fun_symbols_with_yellow_arguments():
    t = normalize(Lam(I, mk_app(F, [DB(0, I), mk_app(F, [A, B])])))
    ft = fol_encode(t)
    assert ft.sym[0] == "fun"
    assert ft.args == (fol_encode(mk_app(F, [A, B])),)


def test_encoding_rejects_nonground_terms():
    with pytest.raises(ValueError):
        fol_encode(PX)


def test_decoding_rejects_wrong_arity():
    ft = fol_encode(normalize(Lam(I, mk_app(F, [DB(0, I), A]))))
    with pytest.raises(ValueError):
        fol_decode(FTerm(ft.sym, ft.args + (fol_encode(A),), ft.ty))


# -- local rules --------------------------------------------------------------------

def test_tautologies():
    assert is_tautology(Clause([Literal(A, A)]))
    assert is_tautology(Clause([Literal(A, B), Literal(B, A, False)]))
    assert not is_tautology(Clause([Literal(A, B)]))


def test_duplicate_and_resolved_literals():
    assert delete_duplicates(Clause([Literal(A, B), Literal(B, A)]))[0].lits == (Literal(A, B),)
    assert delete_resolved(Clause([Literal(A, A, False), Literal(A, B)]))[0].lits == (Literal(A, B),)
    assert delete_resolved(Clause([Literal(bot(), top()), Literal(A, B)]))[0].lits == (Literal(A, B),)
    assert delete_resolved(Clause([Literal(A, B)])) is None


def test_not_true_and_not_false():
    c = not_true(Clause([Literal(PA, top(), False)]))
    assert c.lits == (Literal(PA, bot()),) and c.origin.rule == "NotTrue"
    c = not_false(Clause([Literal(PA, bot(), False)]))
    assert c.lits == (Literal(PA, top()),)
    assert not_true(Clause([Literal(neg(PA), top())])) is None


def test_neg_ext_introduces_diff():
    fa, fb = normalize(mk_app(F, [A])), normalize(mk_app(F, [B]))
    c = neg_ext(Clause([Literal(fa, fb, False)]))
    d = diff_term(fa, fb)
    assert c.lits == (Literal(mk_app(F, [A, d]), mk_app(F, [B, d]), False),)


def test_clausify_and_arg_cong_as_simplifications():
    out = S.simplify(Clause([Literal(conj(PA, PB), top())]))
    assert {c.lits for c in out} == {(Literal(PA, top()),), (Literal(PB, top()),)}
    quantified = Clause([Literal(normalize(Lam(I, mk_app(P, [DB(0, I)]))), normalize(Lam(I, top())))])
    (c,) = S.simplify(quantified)
    (l,) = c.lits
    assert l.rhs is top() and l.lhs.head is P
    assert c.origin.simplification


# -- subsumption ----------------------------------------------------------------------

def test_matching():
    assert match_terms([(mk_app(F, [X, Y]), mk_app(F, [A, B]))]).terms == {"X": A, "Y": B}
    assert match_terms([(mk_app(F, [X, X]), mk_app(F, [A, B]))]) is None


def test_subsumption_by_a_more_general_clause():
    c = Clause([Literal(PX, top())])
    d = Clause([Literal(PA, top()), Literal(A, B)])
    assert subsumes(c, d) is not None
    assert subsumes(d, c) is None


def test_constrained_clauses_do_not_subsume():
    c = Clause([Literal(PX, top())], [(X, A)])
    assert subsumes(c, Clause([Literal(PA, top()), Literal(A, B)])) is None


def test_variables_in_and_out_of_parameters_block_subsumption():
    # X occurs in a parameter and outside of it
    c = Clause([Literal(mk_app(F, [mk_app(H(X), [A]), X]), A)])
    d = Clause([Literal(mk_app(F, [mk_app(H(B), [A]), B]), A), Literal(A, B)])
    assert match_terms([(c.lits[0].lhs, d.lits[0].lhs)]) is not None
    assert subsumes(c, d) is None


def test_equal_size_subsumption_needs_a_strictly_larger_instance():
    c = Clause([Literal(PX, top())])
    assert subsumes(c, Clause([Literal(PA, top())])) is not None
    assert subsumes(c, Clause([Literal(mk_app(P, [Y]), top())])) is None


def test_variants():
    assert is_variant(Clause([Literal(PX, top())]), Clause([Literal(mk_app(P, [Y]), top())]))
    assert not is_variant(Clause([Literal(PX, top())]), Clause([Literal(PA, top())]))


# -- rewriting ------------------------------------------------------------------------

def test_demodulation_below_lambda():
    unit = Clause([Literal(mk_app(F, [X, B]), X)])
    c = Clause([Literal(mk_app(G, [Lam(I, mk_app(F, [mk_app(F, [A, B]), DB(0, I)]))]), B)])
    r = S.demodulate(unit, c)
    assert r.origin.rule == "Demod" and r.origin.parents == (unit.id, c.id)
    assert r.lits == (Literal(mk_app(G, [normalize(Lam(I, mk_app(F, [A, DB(0, I)])))]), B),)


def test_demodulation_at_a_subterm_with_loose_indices():
    unit = Clause([Literal(mk_app(F, [X, B]), X)])
    c = Clause([Literal(mk_app(G, [Lam(I, mk_app(F, [DB(0, I), B]))]), B)])
    r = S.demodulate(unit, c)
    assert r.lits == (Literal(mk_app(G, [Lam(I, DB(0, I))]), B),)


def test_demodulation_only_decreases():
    unit = Clause([Literal(X, mk_app(F, [X, B]))])   # would grow terms
    assert S.demodulate(unit, Clause([Literal(PA, top())])) is None


def test_equality_subsumption():
    unit = Clause([Literal(mk_app(F, [X, B]), X)])
    c = Clause([Literal(mk_app(G, [normalize(mk_app(F, [mk_app(F, [A, B])]))]),
                        mk_app(G, [normalize(mk_app(F, [A]))])), Literal(A, B, False)])
    assert S.equality_subsumes(unit, c)
    assert not S.equality_subsumes(unit, Clause([Literal(A, B)]))


def test_simplify_reflect():
    pos = Clause([Literal(mk_app(F, [X, B]), X)])
    r = S.simplify_reflect(pos, Clause([Literal(mk_app(F, [A, B]), A, False), Literal(A, B)]))
    assert r.lits == (Literal(A, B),) and r.origin.rule == "PosSimplifyReflect"
    negu = Clause([Literal(mk_app(F, [X, B]), X, False)])
    r = S.simplify_reflect(negu, Clause([Literal(mk_app(F, [A, B]), A), Literal(A, B)]))
    assert r.lits == (Literal(A, B),) and r.origin.rule == "NegSimplifyReflect"
