from pathlib import Path

import pytest

from gen import A, B, P, SIG, X
from optisup.clause import Clause, Literal
from optisup.frontend import parse, parse_file, to_clauses
from optisup.order import OrderParams, TermOrder
from optisup.saturation import (
    GAVE_UP, REFUTATION, RESOURCE_OUT, ProverConfig, Prover, _Queue, prove,
)
from optisup.terms import bot, mk_app, top
from optisup.unification import UnifConfig

PROBLEMS = Path(__file__).parent.parent / "problems"
ORDER = TermOrder(OrderParams.from_signature(SIG))


def run(name, **cfg):
    prob = parse_file(PROBLEMS / f"{name}.opt")
    return prove(to_clauses(prob), TermOrder(OrderParams.from_signature(prob.signature)),
                 ProverConfig(**cfg))


@pytest.mark.parametrize("name", sorted(p.stem for p in PROBLEMS.glob("*.opt")))
def test_bundled_problems_are_refuted(name):
    res = run(name, timeout=10)
    assert res.status == REFUTATION
    assert res.empty is not None and res.empty.is_empty


def test_proof_is_topologically_ordered():
    res = run("selection")
    seen = set()
    for c in res.proof():
        assert set(c.origin.parents) <= seen
        seen.add(c.id)
    assert res.proof()[-1] is res.empty


def test_events_log_the_life_of_each_clause():
    res = run("selection")
    kinds = {e.kind for e in res.events}
    assert {"input", "activated", "generated"} <= kinds
    first = res.proof()[0]
    assert res.events_for(first.id)[0].kind == "input"


def test_without_backward_simplification():
    assert run("extensionality", backward=False).status == REFUTATION


def test_selection_none_still_refutes():
    assert run("selection", selection="none").status == REFUTATION


def test_disabling_sup_prevents_the_refutation():
    res = run("selection", disabled=frozenset({"Sup", "FluidSup"}), timeout=2)
    assert res.status != REFUTATION


def test_clause_limit_gives_resource_out():
    prob = parse("type i.\nconst a : i.\nconst b : i.\ncnf: a = b.\n")
    res = prove(to_clauses(prob), TermOrder(OrderParams.from_signature(prob.signature)),
                ProverConfig(max_clauses=50, timeout=10))
    assert res.status == RESOURCE_OUT


def test_timeout_gives_resource_out():
    prob = parse("type i.\nconst a : i.\nconst b : i.\ncnf: a = b.\n")
    res = prove(to_clauses(prob), TermOrder(OrderParams.from_signature(prob.signature)),
                ProverConfig(timeout=0.3))
    assert res.status == RESOURCE_OUT and res.empty is None


def test_empty_clause_with_satisfiable_constraints_is_a_refutation():
    p = Prover(ORDER)
    empty = Clause([], [(mk_app(P, [X]), mk_app(P, [A]))])
    assert p._empty(empty)
    assert p.witness.terms["X"] is A


def test_empty_clause_with_unsatisfiable_constraints_is_deleted():
    p = Prover(ORDER)
    assert not p._empty(Clause([], [(A, B)]))
    assert p.empty is None and not p.limited


def test_undecided_constraints_are_kept_aside():
    p = Prover(ORDER, ProverConfig(unif=UnifConfig(budget=0)))
    c = Clause([], [(mk_app(P, [X]), mk_app(P, [A]))])
    assert not p._empty(c)
    assert p.limited == [c]


def test_queue_interleaves_age_and_weight():
    q = _Queue(1, 2)
    heavy = Clause([Literal(mk_app(P, [A]), top()), Literal(A, B), Literal(B, A, False)])
    light = [Clause([Literal(A, B)]) for _ in range(3)]
    for c in [heavy] + light:
        q.push(c)
    order = [q.pop() for _ in range(4)]
    assert order[0] is heavy            # oldest first
    assert order[1:] == light
    assert q.pop() is None


def test_removed_clauses_are_not_returned():
    q = _Queue(1, 1)
    c, d = Clause([Literal(A, B)]), Clause([Literal(mk_app(P, [A]), bot())])
    q.push(c)
    q.push(d)
    q.remove(c)
    assert q.pop() is d and len(q) == 0


def test_gave_up_is_a_distinct_status():
    assert GAVE_UP not in (REFUTATION, RESOURCE_OUT)
