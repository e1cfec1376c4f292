"""Brute-force completeness oracle for bounded preunification.

Signature a, b : i and g : i > i, variables X : i and F : i > i.  Problems
are all pairs of distinct terms of depth at most 2; their ground unifiers are
found by enumerating X and F over the depth-2 ground universe.  A unifier θ is
covered by an alternative (σ, T) when some ρ over the same universe unifies T
and agrees with θ on X and F after σ.
"""
from __future__ import annotations

import itertools
from typing import Callable

from gen import A, B, I, II
from optisup.terms import DB, Lam, Signature, Subst, Var, apply_subst, free_vars, mk_app, normalize
from optisup.unification import csu_upto

SIG3 = Signature()
SIG3.add_tycon("i")
for _n, _ty in (("a", I), ("b", I), ("g", II)):
    SIG3.add_const(_n, _ty)
X3, F3 = Var("X", I), Var("F", II)
G3 = SIG3.const("g")


def _closure(depth: int, leaves: list, apply) -> list:
    out = list(leaves)
    for _ in range(depth):
        out = list(dict.fromkeys(leaves + [u for t in out for u in apply(t)]))
    return out


PROBLEM_TERMS = _closure(2, [A, B, X3], lambda t: [mk_app(G3, [t]), normalize(mk_app(F3, [t]))])
GROUND_I = _closure(2, [A, B], lambda t: [mk_app(G3, [t])])
GROUND_II = [normalize(Lam(I, b)) for b in _closure(2, [A, B, DB(0, I)], lambda t: [mk_app(G3, [t])])]


def _candidates(ty) -> list:
    return GROUND_I if ty is I else GROUND_II if ty is II else []


def covered(theta: dict, alts: list) -> bool:
    for sigma, rest in alts:
        images = [(normalize(apply_subst(v, sigma)), theta[v.name]) for v in (X3, F3)]
        fresh = sorted(set().union(*(free_vars(a) for a, _ in images),
                                   *(free_vars(x) | free_vars(y) for x, y in rest)),
                       key=lambda v: v.name)
        for vals in itertools.product(*(_candidates(v.ty) for v in fresh)):
            rho = Subst(terms={v.name: val for v, val in zip(fresh, vals)})
            if all(normalize(apply_subst(a, rho)) is b for a, b in images) and \
                    all(normalize(apply_subst(x, rho)) is normalize(apply_subst(y, rho)) for x, y in rest):
                return True
    return False


def completeness(solver: Callable = csu_upto) -> tuple[int, int, int]:
    """(problems, ground unifiers, unifiers not covered by ``solver``)."""
    problems = unifiers = misses = 0
    for s, t in itertools.combinations(PROBLEM_TERMS, 2):
        problems += 1
        alts = None
        for xv, fv in itertools.product(GROUND_I, GROUND_II):
            th = Subst(terms={"X": xv, "F": fv})
            if normalize(apply_subst(s, th)) is not normalize(apply_subst(t, th)):
                continue
            unifiers += 1
            if alts is None:
                alts = solver([(s, t)])
            if not covered({"X": xv, "F": fv}, alts):
                misses += 1
    return problems, unifiers, misses
