"""Random terms over a small fixed signature, shared by the property tests."""
from __future__ import annotations

import random

from optisup.terms import (
    BOOL, TCon, Term, Var, Signature, Subst, DB, Lam, arrow, bot, conj, diff_term, disj,
    eq_term, mk_app, neg, normalize, top,
)

I = TCon("i")
II = arrow(I, I)

SIG = Signature()
SIG.add_tycon("i")
SIG.add_const("a", I)
SIG.add_const("b", I)
SIG.add_const("f", arrow(I, II))
SIG.add_const("g", arrow(II, I))
SIG.add_const("p", arrow(I, BOOL))
SIG.add_const("h", II, (), (I,))     # one parameter of type i

A = SIG.const("a")
B = SIG.const("b")
F = SIG.const("f")
G = SIG.const("g")
P = SIG.const("p")


def H(param: Term) -> Term:
    return SIG.const("h", (), (param,))


X, Y = Var("X", I), Var("Y", I)
Z = Var("Z", II)
VARS = (X, Y, Z)


class Gen:
    """Random β-normal terms of types i, o and i > i.

    With ``vars`` set, free variables X, Y : i and Z : i > i (applied or not)
    may occur outside parameters."""

    def __init__(self, rng: random.Random, vars: bool = False, diff: bool = True):
        self.rng, self.vars, self.diff = rng, vars, diff

    def __call__(self, ty=I, depth: int = 3) -> Term:
        return normalize(self.term(ty, depth, ()))

    def term(self, ty, depth: int, env: tuple) -> Term:
        if ty is I:
            return self._i(depth, env)
        if ty is BOOL:
            return self._o(depth, env)
        return self._ii(depth, env)

    def _i(self, d: int, env: tuple) -> Term:
        r = self.rng
        leaves = [A, B] + [DB(k, I) for k in range(len(env))]
        if self.vars:
            leaves += [X, Y]
        if d <= 0:
            return r.choice(leaves)
        k = r.randrange(7 + (1 if self.vars else 0))
        if k <= 1:
            return r.choice(leaves)
        if k == 2:
            return mk_app(F, [self._i(d - 1, env), self._i(d - 1, env)])
        if k == 3:
            return mk_app(G, [self._ii(d - 1, env)])
        if k == 4:
            # parameters are closed and ground
            return mk_app(H(Gen(r, False, self.diff)._i(d - 1, ())), [self._i(d - 1, env)])
        if k == 5 and self.diff:
            u = Gen(r, False, False)._ii(d - 1, ())
            w = Gen(r, False, False)._ii(d - 1, ())
            return diff_term(u, w)
        if k == 7:
            return mk_app(Z, [self._i(d - 1, env)])
        return mk_app(F, [self._i(d - 1, env), r.choice(leaves)])

    def _o(self, d: int, env: tuple) -> Term:
        r = self.rng
        if d <= 0:
            return r.choice([top(), bot(), mk_app(P, [r.choice([A, B])])])
        k = r.randrange(6)
        if k == 0:
            return r.choice([top(), bot()])
        if k == 1:
            return conj(self._o(d - 1, env), self._o(d - 1, env))
        if k == 2:
            return disj(self._o(d - 1, env), self._o(d - 1, env))
        if k == 3:
            return neg(self._o(d - 1, env))
        if k == 4:
            return eq_term(self._i(d - 1, env), self._i(d - 1, env))
        return mk_app(P, [self._i(d - 1, env)])

    def _ii(self, d: int, env: tuple) -> Term:
        r = self.rng
        k = r.randrange(4 if self.vars else 3)
        if k == 0 or d <= 0:
            return Lam(I, self._i(d - 1, env + (I,)))
        if k == 1:
            return mk_app(F, [self._i(d - 1, env)])
        if k == 2:
            return H(Gen(r, False, self.diff)._i(d - 1, ()))
        return Z


def grounding(rng: random.Random, depth: int = 2) -> Subst:
    g = Gen(rng)
    return Subst(terms={"X": g(I, depth), "Y": g(I, depth), "Z": g(II, depth)})
