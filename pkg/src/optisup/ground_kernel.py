"""Ground first-order calculus over 𝓕-images and the rootedness check.

``GroundKernel.check_finf`` decides whether ground first-order premises and
conclusion form an instance of a named ground rule.  ``check_rooted`` grounds
a nonground inference and asks the kernel about the 𝓕-images;
``find_rooting`` searches a small space of groundings for one that works.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .clause import Clause, Literal
from .order import EQ, GT, LT, TermOrder
from .simplify import _TRIPLES, FTerm, fol_decode, fol_encode, match_terms
from .terms import (
    BOOL, BOT, DIFF, TOP, App, DB, Lam, Subst, Sym, TCon, Term, Type, apply_subst, bot,
    free_vars, fresh_var, is_functional, is_ground, is_ground_type, normalize, redex,
    strip_arrows, subst_type, term_tvars, top, type_vars,
)
from .unification import Sat, inhabitant, satisfiable, wrap_lams

# HO rule name -> ground rule name
FRULE = {
    "Sup": "FSup", "FluidSup": "FSup",
    "EqRes": "FEqRes", "EqFact": "FEqFact", "Clausify": "FClausify",
    "BoolHoist": "FBoolHoist", "FluidBoolHoist": "FBoolHoist",
    "LoobHoist": "FLoobHoist", "FluidLoobHoist": "FLoobHoist",
    "FalseElim": "FFalseElim", "ArgCong": "FArgCong",
    "Ext": "FExt", "FluidExt": "FExt", "Diff": "FDiff",
}


@dataclass(frozen=True)
class FLit:
    lhs: FTerm
    rhs: FTerm
    positive: bool

    def key(self):
        return frozenset((self.lhs, self.rhs)), self.positive

    def orientations(self):
        yield 0, self.lhs, self.rhs
        if self.lhs != self.rhs:
            yield 1, self.rhs, self.lhs

    def with_side(self, side: int, t: FTerm) -> "FLit":
        return FLit(t, self.rhs, self.positive) if side == 0 else FLit(self.lhs, t, self.positive)


FClause = tuple[FLit, ...]


def f_literal(l: Literal) -> FLit:
    return FLit(fol_encode(l.lhs), fol_encode(l.rhs), l.positive)


def f_clause(lits: Iterable[Literal]) -> FClause:
    return tuple(f_literal(l) for l in lits)


def same_clause(a: Sequence[FLit], b: Sequence[FLit]) -> bool:
    return Counter(l.key() for l in a) == Counter(l.key() for l in b)


def f_positions(t: FTerm, path: tuple = ()) -> Iterator[tuple[tuple, FTerm]]:
    yield path, t
    for i, a in enumerate(t.args):
        yield from f_positions(a, path + (i,))


def f_replace(t: FTerm, path: tuple, s: FTerm) -> FTerm:
    if not path:
        return s
    i = path[0]
    args = list(t.args)
    args[i] = f_replace(args[i], path[1:], s)
    return FTerm(t.sym, tuple(args), t.ty)


FTOP = fol_encode(top())
FBOT = fol_encode(bot())


def _without(c: Sequence[FLit], *idx: int) -> list[FLit]:
    return [l for k, l in enumerate(c) if k not in idx]


def _diff_syms(t: Term, acc: list) -> list:
    match t:
        case Sym(name=n) if n == DIFF:
            if t not in acc:
                acc.append(t)
            for p in t.params:
                _diff_syms(p, acc)
        case Lam():
            _diff_syms(t.body, acc)
        case App():
            _diff_syms(t.head, acc)
            for a in t.args:
                _diff_syms(a, acc)
    return acc


class GroundKernel:
    """Ground inference checks with the eligibility over-approximation: a
    literal is (strictly) eligible if it is negative, of the form t ≈ ⊥, or
    (strictly) maximal."""

    def __init__(self, order: TermOrder):
        self.order = order
        self._dec: dict[FTerm, Term] = {}

    def term(self, t: FTerm) -> Term:
        r = self._dec.get(t)
        if r is None:
            r = self._dec[t] = normalize(fol_decode(t), "long")
        return r

    def enc(self, t: Term) -> FTerm:
        return fol_encode(normalize(t, "long"))

    def gt(self, a: FTerm, b: FTerm) -> bool:
        return self.order.compare_ground(self.term(a), self.term(b)) is GT

    def _ho(self, c: Sequence[FLit]) -> list[Literal]:
        return [Literal(self.term(l.lhs), self.term(l.rhs), l.positive) for l in c]

    def compare_clauses(self, a: Sequence[FLit], b: Sequence[FLit]):
        return self.order.compare_clauses(self._ho(a), self._ho(b))

    # -- eligibility -------------------------------------------------------------

    def maximal(self, c: Sequence[FLit], i: int, strict: bool = False) -> bool:
        ho = self._ho(c)
        for j in range(len(c)):
            if j == i:
                continue
            r = self.order.compare_literals(ho[j], ho[i])
            if r is GT or (strict and r is EQ):
                return False
        return True

    def eligible(self, c: Sequence[FLit], i: int, strict: bool = False) -> bool:
        l = c[i]
        if not l.positive or FBOT in (l.lhs, l.rhs):
            return True
        return self.maximal(c, i, strict)

    def position_eligible(self, c: Sequence[FLit], i: int, side: int) -> bool:
        l = c[i]
        s, t = (l.lhs, l.rhs) if side == 0 else (l.rhs, l.lhs)
        if not self.gt(s, t):
            return False
        return self.eligible(c, i, strict=l.positive)

    # -- rules -------------------------------------------------------------------

    def check_finf(self, rule: str, premises: Sequence[Sequence[FLit]], concl: Sequence[FLit],
                   hints: Sequence[Term] = ()) -> bool:
        """``hints`` are extra ground diff terms to try; β-reduction can
        erase the ones a conclusion was built from."""
        gen = getattr(self, "_" + rule, None)
        if gen is None:
            raise ValueError(f"unknown ground rule {rule}")
        self._hints = [normalize(h, "long") for h in hints]
        return any(same_clause(cand, concl) for cand in gen(list(map(tuple, premises)), tuple(concl)))

    def _FSup(self, prem, concl):
        if len(prem) != 2:
            return
        D, C = prem
        for j, dl in enumerate(D):
            if not dl.positive:
                continue
            for _, t, t2 in dl.orientations():
                if is_functional(t.ty) or not self.gt(t, t2):
                    continue
                if t2.ty is BOOL and t2 != FTOP:
                    continue
                if not self.eligible(D, j, strict=True):
                    continue
                for i, cl in enumerate(C):
                    for side, s, _o in cl.orientations():
                        for path, sub in f_positions(s):
                            if sub != t or not self.position_eligible(C, i, side):
                                continue
                            if self.compare_clauses(D, C) is not LT:
                                continue
                            new = list(C)
                            new[i] = cl.with_side(side, f_replace(s, path, t2))
                            yield _without(D, j) + new

    def _FEqRes(self, prem, concl):
        (C,) = prem
        for i, l in enumerate(C):
            if not l.positive and l.lhs == l.rhs:
                yield _without(C, i)

    def _FEqFact(self, prem, concl):
        (C,) = prem
        for i, l in enumerate(C):
            if not l.positive or not self.maximal(C, i):
                continue
            for _, u, v in l.orientations():
                if not self.gt(u, v):
                    continue
                for k, l2 in enumerate(C):
                    if k == i or not l2.positive:
                        continue
                    for _, u2, v2 in l2.orientations():
                        if u2 == u:
                            yield _without(C, i, k) + [FLit(v, v2, False), FLit(u, v2, True)]

    def _FClausify(self, prem, concl):
        (C,) = prem
        for i, l in enumerate(C):
            if not l.positive or not self.eligible(C, i, strict=True):
                continue
            for _, s, t in l.orientations():
                if t not in (FTOP, FBOT) or s.sym[0] != "f":
                    continue
                rows = _TRIPLES.get((s.sym[1], TOP if t == FTOP else BOT))
                if rows is None:
                    continue
                for row in rows:
                    lits = []
                    for a, b, pol in row:
                        rhs = s.args[b] if isinstance(b, int) else (FTOP if b == TOP else FBOT)
                        lits.append(FLit(s.args[a], rhs, pol))
                    yield _without(C, i) + lits

    def _hoist(self, C, repl: FTerm, val: FTerm):
        for i, l in enumerate(C):
            for side, s, o in l.orientations():
                for path, u in f_positions(s):
                    if u.ty is not BOOL or u in (FTOP, FBOT):
                        continue
                    if not path and o in (FTOP, FBOT):
                        continue
                    if not self.position_eligible(C, i, side):
                        continue
                    new = list(C)
                    new[i] = l.with_side(side, f_replace(s, path, repl))
                    yield new + [FLit(u, val, True)]

    def _FBoolHoist(self, prem, concl):
        yield from self._hoist(prem[0], FBOT, FTOP)

    def _FLoobHoist(self, prem, concl):
        yield from self._hoist(prem[0], FTOP, FBOT)

    def _FFalseElim(self, prem, concl):
        (C,) = prem
        for i, l in enumerate(C):
            if l.positive and {l.lhs, l.rhs} == {FTOP, FBOT} and self.eligible(C, i, strict=True):
                yield _without(C, i)

    def _diffs(self, concl) -> list[Sym]:
        acc: list = [h for h in getattr(self, "_hints", ()) if isinstance(h, Sym) and h.name == DIFF]
        for l in concl:
            _diff_syms(self.term(l.lhs), acc)
            _diff_syms(self.term(l.rhs), acc)
        return acc

    def _FArgCong(self, prem, concl):
        (C,) = prem
        diffs = self._diffs(concl)
        for i, l in enumerate(C):
            if not l.positive or not is_functional(l.lhs.ty) or not self.eligible(C, i):
                continue
            for d in diffs:
                if d.ty is not l.lhs.ty.args[0]:
                    continue
                s, s2 = self.term(l.lhs), self.term(l.rhs)
                yield _without(C, i) + [FLit(self.enc(redex(s, [d])), self.enc(redex(s2, [d])), True)]

    def _FExt(self, prem, concl):
        (C,) = prem
        diffs = self._diffs(concl)
        for i, l in enumerate(C):
            for side, s, _o in l.orientations():
                for path, u in f_positions(s):
                    if not is_functional(u.ty):
                        continue
                    hu = self.term(u)
                    for d in diffs:
                        if normalize(d.params[0], "long") is not hu:
                            continue
                        w = self.enc(d.params[1])
                        if w.ty is not u.ty or not self.gt(u, w):
                            continue
                        if not self.position_eligible(C, i, side):
                            continue
                        new = list(C)
                        new[i] = l.with_side(side, f_replace(s, path, w))
                        yield new + [FLit(self.enc(redex(hu, [d])), self.enc(redex(d.params[1], [d])), False)]

    def _FDiff(self, prem, concl):
        if prem or len(concl) != 2:
            return
        for d in self._diffs(concl):
            u, w = d.params
            neg = FLit(self.enc(redex(u, [d])), self.enc(redex(w, [d])), False)
            for l in concl:
                if not l.positive:
                    continue
                x = fresh_var(d.ty, "_S")
                pu, pw = normalize(redex(u, [x]), "long"), normalize(redex(w, [x]), "long")
                for a, b in ((l.lhs, l.rhs), (l.rhs, l.lhs)):
                    sg = match_terms([(pu, self.term(a)), (pw, self.term(b))])
                    if sg is None:
                        continue
                    s = apply_subst(x, sg)
                    if not is_ground(s):
                        continue
                    yield [neg, FLit(self.enc(redex(u, [s])), self.enc(redex(w, [s])), True)]


# ------------------------------------------------------------ rootedness ----

def _ground(t: Term, s: Subst, default: Type) -> Term:
    """tσ with leftover type variables set to ``default`` and leftover term
    variables to canonical inhabitants."""
    t = apply_subst(t, s)
    tv = {v.name for v in term_tvars(t)}
    if tv:
        t = apply_subst(t, Subst(types={n: default for n in tv}))
    fv = free_vars(t)
    if fv:
        t = apply_subst(t, Subst(terms={v.name: inhabitant(v.ty) for v in fv}))
    return normalize(t, "long")


def _ground_clause(c: Clause, s: Subst, default: Type) -> list[Literal] | None:
    """Ground literals of c under s, or None if a constraint is false."""
    for a, b in c.constraints:
        if _ground(a, s, default) is not _ground(b, s, default):
            return None
    return [Literal(_ground(l.lhs, s, default), _ground(l.rhs, s, default), l.positive)
            for l in c.lits]


def _then(sigma: Subst | None, theta: Subst) -> Subst:
    return theta if sigma is None else sigma.compose(theta)


def check_rooted(kernel: GroundKernel, concl: Clause, theta: Subst, default: Type = BOOL) -> bool:
    """Is the inference producing ``concl`` rooted for the grounding θ of the
    conclusion (premises grounded by σθ)?"""
    inf = concl.origin
    rule = FRULE.get(inf.rule)
    if rule is None:
        raise ValueError(f"{inf.rule} is not a generating inference")
    g = _ground_clause(concl, theta, default)
    if g is None:
        return False
    st = _then(inf.subst, theta)
    prems = []
    for p in inf.evidence.get("premises", ()):
        gp = _ground_clause(p, st, default)
        if gp is None:
            return False
        prems.append(f_clause(gp))
    hints: list = []
    for t in concl.terms():
        _diff_syms(t, hints)
    hints = [_ground(h, theta, default) for h in hints]
    return kernel.check_finf(rule, prems, f_clause(g), hints)


def _base_types(clauses: Iterable[Clause]) -> list[Type]:
    out: list[Type] = []
    def walk(ty):
        if isinstance(ty, TCon):
            if not ty.args and ty is not BOOL and ty not in out:
                out.append(ty)
            for a in ty.args:
                walk(a)
    for c in clauses:
        for t in c.terms() + c.constraint_terms():
            for v in free_vars(t):
                walk(v.ty)
            walk(t.ty)
    return out


def _closed_subterms(t: Term, acc: set) -> None:
    if t.loose == 0 and is_ground(t):
        acc.add(t)
    match t:
        case Lam():
            _closed_subterms(t.body, acc)
        case App():
            for a in t.args:
                _closed_subterms(a, acc)


def _candidates(ty: Type, pool: set, limit: int = 6) -> list[Term]:
    """Ground terms of type ty: the canonical inhabitant, pool terms, and
    constant functions and projections built from them."""
    out = [inhabitant(ty)]
    out += sorted((t for t in pool if t.ty is ty), key=repr)
    if is_functional(ty):
        args, res = strip_arrows(ty)
        for k, a in enumerate(args):
            if a is res:
                out.append(normalize(wrap_lams(args, DB(len(args) - 1 - k, res)), "long"))
        body = [t for t in sorted(pool, key=repr) if t.ty is res]
        out += [normalize(wrap_lams(args, b), "long") for b in body]
    seen, uniq = set(), []
    for t in out:
        if t not in seen:
            seen.add(t)
            uniq.append(t)
    return uniq[:limit]


def find_rooting(kernel: GroundKernel, concl: Clause, max_tries: int = 64) -> Subst | None:
    """Search for a grounding θ of the conclusion under which its inference is rooted."""
    inf = concl.origin
    prem = list(inf.evidence.get("premises", ()))
    tnames = sorted({v.name for v in concl.tvars()})
    if inf.subst is not None:
        for p in prem:
            for t in p.terms() + p.constraint_terms():
                tnames += [v.name for v in term_tvars(apply_subst(t, inf.subst)) if v.name not in tnames]
    tcands = (_base_types([concl] + prem) + [BOOL])[:2]
    tries = 0
    for tys in itertools.product(tcands, repeat=len(tnames)):
        tsub = Subst(types=dict(zip(tnames, tys)))
        default = tys[0] if tys else tcands[0]
        c_t = concl.apply(tsub, concl.origin)
        base = Subst(types=dict(tsub.types))
        if c_t.constraints:
            r = satisfiable(c_t.constraints)
            if r.status is not Sat.SAT:
                continue
            base = tsub.compose(r.witness)
        vs = sorted(concl.apply(base).vars(), key=lambda v: v.name)
        pool: set = set()
        for p in prem:
            gp = _ground_clause(p, _then(inf.subst, base), default)
            if gp:
                for l in gp:
                    _closed_subterms(l.lhs, pool)
                    _closed_subterms(l.rhs, pool)
        cands = []
        for v in vs:
            vt = subst_type(v.ty, {tv.name: default for tv in type_vars(v.ty)}) if not is_ground_type(v.ty) else v.ty
            cands.append([(v.name, o) for o in _candidates(vt, pool)])
        for combo in itertools.product(*cands):
            theta = base.compose(Subst(terms=dict(combo)))
            if check_rooted(kernel, concl, theta, default):
                return theta
            tries += 1
            if tries >= max_tries:
                return None
    return None


@dataclass
class StepCheck:
    clause: Clause
    verdict: str          # "input", "simplification", "rooted", "unrooted", "skipped"
    grounding: Subst | None = None


def check_proof(steps: Iterable[Clause], order: TermOrder) -> list[StepCheck]:
    """Rootedness of every generating step; steps whose constraints have no
    ground solution found by ``satisfiable`` are reported as skipped."""
    kernel = GroundKernel(order)
    out = []
    for c in steps:
        inf = c.origin
        if inf.rule == "input":
            out.append(StepCheck(c, "input"))
        elif inf.simplification or inf.rule not in FRULE:
            out.append(StepCheck(c, "simplification"))
        elif c.constraints and satisfiable(c.constraints).status is not Sat.SAT:
            out.append(StepCheck(c, "skipped"))
        else:
            theta = find_rooting(kernel, c)
            out.append(StepCheck(c, "rooted" if theta is not None else "unrooted", theta))
    return out
