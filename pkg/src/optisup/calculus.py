"""Core inference rules over constrained clauses.

Every rule takes premises (which it renames apart itself) and returns the
list of conclusions.  Each conclusion carries an ``Inference`` whose
``evidence`` holds the renamed premises, the literal/position used and any
fresh variables, so that ground instances can be replayed later.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .clause import Clause, Eligibility, Inference, Literal, Selection
from .order import EQ, GT, INC, LT, TermOrder
from .terms import (
    AND, BOOL, BOT, EQ as EQ_SYM, IMP, NEQ, NOT, OR, TOP, DB, Lam, Subst, Sym, TVar, Term, Var,
    apply_subst, arrow, bot, conj, diff_term, disj, eq_term, fresh_tvar, fresh_var, head_args,
    impl, is_functional, iter_green, neg, neq_term, normalize, redex, replace_at, subst_type,
    top,
)
from .unification import DEFAULT, UnifConfig, csu, csu_upto

CORE_RULES = (
    "Sup", "FluidSup", "EqRes", "EqFact", "Clausify", "BoolHoist", "LoobHoist",
    "FluidBoolHoist", "FluidLoobHoist", "FalseElim", "ArgCong", "Ext", "FluidExt",
)


# ------------------------------------------------------------- renaming ----

def rename(c: Clause) -> Clause:
    """A variant of c with fresh term and type variables (same origin)."""
    tv = c.tvars()
    vs = c.vars()
    if not tv and not vs:
        return c
    types = {v.name: fresh_tvar() for v in tv}
    terms = {}
    for v in vs:
        terms[v.name] = fresh_var(subst_type(v.ty, types), "_V")
    s = Subst(types, terms)
    r = c.apply(s, c.origin)
    return r


def _not_le(order: TermOrder, a: Term, b: Term) -> bool:
    """a ⋠ b"""
    return order.compare(a, b) in (GT, INC)


def _is_sym(t: Term, name: str) -> bool:
    return isinstance(t, Sym) and t.name == name


def _flex(t: Term) -> bool:
    return isinstance(head_args(t)[0], Var)


def _rigid_bool_not_top(t: Term) -> bool:
    """A Boolean term none of whose ground instances is ⊤."""
    return t.ty is BOOL and isinstance(head_args(t)[0], Sym) and not _is_sym(t, TOP)


def _apply_lits(lits: Iterable[Literal], s: Subst) -> list[Literal]:
    if s.is_empty():
        return list(lits)
    return [l.map(lambda t: apply_subst(t, s)) for l in lits]


def _apply_pairs(pairs, s: Subst) -> list:
    if s.is_empty():
        return list(pairs)
    return [(apply_subst(a, s), apply_subst(b, s)) for a, b in pairs]


def _green_sites(c: Clause) -> Iterator[tuple[int, int, tuple, Term]]:
    """(literal index, side, position, subterm) for every green position."""
    for i, l in enumerate(c.lits):
        for side, t in enumerate((l.lhs, l.rhs)):
            for p, u in iter_green(t):
                yield i, side, p, u


def _replace_side(l: Literal, side: int, p: tuple, s: Term) -> Literal:
    if side == 0:
        return Literal(replace_at(l.lhs, p, s), l.rhs, l.positive)
    return Literal(l.lhs, replace_at(l.rhs, p, s), l.positive)


def _graft(lits, i: int, side: int, p: tuple, u: Term, repl: Term, s: Subst) -> list[Literal]:
    """lits with repl at green position p of literal i, all instantiated by s.

    A hole of u's type is placed first: repl may only match u's type under s."""
    h = fresh_var(u.ty, "_H")
    lits = [(_replace_side(k, side, p, h) if m == i else k) for m, k in enumerate(lits)]
    s2 = s.copy()
    s2.terms[h.name] = normalize(apply_subst(repl, s))
    return _apply_lits(lits, s2)


def _side(l: Literal, side: int) -> Term:
    return l.lhs if side == 0 else l.rhs


def _apply_nf(t: Term, args) -> Term:
    return normalize(redex(t, list(args)))


def _is_identity(z: Term) -> bool:
    """Is z the (normalized) λ 0?"""
    a, b = z.ty.args
    return a is b and z is normalize(Lam(a, DB(0, a)))


def _may_unify(t: Term, u: Term) -> bool:
    """Cheap head-symbol prefilter for t ≡ u."""
    ht, hu = head_args(t)[0], head_args(u)[0]
    if not isinstance(ht, Sym) or not isinstance(hu, Sym):
        return True
    return ht.name == hu.name


def _fun_type_subst(ty) -> Subst | None:
    """Most general type substitution making ty functional."""
    if is_functional(ty):
        return Subst()
    if isinstance(ty, TVar):
        return Subst(types={ty.name: arrow(fresh_tvar(), fresh_tvar())})
    return None


def _bool_type_subst(ty) -> Subst | None:
    if ty is BOOL:
        return Subst()
    if isinstance(ty, TVar):
        return Subst(types={ty.name: BOOL})
    return None


# ------------------------------------------------------ clausify triples ----

def clausify_triples() -> list[tuple[Term, Term, list[Literal]]]:
    """The fourteen (s', t', D) triples with fresh x, y and type variable α."""
    x, y = fresh_var(BOOL, "_P"), fresh_var(BOOL, "_P")
    a = fresh_tvar()
    xa, ya = fresh_var(a, "_E"), fresh_var(a, "_E")
    T, F = top(), bot()

    def pos(u, v):
        return Literal(u, v, True)

    def negl(u, v):
        return Literal(u, v, False)
    return [
        (conj(x, y), T, [pos(x, T)]),
        (conj(x, y), T, [pos(y, T)]),
        (conj(x, y), F, [pos(x, F), pos(y, F)]),
        (disj(x, y), T, [pos(x, T), pos(y, T)]),
        (disj(x, y), F, [pos(x, F)]),
        (disj(x, y), F, [pos(y, F)]),
        (impl(x, y), T, [pos(x, F), pos(y, T)]),
        (impl(x, y), F, [pos(x, T)]),
        (impl(x, y), F, [pos(y, F)]),
        (eq_term(xa, ya), T, [pos(xa, ya)]),
        (eq_term(xa, ya), F, [negl(xa, ya)]),
        (neq_term(xa, ya), T, [negl(xa, ya)]),
        (neq_term(xa, ya), F, [pos(xa, ya)]),
        (neg(x), T, [pos(x, F)]),
        (neg(x), F, [pos(x, T)]),
    ]


_CONNECTIVES = {AND, OR, IMP, EQ_SYM, NEQ, NOT}


def _clausify_candidate(s: Term, t: Term) -> bool:
    if isinstance(s, Var):
        return False
    hs = head_args(s)[0]
    if isinstance(hs, Sym) and hs.name not in _CONNECTIVES:
        return False
    return _flex(t) or _is_sym(t, TOP) or _is_sym(t, BOT)


# -------------------------------------------------------------- engine ----

@dataclass
class Calculus:
    order: TermOrder
    selection: Selection = field(default_factory=Selection)
    unif: UnifConfig = DEFAULT
    fluid: UnifConfig = field(default_factory=lambda: UnifConfig(depth=3, budget=300, max_unifiers=16))
    disabled: frozenset = frozenset()
    incomplete: bool = False   # some full csu was cut by the budget

    def __post_init__(self) -> None:
        self.elig = Eligibility(self.order, self.selection)

    def on(self, rule: str) -> bool:
        return rule not in self.disabled

    def _csu(self, pairs, cfg: UnifConfig | None = None):
        r = csu(pairs, cfg or self.fluid)
        if not r.complete:
            self.incomplete = True
        return r.unifiers

    def _concl(self, lits, cons, rule, parents, s, premises, **ev) -> Clause:
        ev["premises"] = tuple(premises)
        return Clause(lits, cons, Inference(rule, tuple(p.id for p in parents), s, ev))

    # -- Sup / FluidSup --------------------------------------------------------

    def sup(self, D: Clause, C: Clause) -> list[Clause]:
        """All Sup and FluidSup conclusions from D into C."""
        out: list[Clause] = []
        if self.selection(D):
            return out
        D0, C0 = D, C
        D, C = rename(D), rename(C)
        sel_c = self.selection(C0)
        for j, lj in enumerate(D.lits):
            if not lj.positive or not self.elig.maximal(D.lits, j, strict=True):
                continue
            for t, t2 in ((lj.lhs, lj.rhs), (lj.rhs, lj.lhs)):
                if self.order.compare(t, t2) in (LT, EQ):
                    continue
                for i, side, p, u in _green_sites(C):
                    if sel_c and i not in sel_c:
                        continue
                    if isinstance(u, (Var, Lam)):
                        continue
                    if _flex(u):
                        if self.on("FluidSup"):
                            out += self._fluid_sup(D0, C0, D, C, j, t, t2, i, side, p, u)
                        if not self.on("Sup"):
                            continue
                    elif not self.on("Sup"):
                        continue
                    if not _may_unify(t, u):
                        continue
                    out += self._sup_at(D0, C0, D, C, j, t, t2, i, side, p, u)
        return out

    def _sup_at(self, D0, C0, D, C, j, t, t2, i, side, p, u) -> list[Clause]:
        out = []
        pairs = list(D.constraints) + list(C.constraints) + [(t, u)]
        for s, U in csu_upto(pairs, self.unif):
            if is_functional(apply_subst(u, s).ty):
                continue
            ts, t2s = apply_subst(t, s), apply_subst(t2, s)
            if not _not_le(self.order, ts, t2s):
                continue
            if _rigid_bool_not_top(t2s):
                continue  # never rooted: ground rewriting of Booleans only to ⊤
            if not self.elig.eligible_side(C, i, side, s):
                continue
            if not self.elig.maximal(_apply_lits(D.lits, s), j, strict=True):
                continue
            lits = _apply_lits([l for k, l in enumerate(D.lits) if k != j], s)
            lits += _graft(C.lits, i, side, p, u, t2, s)
            out.append(self._concl(lits, U, "Sup", (D0, C0), s, (D, C),
                                   d_lit=j, c_lit=i, side=side, pos=p))
        return out

    def _fluid_sup(self, D0, C0, D, C, j, t, t2, i, side, p, u) -> list[Clause]:
        out = []
        z = fresh_var(arrow(t.ty, u.ty), "_Z")
        zt, zt2 = _apply_nf(z, [t]), _apply_nf(z, [t2])
        for s in self._csu([(zt, u)]):
            us = apply_subst(u, s)
            if is_functional(us.ty):
                continue
            if apply_subst(zt, s) is apply_subst(zt2, s):
                continue
            if _is_identity(apply_subst(z, s)):
                continue
            ts, t2s = apply_subst(t, s), apply_subst(t2, s)
            if not _not_le(self.order, ts, t2s):
                continue
            if not self.elig.eligible_side(C, i, side, s):
                continue
            if not self.elig.maximal(_apply_lits(D.lits, s), j, strict=True):
                continue
            lits = _apply_lits([l for k, l in enumerate(D.lits) if k != j], s)
            lits += _graft(C.lits, i, side, p, u, zt2, s)
            cons = list(D.constraints) + list(C.constraints)
            out.append(self._concl(lits, _apply_pairs(cons, s), "FluidSup",
                                   (D0, C0), s, (D, C), d_lit=j, c_lit=i, side=side, pos=p,
                                   fresh=(z,)))
        return out

    # -- EqRes / EqFact ----------------------------------------------------------

    def eq_res(self, C0: Clause) -> list[Clause]:
        out: list[Clause] = []
        if not self.on("EqRes"):
            return out
        C = rename(C0)
        sel = self.selection(C0)
        for i, l in enumerate(C.lits):
            if l.positive or (sel and i not in sel):
                continue
            if not sel and not self.elig.maximal(C.lits, i):
                continue
            for s, U in csu_upto(list(C.constraints) + [(l.lhs, l.rhs)], self.unif):
                if not sel and not self.elig.maximal(_apply_lits(C.lits, s), i):
                    continue
                rest = [k for n, k in enumerate(C.lits) if n != i]
                out.append(self._concl(_apply_lits(rest, s), U, "EqRes", (C0,), s, (C,), lit=i))
        return out

    def eq_fact(self, C0: Clause) -> list[Clause]:
        out: list[Clause] = []
        if not self.on("EqFact") or self.selection(C0):
            return out
        C = rename(C0)
        n = len(C.lits)
        for i in range(n):
            li = C.lits[i]
            if not li.positive or not self.elig.maximal(C.lits, i):
                continue
            for u, v in ((li.lhs, li.rhs), (li.rhs, li.lhs)):
                if self.order.compare(u, v) in (LT, EQ):
                    continue
                for j in range(n):
                    lj = C.lits[j]
                    if j == i or not lj.positive:
                        continue
                    for u2, v2 in ((lj.lhs, lj.rhs), (lj.rhs, lj.lhs)):
                        if u.ty is not u2.ty and not (u.has_tvar or u2.has_tvar):
                            continue
                        pairs = list(C.constraints) + [(u, u2)]
                        for s, U in csu_upto(pairs, self.unif):
                            if not self.elig.maximal(_apply_lits(C.lits, s), i):
                                continue
                            if not _not_le(self.order, apply_subst(u, s), apply_subst(v, s)):
                                continue
                            rest = [k for m, k in enumerate(C.lits) if m not in (i, j)]
                            # u and u2 may share a type only under s
                            us, vs, v2s = (apply_subst(t, s) for t in (u, v, v2))
                            lits = _apply_lits(rest, s)
                            lits += [Literal(vs, v2s, False), Literal(us, v2s, True)]
                            out.append(self._concl(lits, U, "EqFact", (C0,), s,
                                                   (C,), lit=i, other=j))
        return out

    # -- Boolean rules -------------------------------------------------------------

    def clausify(self, C0: Clause) -> list[Clause]:
        out: list[Clause] = []
        if not self.on("Clausify"):
            return out
        C = rename(C0)
        sel = self.selection(C0)
        for i, l in enumerate(C.lits):
            if not l.positive or (sel and i not in sel):
                continue
            if not sel and not self.elig.maximal(C.lits, i, strict=True):
                continue
            for s_, t_ in ((l.lhs, l.rhs), (l.rhs, l.lhs)):
                if not _clausify_candidate(s_, t_):
                    continue
                for s1, t1, dl in clausify_triples():
                    for sg in self._csu([(s_, s1), (t_, t1)], self._clausify_cfg(s_, t_)):
                        if not sel and not self.elig.maximal(_apply_lits(C.lits, sg), i, strict=True):
                            continue
                        rest = [k for m, k in enumerate(C.lits) if m != i] + dl
                        out.append(self._concl(_apply_lits(rest, sg), _apply_pairs(C.constraints, sg),
                                               "Clausify", (C0,), sg, (C,), lit=i))
        return out

    def _clausify_cfg(self, s: Term, t: Term) -> UnifConfig:
        # rigid-rigid problems are decided by decomposition alone
        return self.unif if not (_flex(s) or _flex(t)) else self.fluid

    def hoist(self, C0: Clause) -> list[Clause]:
        """BoolHoist, LoobHoist and their fluid variants."""
        out: list[Clause] = []
        C = rename(C0)
        for i, side, p, u in _green_sites(C):
            l = C.lits[i]
            other = _side(l, 1 - side)
            if p == () and (_is_sym(other, TOP) or _is_sym(other, BOT)):
                continue
            if isinstance(u, Var) or _is_sym(u, TOP) or _is_sym(u, BOT):
                continue
            if _flex(u):
                out += self._fluid_hoist(C0, C, i, side, p, u)
            s = _bool_type_subst(u.ty)
            if s is None:
                continue
            if not self.elig.eligible_side(C, i, side, s):
                continue
            for rule, repl, val in (("BoolHoist", bot(), top()), ("LoobHoist", top(), bot())):
                if not self.on(rule):
                    continue
                lits = _graft(C.lits, i, side, p, u, repl, s) + [Literal(apply_subst(u, s), val, True)]
                out.append(self._concl(lits, _apply_pairs(C.constraints, s), rule, (C0,), s, (C,),
                                       lit=i, side=side, pos=p))
        return out

    def _fluid_hoist(self, C0, C, i, side, p, u) -> list[Clause]:
        out = []
        rules = [r for r in ("FluidBoolHoist", "FluidLoobHoist") if self.on(r)]
        if not rules:
            return out
        x = fresh_var(BOOL, "_P")
        z = fresh_var(arrow(BOOL, u.ty), "_Z")
        zx = _apply_nf(z, [x])
        for s in self._csu([(zx, u)]):
            us = apply_subst(u, s)
            if is_functional(us.ty):
                continue
            if _is_identity(apply_subst(z, s)):
                continue
            xs = apply_subst(x, s)
            if _is_sym(xs, TOP) or _is_sym(xs, BOT):
                continue
            if not self.elig.eligible_side(C, i, side, s):
                continue
            zxs = apply_subst(zx, s)
            for rule in rules:
                repl, val = (bot(), top()) if rule == "FluidBoolHoist" else (top(), bot())
                zr = _apply_nf(z, [repl])
                if apply_subst(zr, s) is zxs:
                    continue
                lits = _graft(C.lits, i, side, p, u, zr, s) + _apply_lits([Literal(x, val, True)], s)
                out.append(self._concl(lits, _apply_pairs(C.constraints, s), rule, (C0,), s, (C,),
                                       lit=i, side=side, pos=p, fresh=(x, z)))
        return out

    def false_elim(self, C0: Clause) -> list[Clause]:
        out: list[Clause] = []
        if not self.on("FalseElim"):
            return out
        C = rename(C0)
        sel = self.selection(C0)
        for i, l in enumerate(C.lits):
            if not l.positive or (sel and i not in sel):
                continue
            if not sel and not self.elig.maximal(C.lits, i, strict=True):
                continue
            for a, b in ((l.lhs, l.rhs), (l.rhs, l.lhs)):
                if l.lhs.ty is not BOOL and not isinstance(l.lhs.ty, TVar):
                    continue
                if not (_flex(a) or _is_sym(a, BOT)) or not (_flex(b) or _is_sym(b, TOP)):
                    continue
                pairs = list(C.constraints) + [(a, bot()), (b, top())]
                for s, U in csu_upto(pairs, self.unif):
                    if not sel and not self.elig.maximal(_apply_lits(C.lits, s), i, strict=True):
                        continue
                    rest = [k for m, k in enumerate(C.lits) if m != i]
                    out.append(self._concl(_apply_lits(rest, s), U, "FalseElim", (C0,), s, (C,), lit=i))
        return out

    # -- functional rules -------------------------------------------------------------

    def arg_cong(self, C0: Clause) -> list[Clause]:
        out: list[Clause] = []
        if not self.on("ArgCong"):
            return out
        C = rename(C0)
        sel = self.selection(C0)
        for i, l in enumerate(C.lits):
            if not l.positive or (sel and i not in sel):
                continue
            s = _fun_type_subst(l.lhs.ty)
            if s is None:
                continue
            if not sel and not self.elig.maximal(_apply_lits(C.lits, s), i, strict=True):
                continue
            a, b = apply_subst(l.lhs, s), apply_subst(l.rhs, s)
            x = fresh_var(a.ty.args[0], "_A")
            rest = _apply_lits([k for m, k in enumerate(C.lits) if m != i], s)
            rest.append(Literal(_apply_nf(a, [x]), _apply_nf(b, [x]), True))
            out.append(self._concl(rest, _apply_pairs(C.constraints, s), "ArgCong", (C0,), s, (C,),
                                   lit=i, fresh=(x,)))
        return out

    def ext(self, C0: Clause) -> list[Clause]:
        out: list[Clause] = []
        C = rename(C0)
        for i, side, p, u in _green_sites(C):
            if _flex(u) and not isinstance(u, Var) and not is_functional(u.ty):
                out += self._fluid_ext(C0, C, i, side, p, u)
            s = _fun_type_subst(u.ty)
            if not self.on("Ext"):
                continue
            if s is None:
                continue
            if not self.elig.eligible_side(C, i, side, s):
                continue
            us = apply_subst(u, s)
            y = fresh_var(us.ty, "_Y")
            d = diff_term(us, normalize(y))
            lits = _graft(C.lits, i, side, p, u, normalize(y), s)
            lits.append(Literal(_apply_nf(us, [d]), _apply_nf(y, [d]), False))
            out.append(self._concl(lits, _apply_pairs(C.constraints, s), "Ext", (C0,), s, (C,),
                                   lit=i, side=side, pos=p, fresh=(y,)))
        return out

    def _fluid_ext(self, C0, C, i, side, p, u) -> list[Clause]:
        out = []
        if not self.on("FluidExt") or isinstance(u, Var):
            return out
        fty = arrow(fresh_tvar(), fresh_tvar())
        x, y = fresh_var(fty, "_X"), fresh_var(fty, "_Y")
        z = fresh_var(arrow(fty, u.ty), "_Z")
        zx, zy = _apply_nf(z, [x]), _apply_nf(z, [y])
        for s in self._csu(list(C.constraints) + [(zx, u)]):
            us = apply_subst(u, s)
            if is_functional(us.ty):
                continue
            if apply_subst(zx, s) is apply_subst(zy, s):
                continue
            if _is_identity(apply_subst(z, s)):
                continue
            if not self.elig.eligible_side(C, i, side, s):
                continue
            xs, ys = normalize(apply_subst(x, s)), normalize(apply_subst(y, s))
            d = diff_term(xs, ys)
            lits = _graft(C.lits, i, side, p, u, zy, s)
            lits.append(Literal(_apply_nf(xs, [d]), _apply_nf(ys, [d]), False))
            out.append(self._concl(lits, _apply_pairs(C.constraints, s), "FluidExt", (C0,), s, (C,),
                                   lit=i, side=side, pos=p, fresh=(x, y, z)))
        return out

    # -- driver -------------------------------------------------------------------------

    def unary(self, C: Clause) -> list[Clause]:
        out = []
        out += self.eq_res(C)
        out += self.eq_fact(C)
        out += self.clausify(C)
        out += self.hoist(C)
        out += self.false_elim(C)
        out += self.arg_cong(C)
        out += self.ext(C)
        return out

    def generate(self, given: Clause, active: Iterable[Clause]) -> list[Clause]:
        """All conclusions between the given clause and the active set (which
        is expected to contain the given clause already)."""
        out = self.unary(given)
        for d in active:
            out += self.sup(d, given)
            if d is not given:
                out += self.sup(given, d)
        return out


def diff_axiom() -> Clause:
    """y (diff(y,z)) ≉ z (diff(y,z)) ∨ y x ≈ z x, polymorphic with fresh variables."""
    a, b = fresh_tvar(), fresh_tvar()
    fty = arrow(a, b)
    y, z = fresh_var(fty, "_Y"), fresh_var(fty, "_Z")
    x = fresh_var(a, "_X")
    yn, zn = normalize(y), normalize(z)
    d = diff_term(yn, zn)
    lits = [Literal(_apply_nf(yn, [d]), _apply_nf(zn, [d]), False),
            Literal(_apply_nf(yn, [x]), _apply_nf(zn, [x]), True)]
    return Clause(lits, (), Inference("Diff", (), None, {"premises": ()}))
