"""First-order encoding of ground terms and the simplification rules.

``Simplifier.simplify`` applies the local rules to a fixpoint; the rules that
need other clauses (subsumption, demodulation, equality subsumption,
simplify-reflect) take the partner clause explicitly.

A rule returns ``None`` when it does not apply, otherwise the list of
clauses that replaces its premise (empty list = deletion).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .clause import Clause, Inference, Literal, has_mixed_param_var, sqsupset
from .order import GT, TermOrder, multiset_compare
from .terms import (
    AND, BOOL, BOT, EQ as EQ_SYM, HOLE, IMP, NEQ, NOT, OR, TOP, App, DB, Lam, Subst, Sym, TVar,
    Term, Type, TypingError, Var, apply_subst, arrows, bot, diff_term, fresh_var, head_args,
    is_functional, is_ground, mk_app, normalize, redex, replace_at, subst_db, top,
)
from .unification import UnifConfig, csu
from .unification import match as ho_match


# ============================================================ 𝓕 encoding ====

@dataclass(frozen=True)
class FTerm:
    """First-order term.  ``sym`` is ``("f", name, tyargs, params)`` for a
    symbol f^τ̄_ū, or ``("fun", template)`` for a functional term whose
    outermost proper yellow subterms were replaced by □."""
    sym: tuple
    args: tuple["FTerm", ...]
    ty: Type

    def __repr__(self) -> str:
        from .printing import show_term
        if self.sym[0] == "fun":
            name = "fun[" + show_term(self.sym[1]) + "]"
        else:
            _, n, tys, ps = self.sym
            name = n
            if tys:
                from .terms import show_type
                name += "<" + ", ".join(show_type(a) for a in tys) + ">"
            if ps:
                name += "{" + ", ".join(show_term(p) for p in ps) + "}"
        if not self.args:
            return name
        return f"{name}({', '.join(map(repr, self.args))})"

    def subterms(self) -> Iterator["FTerm"]:
        yield self
        for a in self.args:
            yield from a.subterms()


def _hole(ty: Type) -> Sym:
    return Sym(HOLE, (), (), ty)


def _abstract(t: Term, root: bool, out: list) -> Term:
    if not root and t.loose == 0:
        out.append(t)
        return _hole(t.ty)
    match t:
        case Lam():
            return Lam(t.bty, _abstract(t.body, False, out))
        case App() if isinstance(t.head, (Sym, DB)):
            return App(t.head, [_abstract(a, False, out) for a in t.args])
    return t


def fol_encode(t: Term) -> FTerm:
    """𝓕 on a ground term (computed on the η-long representative)."""
    if not is_ground(t):
        raise ValueError("the first-order encoding is defined on ground terms only")
    return _enc(normalize(t, "long"))


def _enc(t: Term) -> FTerm:
    if is_functional(t.ty):
        subs: list = []
        tmpl = _abstract(t, True, subs)
        return FTerm(("fun", tmpl), tuple(_enc(s) for s in subs), t.ty)
    head, args = head_args(t)
    if not isinstance(head, Sym):
        raise ValueError(f"unexpected head in a ground nonfunctional term: {head!r}")
    return FTerm(("f", head.name, head.tyargs, head.params), tuple(_enc(a) for a in args), t.ty)


def fol_decode(ft: FTerm) -> Term:
    """Inverse of ``fol_encode``; the result is normalized in the global mode."""
    return normalize(_dec(ft))


def _dec(ft: FTerm) -> Term:
    args = [_dec(a) for a in ft.args]
    if ft.sym[0] == "f":
        _, name, tyargs, params = ft.sym
        head = Sym(name, tyargs, params, arrows([a.ty for a in args], ft.ty))
        return mk_app(head, args)
    if ft.sym[0] != "fun":
        raise ValueError(f"ill-formed first-order term {ft!r}")
    it = iter(args)
    try:
        r = _fill(ft.sym[1], it)
    except StopIteration:
        raise ValueError("too few arguments for a fun symbol") from None
    if next(it, None) is not None:
        raise ValueError("too many arguments for a fun symbol")
    if r.ty is not ft.ty:
        raise ValueError("fun symbol decodes to a term of the wrong type")
    return normalize(r, "long")


def _fill(t: Term, it) -> Term:
    match t:
        case Sym(name=n) if n == HOLE:
            s = next(it)
            if s.ty is not t.ty:
                raise ValueError("hole filled with a term of the wrong type")
            return s
        case Lam():
            return Lam(t.bty, _fill(t.body, it))
        case App():
            return App(t.head, [_fill(a, it) for a in t.args])
    return t


# ============================================================== matching ====

class _NoMatch(Exception):
    pass


class _Matcher:
    """Syntactic one-sided matching on normalized terms.  Applied pattern
    variables are deferred to higher-order matching."""

    def __init__(self):
        self.types: dict[str, Type] = {}
        self.terms: dict[str, Term] = {}
        self.deferred: list[tuple[Term, Term]] = []

    def copy(self) -> "_Matcher":
        m = _Matcher()
        m.types, m.terms, m.deferred = dict(self.types), dict(self.terms), list(self.deferred)
        return m

    def ty(self, p: Type, t: Type) -> None:
        if isinstance(p, TVar):
            b = self.types.get(p.name)
            if b is None:
                self.types[p.name] = t
            elif b is not t:
                raise _NoMatch
            return
        if isinstance(t, TVar) or p.name != t.name or len(p.args) != len(t.args):
            raise _NoMatch
        for a, b in zip(p.args, t.args):
            self.ty(a, b)

    def term(self, p: Term, t: Term) -> None:
        if p is t and not p.has_var and not p.has_tvar:
            return
        match p:
            case Var():
                self.ty(p.ty, t.ty)
                if t.loose:
                    raise _NoMatch
                b = self.terms.get(p.name)
                if b is None:
                    self.terms[p.name] = t
                elif b is not t:
                    raise _NoMatch
                return
            case Sym():
                if not isinstance(t, Sym) or t.name != p.name or len(t.params) != len(p.params):
                    raise _NoMatch
                for a, b in zip(p.tyargs, t.tyargs):
                    self.ty(a, b)
                for a, b in zip(p.params, t.params):
                    self.term(a, b)
                self.ty(p.ty, t.ty)
                return
            case DB():
                if not isinstance(t, DB) or t.index != p.index:
                    raise _NoMatch
                self.ty(p.ty, t.ty)
                return
            case Lam():
                if not isinstance(t, Lam):
                    raise _NoMatch
                self.ty(p.bty, t.bty)
                self.term(p.body, t.body)
                return
            case App():
                if isinstance(p.head, Var):
                    if p.loose or t.loose:
                        raise _NoMatch
                    self.deferred.append((p, t))
                    return
                if not isinstance(t, App) or len(t.args) != len(p.args):
                    raise _NoMatch
                self.term(p.head, t.head)
                for a, b in zip(p.args, t.args):
                    self.term(a, b)
                return
        raise _NoMatch

    def result(self, pairs: Sequence[tuple[Term, Term]]) -> Subst | None:
        s = Subst(dict(self.types), dict(self.terms))
        if self.deferred:
            s2 = ho_match(list(pairs))
            if s2 is None:
                return None
            s = s2
        for p, t in pairs:
            if apply_subst(p, s) is not normalize(t):
                return None
        return s


def match_terms(pairs: Sequence[tuple[Term, Term]]) -> Subst | None:
    """σ with pσ = t for every pair; target variables are rigid.  The
    patterns must not share variables with the targets."""
    m = _Matcher()
    try:
        for p, t in pairs:
            m.term(p, t)
    except _NoMatch:
        return None
    return m.result(pairs)


# ================================================= clause-local helpers ====

def _lits_without(c: Clause, idx: Iterable[int]) -> list[Literal]:
    drop = set(idx)
    return [l for i, l in enumerate(c.lits) if i not in drop]


def _derive(c: Clause, lits, rule: str, cons=None, s: Subst | None = None, **ev) -> Clause:
    return Clause(lits, c.constraints if cons is None else cons,
                  Inference(rule, (c.id,), s, ev, simplification=True))


def _is_sym(t: Term, name: str) -> bool:
    return isinstance(t, Sym) and t.name == name


def delete_duplicates(c: Clause) -> list[Clause] | None:
    seen: list[Literal] = []
    for l in c.lits:
        if l not in seen:
            seen.append(l)
    if len(seen) == len(c.lits):
        return None
    return [_derive(c, seen, "DupLit")]


def delete_resolved(c: Clause) -> list[Clause] | None:
    keep = [l for l in c.lits if l.positive or l.lhs is not l.rhs]
    keep = [l for l in keep if not (l.positive and {_sym_name(l.lhs), _sym_name(l.rhs)} == {TOP, BOT})]
    if len(keep) == len(c.lits):
        return None
    removed = [l for l in c.lits if l not in keep]
    rule = "FalseElim" if all(l.positive for l in removed) else "ResolvedLit"
    return [_derive(c, keep, rule)]


def _sym_name(t: Term):
    return t.name if isinstance(t, Sym) else None


def is_tautology(c: Clause) -> bool:
    for l in c.lits:
        if l.positive and l.lhs is l.rhs:
            return True
    pos = {(l.lhs, l.rhs) for l in c.lits if l.positive}
    for l in c.lits:
        if not l.positive and ((l.lhs, l.rhs) in pos or (l.rhs, l.lhs) in pos):
            return True
    return False


def not_true(c: Clause) -> Clause | None:
    """s ≉ ⊤ → s ≈ ⊥"""
    return _not_tf(c, TOP, bot(), "NotTrue")


def not_false(c: Clause) -> Clause | None:
    """s ≉ ⊥ → s ≈ ⊤"""
    return _not_tf(c, BOT, top(), "NotFalse")


def _not_tf(c: Clause, name: str, repl: Term, rule: str) -> Clause | None:
    for i, l in enumerate(c.lits):
        if l.positive:
            continue
        for a, b in ((l.lhs, l.rhs), (l.rhs, l.lhs)):
            if _is_sym(b, name):
                lits = list(c.lits)
                lits[i] = Literal(a, repl, True)
                return _derive(c, lits, rule, lit=i)
    return None


def neg_ext(c: Clause) -> Clause | None:
    """C′ ∨ s ≉ s′ (functional) → C′ ∨ s diff(s,s′) ≉ s′ diff(s,s′)"""
    for i, l in enumerate(c.lits):
        if l.positive or not is_functional(l.lhs.ty):
            continue
        d = diff_term(l.lhs, l.rhs)
        lits = list(c.lits)
        lits[i] = Literal(normalize(redex(l.lhs, [d])), normalize(redex(l.rhs, [d])), False)
        return _derive(c, lits, "NegExt", lit=i)
    return None


def arg_cong_simp(c: Clause) -> Clause | None:
    """ArgCong with the identity type substitution, as a replacement."""
    for i, l in enumerate(c.lits):
        if not l.positive or not is_functional(l.lhs.ty):
            continue
        x = fresh_var(l.lhs.ty.args[0], "_A")
        lits = list(c.lits)
        lits[i] = Literal(normalize(redex(l.lhs, [x])), normalize(redex(l.rhs, [x])), True)
        return _derive(c, lits, "ArgCong", lit=i, fresh=(x,))
    return None


_TRIPLES = {
    (AND, TOP): [[(0, TOP, True)], [(1, TOP, True)]],
    (AND, BOT): [[(0, BOT, True), (1, BOT, True)]],
    (OR, TOP): [[(0, TOP, True), (1, TOP, True)]],
    (OR, BOT): [[(0, BOT, True)], [(1, BOT, True)]],
    (IMP, TOP): [[(0, BOT, True), (1, TOP, True)]],
    (IMP, BOT): [[(0, TOP, True)], [(1, BOT, True)]],
    (EQ_SYM, TOP): [[(0, 1, True)]],
    (EQ_SYM, BOT): [[(0, 1, False)]],
    (NEQ, TOP): [[(0, 1, False)]],
    (NEQ, BOT): [[(0, 1, True)]],
    (NOT, TOP): [[(0, BOT, True)]],
    (NOT, BOT): [[(0, TOP, True)]],
}


def clausify_simp(c: Clause) -> list[Clause] | None:
    """Clausify on a literal with a connective head and a ⊤/⊥ side: the
    unifier is the identity on the clause, so all conclusions replace it."""
    for i, l in enumerate(c.lits):
        if not l.positive:
            continue
        for s, t in ((l.lhs, l.rhs), (l.rhs, l.lhs)):
            if not (_is_sym(t, TOP) or _is_sym(t, BOT)):
                continue
            h, args = head_args(s)
            if not isinstance(h, Sym) or h.params:
                continue
            rows = _TRIPLES.get((h.name, t.name))
            if rows is None or len(args) != (1 if h.name == NOT else 2):
                continue
            out = []
            for row in rows:
                lits = _lits_without(c, [i])
                for a, b, pol in row:
                    rhs = args[b] if isinstance(b, int) else (top() if b == TOP else bot())
                    lits.append(Literal(args[a], rhs, pol))
                out.append(_derive(c, lits, "Clausify", lit=i))
            return out
    return None


def bool_hoist_simp(c: Clause) -> list[Clause] | None:
    """BoolHoist and LoobHoist together at a Boolean green subterm."""
    from .terms import iter_green
    for i, l in enumerate(c.lits):
        for side, (s, o) in enumerate(((l.lhs, l.rhs), (l.rhs, l.lhs))):
            for p, u in iter_green(s):
                if u.ty is not BOOL or isinstance(u, Var) or _is_sym(u, TOP) or _is_sym(u, BOT):
                    continue
                if p == () and (_is_sym(o, TOP) or _is_sym(o, BOT)):
                    continue
                out = []
                for rule, repl, val in (("BoolHoist", bot(), top()), ("LoobHoist", top(), bot())):
                    lits = list(c.lits)
                    ns = replace_at(s, p, repl)
                    lits[i] = Literal(ns, o, l.positive) if side == 0 else Literal(o, ns, l.positive)
                    lits.append(Literal(u, val, True))
                    out.append(_derive(c, lits, rule, lit=i, side=side, pos=p))
                return out
    return None


def unif_simplify(c: Clause, cfg: UnifConfig) -> list[Clause] | None:
    """Unif: replace C⟦S⟧ by its instances under a complete set of unifiers."""
    if not c.constraints:
        return None
    r = csu(c.constraints, cfg)
    if not r.complete:
        return None
    out = []
    for s in r.unifiers:
        lits = [l.map(lambda t: apply_subst(t, s)) for l in c.lits]
        d = Clause(lits, (), Inference("Unif", (c.id,), s, {}, simplification=True))
        if not sqsupset(c, d):
            return None
        out.append(d)
    return out


# ============================================ subsumption and rewriting ====

def _rename(c: Clause) -> Clause:
    from .calculus import rename
    return rename(c)


def subsumes(c: Clause, d: Clause) -> Subst | None:
    """σ with Cσ a submultiset of D when Subsumption may delete D.

    C must be unconstrained and free of variables occurring both inside and
    outside parameters; if Cσ is all of D, Cσ⟦S⟧ ⊐ C is required."""
    if c.constraints or len(c.lits) > len(d.lits):
        return None
    if has_mixed_param_var(c.terms()):
        return None
    if sum(1 for l in c.lits if l.positive) > sum(1 for l in d.lits if l.positive):
        return None
    cr = _rename(c)
    s = _submultiset(cr.lits, d.lits)
    if s is None:
        return None
    if len(c.lits) == len(d.lits):
        inst = Clause([l.map(lambda t: apply_subst(t, s)) for l in cr.lits], d.constraints)
        if not sqsupset(inst, c):
            return None
    return s


def _submultiset(cl: Sequence[Literal], dl: Sequence[Literal]) -> Subst | None:
    order = sorted(range(len(cl)), key=lambda k: -_lit_size(cl[k]))

    def go(k: int, used: frozenset, m: _Matcher, pairs: list) -> Subst | None:
        if k == len(order):
            return m.result(pairs)
        lc = cl[order[k]]
        for j, ld in enumerate(dl):
            if j in used or ld.positive != lc.positive:
                continue
            for a, b in ((ld.lhs, ld.rhs), (ld.rhs, ld.lhs)):
                m2 = m.copy()
                try:
                    m2.term(lc.lhs, a)
                    m2.term(lc.rhs, b)
                except _NoMatch:
                    continue
                r = go(k + 1, used | {j}, m2, pairs + [(lc.lhs, a), (lc.rhs, b)])
                if r is not None:
                    return r
        return None
    return go(0, frozenset(), _Matcher(), [])


def _lit_size(l: Literal) -> int:
    from .terms import syntactic_size
    return syntactic_size(l.lhs) + syntactic_size(l.rhs)


def is_variant(c: Clause, d: Clause) -> bool:
    """Same clause up to renaming of term and type variables."""
    if len(c.lits) != len(d.lits) or c.size() != d.size() or len(c.constraints) != len(d.constraints):
        return False
    if c.constraints:
        return c.variant_key() == d.variant_key()
    cr = _rename(c)
    s = _submultiset(cr.lits, d.lits)
    if s is None:
        return False
    vals = list(s.terms.values())
    if not all(isinstance(v, Var) for v in vals) or len({v.name for v in vals}) != len(vals):
        return False
    tv = list(s.types.values())
    return all(isinstance(v, TVar) for v in tv) and len({v.name for v in tv}) == len(tv)


def _orange_sites(t: Term, pos=(), binders=()) -> Iterator[tuple[tuple, Term, tuple]]:
    """(position, subterm, binder types outermost first) for orange positions."""
    yield pos, t, binders
    match t:
        case Lam():
            yield from _orange_sites(t.body, pos + (1,), binders + (t.bty,))
        case App() if isinstance(t.head, (Sym, DB)):
            for i, a in enumerate(t.args, 1):
                yield from _orange_sites(a, pos + (i,), binders)


def _close(v: Term, binders: tuple) -> tuple[Term, dict]:
    """v with its loose indices replaced by fresh variables (and the map back)."""
    if not v.loose:
        return v, {}
    n = len(binders)
    m, back = {}, {}
    for i in range(v.loose):
        x = fresh_var(binders[n - 1 - i], "_D")
        m[i] = x
        back[x.name] = i
    return normalize(subst_db(v, m), "long"), back


def _open(t: Term, back: dict, depth: int = 0) -> Term:
    """Inverse of ``_close``: fresh variables back to De Bruijn indices."""
    if not back or not t.has_var:
        return t
    match t:
        case Var():
            i = back.get(t.name)
            return DB(i + depth, t.ty) if i is not None else t
        case Sym():
            return t
        case Lam():
            return Lam(t.bty, _open(t.body, back, depth + 1))
        case App():
            return redex(_open(t.head, back, depth), [_open(a, back, depth) for a in t.args])
    return t


@dataclass
class Rewrite:
    clause: Clause
    unit: Clause


class Simplifier:
    def __init__(self, order: TermOrder, unif: UnifConfig | None = None):
        self.order = order
        self.unif = unif or UnifConfig(depth=4, budget=300, max_unifiers=8)

    # -- local rules --------------------------------------------------------------

    def step(self, c: Clause) -> list[Clause] | None:
        if is_tautology(c):
            return []
        for rule in (delete_duplicates, delete_resolved):
            r = rule(c)
            if r is not None:
                return r
        for rule in (not_true, not_false, neg_ext, arg_cong_simp):
            r = rule(c)
            if r is not None:
                return [r]
        for rule in (clausify_simp, bool_hoist_simp):
            r = rule(c)
            if r is not None:
                return r
        return unif_simplify(c, self.unif)

    def simplify(self, c: Clause, limit: int = 200) -> list[Clause]:
        """Local simplification to a fixpoint; returns the replacement set."""
        todo, done = [c], []
        steps = 0
        while todo:
            d = todo.pop()
            r = self.step(d) if steps < limit else None
            steps += 1
            if r is None:
                done.append(d)
            else:
                todo.extend(reversed(r))
        return done

    # -- rules with a partner clause ----------------------------------------------

    def _unit_ok(self, unit: Clause) -> bool:
        return (len(unit.lits) == 1 and not unit.constraints and
                not has_mixed_param_var(unit.terms()))

    def demodulate(self, unit: Clause, c: Clause) -> Clause | None:
        """Rewrite one orange subterm of c with the positive unit equation."""
        if unit is c or not self._unit_ok(unit) or not unit.lits[0].positive:
            return None
        u = _rename(unit)
        l = u.lits[0]
        for t, t2 in ((l.lhs, l.rhs), (l.rhs, l.lhs)):
            if not _vars_sub(t2, t):
                continue
            r = self._demod_with(t, t2, c, unit)
            if r is not None:
                return r
        return None

    def _demod_with(self, t: Term, t2: Term, c: Clause, unit: Clause) -> Clause | None:
        ht = head_args(t)[0]
        for i, lit in enumerate(c.lits):
            for side, s in enumerate((lit.lhs, lit.rhs)):
                for p, v, binders in _orange_sites(normalize(s, "long")):
                    if isinstance(ht, Sym):
                        hv = head_args(v)[0]
                        if not isinstance(hv, Sym) or hv.name != ht.name:
                            continue
                    if v.ty is not t.ty and not t.has_tvar:
                        continue
                    vc, back = _close(v, binders)
                    sg = match_terms([(normalize(t, "long"), vc)])
                    if sg is None:
                        continue
                    v2 = normalize(_open(normalize(apply_subst(t2, sg), "long"), back), "long")
                    if v2 is v:
                        continue
                    try:
                        ns = replace_at(s, p, v2, "long")
                    except (TypingError, KeyError):
                        continue
                    lits = list(c.lits)
                    lits[i] = Literal(ns, lit.rhs, lit.positive) if side == 0 else \
                        Literal(lit.lhs, ns, lit.positive)
                    lits[i] = lits[i].map(normalize)
                    if self.order.compare_clauses(c.lits, lits) is not GT:
                        continue
                    if not self._above_preterm_eq(c.lits, v, v2):
                        continue
                    return Clause(lits, c.constraints,
                                  Inference("Demod", (unit.id, c.id), sg,
                                            {"lit": i, "side": side, "pos": p}, simplification=True))
        return None

    def _above_preterm_eq(self, lits: Sequence[Literal], v: Term, v2: Term) -> bool:
        """C ≻ (v ≈ v′) with v, v′ possibly containing loose indices."""
        enc = [self.order.literal_multiset(l) for l in lits]
        return multiset_compare(enc, [[v, v2]], lambda a, b: multiset_compare(
            a, b, self.order.compare)) is GT

    def equality_subsumes(self, unit: Clause, c: Clause) -> bool:
        """Does the positive unit make the positive literal s[v] ≈ s′[v′] of c redundant?"""
        if unit is c or not self._unit_ok(unit) or not unit.lits[0].positive:
            return False
        u = _rename(unit)
        l = u.lits[0]
        for lit in c.lits:
            if not lit.positive:
                continue
            for v, v2 in _disagreements(normalize(lit.lhs, "long"), normalize(lit.rhs, "long")):
                if self._matches_pair(l, v, v2) and self._above_preterm_eq(c.lits, v, v2):
                    return True
        return False

    def _matches_pair(self, l: Literal, v: Term, v2: Term) -> bool:
        """Is (v, v′) an instance of the unit (either orientation) after closing?"""
        binders_needed = max(v.loose, v2.loose)
        if binders_needed:
            return self._matches_open(l, v, v2)
        for t, t2 in ((l.lhs, l.rhs), (l.rhs, l.lhs)):
            if match_terms([(normalize(t, "long"), v), (normalize(t2, "long"), v2)]) is not None:
                return True
        return False

    def _matches_open(self, l: Literal, v: Term, v2: Term) -> bool:
        tys = _loose_types(v) | _loose_types(v2)
        n = max(v.loose, v2.loose)
        if set(tys) != set(range(n)) and not all(i in tys for i in range(n)):
            # unused indices: their type is irrelevant, any placeholder type works
            for i in range(n):
                tys.setdefault(i, BOOL)
        binders = tuple(tys[n - 1 - k] for k in range(n))
        m = {}
        for i in range(n):
            m[i] = fresh_var(binders[n - 1 - i], "_D")
        vc = normalize(subst_db(v, m), "long")
        vc2 = normalize(subst_db(v2, m), "long")
        for t, t2 in ((l.lhs, l.rhs), (l.rhs, l.lhs)):
            if match_terms([(normalize(t, "long"), vc), (normalize(t2, "long"), vc2)]) is not None:
                return True
        return False

    def simplify_reflect(self, unit: Clause, c: Clause) -> Clause | None:
        """Delete a literal of c that the unit refutes: positive unit against a
        negative literal s[v] ≉ s[v′], or negative unit against an instance."""
        if unit is c or not self._unit_ok(unit):
            return None
        u = _rename(unit)
        l = u.lits[0]
        for i, lit in enumerate(c.lits):
            if lit.positive == l.positive:
                continue
            rest = _lits_without(c, [i])
            if has_mixed_param_var([t for k in rest for t in (k.lhs, k.rhs)]):
                continue
            hit = False
            if l.positive:
                for v, v2 in _disagreements(normalize(lit.lhs, "long"), normalize(lit.rhs, "long")):
                    if self._matches_pair(l, v, v2) and self._above_preterm_eq(c.lits, v, v2):
                        hit = True
                        break
            else:
                hit = self._matches_pair(l, normalize(lit.lhs, "long"), normalize(lit.rhs, "long"))
            if hit:
                rule = "PosSimplifyReflect" if l.positive else "NegSimplifyReflect"
                return Clause(rest, c.constraints,
                              Inference(rule, (unit.id, c.id), None, {"lit": i}, simplification=True))
        return None


def _loose_types(t: Term, depth: int = 0, acc: dict | None = None) -> dict:
    acc = {} if acc is None else acc
    if t.loose <= depth:
        return acc
    match t:
        case DB():
            acc[t.index - depth] = t.ty
        case Lam():
            _loose_types(t.body, depth + 1, acc)
        case App():
            _loose_types(t.head, depth, acc)
            for a in t.args:
                _loose_types(a, depth, acc)
    return acc


def _disagreements(s: Term, t: Term) -> Iterator[tuple[Term, Term]]:
    """Pairs (v, v′) at the orange positions where s and t can differ while
    agreeing everywhere else, outermost first."""
    if s is t:
        return
    yield s, t
    match s, t:
        case Lam(), Lam() if s.bty is t.bty:
            yield from _disagreements(s.body, t.body)
        case App(), App() if s.head is t.head and isinstance(s.head, (Sym, DB)) and len(s.args) == len(t.args):
            diff = [k for k, (a, b) in enumerate(zip(s.args, t.args)) if a is not b]
            if len(diff) == 1:
                k = diff[0]
                yield from _disagreements(s.args[k], t.args[k])


def _vars_sub(a: Term, b: Term) -> bool:
    from .terms import free_vars, term_tvars
    return {v.name for v in free_vars(a)} <= {v.name for v in free_vars(b)} and \
        {v.name for v in term_tvars(a)} <= {v.name for v in term_tvars(b)}
