"""A Knuth-Bendix style term order for lambda-terms with diff.

Weights:
  * a diff-headed term weighs ``w_diff`` plus its arguments (parameters are ignored),
  * any other symbol weighs w(f) plus its parameters and arguments,
  * a De Bruijn-headed term weighs ``w_db`` plus its arguments,
  * a lambda weighs ``w_lam`` plus its body,
  * a variable-headed term (an atom) weighs 1.

On equal weight, heads are ranked: De Bruijn indices > symbols by precedence
> lambda > false > true.  Same heads are broken lexicographically (type
arguments, parameters, arguments; diff compares its parameters last).

With ``w_db >= w_diff`` and ``w_lam >= 1`` every ground term u of function
type is strictly heavier than ``u diff(s, t)``.  Ranking De Bruijn heads
above all symbols keeps a comparison valid when loose indices are replaced by
diff-terms, which demodulation relies on.

Comparisons of terms with variables return GT only when the verdict is
stable under every grounding; otherwise INC.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .terms import (
    BOT, DIFF, TOP, DB, Lam, Sym, TVar, Term, Type, Var, head_args, normalize, strip_arrows,
)


class Ord(enum.Enum):
    LT = "<"
    EQ = "="
    GT = ">"
    INC = "?"

    def flip(self) -> "Ord":
        return {Ord.LT: Ord.GT, Ord.GT: Ord.LT}.get(self, self)


LT, EQ, GT, INC = Ord.LT, Ord.EQ, Ord.GT, Ord.INC


@dataclass
class OrderParams:
    weights: dict[str, int] = field(default_factory=dict)
    precedence: list[str] = field(default_factory=list)   # highest first
    arities: dict[str, int] = field(default_factory=dict)
    w_db: int = 1
    w_lam: int = 1
    w_diff: int = 1
    default_weight: int = 1

    def __post_init__(self) -> None:
        if self.weights.get(TOP, 1) != 1 or self.weights.get(BOT, 1) != 1:
            raise ValueError("true and false must have weight 1")
        if any(w < 1 for w in self.weights.values()) or self.w_lam < 1 or self.default_weight < 1:
            raise ValueError("weights must be positive")
        if self.w_db < self.w_diff or self.w_diff < 1:
            raise ValueError("the De Bruijn weight must be at least the diff weight")
        self._prec_index = {n: i for i, n in enumerate(self.precedence)}

    def weight(self, name: str) -> int:
        return self.weights.get(name, self.default_weight)

    def prec_key(self, name: str) -> tuple:
        """Larger key = higher precedence."""
        if name == TOP:
            return (0, 0)
        if name == BOT:
            return (0, 1)
        i = self._prec_index.get(name)
        if i is not None:
            return (3, -i)
        # unlisted symbols: higher arity first, then name
        return (2, self.arities.get(name, 0), name)

    @classmethod
    def from_signature(cls, sig, weights=None, precedence=None) -> "OrderParams":
        ar = {}
        for d in sig.decls.values():
            ar[d.name] = len(strip_arrows(d.result)[0]) + len(d.param_types)
        return cls(weights=dict(weights or {}), precedence=list(precedence or []), arities=ar)


# ---------------------------------------------------------- type order ----

def _tweight(t: Type) -> int:
    if isinstance(t, TVar):
        return 1
    return 1 + sum(_tweight(a) for a in t.args)


def _tvcount(t: Type, c: Counter) -> Counter:
    if isinstance(t, TVar):
        c[t.name] += 1
    else:
        for a in t.args:
            _tvcount(a, c)
    return c


def compare_types(s: Type, t: Type) -> Ord:
    """KBO on types; total on ground types, stable otherwise."""
    if s is t:
        return EQ
    cs, ct = _tvcount(s, Counter()), _tvcount(t, Counter())
    s_ok = all(cs[k] >= v for k, v in ct.items())
    t_ok = all(ct[k] >= v for k, v in cs.items())
    ws, wt = _tweight(s), _tweight(t)
    if ws > wt:
        return GT if s_ok else INC
    if wt > ws:
        return LT if t_ok else INC
    if isinstance(s, TVar) or isinstance(t, TVar):
        return INC
    if s.name != t.name:
        r = GT if s.name > t.name else LT
    elif len(s.args) != len(t.args):
        r = GT if len(s.args) > len(t.args) else LT
    else:
        r = EQ
        for a, b in zip(s.args, t.args):
            r = compare_types(a, b)
            if r is not EQ:
                break
        if r is INC:
            return INC
    if r is GT:
        return GT if s_ok else INC
    if r is LT:
        return LT if t_ok else INC
    return r


# ---------------------------------------------------------- term order ----

class TermOrder:
    """Comparison of terms (and preterms) under fixed parameters."""

    def __init__(self, params: OrderParams | None = None):
        self.p = params or OrderParams()
        self._cache: dict = {}
        self._wcache: dict = {}

    # -- statistics of a term ------------------------------------------------

    def _stats(self, t: Term):
        """(weight, atom multiset, tvar-typed non-atom counter, vars outside params)."""
        r = self._wcache.get(t)
        if r is None:
            atoms: Counter = Counter()
            tv: Counter = Counter()
            w = self._walk(t, atoms, tv)
            r = (w, atoms, tv)
            self._wcache[t] = r
        return r

    def _walk(self, t: Term, atoms: Counter, tv: Counter) -> int:
        p = self.p
        head, args = head_args(t)
        if isinstance(head, Var):
            atoms[t] += 1
            return 1
        if isinstance(t, Lam):
            return p.w_lam + self._walk(t.body, atoms, tv)
        if isinstance(t.ty, TVar):
            tv[t.ty.name] += 1
        w = sum(self._walk(a, atoms, tv) for a in args)
        match head:
            case DB():
                return w + p.w_db
            case Sym(name=n) if n == DIFF:
                return w + p.w_diff
            case Sym():
                return w + p.weight(head.name) + sum(self._walk(q, atoms, tv) for q in head.params)
        raise TypeError(f"unexpected head {head!r}")

    def weight(self, t: Term) -> int:
        return self._stats(_long(t))[0]

    # -- comparison -----------------------------------------------------------

    def compare(self, s: Term, t: Term) -> Ord:
        s, t = _long(s), _long(t)
        return self._cmp(s, t)

    def compare_ground(self, s: Term, t: Term) -> Ord:
        r = self.compare(s, t)
        if r is INC:
            raise AssertionError("ground comparison returned INC")
        return r

    def gt(self, s: Term, t: Term) -> bool:
        return self.compare(s, t) is GT

    def _cmp(self, s: Term, t: Term) -> Ord:
        if s is t:
            return EQ
        key = (s, t)
        r = self._cache.get(key)
        if r is None:
            r = self._cmp_raw(s, t)
            self._cache[key] = r
            self._cache[(t, s)] = r.flip()
        return r

    def _dominates(self, s: Term, t: Term) -> bool:
        """Variable conditions under which s can be stably above t."""
        _, as_, tvs = self._stats(s)
        _, at, tvt = self._stats(t)
        if any(as_[k] < v for k, v in at.items()):
            return False
        if any(tvs[k] < v for k, v in tvt.items()):
            return False
        return _vars_outside(t) <= _vars_outside(s)

    def _cmp_raw(self, s: Term, t: Term) -> Ord:
        ws, wt = self._stats(s)[0], self._stats(t)[0]
        s_dom = self._dominates(s, t)
        t_dom = self._dominates(t, s)
        if ws > wt:
            return GT if s_dom else INC
        if wt > ws:
            return LT if t_dom else INC
        r = self._tiebreak(s, t)
        if r is GT:
            return GT if s_dom else INC
        if r is LT:
            return LT if t_dom else INC
        return r

    def _tiebreak(self, s: Term, t: Term) -> Ord:
        hs, as_ = head_args(s)
        ht, at = head_args(t)
        if isinstance(hs, Var) or isinstance(ht, Var):
            return INC
        if s.ty is not t.ty and (isinstance(s.ty, TVar) or isinstance(t.ty, TVar)):
            # type instantiation may eta-expand one side only
            return INC
        rs, rt = self._rank(hs), self._rank(ht)
        if rs != rt:
            return GT if rs > rt else LT
        match hs:
            case Lam():
                r = compare_types(hs.bty, ht.bty)
                if r is not EQ:
                    return r
                return self._cmp(hs.body, ht.body)
            case DB():
                r = compare_types(hs.ty, ht.ty)
                if r is not EQ:
                    return r
                return self._lex(as_, at)
            case Sym():
                r = _lex_types(hs.tyargs, ht.tyargs)
                if r is not EQ:
                    return r
                if hs.name == DIFF:
                    r = self._lex(as_, at)
                    return r if r is not EQ else self._lex(hs.params, ht.params)
                r = self._lex(hs.params, ht.params)
                return r if r is not EQ else self._lex(as_, at)
        raise TypeError(f"unexpected head {hs!r}")

    def _rank(self, h: Term) -> tuple:
        match h:
            case DB():
                return (4, h.index)
            case Lam():
                return (2,)
            case Sym(name=n) if n == BOT:
                return (1,)
            case Sym(name=n) if n == TOP:
                return (0,)
            case Sym():
                return (3, self.p.prec_key(h.name))
        raise TypeError(f"unexpected head {h!r}")

    def _lex(self, xs: Sequence[Term], ys: Sequence[Term]) -> Ord:
        for a, b in zip(xs, ys):
            r = self._cmp(a, b)
            if r is not EQ:
                return r
        if len(xs) != len(ys):
            return GT if len(xs) > len(ys) else LT
        return EQ

    # -- literals and clauses ------------------------------------------------

    def compare_multisets(self, ms: Sequence, mt: Sequence, cmp=None) -> Ord:
        return multiset_compare(list(ms), list(mt), cmp or self._cmp_any)

    def _cmp_any(self, a, b) -> Ord:
        return self.compare(a, b)

    def literal_multiset(self, lit) -> list[Term]:
        s, t = _long(lit.lhs), _long(lit.rhs)
        return [s, t] if lit.positive else [s, s, t, t]

    def compare_literals(self, l1, l2) -> Ord:
        return multiset_compare(self.literal_multiset(l1), self.literal_multiset(l2), self._cmp)

    def compare_clauses(self, c1: Iterable, c2: Iterable) -> Ord:
        m1 = [self.literal_multiset(l) for l in c1]
        m2 = [self.literal_multiset(l) for l in c2]
        return multiset_compare(m1, m2, lambda a, b: multiset_compare(a, b, self._cmp))


def _lex_types(xs, ys) -> Ord:
    for a, b in zip(xs, ys):
        r = compare_types(a, b)
        if r is not EQ:
            return r
    return EQ


def _long(t: Term) -> Term:
    return normalize(t, "long")


_out_cache: dict = {}


def _vars_outside(t: Term) -> frozenset:
    r = _out_cache.get(t)
    if r is None:
        from .terms import vars_outside_params
        r = frozenset(vars_outside_params(t))
        _out_cache[t] = r
    return r


def multiset_compare(ms: list, mt: list, cmp) -> Ord:
    """Dershowitz-Manna extension; INC unless one side provably dominates."""
    ms, mt = list(ms), list(mt)
    # cancel syntactically equal elements
    rest_t = []
    for y in mt:
        for i, x in enumerate(ms):
            if x is y or (isinstance(x, list) and isinstance(y, list) and _seq_eq(x, y)):
                del ms[i]
                break
        else:
            rest_t.append(y)
    mt = rest_t
    if not ms and not mt:
        return EQ

    def covers(big, small):
        return all(any(cmp(x, y) is GT for x in big) for y in small)

    if ms and covers(ms, mt):
        return GT
    if mt and covers(mt, ms):
        return LT
    return INC


def _seq_eq(a: list, b: list) -> bool:
    if len(a) != len(b):
        return False
    rb = list(b)
    for x in a:
        for i, y in enumerate(rb):
            if x is y:
                del rb[i]
                break
        else:
            return False
    return True
