"""Higher-order unification with type arguments and parameters.

Constraints are pairs of locally closed terms.  Internally all terms are
handled in eta-long form; the substitutions handed back are normalized to the
global eta mode.

Entry points:

* ``unify_types``       first-order mgu on types.
* ``csu_upto``          bounded preunification; leaves keep their leftover
                        constraints, so the result is complete up to those.
* ``csu``               complete set of unifiers by iterative deepening; the
                        ``complete`` flag is dropped whenever the search had to
                        cut a branch or guess a flex-flex solution.
* ``satisfiable``       SAT / UNSAT / UNKNOWN for a constraint set, with a
                        verified ground witness in the SAT case.
* ``match``             one-sided matching by freezing the target's variables.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .terms import (
    BOOL, DB, DIFF, TCon, TVar, Lam, Subst, Sym, Term, Type, Var, apply_subst, arrows,
    eta_normalize, fresh_var, free_vars, get_eta_mode, head_args, mk_app, normalize,
    strip_arrows, term_tvars, top, bot, type_vars,
)

Constraint = tuple[Term, Term]


@dataclass
class UnifConfig:
    depth: int = 6              # depth bound of the preunification tree
    budget: int = 2000          # node budget per call
    pattern: bool = True
    fixpoint: bool = True
    max_unifiers: int = 64


DEFAULT = UnifConfig()


class Sat(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


# ---------------------------------------------------------------- types ----

def _walk(ty: Type, m: dict) -> Type:
    while isinstance(ty, TVar) and ty.name in m:
        ty = m[ty.name]
    return ty


def _occurs_t(name: str, ty: Type, m: dict) -> bool:
    ty = _walk(ty, m)
    if isinstance(ty, TVar):
        return ty.name == name
    return any(_occurs_t(name, a, m) for a in ty.args)


def unify_types(pairs: Iterable[tuple[Type, Type]], m: dict | None = None) -> dict | None:
    """Most general unifier (idempotent, as a dict name -> type) or None."""
    m = dict(m or {})
    stack = list(pairs)
    while stack:
        a, b = stack.pop()
        a, b = _walk(a, m), _walk(b, m)
        if a is b:
            continue
        if isinstance(a, TVar) or isinstance(b, TVar):
            if not isinstance(a, TVar):
                a, b = b, a
            if _occurs_t(a.name, b, m):
                return None
            m[a.name] = b
            continue
        if a.name != b.name or len(a.args) != len(b.args):
            return None
        stack.extend(zip(a.args, b.args))
    # resolve to idempotent form
    out = {}
    for k in m:
        out[k] = _resolve(TVar(k), m)
    return out


def _resolve(ty: Type, m: dict) -> Type:
    ty = _walk(ty, m)
    if isinstance(ty, TVar) or not ty.args:
        return ty
    return TCon(ty.name, tuple(_resolve(a, m) for a in ty.args))


def match_types(pattern: Type, target: Type, m: dict | None = None) -> dict | None:
    m = dict(m or {})
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, TVar):
            old = m.get(p.name)
            if old is None:
                m[p.name] = t
            elif old is not t:
                return None
            continue
        if isinstance(t, TVar) or p.name != t.name or len(p.args) != len(t.args):
            return None
        stack.extend(zip(p.args, t.args))
    return m


# -------------------------------------------------------------- helpers ----

def _long(t: Term) -> Term:
    return normalize(t, "long")


def _apply(t: Term, s: Subst) -> Term:
    return apply_subst(t, s, "long")


def strip_lams(t: Term) -> tuple[list[Type], Term]:
    tys = []
    while isinstance(t, Lam):
        tys.append(t.bty)
        t = t.body
    return tys, t


def wrap_lams(tys: Sequence[Type], body: Term) -> Term:
    for ty in reversed(tys):
        body = Lam(ty, body)
    return body


def is_flex(t: Term) -> bool:
    _, body = strip_lams(t)
    return isinstance(head_args(body)[0], Var)


def classify(c: Constraint) -> str:
    """``flex-flex``, ``flex-rigid`` or ``rigid-rigid`` by the heads under the binders."""
    fa, fb = is_flex(_long(c[0])), is_flex(_long(c[1]))
    if fa and fb:
        return "flex-flex"
    if fa or fb:
        return "flex-rigid"
    return "rigid-rigid"


def _as_bound(t: Term) -> int | None:
    """Index of t after eta-contraction, if it is a De Bruijn index."""
    t = eta_normalize(t, "short")
    return t.index if isinstance(t, DB) else None


def _fresh_like(args_tys: Sequence[Type], res: Type) -> Var:
    return fresh_var(arrows(list(args_tys), res))


def _bound_apps(ys: Sequence[Var], p: int, tys: Sequence[Type]) -> list[Term]:
    """y_j applied to the p binders, outermost first (DB p-1 ... 0)."""
    idx = [DB(p - 1 - k, tys[k]) for k in range(p)]
    return [mk_app(y, idx) for y in ys]


def _compose(s: Subst, r: Subst) -> Subst:
    out = s.compose(r)
    return out


def _subst_pairs(pairs: Iterable[Constraint], r: Subst) -> list[Constraint]:
    return [(_apply(a, r), _apply(b, r)) for a, b in pairs]


def _tsubst(m: dict) -> Subst:
    return Subst(types=dict(m))


# ------------------------------------------------------- pattern fragment ----

class _Fail(Exception):
    pass


class _Restart(Exception):
    def __init__(self, prune: Subst):
        self.prune = prune


def _pattern_args(args: Sequence[Term], n: int) -> list[int] | None:
    out = []
    for a in args:
        i = _as_bound(a)
        if i is None or i >= n or i in out:
            return None
        out.append(i)
    return out


def _is_pattern_term(t: Term, depth: int) -> bool:
    """Every free-variable application has distinct bound indices as arguments."""
    match t:
        case Var() | DB():
            return True
        case Sym():
            return all(_is_pattern_term(p, 0) for p in t.params)
        case Lam():
            return _is_pattern_term(t.body, depth + 1)
    head, args = head_args(t)
    if isinstance(head, Var):
        seen = set()
        for a in args:
            i = _as_bound(a)
            if i is None or i >= depth or i in seen:
                return False
            seen.add(i)
        return True
    return _is_pattern_term(head, depth) and all(_is_pattern_term(a, depth) for a in args)


def _occurs(x: str, t: Term) -> bool:
    return any(v.name == x for v in free_vars(t))


def _occurs_rigid(x: str, t: Term) -> bool:
    if not t.has_var:
        return False
    match t:
        case Var():
            return t.name == x
        case Sym():
            return any(_occurs(x, p) for p in t.params)
        case Lam():
            return _occurs_rigid(x, t.body)
    head, args = head_args(t)
    if isinstance(head, Var):
        return head.name == x
    return _occurs_rigid(x, head) or any(_occurs_rigid(x, a) for a in args)


def _copy(t: Term, depth: int, remap: dict[int, int], x: str) -> Term:
    """Rewrite outer indices through ``remap`` (outer index -> new outer index)."""
    match t:
        case Var():
            if t.name == x:
                raise _Fail
            return t
        case DB():
            if t.index < depth:
                return t
            new = remap.get(t.index - depth)
            if new is None:
                raise _Fail
            return DB(new + depth, t.ty)
        case Sym():
            if any(_occurs(x, p) for p in t.params):
                raise _Fail
            return t
        case Lam():
            return Lam(t.bty, _copy(t.body, depth + 1, remap, x))
    head, args = head_args(t)
    if isinstance(head, Var):
        if head.name == x:
            raise _Fail
        keep = []
        for k, a in enumerate(args):
            i = _as_bound(a)
            if i is not None and (i < depth or (i - depth) in remap):
                keep.append(k)
        if len(keep) != len(args):
            tys, res = strip_arrows(head.ty, len(args))
            h = _fresh_like([tys[k] for k in keep], res)
            p = len(args)
            body = mk_app(h, [DB(p - 1 - k, tys[k]) for k in keep])
            raise _Restart(Subst(terms={head.name: _long(wrap_lams(tys, body))}))
        return mk_app(head, [_copy(a, depth, remap, x) for a in args])
    return mk_app(_copy(head, depth, remap, x), [_copy(a, depth, remap, x) for a in args])


def pattern_step(s: Term, t: Term) -> Subst | None | bool:
    """Miller pattern unification of one closed eta-long pair.

    Returns a unifier, ``False`` when the pair has no unifier, or ``None`` when
    the pair is outside the fragment."""
    prefix, s0 = strip_lams(s)
    _, t0 = strip_lams(t)
    n = len(prefix)
    for a, b in ((s0, t0), (t0, s0)):
        ha, aa = head_args(a)
        if not isinstance(ha, Var):
            continue
        pa = _pattern_args(aa, n)
        if pa is None or not _is_pattern_term(b, n):
            continue
        return _solve_pattern(ha, pa, b, prefix, s, t)
    return None


def _solve_pattern(x: Var, pa: list[int], b: Term, prefix, s: Term, t: Term) -> Subst | bool:
    n = len(prefix)
    acc = Subst()
    for _ in range(1000):
        hb, ab = head_args(b)
        p = len(pa)
        xtys, xres = strip_arrows(x.ty, p)
        if isinstance(hb, Var) and hb.name == x.name:
            pb = [_as_bound(u) for u in ab]
            keep = [k for k in range(p) if pa[k] == pb[k]]
            h = _fresh_like([xtys[k] for k in keep], xres)
            body = mk_app(h, [DB(p - 1 - k, xtys[k]) for k in keep])
            return _compose(acc, Subst(terms={x.name: _long(wrap_lams(xtys, body))}))
        remap = {o: p - 1 - k for k, o in enumerate(pa)}
        try:
            body = _copy(b, 0, remap, x.name)
        except _Fail:
            return False
        except _Restart as r:
            acc = _compose(acc, r.prune)
            s, t = _apply(s, r.prune), _apply(t, r.prune)
            prefix, s0 = strip_lams(s)
            _, t0 = strip_lams(t)
            # re-identify which side carries x
            hs, as_ = head_args(s0)
            if isinstance(hs, Var) and hs.name == x.name:
                b = t0
                pa = _pattern_args(as_, n)
            else:
                b = s0
                pa = _pattern_args(head_args(t0)[1], n)
            if pa is None:
                return False
            continue
        return _compose(acc, Subst(terms={x.name: _long(wrap_lams(xtys, body))}))
    raise RuntimeError("pruning did not terminate")


def fixpoint_step(s: Term, t: Term) -> Subst | None | bool:
    """x ≡ t with x a bare (eta-expanded) variable."""
    prefix, s0 = strip_lams(s)
    _, t0 = strip_lams(t)
    n = len(prefix)
    for (a, a_full), (b, b_full) in (((s0, s), (t0, t)), ((t0, t), (s0, s))):
        ha, aa = head_args(a)
        if not isinstance(ha, Var) or len(aa) != n:
            continue
        if [_as_bound(u) for u in aa] != list(range(n - 1, -1, -1)):
            continue
        if not _occurs(ha.name, b):
            return Subst(terms={ha.name: b_full})
        if _occurs_rigid(ha.name, b):
            return False
    return None


# ----------------------------------------------------------- Huet steps ----

@dataclass
class _Node:
    sigma: Subst
    pairs: list[Constraint]
    depth: int
    guessed: bool = False


def _type_step(node: _Node) -> list[_Node] | None:
    for k, (a, b) in enumerate(node.pairs):
        if a.ty is not b.ty:
            m = unify_types([(a.ty, b.ty)])
            if m is None:
                return []
            r = _tsubst(m)
            return [_Node(_compose(node.sigma, r), _subst_pairs(node.pairs, r), node.depth + 1)]
    return None


def _rigid_rigid(node: _Node, k: int, prefix, ha, aa, hb, ab) -> list[_Node]:
    rest = node.pairs[:k] + node.pairs[k + 1:]
    wrap = lambda u: wrap_lams(prefix, u)  # noqa: E731
    if isinstance(ha, DB) or isinstance(hb, DB):
        if not (isinstance(ha, DB) and isinstance(hb, DB)) or ha.index != hb.index:
            return []
        if ha.ty is not hb.ty:
            return []
        new = [(wrap(u), wrap(v)) for u, v in zip(aa, ab)]
        return [_Node(node.sigma, rest + new, node.depth + 1)]
    if ha.name != hb.name or len(aa) != len(ab):
        return []
    m = unify_types(list(zip(ha.tyargs, hb.tyargs)) + [(ha.ty, hb.ty)])
    if m is None:
        return []
    new = list(zip(ha.params, hb.params)) + [(wrap(u), wrap(v)) for u, v in zip(aa, ab)]
    pairs = rest + new
    sigma = node.sigma
    if m:
        r = _tsubst(m)
        sigma = _compose(sigma, r)
        pairs = _subst_pairs(pairs, r)
    return [_Node(sigma, pairs, node.depth + 1)]


def _bindings_flex_rigid(x: Var, hb: Term) -> list[tuple[Subst, Term]]:
    """Imitation and projection bindings for x against rigid head hb."""
    out = []
    ptys, res = strip_arrows(x.ty)
    p = len(ptys)
    if isinstance(hb, Sym) and not any(_occurs(x.name, q) for q in hb.params):
        btys, bres = strip_arrows(hb.ty)
        m = unify_types([(bres, res)])
        if m is not None:
            # the head's own arguments may have to stay unapplied if bres unifies late
            ys = [_fresh_like(ptys, bt) for bt in btys]
            body = mk_app(hb, _bound_apps(ys, p, ptys))
            binding = wrap_lams(ptys, body)
            out.append((Subst(types=m), binding))
    for i in range(p):
        ti = ptys[i]
        wtys, wres = strip_arrows(ti)
        for kk in range(len(wtys), -1, -1):
            rk = arrows(wtys[kk:], wres)
            m = unify_types([(rk, res)])
            if m is None:
                continue
            ys = [_fresh_like(ptys, w) for w in wtys[:kk]]
            body = mk_app(DB(p - 1 - i, ti), _bound_apps(ys, p, ptys))
            out.append((Subst(types=m), wrap_lams(ptys, body)))
            break
    return out


def _flex_bindings(x: Var, hb: Term, node: _Node) -> list[_Node]:
    out = []
    for tsub, binding in _bindings_flex_rigid(x, hb):
        # the binding is well-typed only after the type substitution
        r = tsub.compose(Subst(terms={x.name: _apply(binding, tsub)})) if tsub.types else \
            Subst(terms={x.name: _long(binding)})
        try:
            sigma = _compose(node.sigma, r)
            pairs = _subst_pairs(node.pairs, r)
        except Exception:
            continue
        out.append(_Node(sigma, pairs, node.depth + 1))
    return out


def _fragment_step(node: _Node, cfg: UnifConfig) -> list[_Node] | None:
    for k, (a, b) in enumerate(node.pairs):
        res = None
        if cfg.pattern:
            res = pattern_step(a, b)
        if res is None and cfg.fixpoint:
            res = fixpoint_step(a, b)
        if res is None:
            continue
        if res is False:
            return []
        rest = node.pairs[:k] + node.pairs[k + 1:]
        return [_Node(_compose(node.sigma, res), _subst_pairs(rest, res), node.depth + 1)]
    return None


def _simplify_node(node: _Node) -> _Node:
    seen = set()
    pairs = []
    for a, b in node.pairs:
        if a is b:
            continue
        key = (a, b) if id(a) <= id(b) else (b, a)
        if key in seen:
            continue
        seen.add(key)
        pairs.append((a, b))
    node.pairs = pairs
    return node


def _expand(node: _Node, cfg: UnifConfig, flex_flex: bool = False) -> list[_Node] | None:
    """Children of a node, or None when the node is a preunification leaf."""
    r = _type_step(node)
    if r is not None:
        return r
    r = _fragment_step(node, cfg)
    if r is not None:
        return r
    for k, (a, b) in enumerate(node.pairs):
        prefix, a0 = strip_lams(a)
        _, b0 = strip_lams(b)
        ha, aa = head_args(a0)
        hb, ab = head_args(b0)
        fa, fb = isinstance(ha, Var), isinstance(hb, Var)
        if fa and fb:
            continue
        if not fa and not fb:
            return _rigid_rigid(node, k, prefix, ha, aa, hb, ab)
        if fb:
            ha, hb = hb, ha
        return _flex_bindings(ha, hb, node)
    if not flex_flex or not node.pairs:
        return None
    node.guessed = True
    return _flex_flex_children(node)


def _flex_flex_children(node: _Node) -> list[_Node]:
    """Guessing step for a non-pattern flex-flex pair (full csu only)."""
    a, b = node.pairs[0]
    prefix, a0 = strip_lams(a)
    _, b0 = strip_lams(b)
    ha, a_args = head_args(a0)
    hb, b_args = head_args(b0)
    out = []
    for x, y in ((ha, hb), (hb, ha)):
        ptys, res = strip_arrows(x.ty)
        p = len(ptys)
        for tsub, binding in _projections(x):
            out.extend(_bind(node, x, tsub, binding))
        if x.name == y.name:
            continue
        # imitate the other flex head
        ytys, yres = strip_arrows(y.ty)
        m = unify_types([(yres, res)])
        if m is not None:
            zs = [_fresh_like(ptys, t) for t in ytys]
            binding = wrap_lams(ptys, mk_app(y, _bound_apps(zs, p, ptys)))
            out.extend(_bind(node, x, Subst(types=m), binding))
    if ha.name == hb.name:
        rest = node.pairs[1:]
        new = [(wrap_lams(prefix, u), wrap_lams(prefix, v)) for u, v in zip(a_args, b_args)]
        out.append(_Node(node.sigma, rest + new, node.depth + 1))
    return out


def _projections(x: Var) -> list[tuple[Subst, Term]]:
    out = []
    ptys, res = strip_arrows(x.ty)
    p = len(ptys)
    for i in range(p):
        wtys, wres = strip_arrows(ptys[i])
        m = unify_types([(wres, res)])
        if m is None:
            continue
        ys = [_fresh_like(ptys, w) for w in wtys]
        out.append((Subst(types=m), wrap_lams(ptys, mk_app(DB(p - 1 - i, ptys[i]), _bound_apps(ys, p, ptys)))))
    return out


def _bind(node: _Node, x: Var, tsub: Subst, binding: Term) -> list[_Node]:
    if tsub.types:
        r = tsub.compose(Subst(terms={x.name: _apply(binding, tsub)}))
    else:
        r = Subst(terms={x.name: _long(binding)})
    try:
        return [_Node(_compose(node.sigma, r), _subst_pairs(node.pairs, r), node.depth + 1)]
    except Exception:
        return []


# --------------------------------------------------------------- drivers ----

def _prepare(pairs: Iterable[Constraint]) -> list[Constraint]:
    return [(_long(a), _long(b)) for a, b in pairs]


def _finish_subst(s: Subst, keep: set[str] | None = None, tkeep: set[str] | None = None) -> Subst:
    mode = get_eta_mode()
    terms = {k: normalize(v, mode) for k, v in s.terms.items() if keep is None or k in keep}
    types = {k: v for k, v in s.types.items() if tkeep is None or k in tkeep}
    return Subst(types, terms)


def _finish_pairs(pairs: Iterable[Constraint]) -> tuple[Constraint, ...]:
    mode = get_eta_mode()
    return tuple((normalize(a, mode), normalize(b, mode)) for a, b in pairs)


def csu_upto(pairs: Iterable[Constraint], cfg: UnifConfig = DEFAULT) -> list[tuple[Subst, tuple[Constraint, ...]]]:
    """Bounded preunification.  Every leaf (flex-flex only, depth bound, or
    budget exhausted) is returned with its remaining constraints."""
    root = _Node(Subst(), _prepare(pairs), 0)
    stack = [root]
    out = []
    nodes = 0
    while stack:
        node = _simplify_node(stack.pop())
        nodes += 1
        if node.depth >= cfg.depth or nodes > cfg.budget:
            out.append(node)
            continue
        kids = _expand(node, cfg)
        if kids is None:
            out.append(node)
            continue
        stack.extend(reversed(kids))
    return [(_finish_subst(n.sigma), _finish_pairs(n.pairs)) for n in out]


@dataclass
class CsuResult:
    unifiers: list[Subst]
    complete: bool

    def __iter__(self):
        return iter(self.unifiers)

    def __len__(self):
        return len(self.unifiers)


def csu(pairs: Iterable[Constraint], cfg: UnifConfig = DEFAULT) -> CsuResult:
    """Complete set of unifiers, as far as the budget allows."""
    root = _Node(Subst(), _prepare(pairs), 0)
    found: dict = {}
    complete = True
    nodes = 0
    limit = max(cfg.depth, 1)
    # iterative deepening; each round is a full DFS up to ``limit``
    while True:
        found.clear()
        cut = False
        guessed = False
        stack = [root]
        nodes = 0
        exhausted = False
        while stack:
            node = _simplify_node(stack.pop())
            nodes += 1
            if nodes > cfg.budget:
                exhausted = True
                break
            if not node.pairs:
                key = tuple(sorted((k, v) for k, v in node.sigma.terms.items())) + \
                    tuple(sorted(node.sigma.types.items()))
                found.setdefault(key, node.sigma)
                if len(found) >= cfg.max_unifiers:
                    exhausted = True
                    break
                continue
            if node.depth >= limit:
                cut = True
                continue
            kids = _expand(node, cfg, flex_flex=True)
            if kids is None:
                continue
            guessed = guessed or node.guessed
            stack.extend(reversed(kids))
        if exhausted or not cut or limit >= cfg.depth * 3:
            complete = not (exhausted or cut or guessed)
            break
        limit += cfg.depth
    return CsuResult([_finish_subst(s) for s in found.values()], complete)


def unify_pairs(pairs: Iterable[Constraint], cfg: UnifConfig = DEFAULT) -> Subst | None:
    """Some unifier if one is found cheaply (not necessarily most general)."""
    r = csu(pairs, cfg)
    return r.unifiers[0] if r.unifiers else None


# --------------------------------------------------------- satisfiability ----

def inhabitant(ty: Type) -> Term:
    """A canonical closed ground term of a ground type."""
    args, res = strip_arrows(ty)
    if res is BOOL:
        body: Term = bot()
    else:
        dom = res
        body = Sym(DIFF, (dom, BOOL), (Lam(dom, top()), Lam(dom, top())), dom)
    return normalize(wrap_lams(args, body))


def ground_types(t: Term | None = None, types: Iterable[Type] = ()) -> dict:
    names = set()
    if t is not None:
        names |= {v.name for v in term_tvars(t)}
    for ty in types:
        names |= {v.name for v in type_vars(ty)}
    return {n: BOOL for n in names}


def _witness(pairs: Sequence[Constraint]) -> Subst | None:
    tv = set()
    for a, b in pairs:
        tv |= {v.name for v in term_tvars(a)} | {v.name for v in term_tvars(b)}
    tsub = Subst(types={n: BOOL for n in tv})
    vs = set()
    for a, b in pairs:
        vs |= free_vars(_apply(a, tsub)) | free_vars(_apply(b, tsub))
    w = tsub.compose(Subst(terms={v.name: inhabitant(v.ty) for v in vs}))
    for a, b in pairs:
        if apply_subst(a, w) is not apply_subst(b, w):
            return None
    return w


@dataclass
class SatResult:
    status: Sat
    witness: Subst | None = None

    def __bool__(self) -> bool:
        return self.status is Sat.SAT


def satisfiable(pairs: Iterable[Constraint], cfg: UnifConfig = DEFAULT) -> SatResult:
    """Decide whether the constraints have a ground unifier.

    A preunification leaf with only flex-flex pairs is always solvable by
    constant functions; the witness is checked before it is reported."""
    pairs = list(pairs)
    if not pairs:
        return SatResult(Sat.SAT, Subst())
    root = _Node(Subst(), _prepare(pairs), 0)
    original = _prepare(pairs)
    total = 0
    limit = 1
    while True:
        stack = [root]
        cut = False
        while stack:
            node = _simplify_node(stack.pop())
            total += 1
            if total > cfg.budget:
                return SatResult(Sat.UNKNOWN)
            if node.depth >= limit:
                if _expand(node, cfg) is None:
                    w = _leaf_witness(node, original)
                    if w is not None:
                        return SatResult(Sat.SAT, w)
                cut = True
                continue
            kids = _expand(node, cfg)
            if kids is None:
                w = _leaf_witness(node, original)
                if w is not None:
                    return SatResult(Sat.SAT, w)
                # flex-flex leaf whose witness failed to check: not conclusive
                cut = True
                continue
            stack.extend(reversed(kids))
        if not cut:
            return SatResult(Sat.UNSAT)
        limit += 1


def _leaf_witness(node: _Node, original: Sequence[Constraint]) -> Subst | None:
    w = _witness(node.pairs)
    if w is None:
        return None
    full = node.sigma.compose(w)
    # close off any variable the leaf did not mention
    full = _ground_rest(full, original)
    for a, b in original:
        if apply_subst(a, full) is not apply_subst(b, full):
            return None
    return full


def _ground_rest(s: Subst, pairs: Sequence[Constraint]) -> Subst:
    tv, vs = set(), set()
    for a, b in pairs:
        for u in (apply_subst(a, s), apply_subst(b, s)):
            tv |= {v.name for v in term_tvars(u)}
    if tv:
        s = s.compose(Subst(types={n: BOOL for n in tv}))
    for a, b in pairs:
        for u in (apply_subst(a, s), apply_subst(b, s)):
            vs |= free_vars(u)
    if vs:
        s = s.compose(Subst(terms={v.name: inhabitant(v.ty) for v in vs}))
    return s


# --------------------------------------------------------------- matching ----

_FROZEN_T = "$frz."
_FROZEN_V = "$frz:"


def _freeze(t: Term, tnames: set[str], vnames: set[str]) -> Term:
    tsub = Subst(types={n: TCon(_FROZEN_T + n) for n in tnames})
    t = apply_subst(t, tsub, "long") if tnames else t
    vs = [v for v in free_vars(t) if v.name in vnames]
    if vs:
        t = apply_subst(t, Subst(terms={v.name: Sym(_FROZEN_V + v.name, (), (), v.ty) for v in vs}), "long")
    return t


def _thaw_type(ty: Type) -> Type:
    if isinstance(ty, TVar):
        return ty
    if ty.name.startswith(_FROZEN_T):
        return TVar(ty.name[len(_FROZEN_T):])
    if not ty.args:
        return ty
    return TCon(ty.name, tuple(_thaw_type(a) for a in ty.args))


def _thaw(t: Term) -> Term:
    match t:
        case Var():
            return Var(t.name, _thaw_type(t.ty))
        case DB():
            return DB(t.index, _thaw_type(t.ty))
        case Sym():
            if t.name.startswith(_FROZEN_V):
                return Var(t.name[len(_FROZEN_V):], _thaw_type(t.ty))
            return Sym(t.name, [_thaw_type(a) for a in t.tyargs], [_thaw(p) for p in t.params], _thaw_type(t.ty))
        case Lam():
            return Lam(_thaw_type(t.bty), _thaw(t.body))
    head, args = head_args(t)
    return mk_app(_thaw(head), [_thaw(a) for a in args])


def match(pairs: Sequence[tuple[Term, Term]], cfg: UnifConfig | None = None,
          extra_frozen: Iterable[Term] = ()) -> Subst | None:
    """A substitution sigma with pattern·sigma = target for all (pattern, target).

    Variables of the targets (and of ``extra_frozen``) are treated as constants."""
    cfg = cfg or UnifConfig(depth=4, budget=200, max_unifiers=1)
    tn, vn = set(), set()
    for _, t in pairs:
        tn |= {v.name for v in term_tvars(t)}
        vn |= {v.name for v in free_vars(t)}
    for t in extra_frozen:
        tn |= {v.name for v in term_tvars(t)}
        vn |= {v.name for v in free_vars(t)}
    pat_tn, pat_vn = set(), set()
    for p, _ in pairs:
        pat_tn |= {v.name for v in term_tvars(p)}
        pat_vn |= {v.name for v in free_vars(p)}
    if (pat_tn & tn) or (pat_vn & vn):
        raise ValueError("pattern and target must not share variables")
    frozen = [(p, _freeze(t, tn, vn)) for p, t in pairs]
    r = csu(frozen, cfg)
    for s in r.unifiers:
        out = Subst({k: _thaw_type(v) for k, v in s.types.items() if k in pat_tn},
                    {k: normalize(_thaw(v)) for k, v in s.terms.items() if k in pat_vn})
        if all(apply_subst(p, out) is normalize(t) for p, t in pairs):
            return out
    return None
