"""Types, signatures and locally nameless lambda-terms.

Every type and term node is hash-consed, so structural equality is object
identity and nodes can be used directly as dictionary keys.  Terms are kept
in beta-normal form; the eta form (long or short) is a process-wide setting
chosen once per prover run.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Type", "TVar", "TCon", "BOOL", "arrow", "arrows", "strip_arrows",
    "is_functional", "type_vars", "subst_type",
    "Term", "Var", "Sym", "DB", "Lam", "App", "mk_app", "head_args",
    "Decl", "Signature", "TypingError",
    "beta_normalize", "eta_normalize", "normalize", "subst_db", "shift",
    "instantiate", "set_eta_mode", "get_eta_mode",
    "Subst", "apply_subst", "fresh_var", "fresh_tvar", "reserve_name",
    "free_vars", "free_tvars", "term_tvars", "orange_positions", "yellow_positions",
    "green_positions", "subterm_at", "replace_at", "is_ground",
    "occurs_in_params", "vars_inside_params", "vars_outside_params",
    "TOP", "BOT", "NOT", "AND", "OR", "IMP", "EQ", "NEQ", "DIFF", "HOLE",
    "top", "bot", "neg", "conj", "disj", "impl", "eq_term", "neq_term", "diff_term",
    "syntactic_size",
]


class TypingError(Exception):
    """Raised when a term would be ill-typed or ill-scoped."""


_lock = threading.RLock()


def _intern(table: dict, key, make):
    obj = table.get(key)
    if obj is None:
        with _lock:
            obj = table.get(key)
            if obj is None:
                obj = make()
                table[key] = obj
    return obj


# ---------------------------------------------------------------- types ----

_TYPES: dict = {}


class Type:
    __slots__ = ()

    def __repr__(self) -> str:
        return show_type(self)


class TVar(Type):
    __slots__ = ("name",)

    def __new__(cls, name: str) -> "TVar":
        def make():
            obj = object.__new__(cls)
            obj.name = name
            return obj
        return _intern(_TYPES, ("v", name), make)

    def __reduce__(self):
        return (TVar, (self.name,))


class TCon(Type):
    __slots__ = ("name", "args", "_ground")

    def __new__(cls, name: str, args: Sequence[Type] = ()) -> "TCon":
        args = tuple(args)
        if name == "fun" and len(args) != 2:
            raise TypingError("the function type constructor is binary")

        def make():
            obj = object.__new__(cls)
            obj.name = name
            obj.args = args
            obj._ground = all(not isinstance(a, TVar) and a._ground for a in args)
            return obj
        return _intern(_TYPES, ("c", name, args), make)

    def __reduce__(self):
        return (TCon, (self.name, self.args))


BOOL = TCon("o")


def arrow(a: Type, b: Type) -> Type:
    return TCon("fun", (a, b))


def arrows(args: Sequence[Type], res: Type) -> Type:
    for a in reversed(args):
        res = arrow(a, res)
    return res


def is_functional(ty: Type) -> bool:
    return isinstance(ty, TCon) and ty.name == "fun"


def strip_arrows(ty: Type, limit: int | None = None) -> tuple[list[Type], Type]:
    args = []
    while is_functional(ty) and (limit is None or len(args) < limit):
        args.append(ty.args[0])
        ty = ty.args[1]
    return args, ty


def type_vars(ty: Type, acc: set | None = None) -> set:
    acc = set() if acc is None else acc
    if isinstance(ty, TVar):
        acc.add(ty)
    elif not ty._ground:
        for a in ty.args:
            type_vars(a, acc)
    return acc


def is_ground_type(ty: Type) -> bool:
    return isinstance(ty, TCon) and ty._ground


def subst_type(ty: Type, m: dict) -> Type:
    if not m:
        return ty
    if isinstance(ty, TVar):
        return m.get(ty.name, ty)
    if ty._ground:
        return ty
    return TCon(ty.name, tuple(subst_type(a, m) for a in ty.args))


def show_type(ty: Type) -> str:
    if isinstance(ty, TVar):
        return ty.name
    if ty.name == "fun":
        a, b = ty.args
        left = show_type(a)
        if is_functional(a):
            left = f"({left})"
        return f"{left} > {show_type(b)}"
    if ty.args:
        return f"{ty.name}({', '.join(show_type(a) for a in ty.args)})"
    return ty.name


# ---------------------------------------------------------------- terms ----

_TERMS: dict = {}


class Term:
    """Base class of the five preterm shapes.

    Cached attributes: ``ty`` (the type), ``loose`` (one more than the largest
    free De Bruijn index, 0 when locally closed), ``has_var`` (free term
    variables present) and ``has_tvar`` (type variables present).
    """
    __slots__ = ("ty", "loose", "has_var", "has_tvar", "__weakref__")

    def __repr__(self) -> str:
        from .printing import show_term
        return show_term(self)

    @property
    def closed(self) -> bool:
        return self.loose == 0


class Var(Term):
    __slots__ = ("name",)

    def __new__(cls, name: str, ty: Type) -> "Var":
        def make():
            obj = object.__new__(cls)
            obj.name = name
            obj.ty = ty
            obj.loose = 0
            obj.has_var = True
            obj.has_tvar = not is_ground_type(ty)
            return obj
        return _intern(_TERMS, ("V", name, ty), make)

    def __reduce__(self):
        return (Var, (self.name, self.ty))


class Sym(Term):
    """A symbol occurrence f<tyargs>(params) of the given (instantiated) type."""
    __slots__ = ("name", "tyargs", "params")

    def __new__(cls, name: str, tyargs: Sequence[Type], params: Sequence[Term], ty: Type) -> "Sym":
        tyargs = tuple(tyargs)
        params = tuple(params)
        for p in params:
            if p.loose:
                raise TypingError(f"parameter of {name} contains a free De Bruijn index")

        def make():
            obj = object.__new__(cls)
            obj.name = name
            obj.tyargs = tyargs
            obj.params = params
            obj.ty = ty
            obj.loose = 0
            obj.has_var = any(p.has_var for p in params)
            obj.has_tvar = (not is_ground_type(ty) or any(not is_ground_type(t) for t in tyargs)
                            or any(p.has_tvar for p in params))
            return obj
        return _intern(_TERMS, ("S", name, tyargs, params, ty), make)

    def __reduce__(self):
        return (Sym, (self.name, self.tyargs, self.params, self.ty))


class DB(Term):
    __slots__ = ("index",)

    def __new__(cls, index: int, ty: Type) -> "DB":
        if index < 0:
            raise TypingError("negative De Bruijn index")

        def make():
            obj = object.__new__(cls)
            obj.index = index
            obj.ty = ty
            obj.loose = index + 1
            obj.has_var = False
            obj.has_tvar = not is_ground_type(ty)
            return obj
        return _intern(_TERMS, ("D", index, ty), make)

    def __reduce__(self):
        return (DB, (self.index, self.ty))


class Lam(Term):
    __slots__ = ("bty", "body")

    def __new__(cls, bty: Type, body: Term) -> "Lam":
        def make():
            obj = object.__new__(cls)
            obj.bty = bty
            obj.body = body
            obj.ty = arrow(bty, body.ty)
            obj.loose = max(body.loose - 1, 0)
            obj.has_var = body.has_var
            obj.has_tvar = body.has_tvar or not is_ground_type(bty)
            return obj
        return _intern(_TERMS, ("L", bty, body), make)

    def __reduce__(self):
        return (Lam, (self.bty, self.body))


class App(Term):
    """Spine application; the head is never itself an App."""
    __slots__ = ("head", "args")

    def __new__(cls, head: Term, args: Sequence[Term]) -> "App":
        args = tuple(args)
        if not args:
            raise TypingError("application without arguments")
        if isinstance(head, App):
            raise TypingError("nested application head; use mk_app")

        def make():
            ty = head.ty
            for a in args:
                if not is_functional(ty):
                    raise TypingError(f"applying a term of non-function type {show_type(ty)}")
                if ty.args[0] is not a.ty:
                    raise TypingError(
                        f"argument type {show_type(a.ty)} does not match {show_type(ty.args[0])}")
                ty = ty.args[1]
            obj = object.__new__(cls)
            obj.head = head
            obj.args = args
            obj.ty = ty
            obj.loose = max([head.loose] + [a.loose for a in args])
            obj.has_var = head.has_var or any(a.has_var for a in args)
            obj.has_tvar = head.has_tvar or any(a.has_tvar for a in args)
            return obj
        return _intern(_TERMS, ("A", head, args), make)

    def __reduce__(self):
        return (App, (self.head, self.args))


def mk_app(head: Term, args: Sequence[Term]) -> Term:
    args = tuple(args)
    if not args:
        return head
    if isinstance(head, App):
        return App(head.head, head.args + args)
    return App(head, args)


def head_args(t: Term) -> tuple[Term, tuple[Term, ...]]:
    if isinstance(t, App):
        return t.head, t.args
    return t, ()


def is_ground(t: Term) -> bool:
    return not t.has_var and not t.has_tvar


# ------------------------------------------------------------ signature ----

@dataclass(frozen=True)
class Decl:
    """Declaration  Pi tparams. param_types => result."""
    name: str
    tparams: tuple[str, ...]
    param_types: tuple[Type, ...]
    result: Type

    def instance(self, tyargs: Sequence[Type]) -> tuple[tuple[Type, ...], Type]:
        if len(tyargs) != len(self.tparams):
            raise TypingError(f"{self.name} expects {len(self.tparams)} type arguments")
        m = dict(zip(self.tparams, tyargs))
        return tuple(subst_type(t, m) for t in self.param_types), subst_type(self.result, m)


_A, _B = TVar("A"), TVar("B")
TOP, BOT, NOT, AND, OR, IMP, EQ, NEQ, DIFF = (
    "$true", "$false", "$not", "$and", "$or", "$imp", "$eq", "$neq", "$diff")
HOLE = "$hole"
LOGICAL = (TOP, BOT, NOT, AND, OR, IMP, EQ, NEQ, DIFF)

_LOGICAL_DECLS = {
    TOP: Decl(TOP, (), (), BOOL),
    BOT: Decl(BOT, (), (), BOOL),
    NOT: Decl(NOT, (), (), arrow(BOOL, BOOL)),
    AND: Decl(AND, (), (), arrows([BOOL, BOOL], BOOL)),
    OR: Decl(OR, (), (), arrows([BOOL, BOOL], BOOL)),
    IMP: Decl(IMP, (), (), arrows([BOOL, BOOL], BOOL)),
    EQ: Decl(EQ, ("A",), (), arrows([_A, _A], BOOL)),
    NEQ: Decl(NEQ, ("A",), (), arrows([_A, _A], BOOL)),
    DIFF: Decl(DIFF, ("A", "B"), (arrow(_A, _B), arrow(_A, _B)), _A),
}


@dataclass
class Signature:
    """Type constructors with arities and constant declarations.

    The logical constants and diff are always present with their fixed types.
    """
    tycons: dict[str, int] = field(default_factory=lambda: {"o": 0, "fun": 2})
    decls: dict[str, Decl] = field(default_factory=lambda: dict(_LOGICAL_DECLS))

    def add_tycon(self, name: str, arity: int = 0) -> None:
        if name in self.tycons and self.tycons[name] != arity:
            raise TypingError(f"type constructor {name} redeclared with another arity")
        self.tycons[name] = arity

    def add_const(self, name: str, ty: Type, tparams: Sequence[str] = (),
                  param_types: Sequence[Type] = ()) -> Decl:
        if name in LOGICAL:
            raise TypingError(f"{name} is a reserved logical constant")
        self.check_type(ty, set(tparams))
        d = Decl(name, tuple(tparams), tuple(param_types), ty)
        old = self.decls.get(name)
        if old is not None and old != d:
            raise TypingError(f"constant {name} redeclared with another type")
        self.decls[name] = d
        return d

    def check_type(self, ty: Type, tvars: set | None = None) -> None:
        if isinstance(ty, TVar):
            if tvars is not None and ty.name not in tvars:
                raise TypingError(f"unbound type variable {ty.name}")
            return
        if ty.name not in self.tycons:
            raise TypingError(f"unknown type constructor {ty.name}")
        if self.tycons[ty.name] != len(ty.args):
            raise TypingError(f"type constructor {ty.name} expects {self.tycons[ty.name]} arguments")
        for a in ty.args:
            self.check_type(a, tvars)

    def const(self, name: str, tyargs: Sequence[Type] = (), params: Sequence[Term] = ()) -> Sym:
        d = self.decls.get(name)
        if d is None:
            raise TypingError(f"unknown constant {name}")
        ptys, res = d.instance(tuple(tyargs))
        if len(params) != len(ptys):
            raise TypingError(f"{name} expects {len(ptys)} parameters")
        for p, pt in zip(params, ptys):
            if p.ty is not pt:
                raise TypingError(f"parameter of {name} has type {show_type(p.ty)}, expected {show_type(pt)}")
        return Sym(name, tuple(tyargs), tuple(params), res)

    def user_constants(self) -> list[Decl]:
        return [d for n, d in self.decls.items() if n not in LOGICAL]

    def copy(self) -> "Signature":
        return Signature(dict(self.tycons), dict(self.decls))


# Logical constants do not depend on a signature instance.
_LOGIC_SIG = Signature()


def top() -> Sym:
    return Sym(TOP, (), (), BOOL)


def bot() -> Sym:
    return Sym(BOT, (), (), BOOL)


def neg(a: Term) -> Term:
    return App(Sym(NOT, (), (), arrow(BOOL, BOOL)), (a,))


def _binop(name: str, a: Term, b: Term) -> Term:
    return App(Sym(name, (), (), arrows([BOOL, BOOL], BOOL)), (a, b))


def conj(a: Term, b: Term) -> Term:
    return _binop(AND, a, b)


def disj(a: Term, b: Term) -> Term:
    return _binop(OR, a, b)


def impl(a: Term, b: Term) -> Term:
    return _binop(IMP, a, b)


def eq_term(a: Term, b: Term) -> Term:
    return App(_LOGIC_SIG.const(EQ, (a.ty,)), (a, b))


def neq_term(a: Term, b: Term) -> Term:
    return App(_LOGIC_SIG.const(NEQ, (a.ty,)), (a, b))


def diff_term(u: Term, w: Term) -> Sym:
    """diff<tau,upsilon>(u, w) for u, w of type tau -> upsilon."""
    if not is_functional(u.ty) or u.ty is not w.ty:
        raise TypingError("diff expects two functions of the same type")
    tau, ups = u.ty.args
    return _LOGIC_SIG.const(DIFF, (tau, ups), (normalize(u), normalize(w)))


# ------------------------------------------------------ fresh variables ----

_counter = itertools.count(1)
_reserved: set[str] = set()


def reserve_name(name: str) -> None:
    """Mark a user-chosen name so fresh names never collide with it."""
    _reserved.add(name)


def _fresh_name(prefix: str) -> str:
    while True:
        with _lock:
            n = next(_counter)
        name = f"{prefix}{n}"
        if name not in _reserved:
            return name


def fresh_var(ty: Type, prefix: str = "_X") -> Var:
    return Var(_fresh_name(prefix), ty)


def fresh_tvar(prefix: str = "_T") -> TVar:
    return TVar(_fresh_name(prefix))


# ------------------------------------------------------ De Bruijn plumbing ----

def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    """Add d to every free index >= cutoff."""
    if d == 0 or t.loose <= cutoff:
        return t
    match t:
        case DB():
            if t.index + d < 0:
                raise TypingError("shift would produce a negative index")
            return DB(t.index + d, t.ty)
        case Lam():
            return Lam(t.bty, shift(t.body, d, cutoff + 1))
        case App():
            return mk_app(shift(t.head, d, cutoff), [shift(a, d, cutoff) for a in t.args])
    return t


def _subst_free(t: Term, m: dict[int, Term], depth: int, drop: int) -> Term:
    """Replace free index i (as seen at depth 0) by m[i]; other free indices are
    lowered by ``drop``.  Replacement terms are shifted by the binder depth."""
    if t.loose <= depth:
        return t
    match t:
        case DB():
            k = t.index - depth
            r = m.get(k)
            if r is None:
                return DB(t.index - drop, t.ty)
            if r.ty is not t.ty:
                raise TypingError(f"index {k} has type {show_type(t.ty)} but replacement has {show_type(r.ty)}")
            return shift(r, depth)
        case Lam():
            return Lam(t.bty, _subst_free(t.body, m, depth + 1, drop))
        case App() | _Redex():
            return redex(_subst_free(t.head, m, depth, drop), [_subst_free(a, m, depth, drop) for a in t.args])
    return t


def subst_db(t: Term, m: dict[int, Term]) -> Term:
    """Substitute m[i] for the free index i (i + j under j binders).

    The result is not beta-normalized; use ``normalize`` afterwards if needed.
    Unmapped free indices are left untouched.
    """
    if not m:
        return t
    for r in m.values():
        if r.loose:
            raise TypingError("replacement terms must be locally closed")
    return _subst_free(t, m, 0, 0)


class _Redex(Term):
    """A beta-redex (lambda applied to arguments); exists only as a preterm."""
    __slots__ = ("head", "args")

    def __new__(cls, head: Term, args: Sequence[Term]) -> "_Redex":
        args = tuple(args)

        def make():
            ty = head.ty
            for a in args:
                if not is_functional(ty) or ty.args[0] is not a.ty:
                    raise TypingError("ill-typed redex")
                ty = ty.args[1]
            obj = object.__new__(cls)
            obj.head = head
            obj.args = args
            obj.ty = ty
            obj.loose = max([head.loose] + [a.loose for a in args])
            obj.has_var = head.has_var or any(a.has_var for a in args)
            obj.has_tvar = head.has_tvar or any(a.has_tvar for a in args)
            return obj
        return _intern(_TERMS, ("R", head, args), make)


def redex(head: Term, args: Sequence[Term]) -> Term:
    """Build ``head args`` allowing a lambda head (an unreduced preterm)."""
    args = tuple(args)
    if not args:
        return head
    if isinstance(head, Lam):
        return _Redex(head, args)
    if isinstance(head, _Redex):
        return _Redex(head.head, head.args + args)
    return mk_app(head, args)


def instantiate(body: Term, arg: Term) -> Term:
    """body{0 -> arg} for a body under one binder; other free indices drop by one.

    ``arg`` may contain free indices (it lives outside the binder).
    """
    return _inst(body, arg, 0)


def _inst(t: Term, arg: Term, depth: int) -> Term:
    if t.loose <= depth:
        return t
    match t:
        case DB():
            if t.index == depth:
                if arg.ty is not t.ty:
                    raise TypingError("instantiation with a term of the wrong type")
                return shift(arg, depth)
            return DB(t.index - 1, t.ty) if t.index > depth else t
        case Lam():
            return Lam(t.bty, _inst(t.body, arg, depth + 1))
        case App() | _Redex():
            return redex(_inst(t.head, arg, depth), [_inst(a, arg, depth) for a in t.args])
    return t


# -------------------------------------------------------- normalization ----

_beta_cache: dict = {}


def beta_normalize(t: Term) -> Term:
    r = _beta_cache.get(t)
    if r is None:
        r = _beta(t)
        _beta_cache[t] = r
    return r


def _beta(t: Term) -> Term:
    match t:
        case Var() | DB():
            return t
        case Sym():
            if not t.params:
                return t
            return Sym(t.name, t.tyargs, [beta_normalize(p) for p in t.params], t.ty)
        case Lam():
            return Lam(t.bty, beta_normalize(t.body))
        case App() | _Redex():
            head = beta_normalize(t.head)
            args = [beta_normalize(a) for a in t.args]
            while isinstance(head, Lam) and args:
                head = beta_normalize(instantiate(head.body, args.pop(0)))
            if isinstance(head, App):
                return App(head.head, head.args + tuple(args)) if args else head
            return mk_app(head, args) if args else head
    raise TypeError(f"not a term: {t!r}")


_ETA_MODE = ["long"]


def set_eta_mode(mode: str) -> None:
    if mode not in ("long", "short"):
        raise ValueError("eta mode is 'long' or 'short'")
    _ETA_MODE[0] = mode


def get_eta_mode() -> str:
    return _ETA_MODE[0]


_long_cache: dict = {}
_short_cache: dict = {}


def _eta_long(t: Term) -> Term:
    r = _long_cache.get(t)
    if r is not None:
        return r
    match t:
        case Lam():
            r = Lam(t.bty, _eta_long(t.body))
        case _:
            head, args = head_args(t)
            if isinstance(head, Sym) and head.params:
                head = Sym(head.name, head.tyargs, [_eta_long(p) for p in head.params], head.ty)
            core = mk_app(head, [_eta_long(a) for a in args])
            extra, _ = strip_arrows(core.ty)
            if extra:
                k = len(extra)
                core = shift(core, k)
                idx = [_eta_long(DB(k - 1 - i, ty)) for i, ty in enumerate(extra)]
                body = mk_app(core, idx)
                for ty in reversed(extra):
                    body = Lam(ty, body)
                core = body
            r = core
    _long_cache[t] = r
    return r


def _eta_short(t: Term) -> Term:
    r = _short_cache.get(t)
    if r is not None:
        return r
    match t:
        case Lam():
            body = _eta_short(t.body)
            r = Lam(t.bty, body)
            if isinstance(body, App):
                last = body.args[-1]
                if isinstance(last, DB) and last.index == 0:
                    rest_args = body.args[:-1]
                    rest = mk_app(body.head, rest_args)
                    if not _has_index(rest, 0):
                        r = shift(rest, -1)
        case Sym() if t.params:
            r = Sym(t.name, t.tyargs, [_eta_short(p) for p in t.params], t.ty)
        case App():
            r = mk_app(_eta_short(t.head), [_eta_short(a) for a in t.args])
        case _:
            r = t
    _short_cache[t] = r
    return r


def _has_index(t: Term, i: int) -> bool:
    if t.loose <= i:
        return False
    match t:
        case DB():
            return t.index == i
        case Lam():
            return _has_index(t.body, i + 1)
        case App():
            return _has_index(t.head, i) or any(_has_index(a, i) for a in t.args)
    return False


def eta_normalize(t: Term, mode: str | None = None) -> Term:
    mode = mode or _ETA_MODE[0]
    return _eta_long(t) if mode == "long" else _eta_short(t)


def normalize(t: Term, mode: str | None = None) -> Term:
    """Canonical beta-normal representative in the given (or global) eta form."""
    return eta_normalize(beta_normalize(t), mode)


# ------------------------------------------------------------ variables ----

_fv_cache: dict = {}


def free_vars(t: Term) -> frozenset:
    if not t.has_var:
        return frozenset()
    r = _fv_cache.get(t)
    if r is not None:
        return r
    match t:
        case Var():
            r = frozenset((t,))
        case Sym():
            r = frozenset().union(*(free_vars(p) for p in t.params))
        case Lam():
            r = free_vars(t.body)
        case _:
            r = free_vars(t.head).union(*(free_vars(a) for a in t.args))
    _fv_cache[t] = r
    return r


def term_tvars(t: Term, acc: set | None = None) -> set:
    acc = set() if acc is None else acc
    if not t.has_tvar:
        return acc
    type_vars(t.ty, acc)
    match t:
        case Sym():
            for ty in t.tyargs:
                type_vars(ty, acc)
            for p in t.params:
                term_tvars(p, acc)
        case Lam():
            type_vars(t.bty, acc)
            term_tvars(t.body, acc)
        case App():
            term_tvars(t.head, acc)
            for a in t.args:
                term_tvars(a, acc)
    return acc


free_tvars = term_tvars


def _var_occurrences(t: Term, inside: bool, acc_in: set, acc_out: set) -> None:
    if not t.has_var:
        return
    match t:
        case Var():
            (acc_in if inside else acc_out).add(t.name)
        case Sym():
            for p in t.params:
                _var_occurrences(p, True, acc_in, acc_out)
        case Lam():
            _var_occurrences(t.body, inside, acc_in, acc_out)
        case _:
            _var_occurrences(t.head, inside, acc_in, acc_out)
            for a in t.args:
                _var_occurrences(a, inside, acc_in, acc_out)


def vars_inside_params(t: Term) -> set[str]:
    a, b = set(), set()
    _var_occurrences(t, False, a, b)
    return a


def vars_outside_params(t: Term) -> set[str]:
    a, b = set(), set()
    _var_occurrences(t, False, a, b)
    return b


def occurs_in_params(terms: Iterable[Term]) -> tuple[set[str], set[str]]:
    """Names of variables occurring inside resp. outside parameters."""
    a, b = set(), set()
    for t in terms:
        _var_occurrences(t, False, a, b)
    return a, b


def syntactic_size(t: Term) -> int:
    """Number of variable, constant and De Bruijn index occurrences."""
    match t:
        case Var() | DB():
            return 1
        case Sym():
            return 1 + sum(syntactic_size(p) for p in t.params)
        case Lam():
            return syntactic_size(t.body)
        case _:
            return syntactic_size(t.head) + sum(syntactic_size(a) for a in t.args)


# -------------------------------------------------------- substitutions ----

@dataclass
class Subst:
    """Simultaneous substitution: type variable names to types and term
    variable names to (locally closed, normalized) terms."""
    types: dict[str, Type] = field(default_factory=dict)
    terms: dict[str, Term] = field(default_factory=dict)

    def is_empty(self) -> bool:
        return not self.types and not self.terms

    def copy(self) -> "Subst":
        return Subst(dict(self.types), dict(self.terms))

    def __call__(self, t: Term) -> Term:
        return apply_subst(t, self)

    def ty(self, ty: Type) -> Type:
        return subst_type(ty, self.types)

    def compose(self, other: "Subst") -> "Subst":
        """self then other: t(self.compose(other)) = (t self) other."""
        types = {k: subst_type(v, other.types) for k, v in self.types.items()}
        for k, v in other.types.items():
            types.setdefault(k, v)
        terms = {k: apply_subst(v, other) for k, v in self.terms.items()}
        for k, v in other.terms.items():
            terms.setdefault(k, v)
        return Subst(types, terms)

    def restrict(self, names: Iterable[str], tnames: Iterable[str] = ()) -> "Subst":
        names, tnames = set(names), set(tnames)
        return Subst({k: v for k, v in self.types.items() if k in tnames},
                     {k: v for k, v in self.terms.items() if k in names})

    def __repr__(self) -> str:
        from .printing import show_subst
        return show_subst(self)


def _apply_raw(t: Term, s: Subst) -> Term:
    if not t.has_var and (not t.has_tvar or not s.types):
        return t
    match t:
        case Var():
            r = s.terms.get(t.name)
            if r is not None:
                return r
            return Var(t.name, subst_type(t.ty, s.types)) if s.types else t
        case Sym():
            return Sym(t.name, [subst_type(a, s.types) for a in t.tyargs],
                       [normalize(_apply_raw(p, s)) for p in t.params], subst_type(t.ty, s.types))
        case DB():
            return DB(t.index, subst_type(t.ty, s.types))
        case Lam():
            return Lam(subst_type(t.bty, s.types), _apply_raw(t.body, s))
        case _:
            return redex(_apply_raw(t.head, s), [_apply_raw(a, s) for a in t.args])


def apply_subst(t: Term, s: Subst, mode: str | None = None) -> Term:
    if s.is_empty():
        return t
    r = _apply_raw(t, s)
    if r is t:
        return t
    return normalize(r, mode)


# ------------------------------------------------------------ positions ----

Position = tuple


def _orange(t: Term, pos: tuple, out: list) -> None:
    out.append((pos, t))
    match t:
        case Lam():
            _orange(t.body, pos + (1,), out)
        case App() if isinstance(t.head, (Sym, DB)):
            for i, a in enumerate(t.args, 1):
                _orange(a, pos + (i,), out)


def orange_positions(t: Term, mode: str | None = None) -> list[tuple[tuple, Term]]:
    out: list = []
    _orange(normalize(t, mode), (), out)
    return out


def yellow_positions(t: Term, mode: str | None = None) -> list[tuple[tuple, Term]]:
    return [(p, s) for p, s in orange_positions(t, mode) if s.loose == 0]


def _green(t: Term, pos: tuple, out: list) -> None:
    out.append((pos, t))
    if is_functional(t.ty):
        return
    if isinstance(t, App) and isinstance(t.head, (Sym, DB)):
        for i, a in enumerate(t.args, 1):
            _green(a, pos + (i,), out)


def green_positions(t: Term, mode: str | None = None) -> list[tuple[tuple, Term]]:
    out: list = []
    _green(normalize(t, mode), (), out)
    return out


def iter_green(t: Term) -> Iterator[tuple[tuple, Term]]:
    """Green positions of an already normalized term."""
    out: list = []
    _green(t, (), out)
    return iter(out)


def subterm_at(t: Term, p: Sequence[int]) -> Term:
    for i in p:
        match t:
            case Lam() if i == 1:
                t = t.body
            case App() if isinstance(t.head, (Sym, DB)) and 1 <= i <= len(t.args):
                t = t.args[i - 1]
            case _:
                raise KeyError(f"position {tuple(p)} is not orange")
    return t


def _replace(t: Term, p: Sequence[int], s: Term, depth: int) -> Term:
    if not p:
        if s.ty is not t.ty:
            raise TypingError("replacement has a different type")
        if s.loose > depth:
            raise TypingError("replacement has De Bruijn indices not bound at the position")
        return s
    i, rest = p[0], p[1:]
    match t:
        case Lam() if i == 1:
            return Lam(t.bty, _replace(t.body, rest, s, depth + 1))
        case App() if isinstance(t.head, (Sym, DB)) and 1 <= i <= len(t.args):
            args = list(t.args)
            args[i - 1] = _replace(args[i - 1], rest, s, depth)
            return App(t.head, args)
    raise KeyError(f"position {tuple(p)} is not orange")


def replace_at(t: Term, p: Sequence[int], s: Term, mode: str | None = None) -> Term:
    """t with s at orange position p (w.r.t. the mode), renormalized."""
    base = normalize(t, mode)
    return normalize(_replace(base, tuple(p), s, 0), mode)
