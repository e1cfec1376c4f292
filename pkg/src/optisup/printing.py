"""Rendering of types, terms and substitutions in the native input syntax."""
from __future__ import annotations

from .terms import (
    AND, BOT, EQ, IMP, NEQ, NOT, OR, TOP, DB, Lam, Sym, Term, Var, head_args, show_type,
)

_INFIX = {AND: "&", OR: "|", IMP: "=>"}


def _ty(t) -> str:
    s = show_type(t)
    return f"({s})" if " > " in s else s


def show_term(t: Term, names: tuple[str, ...] = ()) -> str:
    """Bound variables are printed as B<depth>, outermost first."""
    match t:
        case Var():
            return t.name
        case DB():
            k = len(names) - 1 - t.index
            return names[k] if k >= 0 else f"#{t.index - len(names)}"
        case Sym():
            return _sym(t, names)
        case Lam():
            binders = []
            while isinstance(t, Lam):
                n = f"B{len(names)}"
                binders.append(f"{n}:{_ty(t.bty)}")
                names = names + (n,)
                t = t.body
            return f"(^[{', '.join(binders)}]: {show_term(t, names)})"
    head, args = head_args(t)
    if isinstance(head, Sym) and not head.params:
        if head.name in _INFIX and len(args) == 2:
            return f"({show_term(args[0], names)} {_INFIX[head.name]} {show_term(args[1], names)})"
        if head.name == NOT and len(args) == 1:
            return f"~{show_term(args[0], names)}"
        if head.name in (EQ, NEQ) and len(args) == 2:
            op = "==" if head.name == EQ else "=/="
            return f"({show_term(args[0], names)} {op} {show_term(args[1], names)})"
    h = show_term(head, names)
    if isinstance(head, Lam):
        h = f"({h})"
    return f"{h}({', '.join(show_term(a, names) for a in args)})"


def _sym(t: Sym, names) -> str:
    if t.name == TOP:
        return "$true"
    if t.name == BOT:
        return "$false"
    s = t.name
    if t.tyargs:
        s += "<" + ", ".join(_ty(a) for a in t.tyargs) + ">"
    if t.params:
        # parameters are closed, so they are printed without the outer binders
        s += "{" + ", ".join(show_term(p) for p in t.params) + "}"
    return s


def show_subst(s) -> str:
    parts = [f"{k} := {show_type(v)}" for k, v in sorted(s.types.items())]
    parts += [f"{k} := {show_term(v)}" for k, v in sorted(s.terms.items())]
    return "{" + ", ".join(parts) + "}"
