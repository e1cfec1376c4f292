"""Problem parsing and translation into clauses.

Native format, one item per ``.``-terminated statement::

    % comment
    type i.                      type list/1.
    const f : i > i.             const nil : list(A).     (polymorphic in A)
    cnf: f(X) = a | p(X) != $true.
    axiom: ![x:i]: p(x) => q(x).
    conjecture: ?[x:i]: q(x).

Identifiers starting with an uppercase letter or ``_`` are free variables
unless bound by a binder.  ``^[x:i]: t`` is λ, ``![..]:`` and ``?[..]:`` are
quantifiers, ``~ & | =>`` connectives (``<=>`` is equality on ``o``).
``f<ty,..>{p,..}(a,..)`` gives explicit type arguments and parameters.
Binders extend as far right as possible.  At the top of a ``cnf`` item
``|`` separates literals and ``=``/``!=`` are literal equations; nested
equations may also be written ``==`` and ``=/=``.

The THF subset accepts ``thf(name, role, formula).`` with roles ``type``,
``axiom``, ``hypothesis``, ``lemma``, ``definition``, ``negated_conjecture``
and ``conjecture``, ``$i``/``$o``/``$tType``, ``@`` application, λ,
quantifiers and the core connectives.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .clause import Clause, Inference, Literal
from .terms import (
    AND, BOOL, BOT, DIFF, EQ, IMP, NEQ, NOT, OR, TOP, App, DB, Lam, Signature, Sym, TCon, Term,
    TVar, Type, TypingError, Var, arrow, arrows, mk_app, normalize, reserve_name, subst_type,
    type_vars,
)


class ParseError(Exception):
    def __init__(self, msg: str, line: int = 0, col: int = 0, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{col}: {msg}")
        self.line, self.col = line, col


# ------------------------------------------------------------------ lexer ----

_TOKEN = re.compile(r"""
    (?P<ws>\s+|%[^\n]*|/\*.*?\*/)
  | (?P<op><=>|<~>|=/=|==|=>|<=|~\||~&|!=|!>|\?\*|@\+|@-|!!|\?\?|:=|[()\[\]{}<>,:.^!?~&|=@/*+])
  | (?P<dollar>\$\$?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*|'(?:[^'\\]|\\.)*')
  | (?P<int>[0-9]+)
""", re.VERBOSE | re.DOTALL)

_UNSUPPORTED = {"<~>": "exclusive or", "<=": "reverse implication", "~|": "nor", "~&": "nand",
                "!>": "polymorphic types", "?*": "choice", "@+": "choice", "@-": "definite description",
                "!!": "Π combinator", "??": "Σ combinator", ":=": "let bindings", "*": "product types",
                "+": "sum types"}


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, source: str = "<input>") -> list[Tok]:
    out, pos, line, lstart = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - lstart + 1, source)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            out.append(Tok(kind, s, line, pos - lstart + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            lstart = pos + s.rfind("\n") + 1
        pos = m.end()
    out.append(Tok("eof", "", line, pos - lstart + 1))
    return out


# -------------------------------------------------------------------- AST ----

@dataclass
class N:
    line: int
    col: int


@dataclass
class NName(N):
    name: str
    tyargs: list | None = None
    params: list | None = None


@dataclass
class NApp(N):
    head: N
    args: list


@dataclass
class NBind(N):
    kind: str              # "^", "!", "?"
    binders: list          # [(name, type)]
    body: N


@dataclass
class NConn(N):
    op: str                # NOT, AND, OR, IMP, "iff"
    args: list


@dataclass
class NEq(N):
    lhs: N
    rhs: N
    positive: bool
    nested: bool = False   # written == or =/=


@dataclass
class Item:
    role: str              # "type", "const", "cnf", "axiom", "conjecture"
    name: str
    body: object
    line: int


@dataclass
class Problem:
    signature: Signature
    items: list[Item] = field(default_factory=list)
    source: str = "<input>"


# ----------------------------------------------------------------- parser ----

class _Parser:
    def __init__(self, toks: list[Tok], thf: bool, source: str):
        self.toks, self.i, self.thf, self.source = toks, 0, thf, source

    # -- token helpers --
    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: Tok | None = None) -> ParseError:
        t = tok or self.tok
        return ParseError(msg, t.line, t.col, self.source)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "name", "dollar")

    def eat(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Tok:
        t = self.tok
        if not self.eat(text):
            raise self.error(f"expected {text!r}, found {t.text or 'end of input'!r}")
        return t

    def name(self) -> Tok:
        t = self.tok
        if t.kind not in ("name", "dollar"):
            raise self.error(f"expected a name, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    def check_supported(self) -> None:
        t = self.tok
        if t.kind == "op" and t.text in _UNSUPPORTED:
            raise self.error(f"unsupported construct {t.text!r} ({_UNSUPPORTED[t.text]})")
        if t.kind == "dollar" and t.text not in _DOLLAR_OK:
            raise self.error(f"unsupported defined symbol {t.text!r}")

    # -- types --
    def type_(self) -> Type:
        a = self.type_atom()
        if self.eat(">"):
            return arrow(a, self.type_())
        return a

    def type_atom(self) -> Type:
        self.check_supported()
        if self.eat("("):
            t = self.type_()
            self.expect(")")
            return t
        t = self.name()
        n = t.text
        if n in ("o", "$o"):
            return BOOL
        if _is_var_name(n):
            return TVar(n)
        args = []
        if not self.thf and self.eat("("):
            args.append(self.type_())
            while self.eat(","):
                args.append(self.type_())
            self.expect(")")
        return TCon(n, tuple(args))

    # -- formulas --
    def formula(self) -> N:
        return self.iff()

    def iff(self) -> N:
        t0 = self.tok
        a = self.imp()
        if self.eat("<=>"):
            return NConn(t0.line, t0.col, "iff", [a, self.imp()])
        return a

    def imp(self) -> N:
        t0 = self.tok
        a = self.disj()
        if self.eat("=>"):
            return NConn(t0.line, t0.col, IMP, [a, self.imp()])
        return a

    def disj(self) -> N:
        t0 = self.tok
        a = self.conj()
        while self.eat("|"):
            a = NConn(t0.line, t0.col, OR, [a, self.conj()])
        return a

    def conj(self) -> N:
        t0 = self.tok
        a = self.equation()
        while self.eat("&"):
            a = NConn(t0.line, t0.col, AND, [a, self.equation()])
        return a

    def equation(self) -> N:
        t0 = self.tok
        a = self.unary()
        for op, pos, nested in (("=", True, False), ("!=", False, False),
                                ("==", True, True), ("=/=", False, True)):
            if self.eat(op):
                return NEq(t0.line, t0.col, a, self.unary(), pos, nested)
        self.check_supported()
        return a

    def unary(self) -> N:
        t0 = self.tok
        self.check_supported()
        if self.eat("~"):
            return NConn(t0.line, t0.col, NOT, [self.unary()])
        if self.tok.text in ("^", "!", "?") and self.tok.kind == "op":
            kind = self.tok.text
            self.i += 1
            self.expect("[")
            binders = [self.binder()]
            while self.eat(","):
                binders.append(self.binder())
            self.expect("]")
            self.expect(":")
            return NBind(t0.line, t0.col, kind, binders, self.formula())
        return self.application()

    def binder(self) -> tuple[str, Type]:
        t = self.name()
        if not self.eat(":"):
            raise self.error(f"binder {t.text} needs a type annotation")
        return t.text, self.type_()

    def application(self) -> N:
        t0 = self.tok
        a = self.atom()
        if self.thf:
            args = []
            while self.eat("@"):
                args.append(self.atom())
            return NApp(t0.line, t0.col, a, args) if args else a
        while self.at("("):
            self.i += 1
            args = [self.formula()]
            while self.eat(","):
                args.append(self.formula())
            self.expect(")")
            a = NApp(t0.line, t0.col, a, args)
        return a

    def atom(self) -> N:
        self.check_supported()
        if self.eat("("):
            a = self.formula()
            self.expect(")")
            return a
        if self.tok.text in ("^", "!", "?", "~") and self.tok.kind == "op":
            return self.unary()
        t = self.name()
        node = NName(t.line, t.col, _unquote(t.text))
        if not self.thf and self.at("<"):
            self.i += 1
            node.tyargs = [self.type_atom()]
            while self.eat(","):
                node.tyargs.append(self.type_atom())
            self.expect(">")
        if not self.thf and self.at("{"):
            self.i += 1
            node.params = [self.formula()]
            while self.eat(","):
                node.params.append(self.formula())
            self.expect("}")
        return node

    # -- items --
    def native_items(self) -> Iterator[Item]:
        while self.tok.kind != "eof":
            t0 = self.tok
            kw = self.name().text
            if kw == "type":
                n = self.name().text
                arity = int(self.expect_int()) if self.eat("/") else 0
                self.expect(".")
                yield Item("type", n, arity, t0.line)
            elif kw == "const":
                n = self.name().text
                ptys = []
                if self.eat("{"):
                    ptys.append(self.type_())
                    while self.eat(","):
                        ptys.append(self.type_())
                    self.expect("}")
                self.expect(":")
                ty = self.type_()
                self.expect(".")
                yield Item("const", n, (ty, ptys), t0.line)
            elif kw in ("cnf", "axiom", "conjecture"):
                n = ""
                if self.tok.kind == "name":
                    n = self.name().text
                self.expect(":")
                f = self.formula()
                self.expect(".")
                yield Item(kw, n, f, t0.line)
            else:
                raise self.error(f"unknown item {kw!r}", t0)

    def expect_int(self) -> str:
        t = self.tok
        if t.kind != "int":
            raise self.error("expected an integer")
        self.i += 1
        return t.text

    def thf_items(self) -> Iterator[Item]:
        while self.tok.kind != "eof":
            t0 = self.tok
            kw = self.name().text
            if kw == "include":
                raise self.error("include directives are not supported", t0)
            if kw != "thf":
                raise self.error(f"only thf(...) statements are supported, found {kw!r}", t0)
            self.expect("(")
            n = self.name().text
            self.expect(",")
            role = self.name().text
            self.expect(",")
            if role == "type":
                paren = self.eat("(")
                c = _unquote(self.name().text)
                self.expect(":")
                if self.eat("$tType"):
                    yield Item("type", c, 0, t0.line)
                else:
                    yield Item("const", c, (self.type_(), []), t0.line)
                if paren:
                    self.expect(")")
            elif role in ("axiom", "hypothesis", "lemma", "definition", "negated_conjecture", "conjecture"):
                f = self.formula()
                yield Item("conjecture" if role == "conjecture" else "axiom", n, f, t0.line)
            else:
                raise self.error(f"unsupported role {role!r}", t0)
            if self.eat(","):
                raise self.error("annotations are not supported")
            self.expect(")")
            self.expect(".")


_DOLLAR_OK = {"$true", "$false", "$o", "$i", "$tType", "$diff"}


def _unquote(s: str) -> str:
    return s[1:-1] if s.startswith("'") else s


def _is_var_name(n: str) -> bool:
    return n[:1].isupper() or n[:1] == "_"


def is_thf(text: str, path: str | None = None) -> bool:
    if path and Path(path).suffix in (".p", ".thf", ".tptp"):
        return True
    return re.search(r"^\s*(thf|include)\s*\(", text, re.MULTILINE) is not None


def parse(text: str, source: str = "<input>", thf: bool | None = None) -> Problem:
    """Parse a problem; the format is detected unless ``thf`` is given."""
    if thf is None:
        thf = is_thf(text)
    p = _Parser(tokenize(text, source), thf, source)
    items = list(p.thf_items() if thf else p.native_items())
    sig = Signature()
    if thf:
        sig.add_tycon("$i")
    prob = Problem(sig, [], source)
    for it in items:
        try:
            if it.role == "type":
                sig.add_tycon(it.name, it.body)
            elif it.role == "const":
                ty, ptys = it.body
                tv = []
                for t in [*ptys, ty]:
                    for v in _tvars_in_order(t):
                        if v not in tv:
                            tv.append(v)
                sig.add_const(it.name, ty, tv, ptys)
            else:
                prob.items.append(it)
        except TypingError as e:
            raise ParseError(str(e), it.line, 1, source) from None
    return prob


def parse_file(path: str | Path) -> Problem:
    text = Path(path).read_text()
    return parse(text, str(path), is_thf(text, str(path)))


def _tvars_in_order(t: Type) -> list[str]:
    if isinstance(t, TVar):
        return [t.name]
    out = []
    for a in t.args:
        for v in _tvars_in_order(a):
            if v not in out:
                out.append(v)
    return out


# ------------------------------------------------------------ elaboration ----

class _Elab:
    """Type inference followed by term construction for one item."""

    def __init__(self, sig: Signature, source: str):
        self.sig, self.source = sig, source
        self.tsub: dict[str, Type] = {}
        self.fvars: dict[str, Type] = {}
        self.inst: dict[int, tuple] = {}
        self.n = 0

    def fresh(self) -> TVar:
        self.n += 1
        return TVar(f"_U{self.n}")

    def err(self, node: N, msg: str) -> ParseError:
        return ParseError(msg, node.line, node.col, self.source)

    def resolve(self, t: Type) -> Type:
        if isinstance(t, TVar):
            b = self.tsub.get(t.name)
            return self.resolve(b) if b is not None else t
        if not t.args:
            return t
        return TCon(t.name, tuple(self.resolve(a) for a in t.args))

    def unify(self, a: Type, b: Type, node: N) -> None:
        a, b = self.resolve(a), self.resolve(b)
        if a is b:
            return
        if isinstance(a, TVar) or isinstance(b, TVar):
            v, t = (a, b) if isinstance(a, TVar) else (b, a)
            if v.name in {x.name for x in type_vars(t)}:
                raise self.err(node, "cyclic type")
            self.tsub[v.name] = t
            return
        if a.name != b.name or len(a.args) != len(b.args):
            from .terms import show_type
            raise self.err(node, f"type mismatch: {show_type(a)} vs {show_type(b)}")
        for x, y in zip(a.args, b.args):
            self.unify(x, y, node)

    # -- pass 1 --
    def infer(self, n: N, env: list) -> Type:
        match n:
            case NName():
                for name, ty in reversed(env):
                    if name == n.name:
                        if n.tyargs or n.params:
                            raise self.err(n, "bound variables take no type arguments or parameters")
                        return ty
                if n.name in ("$true", "$false"):
                    return BOOL
                d = self.sig.decls.get(n.name)
                if d is not None:
                    tys = [self.sig_type(t, n) for t in n.tyargs] if n.tyargs is not None else \
                        [self.fresh() for _ in d.tparams]
                    if len(tys) != len(d.tparams):
                        raise self.err(n, f"{n.name} expects {len(d.tparams)} type arguments")
                    m = dict(zip(d.tparams, tys))
                    params = n.params or []
                    if len(params) != len(d.param_types):
                        raise self.err(n, f"{n.name} expects {len(d.param_types)} parameters")
                    for p, pt in zip(params, d.param_types):
                        self.unify(self.infer(p, []), subst_type(pt, m), p)
                    self.inst[id(n)] = tuple(tys)
                    return subst_type(d.result, m)
                if _is_var_name(n.name):
                    if n.tyargs or n.params:
                        raise self.err(n, "variables take no type arguments or parameters")
                    if n.name not in self.fvars:
                        self.fvars[n.name] = self.fresh()
                    return self.fvars[n.name]
                raise self.err(n, f"unknown constant {n.name!r}")
            case NApp():
                th = self.infer(n.head, env)
                for a in n.args:
                    r = self.fresh()
                    self.unify(th, arrow(self.infer(a, env), r), a)
                    th = r
                return th
            case NBind():
                for _, ty in n.binders:
                    self.sig_type(ty, n)
                env2 = env + list(n.binders)
                tb = self.infer(n.body, env2)
                if n.kind == "^":
                    return arrows([ty for _, ty in n.binders], tb)
                self.unify(tb, BOOL, n.body)
                return BOOL
            case NConn():
                for a in n.args:
                    self.unify(self.infer(a, env), BOOL, a)
                return BOOL
            case NEq():
                self.unify(self.infer(n.lhs, env), self.infer(n.rhs, env), n)
                return BOOL
        raise TypeError(n)

    def sig_type(self, t: Type, n: N) -> Type:
        try:
            self.sig.check_type(t)
        except TypingError as e:
            raise self.err(n, str(e)) from None
        return t

    # -- pass 2 --
    def build(self, n: N, env: list) -> Term:
        match n:
            case NName():
                for k, (name, ty) in enumerate(reversed(env)):
                    if name == n.name:
                        return DB(k, self.resolve(ty))
                if n.name == "$true":
                    return Sym(TOP, (), (), BOOL)
                if n.name == "$false":
                    return Sym(BOT, (), (), BOOL)
                if id(n) in self.inst:
                    tys = tuple(self.resolve(t) for t in self.inst[id(n)])
                    params = [normalize(self.build(p, [])) for p in (n.params or [])]
                    try:
                        return self.sig.const(n.name, tys, params)
                    except TypingError as e:
                        raise self.err(n, str(e)) from None
                reserve_name(n.name)
                return Var(n.name, self.resolve(self.fvars[n.name]))
            case NApp():
                return mk_app(self.build(n.head, env), [self.build(a, env) for a in n.args])
            case NBind():
                if n.kind == "^":
                    return self._lams(n.binders, self.build(n.body, env + list(n.binders)))
                return self.quant(n, env)
            case NConn():
                args = [self.build(a, env) for a in n.args]
                if n.op == "iff":
                    return _logic(EQ, args, BOOL)
                return _logic(n.op, args)
            case NEq():
                a, b = self.build(n.lhs, env), self.build(n.rhs, env)
                return _logic(EQ if n.positive else NEQ, [a, b], a.ty)
        raise TypeError(n)

    def _lams(self, binders, body: Term) -> Term:
        for _, ty in reversed(binders):
            body = Lam(self.resolve(ty), body)
        return body

    def quant_sides(self, n: NBind, env: list) -> tuple[Term, Term, bool]:
        """∀x̄.t ↦ (λx̄.t, λx̄.⊤, ≈) and ∃x̄.t ↦ (λx̄.t, λx̄.⊥, ≉)."""
        body = self.build(n.body, env + list(n.binders))
        lam = self._lams(n.binders, body)
        const = Sym(TOP, (), (), BOOL) if n.kind == "!" else Sym(BOT, (), (), BOOL)
        return lam, self._lams(n.binders, const), n.kind == "!"

    def quant(self, n: NBind, env: list) -> Term:
        a, b, pos = self.quant_sides(n, env)
        return _logic(EQ if pos else NEQ, [a, b], a.ty)


def _logic(name: str, args: list[Term], ty: Type | None = None) -> Term:
    if name in (EQ, NEQ):
        head = Sym(name, (ty,), (), arrows([ty, ty], BOOL))
    elif name == NOT:
        head = Sym(NOT, (), (), arrow(BOOL, BOOL))
    else:
        head = Sym(name, (), (), arrows([BOOL, BOOL], BOOL))
    return App(head, tuple(args))


def encode_quantifiers(t: Term) -> Term:
    """Identity on elaborated terms: quantifiers are encoded while they are
    built (∀x.t as (λx.t) ≈ (λx.⊤), ∃x.t as (λx.t) ≉ (λx.⊥))."""
    return normalize(t)


def _top_literal(el: _Elab, n: N, positive: bool) -> Literal:
    """Literal for a top-level formula, keeping equations native."""
    match n:
        case NEq(nested=False):
            a, b = normalize(el.build(n.lhs, [])), normalize(el.build(n.rhs, []))
            return Literal(a, b, n.positive == positive)
        case NBind(kind="!" | "?"):
            a, b, pos = el.quant_sides(n, [])
            return Literal(normalize(a), normalize(b), pos == positive)
        case NConn(op=op) if op == NOT:
            return _top_literal(el, n.args[0], not positive)
    t = normalize(el.build(n, []))
    return Literal(t, Sym(TOP if positive else BOT, (), (), BOOL), True)


def _disjuncts(n: N) -> list[N]:
    if isinstance(n, NConn) and n.op == OR:
        return _disjuncts(n.args[0]) + _disjuncts(n.args[1])
    return [n]


def to_clauses(prob: Problem) -> list[Clause]:
    """Axioms φ become φ ≈ ⊤, the conjecture ψ becomes ψ ≈ ⊥, and ``cnf``
    items become their literals."""
    out = []
    for it in prob.items:
        el = _Elab(prob.signature, prob.source)
        el.infer(it.body, [])
        if it.role == "cnf":
            lits = [_top_literal(el, d, True) for d in _disjuncts(it.body)]
        elif it.role == "axiom":
            lits = [_top_literal(el, it.body, True)]
        else:
            if el.fvars:
                raise ParseError("free variables in a conjecture", it.line, 1, prob.source)
            lits = [_top_literal(el, it.body, False)]
        c = Clause(lits, (), Inference("input", (), None, {"name": it.name, "role": it.role}))
        _check_input(c, it, prob.source)
        out.append(c)
    return out


def _check_input(c: Clause, it: Item, source: str) -> None:
    for t in c.terms():
        if _uses(t, DIFF):
            raise ParseError("input may not use diff", it.line, 1, source)
        if _has_params(t):
            raise ParseError("input may not use parameters", it.line, 1, source)


def _uses(t: Term, name: str) -> bool:
    match t:
        case Sym():
            return t.name == name or any(_uses(p, name) for p in t.params)
        case Lam():
            return _uses(t.body, name)
        case App():
            return _uses(t.head, name) or any(_uses(a, name) for a in t.args)
    return False


def _has_params(t: Term) -> bool:
    match t:
        case Sym():
            return bool(t.params)
        case Lam():
            return _has_params(t.body)
        case App():
            return _has_params(t.head) or any(_has_params(a) for a in t.args)
    return False


def parse_clause(text: str, sig: Signature) -> Clause:
    """One ``cnf`` body (without the item keyword) against a signature."""
    p = _Parser(tokenize(text), False, "<clause>")
    f = p.formula()
    if p.tok.kind != "eof" and not p.at("."):
        raise p.error("trailing input")
    el = _Elab(sig, "<clause>")
    el.infer(f, [])
    return Clause([_top_literal(el, d, True) for d in _disjuncts(f)])


def parse_term(text: str, sig: Signature) -> Term:
    p = _Parser(tokenize(text), False, "<term>")
    f = p.formula()
    el = _Elab(sig, "<term>")
    el.infer(f, [])
    return normalize(el.build(f, []))


def print_clause(c: Clause) -> str:
    from .clause import show_literal
    return " | ".join(show_literal(l) for l in c.lits) if c.lits else "$false"
