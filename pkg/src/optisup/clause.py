"""Literals, constrained clauses, literal selection and eligibility."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .order import EQ, GT, LT, TermOrder
from .terms import (
    BOT, TOP, Subst, Sym, Term, apply_subst, free_vars, occurs_in_params, syntactic_size,
    term_tvars,
)

Constraint = tuple[Term, Term]


@dataclass(frozen=True)
class Literal:
    """An unordered equation ``lhs ≈ rhs`` (or its negation)."""
    lhs: Term
    rhs: Term
    positive: bool = True

    def __post_init__(self) -> None:
        if self.lhs.ty is not self.rhs.ty:
            raise TypeError("literal sides must have the same type")
        if self.lhs.loose or self.rhs.loose:
            raise TypeError("literal sides must be locally closed")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Literal) or self.positive != other.positive:
            return False
        return (self.lhs is other.lhs and self.rhs is other.rhs) or \
            (self.lhs is other.rhs and self.rhs is other.lhs)

    def __hash__(self) -> int:
        return hash((frozenset((id(self.lhs), id(self.rhs))), self.positive))

    def sides(self) -> tuple[Term, Term]:
        return self.lhs, self.rhs

    def flipped(self) -> "Literal":
        return Literal(self.rhs, self.lhs, self.positive)

    def map(self, f: Callable[[Term], Term]) -> "Literal":
        return Literal(f(self.lhs), f(self.rhs), self.positive)

    def negate(self) -> "Literal":
        return Literal(self.lhs, self.rhs, not self.positive)

    @property
    def is_false_lit(self) -> bool:
        """Of the shape t ≈ ⊥ (either orientation)."""
        return self.positive and (_is(self.rhs, BOT) or _is(self.lhs, BOT))

    def __repr__(self) -> str:
        return f"{self.lhs!r} {'=' if self.positive else '!='} {self.rhs!r}"


def _is(t: Term, name: str) -> bool:
    return isinstance(t, Sym) and t.name == name


def is_true(t: Term) -> bool:
    return _is(t, TOP)


def is_false(t: Term) -> bool:
    return _is(t, BOT)


@dataclass
class Inference:
    """Provenance of a clause: rule name, parent clause ids, unifier, and
    any extra evidence (positions, literal indices, notes)."""
    rule: str
    parents: tuple[int, ...] = ()
    subst: Subst | None = None
    evidence: dict = field(default_factory=dict)
    simplification: bool = False


_ids = itertools.count(1)


class Clause:
    """A constrained clause ``lits ⟦constraints⟧``.

    Literal indices are their positions in ``lits``; they are stable for the
    lifetime of the object, which is never mutated.
    """
    __slots__ = ("lits", "constraints", "id", "origin", "age", "_weight", "__weakref__")

    def __init__(self, lits: Iterable[Literal], constraints: Iterable[Constraint] = (),
                 origin: Inference | None = None, age: int | None = None):
        self.lits: tuple[Literal, ...] = tuple(lits)
        cs = []
        for a, b in constraints:
            if a.loose or b.loose:
                raise TypeError("constraints must be locally closed")
            if a is b:
                continue   # trivially true; same ground instances
            if (a, b) not in cs and (b, a) not in cs:
                cs.append((a, b))
        self.constraints: tuple[Constraint, ...] = tuple(cs)
        self.id = next(_ids)
        self.origin = origin or Inference("input")
        self.age = self.id if age is None else age
        self._weight = None

    # -- basic queries ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.lits)

    def __iter__(self):
        return iter(self.lits)

    @property
    def is_empty(self) -> bool:
        return not self.lits

    @property
    def constrained(self) -> bool:
        return bool(self.constraints)

    def terms(self) -> list[Term]:
        out = []
        for l in self.lits:
            out.extend((l.lhs, l.rhs))
        return out

    def constraint_terms(self) -> list[Term]:
        return [t for c in self.constraints for t in c]

    def vars(self) -> frozenset:
        out = frozenset()
        for t in self.terms() + self.constraint_terms():
            out |= free_vars(t)
        return out

    def tvars(self) -> set:
        out: set = set()
        for t in self.terms() + self.constraint_terms():
            term_tvars(t, out)
        return out

    def is_ground(self) -> bool:
        return not self.vars() and not self.tvars() and not self.constraints

    def size(self) -> int:
        return sum(syntactic_size(t) for t in self.terms())

    def weight(self) -> int:
        if self._weight is None:
            self._weight = self.size() + 2 * len(self.constraints)
        return self._weight

    def variant_key(self):
        return (frozenset(self.lits), frozenset(self.constraints))

    def with_origin(self, origin: Inference) -> "Clause":
        return Clause(self.lits, self.constraints, origin)

    def apply(self, s: Subst, origin: Inference | None = None, keep_constraints: bool = True) -> "Clause":
        lits = [l.map(lambda t: apply_subst(t, s)) for l in self.lits]
        cs = [(apply_subst(a, s), apply_subst(b, s)) for a, b in self.constraints] if keep_constraints else []
        return Clause(lits, cs, origin)

    def __repr__(self) -> str:
        from .printing import show_term
        body = " | ".join(_show_lit(l) for l in self.lits) or "$false"
        if self.constraints:
            body += " [[" + ", ".join(f"{show_term(a)} == {show_term(b)}" for a, b in self.constraints) + "]]"
        return body


def _show_lit(l: Literal) -> str:
    from .printing import show_term
    return f"{show_term(l.lhs)} {'=' if l.positive else '!='} {show_term(l.rhs)}"


show_literal = _show_lit


def has_mixed_param_var(terms: Iterable[Term]) -> bool:
    """Does some variable occur both inside and outside of parameters?"""
    inside, outside = occurs_in_params(terms)
    return bool(inside & outside)


# -------------------------------------------------------------- selection ----

def selectable(l: Literal) -> bool:
    return not l.positive or l.is_false_lit


class Selection:
    """``one``: first negative literal, else first t ≈ ⊥ literal.  ``none``: nothing."""

    def __init__(self, policy: str = "one"):
        if policy not in ("one", "none"):
            raise ValueError("selection policy is 'one' or 'none'")
        self.policy = policy
        self._cache: dict = {}

    def __call__(self, c: Clause) -> frozenset[int]:
        r = self._cache.get(c.id)
        if r is None:
            r = self._select(c)
            self._cache[c.id] = r
        return r

    def _select(self, c: Clause) -> frozenset[int]:
        if self.policy == "none":
            return frozenset()
        for i, l in enumerate(c.lits):
            if not l.positive:
                return frozenset((i,))
        for i, l in enumerate(c.lits):
            if l.is_false_lit:
                return frozenset((i,))
        return frozenset()


# ------------------------------------------------------------- eligibility ----

class Eligibility:
    """Maximality and eligibility w.r.t. an order and selection function."""

    def __init__(self, order: TermOrder, selection: Selection):
        self.order = order
        self.sel = selection

    def maximal(self, lits: Sequence[Literal], i: int, strict: bool = False) -> bool:
        li = lits[i]
        for j, lj in enumerate(lits):
            if j == i:
                continue
            r = self.order.compare_literals(lj, li)
            if r is GT:
                return False
            if strict and r is EQ:
                return False
        return True

    def maximal_literals(self, c: Clause, s: Subst | None = None, strict: bool = False) -> set[int]:
        lits = _inst(c, s)
        return {i for i in range(len(lits)) if self.maximal(lits, i, strict)}

    def eligible(self, c: Clause, i: int, s: Subst | None = None, strict: bool = False) -> bool:
        sel = self.sel(c)
        if sel:
            return i in sel
        return self.maximal(_inst(c, s), i, strict)

    def eligible_side(self, c: Clause, i: int, side: int, s: Subst | None = None) -> bool:
        """Is a green position on side ``side`` (0 = lhs, 1 = rhs) of literal i eligible?"""
        l = c.lits[i]
        if not self.eligible(c, i, s, strict=l.positive):
            return False
        a, b = l.lhs, l.rhs
        if side == 1:
            a, b = b, a
        if s is not None:
            a, b = apply_subst(a, s), apply_subst(b, s)
        r = self.order.compare(a, b)
        return r is not LT and r is not EQ


def _inst(c: Clause, s: Subst | None) -> list[Literal]:
    if s is None or s.is_empty():
        return list(c.lits)
    return [l.map(lambda t: apply_subst(t, s)) for l in c.lits]


# ---------------------------------------------------------------- ⊐ order ----

def sqsupset(c: Clause, d: Clause) -> bool:
    """Well-founded order used for subsumption-style replacement.

    A constrained clause is above every unconstrained one; unconstrained
    clauses compare by syntactic size, then by fewer distinct variables."""
    if c.constraints and not d.constraints:
        return True
    if c.constraints or d.constraints:
        return False
    sc, sd = c.size(), d.size()
    if sc != sd:
        return sc > sd
    return len(c.vars()) < len(d.vars())
