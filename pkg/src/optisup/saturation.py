"""Given-clause saturation loop."""
from __future__ import annotations

import heapq
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .calculus import Calculus, diff_axiom
from .clause import Clause, Selection
from .order import TermOrder
from .simplify import Simplifier, is_variant, subsumes
from .unification import DEFAULT, Sat, UnifConfig, satisfiable

REFUTATION = "refutation"
SATURATED = "saturated"
GAVE_UP = "gave-up"            # saturated, but some csu was cut or a ⊥⟦S⟧ stayed undecided
RESOURCE_OUT = "resource-out"


@dataclass
class ProverConfig:
    selection: str = "one"
    unif: UnifConfig = DEFAULT
    timeout: float = 10.0
    max_clauses: int | None = None
    max_weight: int | None = None
    backward: bool = True
    disabled: frozenset = frozenset()
    age_ratio: int = 1
    weight_ratio: int = 5


@dataclass
class Event:
    kind: str            # "input", "generated", "activated", "replaced", "deleted"
    clause: int
    rule: str = ""
    others: tuple[int, ...] = ()


@dataclass
class Result:
    status: str
    empty: Clause | None
    clauses: dict[int, Clause]
    events: list[Event]
    stats: Counter
    limited: list[Clause] = field(default_factory=list)
    witness: object = None

    def proof(self) -> list[Clause]:
        """Ancestors of the empty clause in topological order."""
        if self.empty is None:
            return []
        seen: dict[int, Clause] = {}

        def visit(c: Clause):
            if c.id in seen:
                return
            for p in c.origin.parents:
                visit(self.clauses[p])
            seen[c.id] = c
        visit(self.empty)
        return list(seen.values())

    def events_for(self, cid: int) -> list[Event]:
        return [e for e in self.events if e.clause == cid or cid in e.others]


class _Queue:
    """Passive set with interleaved age and weight selection."""

    def __init__(self, age_ratio: int, weight_ratio: int):
        self.by_age: list = []
        self.by_weight: list = []
        self.live: dict[int, Clause] = {}
        self.ratio = (age_ratio, weight_ratio)
        self.tick = 0

    def push(self, c: Clause) -> None:
        self.live[c.id] = c
        heapq.heappush(self.by_age, (c.age, c.id))
        heapq.heappush(self.by_weight, (c.weight(), c.age, c.id))

    def remove(self, c: Clause) -> None:
        self.live.pop(c.id, None)

    def __len__(self) -> int:
        return len(self.live)

    def pop(self) -> Clause | None:
        a, w = self.ratio
        use_age = self.tick % (a + w) < a
        self.tick += 1
        heap = self.by_age if use_age else self.by_weight
        while heap:
            cid = heapq.heappop(heap)[-1]
            c = self.live.pop(cid, None)
            if c is not None:
                return c
        return self.pop() if self.live else None


class Prover:
    def __init__(self, order: TermOrder, config: ProverConfig | None = None):
        self.cfg = config or ProverConfig()
        self.order = order
        self.calc = Calculus(order, Selection(self.cfg.selection), self.cfg.unif,
                             disabled=frozenset(self.cfg.disabled))
        self.simp = Simplifier(order)
        self.active: list[Clause] = []
        self.passive = _Queue(self.cfg.age_ratio, self.cfg.weight_ratio)
        self.clauses: dict[int, Clause] = {}
        self.events: list[Event] = []
        self.stats: Counter = Counter()
        self.limited: list[Clause] = []
        self.empty: Clause | None = None
        self.witness = None

    # -- bookkeeping -------------------------------------------------------------

    def _record(self, c: Clause) -> None:
        self.clauses[c.id] = c

    def _replace(self, old: Clause, new: list[Clause], rule: str) -> None:
        for c in new:
            self._record(c)
        if new:
            self.events.append(Event("replaced", old.id, rule, tuple(c.id for c in new)))
            self.stats["simplified"] += 1
        else:
            self.events.append(Event("deleted", old.id, rule))
            self.stats["deleted"] += 1

    # -- simplification ----------------------------------------------------------

    def _local(self, c: Clause) -> list[Clause]:
        """Local rules to a fixpoint, logging each step."""
        todo, done = [c], []
        steps = 0
        while todo:
            d = todo.pop()
            if steps > 200:
                done.append(d)
                continue
            steps += 1
            r = self.simp.step(d)
            if r is None:
                done.append(d)
                continue
            rule = r[0].origin.rule if r else "Tautology"
            self._replace(d, r, rule)
            todo.extend(reversed(r))
        return done

    def _units(self) -> Iterable[Clause]:
        return (a for a in self.active if len(a.lits) == 1 and not a.constraints)

    def forward(self, c: Clause) -> list[Clause]:
        """Replacement set of c after local and active-set simplification."""
        out = []
        for d in self._local(c):
            e = self._against_active(d)
            if e is None:
                continue
            if e is d:
                out.append(d)
            else:
                out.extend(self.forward(e))
        return out

    def _against_active(self, d: Clause) -> Clause | None:
        """None if deleted, d if irreducible, or a single rewritten clause."""
        for a in self.active:
            if is_variant(a, d):
                self._replace(d, [], f"Variant({a.id})")
                return None
            if subsumes(a, d) is not None:
                self.events.append(Event("deleted", d.id, "Subsumption", (a.id,)))
                self.stats["deleted"] += 1
                return None
        for u in self._units():
            if self.simp.equality_subsumes(u, d):
                self.events.append(Event("deleted", d.id, "EqualitySubsumption", (u.id,)))
                self.stats["deleted"] += 1
                return None
            r = self.simp.demodulate(u, d) or self.simp.simplify_reflect(u, d)
            if r is not None:
                self._replace(d, [r], r.origin.rule)
                return r
        return d

    def backward(self, g: Clause) -> None:
        """Simplify the active set with the new active clause g."""
        keep = []
        for a in self.active:
            if a is g:
                keep.append(a)
                continue
            if subsumes(g, a) is not None:
                self.events.append(Event("deleted", a.id, "Subsumption", (g.id,)))
                self.stats["backward"] += 1
                continue
            if len(g.lits) == 1 and not g.constraints:
                if self.simp.equality_subsumes(g, a):
                    self.events.append(Event("deleted", a.id, "EqualitySubsumption", (g.id,)))
                    self.stats["backward"] += 1
                    continue
                r = self.simp.demodulate(g, a) or self.simp.simplify_reflect(g, a)
                if r is not None:
                    self._replace(a, [r], r.origin.rule)
                    self.stats["backward"] += 1
                    self.passive.push(r)
                    continue
            keep.append(a)
        self.active = keep

    # -- empty clauses -----------------------------------------------------------

    def _empty(self, c: Clause) -> bool:
        """Handle ⊥⟦S⟧; True if it is a refutation."""
        if not c.constraints:
            self.empty = c
            return True
        r = satisfiable(c.constraints, self.cfg.unif)
        if r.status is Sat.SAT:
            self.empty, self.witness = c, r.witness
            return True
        if r.status is Sat.UNSAT:
            self.events.append(Event("deleted", c.id, "UnsatConstraints"))
            return False
        self.limited.append(c)
        return False

    # -- main loop ---------------------------------------------------------------

    def add_input(self, clauses: Iterable[Clause]) -> None:
        for c in clauses:
            self._record(c)
            self.events.append(Event("input", c.id))
            self.passive.push(c)
        ax = diff_axiom()
        self._record(ax)
        self.events.append(Event("input", ax.id, "Diff"))
        self.passive.push(ax)

    def run(self, clauses: Iterable[Clause]) -> Result:
        self.add_input(clauses)
        deadline = time.monotonic() + self.cfg.timeout
        start = time.monotonic()
        status = None
        while status is None:
            if time.monotonic() > deadline:
                status = RESOURCE_OUT
                break
            if self.cfg.max_clauses is not None and len(self.clauses) > self.cfg.max_clauses:
                status = RESOURCE_OUT
                break
            g0 = self.passive.pop()
            if g0 is None:
                status = GAVE_UP if (self.calc.incomplete or self.limited) else SATURATED
                break
            for g in self.forward(g0):
                if g.is_empty:
                    if self._empty(g):
                        status = REFUTATION
                        break
                    continue
                if self.cfg.max_weight is not None and g.weight() > self.cfg.max_weight:
                    self.events.append(Event("deleted", g.id, "MaxWeight"))
                    self.calc.incomplete = True
                    continue
                self.stats["given"] += 1
                self.events.append(Event("activated", g.id))
                if self.cfg.backward:
                    self.backward(g)
                self.active.append(g)
                for n in self.calc.generate(g, self.active):
                    self._record(n)
                    self.stats["generated"] += 1
                    self.events.append(Event("generated", n.id, n.origin.rule, n.origin.parents))
                    for m in self._local(n):
                        if m.is_empty:
                            if self._empty(m):
                                status = REFUTATION
                                break
                            continue
                        self.passive.push(m)
                    if status:
                        break
                if status:
                    break
        self.stats["time_ms"] = int((time.monotonic() - start) * 1000)
        self.stats["active"] = len(self.active)
        self.stats["passive"] = len(self.passive)
        return Result(status, self.empty, self.clauses, self.events, self.stats, self.limited, self.witness)


def prove(clauses: Iterable[Clause], order: TermOrder, config: ProverConfig | None = None) -> Result:
    return Prover(order, config).run(clauses)
