"""Acceptance criteria 1-7.  Each test prints one PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` to see the lines, or execute this
file directly to get all seven in one go.
"""
from __future__ import annotations

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gen import I, II, SIG, Gen, grounding  # noqa: E402
from oracles import completeness  # noqa: E402

from optisup.clause import Clause, Literal  # noqa: E402
from optisup.frontend import parse, parse_file, parse_term, to_clauses  # noqa: E402
from optisup.ground_kernel import check_proof  # noqa: E402
from optisup.order import EQ, GT, LT, OrderParams, TermOrder  # noqa: E402
from optisup.saturation import REFUTATION, ProverConfig, prove  # noqa: E402
from optisup.simplify import fol_decode, fol_encode, match_terms, subsumes  # noqa: E402
from optisup.terms import (  # noqa: E402
    BOOL, DB, Lam, Signature, TCon, Var, apply_subst, arrow, bot, diff_term, free_vars, mk_app,
    normalize, redex, replace_at, top, yellow_positions,
)
from optisup.unification import Sat, csu_upto, satisfiable  # noqa: E402

PROBLEMS = Path(__file__).parent.parent / "problems"
SIX = ["selection", "functional_literals", "extensionality",
       "delayed_unification", "universal", "existential"]


def report(n: int, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")


_runs: dict = {}


def run_problem(name: str, **cfg):
    key = (name, tuple(sorted(cfg.items())))
    if key not in _runs:
        prob = parse_file(PROBLEMS / f"{name}.opt")
        order = TermOrder(OrderParams.from_signature(prob.signature))
        t0 = time.monotonic()
        res = prove(to_clauses(prob), order, ProverConfig(**cfg))
        _runs[key] = (res, order, time.monotonic() - t0)
    return _runs[key]


# ------------------------------------------------------------------ 1 ----

def criterion_1() -> tuple[bool, str]:
    notes, ok = [], True
    for name in SIX:
        res, _, dt = run_problem(name)
        good = res.status == REFUTATION and dt < 10
        ok &= good
        notes.append(f"{name}={res.status}/{dt:.2f}s")
    res, _, _ = run_problem("selection", selection="one")
    sups = sum(1 for c in res.proof() if c.origin.rule == "Sup")
    ok &= sups == 3
    notes.append(f"selection Sup steps={sups}")
    res, _, _ = run_problem("delayed_unification")
    carried = [c for c in res.proof() if c.origin.rule == "EqRes" and c.constraints]
    ok &= bool(carried)
    notes.append(f"constrained EqRes steps={len(carried)}")
    return ok, ", ".join(notes)


# ------------------------------------------------------------------ 2 ----

def _quantified_input(res) -> Clause:
    for c in res.clauses.values():
        if c.origin.rule == "input" and len(c.lits) == 1:
            l = c.lits[0]
            if l.positive and isinstance(l.rhs, Lam) and l.rhs.body is top():
                return c
    raise LookupError("clause (λx. p x) ≈ (λx. ⊤) not found")


def criterion_2() -> tuple[bool, str]:
    res, _, _ = run_problem("universal")
    c1 = _quantified_input(res)
    evs = [e for e in res.events if e.clause == c1.id]
    gone = [e for e in evs if e.kind in ("replaced", "deleted")]
    by_argcong = bool(gone) and gone[0].rule == "ArgCong"
    activated = any(e.kind == "activated" for e in evs)
    ext = [c.id for c in res.clauses.values()
           if c.origin.rule in ("Ext", "FluidExt") and c1.id in c.origin.parents]
    ok = by_argcong and not activated and not ext
    return ok, (f"clause {c1.id} removed by {gone[0].rule if gone else None}, "
                f"activated={activated}, Ext inferences on it={len(ext)}")


# ------------------------------------------------------------------ 3 ----

def criterion_3(seed: int = 3) -> tuple[bool, str]:
    t0 = time.monotonic()
    order = TermOrder(OrderParams.from_signature(SIG))
    cmp = order.compare_ground
    rng = random.Random(seed)
    gen = Gen(rng)
    viol: dict[str, int] = dict.fromkeys(
        ["total", "antisym", "trans", "yellow_ctx", "subterm", "bool_min", "diff_arg", "stable"], 0)

    terms = [gen(rng.choice([I, I, BOOL, II]), rng.randint(1, 4)) for _ in range(1200)]
    by_ty: dict = {}
    for t in terms:
        by_ty.setdefault(t.ty, []).append(t)

    # totality and antisymmetry on all same-type pairs of a sample
    for ts in by_ty.values():
        sample = ts[:80]
        for s, t in itertools.combinations(sample, 2):
            r = cmp(s, t)
            if (r is EQ) != (s is t) or r not in (GT, LT, EQ):
                viol["total"] += 1
            if cmp(t, s) is not r.flip():
                viol["antisym"] += 1

    # transitivity over every triple of a batch
    for ts in by_ty.values():
        batch = ts[:45]
        m = {(i, j): cmp(batch[i], batch[j]) for i in range(len(batch)) for j in range(len(batch))}
        for i, j, k in itertools.permutations(range(len(batch)), 3):
            if m[i, j] is GT and m[j, k] is GT and m[i, k] is not GT:
                viol["trans"] += 1

    # yellow contexts and the yellow subterm property
    ground_i = by_ty[I]
    for u in terms[:400]:
        for p, sub in yellow_positions(u):
            if p and cmp(u, sub) is not GT:
                viol["subterm"] += 1
            if sub.ty is I:
                s, t = rng.choice(ground_i), rng.choice(ground_i)
                r = cmp(s, t)
                if cmp(normalize(replace_at(u, p, s)), normalize(replace_at(u, p, t))) is not r:
                    viol["yellow_ctx"] += 1

    # ⊥ and ⊤ are the two smallest terms
    for u in terms:
        if u is top() or u is bot():
            continue
        if cmp(u, bot()) is not GT or cmp(bot(), top()) is not GT:
            viol["bool_min"] += 1

    # applying a function to a diff term makes it smaller
    funs = by_ty[II]
    for u in funs[:200]:
        s, t = rng.choice(funs), rng.choice(funs)
        ud = normalize(redex(u, [diff_term(s, t)]))
        if cmp(u, ud) is not GT:
            viol["diff_arg"] += 1

    # nonground GT verdicts are stable under groundings
    ngen = Gen(rng, vars=True)
    verdicts = 0
    while verdicts < 600:
        ty = rng.choice([I, I, BOOL])
        s, t = ngen(ty, rng.randint(1, 3)), ngen(ty, rng.randint(1, 3))
        r = order.compare(s, t)
        if r is LT:
            s, t, r = t, s, GT
        if r is not GT:
            continue
        verdicts += 1
        for _ in range(5):
            th = grounding(rng)
            if cmp(apply_subst(s, th), apply_subst(t, th)) is not GT:
                viol["stable"] += 1

    dt = time.monotonic() - t0
    ok = not any(viol.values()) and dt < 60 and len(terms) >= 1000
    return ok, f"{len(terms)} ground terms, {verdicts} nonground GT verdicts, violations={viol}, {dt:.1f}s"


# ------------------------------------------------------------------ 4 ----

def _random_problem(rng: random.Random) -> tuple:
    g = Gen(rng, vars=True, diff=rng.random() < 0.3)
    ty = rng.choice([I, I, II])
    s = g(ty, rng.randint(1, 3))
    if rng.random() < 0.5:
        t = g(ty, rng.randint(1, 3))
    else:
        # a partial instance of s with renamed variables is often unifiable with s
        th = grounding(rng, 1)
        keep = rng.choice(["X", "Y", "Z"])
        th.terms[keep] = Var({"X": "Y", "Y": "X", "Z": "Z"}[keep], th.terms[keep].ty) \
            if keep != "Z" else Var("Z", II)
        t = apply_subst(s, th)
    return s, t


def criterion_4a(seed: int = 4, want: int = 500) -> tuple[int, int]:
    rng = random.Random(seed)
    checked = failures = 0
    while checked < want:
        s, t = _random_problem(rng)
        for sigma, rest in csu_upto([(s, t)]):
            r = satisfiable(rest)
            if r.status is not Sat.SAT:
                continue
            rho = r.witness
            checked += 1
            ss = normalize(apply_subst(apply_subst(s, sigma), rho))
            tt = normalize(apply_subst(apply_subst(t, sigma), rho))
            if ss is not tt:
                failures += 1
    return checked, failures


def criterion_4c() -> tuple[bool, str]:
    sig = Signature()
    sig.add_tycon("i")
    for n, ty in (("a", I), ("b", I), ("f", II)):
        sig.add_const(n, ty)
    y, z = Var("y", II), Var("z", II)
    a, b, f = sig.const("a"), sig.const("b"), sig.const("f")
    lhs, rhs = normalize(mk_app(y, [a])), normalize(mk_app(f, [mk_app(z, [b])]))
    alts = csu_upto([(lhs, rhs)])
    for sigma, rest in alts:
        yv = normalize(apply_subst(y, sigma))
        zv = normalize(apply_subst(z, sigma))
        if zv is not normalize(z) or not isinstance(yv, Lam) or len(rest) != 1:
            continue
        # y ↦ λ f (w 0) for a fresh w
        body = yv.body
        ws = free_vars(yv)
        if len(ws) != 1:
            continue
        w = next(iter(ws))
        if w.name in ("y", "z") or body is not normalize(mk_app(f, [mk_app(w, [DB(0, I)])])):
            continue
        want = {normalize(mk_app(w, [a])), rhs.args[0]}
        if set(rest[0]) == want:
            return True, f"found {{y ↦ λ f ({w.name} 0)}} with {{{w.name} a ≡ z b}} among {len(alts)}"
    return False, f"alternatives: {alts}"


def criterion_4() -> tuple[bool, str]:
    t0 = time.monotonic()
    checked, failures = criterion_4a()
    problems, unifiers, misses = completeness()
    ok_c, note_c = criterion_4c()
    dt = time.monotonic() - t0
    ok = failures == 0 and checked >= 500 and misses == 0 and unifiers > 0 and ok_c and dt < 120
    return ok, (f"(a) {checked} alternatives, {failures} failures; "
                f"(b) {problems} problems, {unifiers} ground unifiers, {misses} misses; "
                f"(c) {note_c}; {dt:.1f}s")


# ------------------------------------------------------------------ 5 ----

def criterion_5(seed: int = 5) -> tuple[bool, str]:
    t0 = time.monotonic()
    rng = random.Random(seed)
    gen = Gen(rng)
    bad = lam = par = 0
    for _ in range(1000):
        t = gen(rng.choice([I, BOOL, II]), rng.randint(1, 4))
        lam += "^[" in repr(t)
        par += "{" in repr(t)
        if fol_decode(fol_encode(t)) is not normalize(t):
            bad += 1
    # λ f (λ 1) (λ λ 0) with f : (i > i) > (i > i > i) > i
    sig = Signature()
    sig.add_tycon("i")
    sig.add_const("f", arrow(II, arrow(arrow(I, II), I)))
    t = Lam(I, mk_app(sig.const("f"), [Lam(I, DB(1, I)), Lam(I, Lam(I, DB(0, I)))]))
    got = repr(fol_encode(t))
    want = ("fun[(^[B0:i]: f((^[B1:i]: B0), $hole))]"
            "(fun[(^[B0:i]: $hole)](fun[(^[B0:i]: B0)]))")
    dt = time.monotonic() - t0
    ok = bad == 0 and got == want and dt < 10 and lam > 0 and par > 0
    return ok, f"1000 round-trips ({lam} with λ, {par} with parameters), {bad} mismatches; example {got}; {dt:.2f}s"


# ------------------------------------------------------------------ 6 ----

def criterion_6() -> tuple[bool, str]:
    counts: dict[str, int] = {}
    bad = []
    for name in SIX:
        res, order, _ = run_problem(name)
        for chk in check_proof(res.proof(), order):
            counts[chk.verdict] = counts.get(chk.verdict, 0) + 1
            if chk.verdict == "unrooted":
                bad.append(f"{name}:{chk.clause.id}:{chk.clause.origin.rule}")
    return not bad and counts.get("rooted", 0) > 0, f"verdicts={counts}, unrooted={bad}"


# ------------------------------------------------------------------ 7 ----

def parameter_clauses() -> tuple[Clause, Clause]:
    """p diff{λx. ¬p x y ∧ (p x y ∨ y ≠ a), λx. ⊥} y ≈ ⊥ and its instance with y := b."""
    sig = parse((PROBLEMS / "parameters.opt").read_text()).signature
    out = []
    for y in (Var("Y", TCon("i")), sig.const("b")):
        name = "Y" if isinstance(y, Var) else "b"
        u = parse_term(f"^[x:i]: ~p(x, {name}) & (p(x, {name}) | {name} != a)", sig)
        w = parse_term("^[x:i]: $false", sig)
        lhs = normalize(mk_app(sig.const("p"), [diff_term(u, w), y]))
        out.append(Clause([Literal(lhs, bot())]))
    return out[0], out[1]


def criterion_7() -> tuple[bool, str]:
    general, inst = parameter_clauses()
    match = match_terms([(general.lits[0].lhs, inst.lits[0].lhs)])
    refused = subsumes(general, inst) is None
    ok = match is not None and refused
    return ok, f"instance via {match}; subsumption refused={refused}"


# ------------------------------------------------------------ pytest ----

CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
            5: criterion_5, 6: criterion_6, 7: criterion_7}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n: int) -> None:
    ok, detail = CRITERIA[n]()
    report(n, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for n, fn in CRITERIA.items():
        ok, detail = fn()
        report(n, ok, detail)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
