"""Command-line entry point.

Exit codes: 0 refutation, 1 saturated or gave up, 2 resource limit, 3 input error,
4 a proof step failed the rootedness check.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .calculus import CORE_RULES
from .clause import Clause, show_literal
from .frontend import ParseError, parse_file, to_clauses
from .ground_kernel import check_proof
from .order import OrderParams, TermOrder
from .printing import show_subst, show_term
from .saturation import GAVE_UP, REFUTATION, RESOURCE_OUT, SATURATED, ProverConfig, prove
from .terms import TypingError
from .unification import UnifConfig

_EXIT = {REFUTATION: 0, SATURATED: 1, GAVE_UP: 1, RESOURCE_OUT: 2}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="optisup", description="Saturation prover for higher-order logic.")
    p.add_argument("problem", help="problem file (native format or THF subset)")
    p.add_argument("--timeout", type=float, default=10.0, metavar="S")
    p.add_argument("--selection", choices=("one", "none"), default="one")
    p.add_argument("--unif-depth", type=int, default=6, metavar="N")
    p.add_argument("--csu-budget", type=int, default=2000, metavar="N")
    p.add_argument("--fragments", default="pattern,fixpoint",
                   help="comma list of unification fragments to solve directly (pattern, fixpoint, none)")
    p.add_argument("--precedence", default="", help="symbols from highest to lowest, comma separated")
    p.add_argument("--weights", default="", help="name=int list, comma separated")
    p.add_argument("--disable-rule", action="append", default=[], metavar="RULE",
                   help=f"disable a generating rule; one of {', '.join(CORE_RULES)}")
    p.add_argument("--no-backward-simplification", action="store_true")
    p.add_argument("--max-clauses", type=int, default=None)
    p.add_argument("--max-weight", type=int, default=None)
    p.add_argument("--stats", action="store_true")
    p.add_argument("--check-proof", action="store_true", help="check rootedness of every proof step")
    p.add_argument("--proof-out", metavar="PATH", help="write the proof block to PATH instead of stdout")
    return p


def _weights(spec: str) -> dict[str, int]:
    out = {}
    for part in filter(None, (s.strip() for s in spec.split(","))):
        name, _, w = part.partition("=")
        if not w:
            raise ValueError(f"bad weight {part!r}, expected name=int")
        out[name.strip()] = int(w)
    return out


def format_step(c: Clause) -> str:
    body = " | ".join(show_literal(l) for l in c.lits) or "$false"
    if c.constraints:
        body += " ⟦" + ", ".join(f"{show_term(a)} ≡ {show_term(b)}" for a, b in c.constraints) + "⟧"
    inf = c.origin
    line = f"{c.id}. {body} <- {inf.rule}({', '.join(map(str, inf.parents))})"
    if inf.subst is not None and not inf.subst.is_empty():
        line += f" σ={show_subst(inf.subst)}"
    return line


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        prob = parse_file(args.problem)
        clauses = to_clauses(prob)
        order = TermOrder(OrderParams.from_signature(
            prob.signature, _weights(args.weights),
            [s.strip() for s in args.precedence.split(",") if s.strip()]))
    except (ParseError, TypingError, ValueError, OSError) as e:
        print(f"% error: {e}", file=sys.stderr)
        print("% SZS status InputError")
        return 3
    unknown = set(args.disable_rule) - set(CORE_RULES)
    if unknown:
        print(f"% error: unknown rule(s) {', '.join(sorted(unknown))}", file=sys.stderr)
        return 3
    frags = {f.strip() for f in args.fragments.split(",")}
    unif = UnifConfig(depth=args.unif_depth, budget=args.csu_budget,
                      pattern="pattern" in frags, fixpoint="fixpoint" in frags)
    cfg = ProverConfig(selection=args.selection, unif=unif, timeout=args.timeout,
                       max_clauses=args.max_clauses, max_weight=args.max_weight,
                       backward=not args.no_backward_simplification,
                       disabled=frozenset(args.disable_rule))
    res = prove(clauses, order, cfg)
    has_conj = any(it.role == "conjecture" for it in prob.items)
    status = {REFUTATION: "Theorem" if has_conj else "Unsatisfiable", SATURATED: "Satisfiable",
              GAVE_UP: "GaveUp", RESOURCE_OUT: "ResourceOut"}[res.status]
    print(f"% SZS status {status} for {Path(args.problem).name}")
    if res.status == GAVE_UP and res.limited:
        print("% constraint-limited: an empty clause with undecided constraints remains")
    code = _EXIT[res.status]
    if res.empty is not None:
        steps = res.proof()
        block = [format_step(c) for c in steps]
        if args.proof_out:
            Path(args.proof_out).write_text("\n".join(block) + "\n")
        else:
            print("% SZS output start Refutation")
            print("\n".join(block))
            print("% SZS output end Refutation")
        if args.check_proof:
            checks = check_proof(steps, order)
            bad = [c for c in checks if c.verdict == "unrooted"]
            counts = {v: sum(1 for c in checks if c.verdict == v)
                      for v in ("rooted", "unrooted", "skipped", "simplification", "input")}
            print("% proof check: " + ", ".join(f"{k}={v}" for k, v in counts.items()))
            for c in bad:
                print(f"% not rooted: {c.clause.id} ({c.clause.origin.rule})")
            if bad:
                code = 4
    if args.stats:
        for k, v in sorted(res.stats.items()):
            print(f"% {k}: {v}")
        rules = {}
        for e in res.events:
            if e.kind == "generated":
                rules[e.rule] = rules.get(e.rule, 0) + 1
        for k, v in sorted(rules.items()):
            print(f"% inferences {k}: {v}")
    return code


if __name__ == "__main__":
    sys.exit(main())
