"""Command line front end: ``liminal <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 budget exceeded (partial result),
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bounds as bd
from .constructions import (ConstructionError, caterpillar_partition, greedy_partition_cover,
                            grid_block_partition, is_kd_special, path_partition, rainbow_sperner,
                            rainbow_sperner_forced, tree_pairing, verify_sperner)
from .engine import IllegalMove, play
from .graph import GraphError, bits, build_family, mask_of, popcount, write_edge_list
from .reduction import QbfError, build_reduction, parse_qdimacs, verify_reduction
from .solver import BudgetExceeded, solve_burning, solve_cooling, solve_liminal
from .strategies import b4_schedule, parse_arsonist, parse_saboteur, verify_b4_schedule

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _emit(args, obj, text: str):
    if getattr(args, "format", "text") == "json":
        print(json.dumps(obj, indent=1, sort_keys=True))
    else:
        print(text)


def _positive(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _default_threads() -> int:
    return os.cpu_count() or 1


# solve


def cmd_solve(args) -> int:
    g = build_family(args.graph)
    if args.mode == "burning":
        value = solve_burning(g, budget_nodes=args.budget_nodes)
        _emit(args, {"graph": args.graph, "mode": "burning", "value": value}, f"b({args.graph}) = {value}")
        return EXIT_OK
    if args.mode == "cooling":
        value = solve_cooling(g, budget_nodes=args.budget_nodes)
        _emit(args, {"graph": args.graph, "mode": "cooling", "value": value}, f"CL({args.graph}) = {value}")
        return EXIT_OK
    if args.k is None:
        raise UsageError("--k is required in liminal mode")
    res = solve_liminal(g, args.k, strict=args.strict_arsonist, memo=not args.no_memo,
                        dominance=not args.no_dominance, budget_nodes=args.budget_nodes,
                        budget_memo=args.budget_memo, threads=args.threads,
                        pv=bool(args.emit_pv))
    if args.emit_pv and res.pv is not None:
        Path(args.emit_pv).write_text(res.pv.to_json() + "\n")
    obj = {"graph": args.graph, "k": args.k, "mode": "liminal", "value": res.value,
           "complete": res.complete, "lower": res.lower, "nodes_expanded": res.nodes_expanded,
           "memo_entries": res.memo_entries, "notes": res.notes}
    if res.complete:
        text = f"b_{args.k}({args.graph}) = {res.value}"
    else:
        text = (f"b_{args.k}({args.graph}) unresolved: budget exceeded after "
                f"{res.nodes_expanded} nodes; proven lower {res.lower}")
    _emit(args, obj, text)
    return EXIT_OK if res.complete else EXIT_BUDGET


# play


def _read_vertices(g, line: str) -> list[int]:
    out = []
    for tok in line.replace(",", " ").split():
        if tok.lstrip("-").isdigit():
            v = int(tok)
        else:
            try:
                v = g.index_of(tok)
            except (KeyError, ValueError):
                raise ValueError(f"unknown vertex {tok!r}") from None
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
        out.append(v)
    return out


class HumanSaboteur:
    """Reads reveals from a text stream, re-prompting on illegal input."""

    def __init__(self, inp, out):
        self.inp, self.out = inp, out

    def __call__(self, g, state, k):
        unlit = state.unlit(g.full)
        need = min(k, popcount(unlit))
        while True:
            self.out.write(f"round {state.round}: reveal {need} of unlit {sorted(bits(unlit))}\n> ")
            self.out.flush()
            line = self.inp.readline()
            if not line:
                raise EOFError("input ended")
            try:
                vs = _read_vertices(g, line)
            except ValueError as exc:
                self.out.write(f"illegal: {exc}\n")
                continue
            m = mask_of(vs)
            if popcount(m) != need or m & ~unlit:
                self.out.write(f"illegal: need {need} distinct unlit vertices\n")
                continue
            return m


class HumanArsonist:
    def __init__(self, inp, out):
        self.inp, self.out = inp, out

    def __call__(self, g, state, options):
        if not options:
            return None
        while True:
            self.out.write(f"round {state.round}: burn one of {sorted(bits(options))}\n> ")
            self.out.flush()
            line = self.inp.readline()
            if not line:
                raise EOFError("input ended")
            try:
                vs = _read_vertices(g, line)
            except ValueError as exc:
                self.out.write(f"illegal: {exc}\n")
                continue
            if len(vs) != 1 or not options >> vs[0] & 1:
                self.out.write("illegal: pick exactly one selectable vertex\n")
                continue
            return vs[0]


def cmd_play(args) -> int:
    g = build_family(args.graph)
    human_io = (sys.stdin, sys.stderr)
    sab = HumanSaboteur(*human_io) if args.sab == "human" else parse_saboteur(args.sab, g, args.k, args.strict_arsonist)
    ars = HumanArsonist(*human_io) if args.ars == "human" else parse_arsonist(args.ars, g, args.k, args.strict_arsonist)
    try:
        t = play(g, args.k, sab, ars, strict=args.strict_arsonist)
    except BudgetExceeded as exc:
        print(f"solver opponent exceeded its budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    t.graph_spec = args.graph
    if args.out:
        Path(args.out).write_text(t.to_json() + "\n")
    if args.format == "json":
        print(t.to_json())
    else:
        for i, r in enumerate(t.rounds, 1):
            print(f"round {i}: propagated {r.propagated} revealed {r.revealed} burned {r.burned}")
        print(f"length {t.length}")
    return EXIT_OK


# bounds and sweep


def cmd_bounds(args) -> int:
    g = build_family(args.graph)
    rep = bd.bounds_for_graph(g, args.k)
    obj = {"graph": args.graph, "k": args.k, **rep.to_dict()}
    if args.json:
        args.format = "json"
    _emit(args, obj, rep.format())
    return EXIT_OK


def _parse_range(text: str) -> list[int]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise UsageError("--k-range expects A:B or A:B:STEP")
    a, b = int(parts[0]), int(parts[1])
    step = int(parts[2]) if len(parts) == 3 else 1
    if a < 1 or b < a or step < 1:
        raise UsageError("--k-range needs 1 <= A <= B and STEP >= 1")
    return list(range(a, b + 1, step))


def cmd_sweep(args) -> int:
    ks = _parse_range(args.k_range)
    if ks[-1] > args.n * args.n:
        raise UsageError("k exceeds n^2")
    rows = bd.grid_sweep(args.n, ks, threads=args.threads)
    if args.format == "json":
        text = json.dumps({"n": args.n, "rows": rows}, indent=1) + "\n"
    else:
        text = bd.sweep_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# construct


def _sets_json(fam):
    return [sorted(s, key=lambda e: (isinstance(e, str), e)) for s in fam.sets]


def cmd_construct(args) -> int:
    if args.what == "sperner":
        if args.forced is not None:
            ground = [int(x) for x in args.ground.split(",")] if args.ground else list(range(1, args.n + 1))
            fam = rainbow_sperner_forced(ground, args.forced)
        else:
            fam = rainbow_sperner(args.n)
        rep = verify_sperner(fam, symdiff=args.forced is None)
        obj = {"sets": _sets_json(fam), "validation": {"ok": rep.ok, "failures": rep.failures}}
        _emit(args, obj, "\n".join(str(s) for s in obj["sets"]) + f"\nvalid: {rep.ok}")
        return EXIT_OK if rep.ok else EXIT_VERIFY
    if args.what == "b4":
        sched = b4_schedule(args.n)
        rounds = {str(r): [sorted(e + 1 for e in bits(v)) for v in vs] for r, vs in sorted(sched.items())}
        fails = verify_b4_schedule(args.n)
        obj = {"rounds": rounds, "validation": {"ok": not fails, "failures": fails}}
        _emit(args, obj, "\n".join(f"round {r}: {v}" for r, v in rounds.items()) + f"\nvalid: {not fails}")
        return EXIT_OK if not fails else EXIT_VERIFY
    g = build_family(args.graph)
    if args.k is None:
        raise UsageError("witness needs --k")
    w, exact = _witness(g, args)
    if w is None:
        obj = {"parts": None, "validation": {"ok": False, "failures": ["no witness found"]}}
        _emit(args, obj, "no witness found")
        return EXIT_VERIFY
    fails = w.validate(g, exact_sizes=exact)
    obj = {"parts": w.parts, "k": w.k, "d": w.d, "bound": w.bound,
           "validation": {"ok": not fails, "failures": fails}}
    _emit(args, obj, "\n".join(str(p) for p in w.parts) + f"\nd={w.d} bound={w.bound} valid: {not fails}")
    return EXIT_OK if not fails else EXIT_VERIFY


def _witness(g, args):
    """(witness or None, whether the exact part-size rule applies)."""
    k, d, method = args.k, args.d, args.method
    if method == "auto":
        if g.name.startswith("path:"):
            method = "path"
        elif g.name.startswith("grid:"):
            method = "grid"
        elif g.is_tree() and k == 2:
            method = "tree"
        elif g.name.startswith("caterpillar:"):
            method = "caterpillar"
        else:
            method = "search"
    if method == "path":
        return path_partition(g.n, k), True
    if method == "grid":
        a, b = g.name.split(":")[1].split("x")
        if a != b:
            raise UsageError("grid witness needs a square grid")
        # K x K blocks with K^2 <= k: a cover, not an exact partition
        return grid_block_partition(int(a), k), False
    if method == "tree":
        return tree_pairing(g), True
    if method == "caterpillar":
        return caterpillar_partition(g, k), True
    if d is None:
        raise UsageError(f"method {method} needs --d")
    if method == "greedy":
        return greedy_partition_cover(g, k, d), False
    res = is_kd_special(g, k, d, budget=args.budget_nodes)
    return res.witness, True


# reduce


def cmd_reduce(args) -> int:
    f = parse_qdimacs(Path(args.qbf).read_text())
    rg = build_reduction(f, args.k, connector_rule=args.connector_rule, check=False)
    Path(args.out).write_text(write_edge_list(rg.graph))
    rep = verify_reduction(rg, certify=args.certify, budget_nodes=args.budget_nodes)
    meta = rg.meta()
    meta["verification"] = rep.to_dict()
    if args.meta:
        Path(args.meta).write_text(json.dumps(meta, indent=1) + "\n")
    lines = [f"{name}: {'ok' if ok else 'FAIL'} {detail}".rstrip() for name, ok, detail in rep.checks
             if not ok or name in ("diameter", "order", "certificate")]
    lines.append(f"|V|={rg.graph.n} T={rg.T} threshold={rg.threshold}")
    if rep.certificate_note:
        lines.append(f"certificate: {rep.certificate_note}")
    _emit(args, {"T": rg.T, "threshold": rg.threshold, "vertices": rg.graph.n, **rep.to_dict()},
          "\n".join(lines))
    if not rep.ok:
        return EXIT_VERIFY
    if args.certify and rep.certificate is None and "budget" in rep.certificate_note:
        return EXIT_BUDGET
    return EXIT_OK


# verify


def cmd_verify(args) -> int:
    from .acceptance import CRITERIA, format_result, report_json, run_acceptance

    ids = None
    if args.criteria:
        ids = [int(x) for x in args.criteria.split(",")]
        if any(i not in CRITERIA for i in ids):
            raise UsageError(f"criteria must be among {sorted(CRITERIA)}")
    show = None if args.format == "json" else (lambda r: print(format_result(r), flush=True))
    results = run_acceptance(ids, seed=args.seed, threads=args.threads, on_result=show)
    doc = report_json(results, args.seed)
    if args.json:
        Path(args.json).write_text(doc + "\n")
    if args.format == "json":
        print(doc)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liminal", description="k-liminal burning toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=("text", "json")):
        sp.add_argument("--format", choices=fmt, default=fmt[0])

    s = sub.add_parser("solve", help="exact game values")
    s.add_argument("--graph", required=True)
    s.add_argument("--k", type=_positive)
    s.add_argument("--mode", choices=("liminal", "burning", "cooling"), default="liminal")
    s.add_argument("--strict-arsonist", action="store_true")
    s.add_argument("--no-memo", action="store_true")
    s.add_argument("--no-dominance", action="store_true")
    s.add_argument("--budget-nodes", type=_positive)
    s.add_argument("--budget-memo", type=_positive)
    s.add_argument("--threads", type=_positive, default=_default_threads())
    s.add_argument("--emit-pv", metavar="FILE")
    common(s)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("play", help="play one game between two strategies")
    s.add_argument("--graph", required=True)
    s.add_argument("--k", type=_positive, required=True)
    s.add_argument("--sab", default="basic-sab")
    s.add_argument("--ars", default="greedy-ars:smallest")
    s.add_argument("--strict-arsonist", action="store_true")
    s.add_argument("--out", metavar="FILE")
    common(s)
    s.set_defaults(func=cmd_play)

    s = sub.add_parser("bounds", help="bounds that apply to a graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--k", type=_positive, required=True)
    s.add_argument("--json", action="store_true")
    common(s)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("sweep", help="grid playouts and bound curves as CSV")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--k-range", required=True)
    s.add_argument("--out", metavar="FILE")
    s.add_argument("--threads", type=_positive, default=_default_threads())
    common(s, ("csv", "json"))
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("construct", help="Sperner families, schedules and partition witnesses")
    s.add_argument("what", choices=("sperner", "b4", "witness"))
    s.add_argument("--n", type=_positive)
    s.add_argument("--forced", type=int)
    s.add_argument("--ground")
    s.add_argument("--graph")
    s.add_argument("--k", type=_positive)
    s.add_argument("--d", type=int)
    s.add_argument("--method", choices=("auto", "path", "grid", "tree", "caterpillar", "search", "greedy"),
                   default="auto")
    s.add_argument("--budget-nodes", type=_positive, default=1_000_000)
    common(s)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("reduce", help="build the 3-QBF reduction graph")
    s.add_argument("--qbf", required=True)
    s.add_argument("--k", type=_positive, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--meta")
    s.add_argument("--certify", action="store_true")
    s.add_argument("--budget-nodes", type=_positive, default=2_000_000)
    s.add_argument("--connector-rule", choices=("fixed", "long"), default="fixed")
    common(s)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("verify", help="run the acceptance suite")
    s.add_argument("--criteria", help="comma-separated ids, default all")
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--threads", type=_positive, default=_default_threads())
    s.add_argument("--json", metavar="FILE")
    common(s)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "construct":
        if args.what in ("sperner", "b4") and args.n is None:
            parser.error(f"construct {args.what} needs --n")
        if args.what == "witness" and args.graph is None:
            parser.error("construct witness needs --graph")
    try:
        return args.func(args)
    except (UsageError, GraphError, QbfError, ConstructionError, IllegalMove, ValueError,
            FileNotFoundError, EOFError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
