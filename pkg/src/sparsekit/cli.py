"""Command-line front end: ``sparsekit <subcommand> ...``.

Exit status: 0 when every verdict passes, 2 when some verification fails,
1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .alpha import C1, C2
from .graph import BipartiteGraph, canonical_form, format_graph6, read_graph
from .linalg import MalformedInput, determinant, format_text, permanent

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


def _load(args) -> tuple[str, BipartiteGraph]:
    from .atlas import BadParameter, UnknownId, make
    if bool(args.input) == bool(args.atlas):
        raise UsageError("give exactly one of --input FILE or --atlas ID")
    if args.atlas:
        try:
            return args.atlas, make(args.atlas).graph
        except (UnknownId, BadParameter) as exc:
            raise UsageError(f"atlas: {exc}")
    try:
        with open(args.input) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(str(exc))
    try:
        return os.path.basename(args.input), read_graph(text)
    except MalformedInput as exc:
        raise UsageError(f"{args.input}:{exc.line}:{exc.column}: {exc}")


def _emit(doc, fmt: str, text_lines=None, csv_text=None) -> None:
    if fmt == "json":
        print(json.dumps(doc, sort_keys=True, indent=1))
    elif fmt == "csv" and csv_text is not None:
        sys.stdout.write(csv_text)
    elif text_lines is not None:
        print("\n".join(text_lines))
    else:
        print(json.dumps(doc, sort_keys=True, indent=1))


def cmd_compute(args) -> int:
    gid, g = _load(args)
    m = g.to_biadjacency()
    doc = {"id": gid, "n": g.n, "k": g.k()}
    if args.mode in ("det", "both"):
        doc["det"] = determinant(m)
    if args.mode in ("perm", "both"):
        doc["perm"] = permanent(m)
    lines = [f"{key} = {doc[key]}" for key in ("det", "perm") if key in doc]
    _emit(doc, args.format, lines)
    return EXIT_OK


def cmd_bounds(args) -> int:
    from .bounds import classical_bounds
    if args.atlas or args.input:
        gid, g = _load(args)
        n, k = g.n, g.k()
    else:
        if args.n is None or args.k is None:
            raise UsageError("bounds needs --n and --k, or a graph")
        n, k = args.n, args.k
    doc = classical_bounds(n, k, args.d)
    lines = [f"{key:18} {doc[key]}" for key in doc]
    csv_text = "name,value\n" + "".join(f"{key},{doc[key]}\n" for key in doc)
    _emit(doc, args.format, lines, csv_text)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .bounds import PreconditionViolated, verify_theorem
    gid, g = _load(args)
    try:
        chk = verify_theorem(g, "perm" if args.mode == "both" else args.mode)
    except PreconditionViolated as exc:
        raise UsageError(str(exc))
    doc = {"id": gid, **chk.as_dict()}
    lines = [f"{gid}: {'pass' if chk.holds else 'FAIL'}  value={chk.value} k={chk.k} "
             f"f={doc['f_decimal']} slack={doc['slack']} ({doc['slack_decimal']})"]
    _emit(doc, args.format, lines)
    return EXIT_OK if chk.holds else EXIT_FAIL


def cmd_certify(args) -> int:
    from .audit import HypothesisViolated, NoCaseApplies, certify, recheck
    gid, g = _load(args)
    mode = "perm" if args.mode == "both" else args.mode
    try:
        cert = certify(g, mode, gid)
    except HypothesisViolated as exc:
        raise UsageError(str(exc))
    except NoCaseApplies as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    doc = cert.to_dict()
    chk = recheck(doc)
    doc["recheck"] = {"verdict": chk["verdict"], "problems": chk["problems"]}
    ok = cert.verdict and chk["verdict"]
    st = cert.stats()
    lines = [f"{gid} ({mode}): {'pass' if ok else 'FAIL'}  nodes={st['nodes']} "
             f"unclosed={st['unclosed']} f={cert.root.f.decimal(4)}",
             "tags: " + ", ".join(f"{t}={c}" for t, c in st["tags"].items())]
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True))
    else:
        print("\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_audit(args) -> int:
    from .claims import CLAIMS, run_claim
    if args.list_claims or not args.claim:
        for cid, c in CLAIMS.items():
            print(f"{cid:18} {c.bound:44} {c.statement}")
        return EXIT_OK
    if args.claim not in CLAIMS:
        raise UsageError(f"unknown claim {args.claim!r}; see --list-claims")
    graphs = None
    if args.atlas or args.input:
        graphs = [_load(args)]
    rep = run_claim(args.claim, graphs, n_max=args.n_max or 5)
    status = "FAIL" if not rep["verdict"] else ("pass (vacuous)" if rep["vacuous"] else "pass")
    lines = [f"{rep['claim']}: {status}  "
             f"graphs={rep['graphs']} instances={rep['instances']}  bound: {rep['bound']}"]
    for r in rep["results"][: args.show]:
        lines.append("  " + json.dumps(r, sort_keys=True))
    _emit(rep, args.format, lines)
    return EXIT_OK if rep["verdict"] else EXIT_FAIL


def _filter(args):
    from .enumerate import EnumFilter
    if args.n is None:
        raise UsageError("--n is required")
    kw = {}
    if args.edges is not None:
        kw["edge_range"] = (args.edges, args.edges)
    if args.min_degree is not None:
        kw["min_degree_range"] = (args.min_degree, args.min_degree)
    if args.max_degree is not None:
        kw["max_degree_range"] = (args.max_degree, args.max_degree)
    try:
        return EnumFilter(args.n, require_c4_free=args.c4_free, require_connected=args.connected,
                          quotient_swap=not args.keep_sides, **kw)
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_enumerate(args) -> int:
    from .enumerate import enumerate_graphs
    flt = _filter(args)
    graphs = list(enumerate_graphs(flt, shards=args.shards, workers=args.workers))
    doc = {"n": flt.n, "count": len(graphs),
           "graphs": [canonical_form(g).decode() for g in graphs]}
    lines = [f"{len(graphs)} classes"] + [format_graph6(g, header=False) for g in graphs]
    csv_text = "canonical,graph6,edges\n" + "".join(
        f"{canonical_form(g).decode()},{format_graph6(g, header=False)},{g.e()}\n" for g in graphs)
    _emit(doc, args.format, lines, csv_text)
    return EXIT_OK


def cmd_search(args) -> int:
    from .enumerate import extremal_search
    flt = _filter(args)
    mode = "perm" if args.mode == "both" else args.mode
    best, wits = extremal_search(flt, mode)
    doc = {"n": flt.n, "objective": mode, "max": best,
           "witnesses": [canonical_form(g).decode() for g in wits]}
    lines = [f"max {mode} = {best} over {len(wits)} witness class(es)"]
    lines += [format_text(g.to_biadjacency()) + "\n" for g in wits[: args.show]]
    _emit(doc, args.format, lines)
    return EXIT_OK


def cmd_exhaustive(args) -> int:
    from .enumerate import CapExceeded, exhaustive_verify, report_csv
    mode = "perm" if args.mode == "both" else args.mode
    try:
        rep = exhaustive_verify(args.n_max or 3, mode, certify_all=not args.no_certify,
                                workers=args.workers)
    except CapExceeded as exc:
        raise UsageError(str(exc))
    lines = [f"{'n':>2} {'k':>3} {'classes':>8} {'oriented':>8} {'max':>6} {'slack':>10} {'eq':>3}"]
    for r in rep["rows"]:
        lines.append(f"{r['n']:>2} {r['k']:>3} {r['classes']:>8} {r['oriented_classes']:>8} "
                     f"{r['max_value']:>6} {r['slack_decimal']:>10} {r['equality']:>3}")
    for n, t in rep["totals"].items():
        lines.append(f"n={n}: {t['classes']} classes, {t['oriented_classes']} with sides kept apart")
    lines.append(f"violations: {len(rep['violations'])}; certified "
                 f"{rep['certified']}/{rep['certify_attempted']}")
    _emit(rep, args.format, lines, report_csv(rep))
    return EXIT_OK if rep["ok"] else EXIT_FAIL


def cmd_atlas(args) -> int:
    from .atlas import BadParameter, UnknownId, list_ids, make
    if args.action == "list":
        ids = list_ids()
        _emit({"ids": ids}, args.format, ids)
        return EXIT_OK
    if not args.id:
        raise UsageError("atlas dump needs an id")
    try:
        ng = make(args.id)
    except (UnknownId, BadParameter) as exc:
        raise UsageError(f"atlas: {exc}")
    g = ng.graph
    doc = {"id": ng.id, "provenance": ng.provenance, "n": g.n, "e": g.e(), "k": g.k(),
           "canonical": canonical_form(g).decode(), "graph6": format_graph6(g, header=False),
           "matrix": format_text(g.to_biadjacency()).splitlines()}
    lines = [f"# {ng.id}: {ng.provenance}", format_text(g.to_biadjacency())]
    _emit(doc, args.format, lines)
    return EXIT_OK


def cmd_constants(args) -> int:
    doc = {"c1": C1.decimal(6), "c1_exact": C1.slack_string(),
           "c2": C2.decimal(6), "c2_exact": C2.slack_string()}
    _emit(doc, args.format, [f"c1 = {doc['c1']}", f"c2 = {doc['c2']}"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sparsekit",
                                description="Exact permanents and determinants of sparse 0/1 matrices.")
    p.add_argument("--list-claims", action="store_true", help="print claim ids and bounds")
    sub = p.add_subparsers(dest="command")

    def common(sp, graph=True):
        if graph:
            sp.add_argument("--input", metavar="FILE")
            sp.add_argument("--atlas", metavar="ID")
        sp.add_argument("--mode", choices=["det", "perm", "both"], default="perm")
        sp.add_argument("--format", choices=["json", "csv", "text"], default="text")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--budget-seconds", type=int, default=None)
        sp.add_argument("--shards", type=int, default=1)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--n-max", type=int, default=None)
        sp.add_argument("--show", type=int, default=5)

    sp = sub.add_parser("compute", help="determinant and/or permanent of a matrix")
    common(sp)
    sp.set_defaults(func=cmd_compute)
    sp = sub.add_parser("bounds", help="table of classical upper bounds")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--d", type=int)
    sp.set_defaults(func=cmd_bounds)
    sp = sub.add_parser("verify", help="check value <= 2^(k/3) exactly")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    sp = sub.add_parser("certify", help="emit a certificate tree as JSON")
    common(sp)
    sp.set_defaults(func=cmd_certify)
    sp = sub.add_parser("audit", help="run a named claim audit")
    sp.add_argument("claim", nargs="?")
    sp.add_argument("--list-claims", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_audit)
    for name, fn, hlp in (("enumerate", cmd_enumerate, "isomorph-free class list"),
                          ("search", cmd_search, "extremal search over a class list")):
        sp = sub.add_parser(name, help=hlp)
        common(sp, graph=False)
        sp.add_argument("--n", type=int)
        sp.add_argument("--edges", type=int)
        sp.add_argument("--k", type=int)
        sp.add_argument("--min-degree", type=int)
        sp.add_argument("--max-degree", type=int)
        sp.add_argument("--c4-free", action="store_true")
        sp.add_argument("--connected", action="store_true")
        sp.add_argument("--keep-sides", action="store_true",
                        help="do not identify a graph with its side swap")
        sp.set_defaults(func=fn)
    sp = sub.add_parser("exhaustive", help="exhaustive theorem check up to --n-max")
    common(sp, graph=False)
    sp.add_argument("--no-certify", action="store_true")
    sp.set_defaults(func=cmd_exhaustive)
    sp = sub.add_parser("atlas", help="list or dump named graphs")
    sp.add_argument("action", choices=["list", "dump"])
    sp.add_argument("id", nargs="?")
    sp.add_argument("--format", choices=["json", "csv", "text"], default="text")
    sp.set_defaults(func=cmd_atlas)
    sp = sub.add_parser("constants", help="the constants c1 and c2")
    sp.add_argument("--format", choices=["json", "csv", "text"], default="text")
    sp.set_defaults(func=cmd_constants)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.list_claims and args.command is None:
        from .claims import CLAIMS
        for cid, c in CLAIMS.items():
            print(f"{cid:18} {c.bound:44} {c.statement}")
        return EXIT_OK
    if args.command is None:
        parser.print_help()
        return EXIT_USAGE
    if getattr(args, "func", None) is cmd_compute and "--mode" not in (argv or sys.argv):
        args.mode = "both"
    if getattr(args, "k", None) is not None and args.command in ("enumerate", "search"):
        if args.n is None:
            return _usage("--k needs --n")
        args.edges = args.n + args.k
    start = time.monotonic()
    try:
        code = args.func(args)
    except UsageError as exc:
        return _usage(str(exc))
    budget = getattr(args, "budget_seconds", None)
    if budget is not None and time.monotonic() - start > budget:
        print(f"warning: run took longer than the {budget} s budget", file=sys.stderr)
    return code


def _usage(msg: str) -> int:
    print(f"sparsekit: error: {msg}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
