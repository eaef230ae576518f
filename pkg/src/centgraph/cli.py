"""Command-line front end.

Exit status: 0 on success, 1 when a check fails, 2 on usage or input errors.
Data goes to files or stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

from .builders import AbelianGroupError, centralizer_graph, commuting_graph, star_graph, verify_correspondence
from .constructions import FAMILIES, NAMED_GROUPS, CONSTRUCTION_LIMIT, FamilySpec, named_group
from .fpclass2 import Class2Group, ENUMERATION_LIMIT, expand_to_table
from .graphs import GraphError, graph_summary, to_dot
from .groups import GroupError, GroupTable, LOAD_LIMIT, dump_cayley_table, load_cayley_table
from .verifier import (
    ALL_CHECKS,
    DEFAULT_PAIRS,
    CentralizerData,
    UnknownCheckError,
    model_from_class2,
    model_from_table,
    run_suite,
)

GRAPH_KINDS = ("commuting", "star", "centralizer")
CAYLEY_SUFFIXES = (".cayley", ".txt", ".tbl")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- input

def _ints(text: str | None, flag: str) -> list[int]:
    if not text:
        raise UsageError(f"{flag} is required for this family")
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated integers, got {text!r}") from None


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required for this family")
    return value


def family_spec(args: argparse.Namespace) -> FamilySpec:
    f = args.family
    if f == "gpns":
        return FamilySpec("gpns", {"p": _need(args.p, "--p"), "n": _need(args.n, "--n"), "edges": args.edges or ""})
    if f == "gothic":
        return FamilySpec("gothic", {"p": _need(args.p, "--p"), "parts": _ints(args.parts, "--parts")})
    if f == "frobenius":
        kernel = _need(args.kernel, "--kernel")
        kind, _, order = kernel.partition(":")
        family = {"cyclic": "frobeniusCyclicKernel", "elementary": "frobeniusElementaryKernel",
                  "elementaryAbelian": "frobeniusElementaryKernel"}.get(kind)
        if family is None or not order.isdigit():
            raise UsageError(f"--kernel expects cyclic:N or elementary:N, got {kernel!r}")
        params: dict[str, Any] = {"kernel": int(order), "complement": _need(args.complement, "--complement")}
        if args.seed is not None:
            params["seed"] = args.seed
        return FamilySpec(family, params)
    if f in ("dihedral", "quaternion", "semidihedral", "cyclic"):
        return FamilySpec(f, {"order": _need(args.order, "--order")})
    if f == "generalizedDihedral":
        return FamilySpec(f, {"moduli": _ints(args.moduli, "--moduli")})
    if f == "extraspecial":
        return FamilySpec(f, {"p": _need(args.p, "--p"), "r": _need(args.r, "--r")})
    if f == "namedExample":
        return FamilySpec(f, {"which": _need(args.which, "--which"), "p": _need(args.p, "--p")})
    if f == "semidirectCyclic":
        return FamilySpec(f, {"modulus": _need(args.order, "--order"), "unit": _need(args.unit, "--unit"),
                              "complement": _need(args.complement, "--complement")})
    raise UsageError(f"family {f!r} is not available from the command line")


def load_input(args: argparse.Namespace) -> GroupTable | Class2Group:
    sources = [s for s in (args.family, args.group, args.input) if s]
    if len(sources) != 1:
        raise UsageError("give exactly one of --family, --group or --input")
    limit = args.limit or LOAD_LIMIT
    if args.input:
        return _read_table(args.input, args.validate, limit)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if args.group:
            if args.group not in NAMED_GROUPS:
                raise UsageError(f"unknown group {args.group!r}; known: {', '.join(sorted(NAMED_GROUPS))}")
            G = named_group(args.group)
        else:
            G = family_spec(args).build()
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return G


def _read_table(path: str, validate: bool, limit: int = LOAD_LIMIT) -> GroupTable:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    name = os.path.splitext(os.path.basename(path))[0]
    return load_cayley_table(text, validate=validate, name=name, limit=limit)


def to_table(G: GroupTable | Class2Group, limit: int | None) -> GroupTable:
    if isinstance(G, GroupTable):
        return G
    return expand_to_table(G, limit=limit or CONSTRUCTION_LIMIT)


# ---------------------------------------------------------------- reports

def describe(G: GroupTable | Class2Group, limit: int | None = None) -> dict:
    m = model_from_class2(G, limit or ENUMERATION_LIMIT) if isinstance(G, Class2Group) else model_from_table(G)
    info = {"name": m.name, "order": m.order, "centerOrder": m.center_order, "centralIndex": m.k,
            "derivedOrder": m.derived_order, "nilpotenceClass": m.nilpotence}
    if m.k > 1:
        d = CentralizerData(m)
        info["distinctCentralizers"] = len(d)
        info["ca"] = bool(d.abelian.all())
        info["fGroup"] = int(d.contained.sum()) == len(d)   # only the diagonal
    if isinstance(G, Class2Group):
        info["edges"] = str(G.s)
        info["nondegenerate"] = G.nondegenerate
    return info


def build_graph(G: GroupTable | Class2Group, kind: str, limit: int | None):
    if kind == "centralizer":
        return centralizer_graph(G)
    T = to_table(G, limit)
    return commuting_graph(T) if kind == "commuting" else star_graph(T)


def analyze_group(G: GroupTable | Class2Group, kind: str, limit: int | None = None,
                  validate: bool = False) -> tuple[dict, Any]:
    lg = build_graph(G, kind, limit)
    doc = {"group": describe(G, limit), "graph": kind, **graph_summary(lg.graph)}
    nontrivial = [c for c in doc["components"] if c["size"] > 1]
    doc["isolatedVertices"] = sum(1 for c in doc["components"] if c["size"] == 1)
    doc["nontrivialComponents"] = len(nontrivial)
    if validate:
        rep = verify_correspondence(G)
        doc["correspondence"] = {"ok": rep.ok, "sizes": rep.sizes, "failures": rep.failures}
    return doc, lg


def _dump_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}") from None


# ---------------------------------------------------------------- commands

def cmd_build(args) -> int:
    if not args.out:
        raise UsageError("build needs --out")
    G = load_input(args)
    T = to_table(G, args.limit)
    text = dump_cayley_table(T, comment=f"{T.name} order {T.order}")
    _write(args.out, text)
    if args.out != "-":
        back = _read_table(args.out, validate=True, limit=max(T.order, LOAD_LIMIT))
        if not (back.table == T.table).all():
            print(f"error: {args.out} did not reload to the same table", file=sys.stderr)
            return 1
        print(f"wrote {T.name} (order {T.order}) to {args.out}", file=sys.stderr)
    return 0


def cmd_analyze(args) -> int:
    G = load_input(args)
    doc, lg = analyze_group(G, args.graph, args.limit, args.validate)
    if args.dot:
        _write(args.dot, to_dot(lg.graph, name=f"{G.name} {args.graph}", twin_clusters=args.twins))
    if args.json or not args.dot:
        _write(args.json, _dump_json(doc))
    bad = doc.get("correspondence", {}).get("ok") is False
    if bad:
        for f in doc["correspondence"]["failures"]:
            print(f"correspondence: {f}", file=sys.stderr)
    return 1 if bad else 0


def cmd_export(args) -> int:
    G = load_input(args)
    lg = build_graph(G, args.graph, args.limit)
    if args.json:
        doc = {"group": G.name, "graph": args.graph, **graph_summary(lg.graph)}
        _write(args.json, _dump_json(doc))
    if args.dot or not args.json:
        _write(args.dot, to_dot(lg.graph, name=f"{G.name} {args.graph}", twin_clusters=args.twins))
    return 0


def _parse_pairs(text: str | None) -> list[tuple[str, str]] | None:
    if text is None or text == "default":
        return None
    if text == "none":
        return []
    out = []
    for item in text.split(","):
        a, sep, b = item.partition(":")
        if not sep:
            raise UsageError(f"--pairs expects A:B entries, got {item!r}")
        out.append((a, b))
    return out


def cmd_check(args) -> int:
    suite = args.suite or "all"
    checks = None if suite == "all" else [c for c in suite.split(",") if c]
    corpus = None if args.corpus in (None, "default") else [c for c in re.split(r",(?![^()]*\))", args.corpus) if c]
    pairs = _parse_pairs(args.pairs)
    if corpus is not None and args.pairs is None:
        pairs = [(a, b) for a, b in DEFAULT_PAIRS if a in corpus and b in corpus]
    report = run_suite(corpus, checks, pairs, workers=args.workers, require_nonvacuous=not args.allow_vacuous)
    text = report.to_json(timings=not args.no_timings)
    _write(args.json or None, text)
    s = report.summary
    print(f"pass={s['pass']} fail={s['fail']} vacuous={s['vacuous']}", file=sys.stderr)
    for r in report.failures():
        print(f"FAIL {r.check_id} on {r.group}: {json.dumps(r.witness, sort_keys=True)}", file=sys.stderr)
    if s["vacuousChecks"]:
        print(f"checks with no applicable instance: {', '.join(s['vacuousChecks'])}", file=sys.stderr)
    return 0 if report.ok else 1


def _batch_one(path: str, kind: str, validate: bool, limit: int | None) -> dict:
    try:
        T = _read_table(path, validate=True, limit=limit or LOAD_LIMIT)
        doc, _ = analyze_group(T, kind, limit, validate)
        del doc["vertices"], doc["edges"]
        return {"input": os.path.basename(path), **doc}
    except (GroupError, UsageError, AbelianGroupError) as e:
        return {"input": os.path.basename(path), "error": str(e)}


def cmd_batch(args) -> int:
    if not args.input or not os.path.isdir(args.input):
        raise UsageError("batch needs --input pointing at a directory of Cayley files")
    paths = sorted(os.path.join(args.input, f) for f in os.listdir(args.input) if f.endswith(CAYLEY_SUFFIXES))
    if not paths:
        raise UsageError(f"no Cayley files ({', '.join(CAYLEY_SUFFIXES)}) in {args.input}")
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            docs = list(ex.map(_batch_one, paths, [args.graph] * len(paths),
                               [args.validate] * len(paths), [args.limit] * len(paths)))
    else:
        docs = [_batch_one(p, args.graph, args.validate, args.limit) for p in paths]
    _write(args.json or None, _dump_json({"graph": args.graph, "results": docs}))
    errors = [d for d in docs if "error" in d]
    for d in errors:
        print(f"error: {d['input']}: {d['error']}", file=sys.stderr)
    if errors:
        return 2
    return 1 if any(d.get("correspondence", {}).get("ok") is False for d in docs) else 0


# ---------------------------------------------------------------- parser

def _add_input(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("input (exactly one of --family, --group, --input)")
    g.add_argument("--family", choices=sorted(set(FAMILIES) | {"frobenius"} - {
        "frobeniusCyclicKernel", "frobeniusElementaryKernel", "directProduct"}))
    g.add_argument("--group", help="named group, e.g. D8, gothic_3(3)")
    g.add_argument("--input", help="Cayley table file")
    g.add_argument("--p", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--r", type=int, help="extraspecial rank")
    g.add_argument("--edges", help='edge set of S, e.g. "1-3,2-4"')
    g.add_argument("--parts", help="path lengths for the gothic family, e.g. 3,2")
    g.add_argument("--kernel", help="frobenius kernel, cyclic:N or elementary:N")
    g.add_argument("--complement", type=int)
    g.add_argument("--seed", type=int, help="frobenius action parameter")
    g.add_argument("--order", type=int)
    g.add_argument("--moduli", help="generalizedDihedral cyclic factors, e.g. 3,3")
    g.add_argument("--which", choices=["example1", "example2"])
    g.add_argument("--unit", type=int, help="semidirectCyclic action unit")
    p.add_argument("--limit", type=int, help="table/enumeration size cap")
    p.add_argument("--validate", action="store_true", help="validate tables and graph correspondences")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="centgraph", description="Centralizer and commuting graphs of finite groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a group and write its Cayley table")
    _add_input(b)
    b.add_argument("--out", help="output Cayley file ('-' for stdout)")

    for name, help_ in (("analyze", "component and vertex report for one graph"),
                        ("export", "write a graph as DOT and/or JSON")):
        a = sub.add_parser(name, help=help_)
        _add_input(a)
        a.add_argument("--graph", choices=GRAPH_KINDS, default="centralizer")
        a.add_argument("--dot")
        a.add_argument("--json")
        a.add_argument("--twins", action="store_true", help="draw closed-twin clusters in DOT")

    c = sub.add_parser("check", help="run the verifier suite")
    c.add_argument("--suite", default="all", help=f"all, or comma-separated ids from: {', '.join(ALL_CHECKS)}")
    c.add_argument("--corpus", default="default", help="default, or comma-separated group names, G(p,n,edges) specs or Cayley files")
    c.add_argument("--pairs", help="default, none, or A:B,C:D")
    c.add_argument("--json", help="report path (stdout if omitted)")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--allow-vacuous", action="store_true", help="do not fail when a check never applies")
    c.add_argument("--no-timings", action="store_true", help="omit elapsed times for byte-stable output")

    t = sub.add_parser("batch", help="analyze every Cayley file in a directory")
    t.add_argument("--input", required=True, help="directory")
    t.add_argument("--graph", choices=GRAPH_KINDS, default="centralizer")
    t.add_argument("--json")
    t.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    t.add_argument("--limit", type=int)
    t.add_argument("--validate", action="store_true")
    return parser


COMMANDS = {"build": cmd_build, "analyze": cmd_analyze, "export": cmd_export, "check": cmd_check, "batch": cmd_batch}


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        return COMMANDS[args.command](args)
    except (UsageError, GroupError, GraphError, UnknownCheckError) as e:
        msg = e.args[0] if isinstance(e, UnknownCheckError) else str(e)
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
