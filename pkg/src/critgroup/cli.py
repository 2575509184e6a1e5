"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 parse error or invariant violation,
3 infeasible input (disconnected graph, failed precondition, search budget).
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import collapsed as cv
from . import constructions as con
from .errors import (
    DimensionError,
    DisconnectedGraphError,
    InvariantError,
    MarkingError,
    ParseError,
    SearchBudgetExceeded,
)
from .graph import Multigraph, format_graph, parse_graph
from .group import (
    chain_graph,
    chain_pair_order_formula,
    critical_group,
    format_marked,
    marking,
    pair_order,
    pairing_self,
    parse_marked,
)
from .linalg import BACKEND, format_matrix, parse_matrix
from .paths import format_path_system, marking_from_path_system, order_two_certificate
from .suites import (
    SUITES,
    run_suite,
    search_cyclic_without,
    search_exponent,
    search_max_collapsed,
)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_graph(path: str) -> Multigraph:
    return parse_graph(_read(path))


def _load_marked(path: str) -> con.MarkedGraph:
    # a certificate that fails to check is bad input, not a failed precondition
    try:
        G, mk = parse_marked(_read(path))
        return con.MarkedGraph(G, mk)
    except MarkingError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _load_matrix_or_graph(path: str, convention: str):
    """A matrix file as is, or a graph file as its Laplacian."""
    text = _read(path)
    first = next((ln.split() for ln in text.splitlines() if ln.split("#", 1)[0].strip()), None)
    if first and first[0] == "m":
        return parse_matrix(text), "matrix"
    G = parse_graph(text)
    if convention == "psd":
        return G.psd_laplacian(), "D - A"
    return G.laplacian(), "M(G)"


def _ints(xs):
    return " ".join(str(x) for x in xs)


class Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.data = {}
        self.lines = []

    def put(self, key, value, text=None):
        self.data[key] = value
        if text is not None:
            self.lines.append(text)

    def say(self, text):
        self.lines.append(text)

    def flush(self, stream):
        if self.as_json:
            json.dump(self.data, stream, indent=2, sort_keys=True, default=str)
            stream.write("\n")
        else:
            for ln in self.lines:
                stream.write(ln.rstrip("\n") + "\n")


# -- verbs ------------------------------------------------------------------


def cmd_group(a, out):
    G = _load_graph(a.graph)
    phi = critical_group(G)
    out.put("invariant_factors", list(phi.torsion_factors), f"invariant factors: {_ints(phi.torsion_factors) or '(trivial)'}")
    torsion = " x ".join(f"Z/{d}" for d in phi.torsion_factors) or "0"
    out.put("group", torsion, f"Phi(G) = {torsion}")
    out.put("free_rank", phi.free_rank)
    out.put("order", phi.order, f"order: {phi.order}")
    out.put("exponent", phi.exponent, f"exponent: {phi.exponent}")


def cmd_pair_order(a, out):
    G = _load_graph(a.graph)
    mk = marking(G, a.i, a.j)
    out.put("h", mk.h, f"h = {mk.h}")
    out.put("S", list(mk.S), f"S = {_ints(mk.S)}")
    out.put("marked_graph", format_marked(G, mk))


def cmd_pairing(a, out):
    G = _load_graph(a.graph)
    value = pairing_self(G, a.i, a.j)
    out.put("pairing", str(value), f"<tau, tau> = {value}")
    out.put("h", pair_order(G, a.i, a.j))


def cmd_reduce(a, out):
    G = _load_graph(a.graph)
    MG = con.MarkedGraph.from_pair(G, a.i, a.j)
    rng = random.Random(a.shuffle) if a.shuffle is not None else None
    dec = con.reduce_to_string(MG, rng)
    trace = []
    for label, step in dec.steps:
        trace.append({"step": label, "n": step.graph.n, "m": step.graph.m, "S": list(step.mk.S)})
        out.say(f"{label}: n={step.graph.n} m={step.graph.m} S={_ints(step.mk.S)} (marking verified)")
    out.put("trace", trace)
    out.put("h", dec.h)
    out.put("length", dec.length, f"string of {dec.length} copies of G_{dec.h}")
    out.put("result", format_marked(dec.result.graph, dec.result.mk))


def _emit_marked(out, MG):
    text = format_marked(MG.graph, MG.mk)
    out.put("marked_graph", text, text)
    out.put("pair", [MG.mk.i, MG.mk.j], f"# pair ({MG.mk.i}, {MG.mk.j}) of order {MG.h}")
    out.put("h", MG.h)


def cmd_construct(a, out):
    op = a.op
    _need(a.args, 2 if op in ("add-graph", "coalesce") else 1)
    if op == "mark":
        MG = con.MarkedGraph.from_pair(_load_graph(a.args[0]), *_int_args(a.args[1:], 2))
    elif op == "add-graph":
        k = _int_args(a.args[2:], 1, 2)
        MG = con.add_graph(_load_marked(a.args[0]), _load_graph(a.args[1]), *k)
    elif op == "glue":
        MG = con.glue(_load_marked(a.args[0]), *_int_args(a.args[1:], 2))
    elif op == "thicken":
        MG = con.thicken(_load_marked(a.args[0]), *_int_args(a.args[1:], 2))
    elif op == "remove":
        i, j = _int_args(a.args[1:], 2)
        MG = con.remove_equal_weight_edges(_load_marked(a.args[0]), [(min(i, j), max(i, j))])
    elif op == "add-edges":
        MG = con.add_edges(_load_marked(a.args[0]), *_int_args(a.args[1:], 2, 3))
    elif op == "subdivide":
        MG = con.subdivide_all(_load_marked(a.args[0]), *_int_args(a.args[1:], 1))
    elif op == "coalesce":
        MG = con.coalesce(_load_marked(a.args[0]), _load_marked(a.args[1]))
    else:
        raise UsageError(f"unknown construction {op!r}")
    _emit_marked(out, MG)


CONSTRUCT_HELP = """operations:
  mark GRAPH I J            minimal marking of the pair (I, J)
  add-graph MARKED H V [W]  attach graph H at its vertex W (default 1) to vertex V
  glue MARKED A B           identify two vertices of equal weight
  thicken MARKED V V2       replace the V-V2 bundle by a chain
  remove MARKED I J         delete the equal-weight bundle I-J
  add-edges MARKED K L [C]  add C edges between equal-weight vertices
  subdivide MARKED B        subdivide every edge into B pieces
  coalesce MARKED MARKED2   chain two marked graphs end to end"""


def _need(args, k):
    if len(args) < k:
        raise UsageError(f"construction needs {k} arguments, got {len(args)}")


def _int_args(args, lo, hi=None):
    hi = lo if hi is None else hi
    if not lo <= len(args) <= hi:
        raise UsageError(f"expected {lo}{'' if hi == lo else f'-{hi}'} integer arguments")
    try:
        return [int(x) for x in args]
    except ValueError:
        raise UsageError(f"not integers: {' '.join(args)}") from None


def cmd_spread(a, out):
    M, kind = _load_matrix_or_graph(a.input, a.convention)
    w = cv.collapse_witness(M, 0)
    out.put("spread", w is None, f"spread: {'yes' if w is None else 'no'} ({kind})")
    if w is not None:
        i, j, v = w
        out.put("witness", {"i": i, "j": j, "v": list(v)}, f"witness: E_{i}{j} = M v with v = {_ints(v)}")


def cmd_collapsed(a, out):
    M, kind = _load_matrix_or_graph(a.input, a.convention)
    rep = cv.collapsed_values(M, a.lo, a.hi)
    nb = cv.norm_bound(M)
    out.put("interval", [rep.lo, rep.hi], f"# {kind}, scanned mu in [{rep.lo}, {rep.hi}]")
    out.put("norm_bound", nb.bound, f"# certified ||M|| <= {nb.bound}, ~{cv.spectral_norm_estimate(M):.4f} (approximate)")
    out.put("collapsed", rep.collapsed, f"collapsed: {_ints(rep.collapsed)}")
    out.put(
        "witnesses",
        {str(mu): {"i": i, "j": j, "v": list(v)} for mu, (i, j, v) in rep.witnesses.items()},
    )
    if a.witnesses:
        for mu, (i, j, v) in sorted(rep.witnesses.items()):
            out.say(f"  mu={mu}: (M - mu Id) v = E_{i}{j}, v = {_ints(v)}")


def cmd_chain(a, out):
    if not a.lengths or any(n < 1 for n in a.lengths):
        raise UsageError("chain lengths must be positive")
    cg = chain_graph(*a.lengths)
    rows = []
    h = pair_order(cg.graph, cg.v, cg.w)
    f = chain_pair_order_formula(a.lengths)
    rows.append({"pair": "v,w", "formula": f, "computed": h})
    d = len(a.lengths)
    for k in range(1, a.lengths[-1]):
        u = cg.vertex(k, d)
        rows.append({
            "pair": f"v,v_{k},{d}",
            "formula": chain_pair_order_formula(a.lengths, k),
            "computed": pair_order(cg.graph, cg.v, u),
        })
    out.put("graph", format_graph(cg.graph), f"# {cg.graph.n} vertices, v = {cg.v}, w = {cg.w}")
    out.put("order", critical_group(cg.graph).order, f"# |Phi| = {critical_group(cg.graph).order}")
    out.say(f"{'pair':<12} {'formula':>8} {'computed':>9}")
    for r in rows:
        flag = "" if r["formula"] == r["computed"] else "  MISMATCH"
        out.say(f"{r['pair']:<12} {r['formula']:>8} {r['computed']:>9}{flag}")
    out.put("pairs", rows)
    out.put("pairing", str(pairing_self(cg.graph, cg.v, cg.w)), f"<tau, tau> for v,w = {pairing_self(cg.graph, cg.v, cg.w)}")


def cmd_double_root(a, out):
    fam = cv.double_root_family(a.primes)
    out.put("ell", fam.ell, f"l = {fam.ell}")
    out.put("matrix", format_matrix(fam.matrix), format_matrix(fam.matrix).rstrip())
    out.put("expected", sorted(fam.expected), f"collapsed (certified): {_ints(sorted(fam.expected))}")
    for mu, (_, _, s) in sorted(fam.witnesses.items()):
        out.say(f"  mu={mu}: s1={s[0]} s2={s[1]}")
    out.put("witnesses", {str(mu): list(s) for mu, (_, _, s) in fam.witnesses.items()})


def cmd_order_two(a, out):
    G = _load_graph(a.graph)
    PS = order_two_certificate(G, a.i, a.j, budget=a.budget)
    if PS is None:
        out.put("certificate", None, f"no system of 2 paths between {a.i} and {a.j}")
        out.put("h", pair_order(G, a.i, a.j))
        return
    mk = marking_from_path_system(G, PS)
    out.put("certificate", format_path_system(PS), format_path_system(PS).rstrip())
    out.put("S", list(mk.S), f"S = {_ints(mk.S)}")
    out.put("h", mk.h)


def cmd_verify(a, out):
    names = list(SUITES) if a.suite == "all" else [a.suite]
    if a.suite != "all" and a.suite not in SUITES:
        raise UsageError(f"unknown suite {a.suite!r}; choose from all, {', '.join(SUITES)}")
    results = []
    for name in names:
        r = run_suite(name, n_max=a.n_max, workers=a.workers)
        results.append(r)
        out.say(r.report())
    out.put("suites", [
        {"name": r.name, "criterion": r.criterion, "passed": r.passed, "checked": r.checked,
         "failures": r.failures, "notes": r.notes}
        for r in results
    ])
    if not all(r.passed for r in results):
        return EXIT_INVALID
    return EXIT_OK


def cmd_search(a, out):
    if a.kind == "exponent":
        hits = search_exponent(a.n_max, a.max_mult, a.workers)
        out.say(f"{len(hits)} graph(s) with n <= {a.n_max} where no pair attains the exponent")
    elif a.kind == "cyclic":
        hits = search_cyclic_without(a.n_max, a.max_mult, a.workers)
        out.say(f"{len(hits)} graph(s) with n <= {a.n_max} and Phi = Z/12 without pairs of order 2 or 3")
    else:
        best, hits = search_max_collapsed(a.n_max, a.workers)
        out.put("max_collapsed", best, f"max collapsed values on {a.n_max} vertices: {best} ({len(hits)} graphs)")
    out.put("graphs", [format_graph(G) for G in hits])
    for G in hits[: a.show]:
        out.say(format_graph(G).rstrip())
        out.say("")


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="critgroup", description="Critical groups of graphs, pair orders and collapsed values.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def with_pair(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("graph")
        s.add_argument("i", type=int)
        s.add_argument("j", type=int)
        s.set_defaults(fn=fn)
        return s

    s = sub.add_parser("group", help="invariant factors of the critical group")
    s.add_argument("graph")
    s.set_defaults(fn=cmd_group)
    with_pair("pair-order", cmd_pair_order, "order of a vertex pair and its marking")
    with_pair("pairing", cmd_pairing, "self-pairing of a pair class in Q/Z")
    s = with_pair("reduce", cmd_reduce, "reduce a marked pair to a string of bundles")
    s.add_argument("--shuffle", type=int, metavar="SEED", help="thicken edges in a seeded random order")
    s = with_pair("order-two", cmd_order_two, "search a certificate of 2 paths")
    s.add_argument("--budget", type=int, default=200_000)

    s = sub.add_parser("construct", help="marked-graph constructions",
                       formatter_class=argparse.RawDescriptionHelpFormatter, epilog=CONSTRUCT_HELP)
    s.add_argument("op")
    s.add_argument("args", nargs="*")
    s.set_defaults(fn=cmd_construct)

    for name, fn, help_ in (
        ("spread", cmd_spread, "is the matrix (or graph Laplacian) spread"),
        ("collapsed", cmd_collapsed, "collapsed values of a matrix or graph Laplacian"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("input")
        s.add_argument("--convention", choices=("psd", "nsd"), default="psd",
                       help="sign used for graph input: D - A (psd) or A - D (nsd)")
        s.set_defaults(fn=fn)
        if name == "collapsed":
            s.add_argument("--lo", type=int)
            s.add_argument("--hi", type=int)
            s.add_argument("--witnesses", action="store_true", help="print a witness per value")

    s = sub.add_parser("chain", help="two vertices joined by chains of given lengths")
    s.add_argument("lengths", type=int, nargs="+")
    s.set_defaults(fn=cmd_chain)

    s = sub.add_parser("double-root", help="2x2 matrices with one collapsed value per prime")
    s.add_argument("primes", type=int, nargs="+")
    s.set_defaults(fn=cmd_double_root)

    s = sub.add_parser("verify", help="run an acceptance suite")
    s.add_argument("suite", help="all or one of: " + ", ".join(SUITES))
    s.add_argument("--n-max", type=int)
    s.add_argument("--workers", type=int)
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("search", help="exploratory searches over enumerated graphs")
    s.add_argument("kind", choices=("exponent", "cyclic", "collapsed"))
    s.add_argument("--n-max", type=int, default=5, help="vertex bound (exact n for 'collapsed')")
    s.add_argument("--max-mult", type=int, default=1)
    s.add_argument("--workers", type=int)
    s.add_argument("--show", type=int, default=3, help="graphs to print")
    s.set_defaults(fn=cmd_search)

    sub.add_parser("info", help="show the active Smith form kernel").set_defaults(
        fn=lambda a, out: out.put("backend", BACKEND, f"smith kernel: {BACKEND}"))
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    out = Output(a.json)
    try:
        code = a.fn(a, out) or EXIT_OK
    except UsageError as exc:
        sys.stderr.write(f"critgroup: {exc}\n")
        return EXIT_USAGE
    except (ParseError, InvariantError) as exc:
        sys.stderr.write(f"critgroup: {exc}\n")
        return EXIT_INVALID
    except (DisconnectedGraphError, MarkingError, DimensionError, SearchBudgetExceeded, IndexError) as exc:
        sys.stderr.write(f"critgroup: {exc}\n")
        return EXIT_INFEASIBLE
    except ValueError as exc:
        sys.stderr.write(f"critgroup: {exc}\n")
        return EXIT_INFEASIBLE
    out.flush(sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
