"""Named verification suites, one per acceptance criterion, plus searches.

Each suite returns a :class:`SuiteResult`.  Sweeps over enumerated graphs can
fan out over a process pool; results come back in input order, so a report
does not depend on the worker count.
"""

from __future__ import annotations

import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import collapsed as cv
from .constructions import MarkedGraph, reduce_to_string, thicken, thicken_edge
from .errors import CritGroupError
from .graph import (
    Multigraph,
    bridges,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    enumerate_connected,
    path_graph,
    random_connected_graph,
    spanning_tree_count,
)
from .group import (
    Marking,
    chain_graph,
    chain_pair_order_formula,
    critical_group,
    marking,
    pair_order,
    pair_orders,
    pairing_self,
    verify_marking,
)
from .linalg import Cokernel
from .oracles import pair_order_bruteforce, spanning_tree_count_bruteforce
from .paths import (
    candidate_families,
    marking_from_path_system,
    order_one_pair,
    order_two_certificate,
    spread_check,
    verify_path_system,
)

MAX_FAILURES = 10


@dataclass
class SuiteResult:
    name: str
    criterion: int
    checked: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.checked > 0

    def fail(self, msg: str):
        self.failures.append(msg)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f", {len(self.failures)} failure(s)" if self.failures else ""
        return f"[{status}] criterion {self.criterion:2d} {self.name}: {self.checked} checks{extra}"

    def report(self) -> str:
        out = [self.line()]
        out += [f"    note: {n}" for n in self.notes]
        out += [f"    fail: {f}" for f in self.failures[:MAX_FAILURES]]
        if len(self.failures) > MAX_FAILURES:
            out.append(f"    ... {len(self.failures) - MAX_FAILURES} more")
        return "\n".join(out)


def default_workers() -> int:
    env = os.environ.get("CRITGROUP_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, min(4, os.cpu_count() or 1))


def _pmap(fn, items, workers=None):
    items = list(items)
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(items) < 64:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def _graphs(n_lo, n_hi, max_mult=1):
    for n in range(n_lo, n_hi + 1):
        for G in enumerate_connected(n, max_mult=max_mult):
            yield (G.n, G.edges)


def _rebuild(item) -> Multigraph:
    n, edges = item
    return Multigraph(n, edges)


def _collect(result: SuiteResult, outcomes):
    for checked, failures in outcomes:
        result.checked += checked
        result.failures.extend(failures)
    return result


# -- 1: spanning trees ------------------------------------------------------


def _check_tree_count(item):
    G = _rebuild(item)
    got = critical_group(G).order
    want = spanning_tree_count_bruteforce(G)
    return 1, ([] if got == want else [f"{G.edges}: |Phi|={got}, trees={want}"])


def suite_matrix_tree(n_max=5, random_n=6, random_count=500, seed=1, workers=None):
    r = SuiteResult("matrix-tree", 1)
    items = list(_graphs(1, n_max))
    rng = random.Random(seed)
    for _ in range(random_count):
        G = random_connected_graph(random_n, rng)
        items.append((G.n, G.edges))
    return _collect(r, _pmap(_check_tree_count, items, workers))


# -- 2: cycles --------------------------------------------------------------


def suite_cycles(n_lo=3, n_hi=12, workers=None):
    r = SuiteResult("cycle-orders", 2)
    for n in range(n_lo, n_hi + 1):
        C = cycle_graph(n)
        r.checked += 1
        h = pair_order(C, 1, n)
        if h != n:
            r.fail(f"C_{n}: order {h}")
        if not verify_marking(C, Marking(1, n, n, tuple(range(n)))):
            r.fail(f"C_{n}: marking 0..{n - 1} rejected")
    return r


# -- 3: chains --------------------------------------------------------------

CHAIN_CASES = (
    ((1, 2, 3), "w", 11),
    ((2, 3, 4), "w", 13),
    ((2, 3, 4), 1, 26),
    ((1, 2, 3), 2, 11),
    ((1, 2, 3, 4, 5), "w", 137),
)


def suite_chains(workers=None):
    r = SuiteResult("chain-formulas", 3)
    for lengths, target, expected in CHAIN_CASES:
        r.checked += 1
        cg = chain_graph(*lengths)
        other = cg.w if target == "w" else cg.vertex(target, len(lengths))
        closed = chain_pair_order_formula(lengths, target)
        engine = pair_order(cg.graph, cg.v, other)
        brute = pair_order_bruteforce(cg.graph, cg.v, other, limit=expected + 1)
        if not closed == engine == brute == expected:
            r.fail(f"{lengths} target {target}: formula {closed}, snf {engine}, oracle {brute}, want {expected}")
    cg = chain_graph(1, 2, 3, 4, 5)
    if cg.graph.n != 12:
        r.fail(f"chain (1,2,3,4,5) has {cg.graph.n} vertices, want 12")
    return r


# -- 4: thickening ----------------------------------------------------------


def thickening_instances(count=50, seed=7, s_lo=2, s_hi=5):
    """Deterministic (marked graph, edge) samples whose weight gap is in [s_lo, s_hi]."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(3, 6)
        G = random_connected_graph(n, rng, p=0.5, max_mult=rng.choice((1, 1, 2)))
        i, j = rng.sample(range(1, n + 1), 2)
        MG = MarkedGraph.from_pair(G, i, j)
        steep = [
            (a, b) for a, b, _ in G.edges if s_lo <= abs(MG.weight(a) - MG.weight(b)) <= s_hi
        ]
        if steep:
            out.append((MG, rng.choice(steep)))
    return out


def suite_thickening(count=50, seed=7, workers=None):
    r = SuiteResult("thickening", 4)
    gaps = set()
    for MG, (a, b) in thickening_instances(count, seed):
        r.checked += 1
        G = MG.graph
        e = G.mult(a, b)
        s = abs(MG.weight(a) - MG.weight(b))
        gaps.add(s)
        T = thicken(MG, a, b)
        phi = critical_group(T.graph)
        want = s * (e * s) ** (s - 1) * critical_group(G).order
        if phi.order != want or spanning_tree_count(T.graph) != want:
            r.fail(f"{G.edges} edge {a}-{b}: |Phi'|={phi.order}, want {want}")
        divisible = sum(1 for d in phi.torsion_factors if d % (e * s) == 0)
        if divisible < s - 2:
            r.fail(f"{G.edges} edge {a}-{b}: {divisible} factors divisible by {e * s}, want >= {s - 2}")
        if pair_order(T.graph, T.mk.i, T.mk.j) != MG.h:
            r.fail(f"{G.edges} edge {a}-{b}: pair order changed")
    r.notes.append(f"weight gaps covered: {sorted(gaps)}")
    for n in (3, 4, 5):
        r.checked += 1
        s = n - 1
        T = thicken_edge(cycle_graph(n), 1, n, s)
        w1 = n + 1
        h = pair_order(T, 1, w1)
        if h != n * s * s:
            r.fail(f"thickened C_{n}: order {h}, want {n * s * s}")
        mk = marking(T, 1, w1)
        for rr in range(1, s):
            if mk.weight(n + rr) != s * rr + n * (s - rr):
                r.fail(f"thickened C_{n}: w_{rr} has weight {mk.weight(n + rr)}")
    return r


# -- 5: reduction to a string -------------------------------------------------


def _check_reduction(item):
    G = _rebuild(item)
    checked, failures = 0, []
    for i in range(1, G.n + 1):
        for j in range(1, G.n + 1):
            if i == j:
                continue
            checked += 1
            try:
                MG = MarkedGraph.from_pair(G, i, j)
                dec = reduce_to_string(MG)
                if dec.h != MG.h or dec.length != MG.mk.length:
                    failures.append(f"{G.edges} ({i},{j}): got G_{dec.h} x {dec.length}")
                for label, step in dec.steps:
                    if not verify_marking(step.graph, step.mk):
                        failures.append(f"{G.edges} ({i},{j}): {label} invalid")
            except CritGroupError as exc:
                failures.append(f"{G.edges} ({i},{j}): {exc}")
    return checked, failures


def suite_reduction(n_max=5, workers=None):
    r = SuiteResult("string-reduction", 5)
    return _collect(r, _pmap(_check_reduction, _graphs(2, n_max), workers))


# -- 6: order one and spreadness --------------------------------------------------


def _check_order_one(item):
    G = _rebuild(item)
    checked, failures = 0, []
    orders = pair_orders(G)
    for (i, j), h in orders.items():
        checked += 1
        if order_one_pair(G, i, j) != (h == 1):
            failures.append(f"{G.edges} ({i},{j}): bridge path disagrees with order {h}")
    checked += 1
    algebraic = cv.is_spread(G.laplacian())
    if spread_check(G) != algebraic or algebraic != all(h != 1 for h in orders.values()):
        failures.append(f"{G.edges}: spread={algebraic}, bridges={bridges(G)}")
    return checked, failures


def suite_order_one(n_max=6, multi_n_max=4, max_mult=3, workers=None):
    r = SuiteResult("order-one-and-spread", 6)
    items = list(_graphs(2, n_max)) + list(_graphs(2, multi_n_max, max_mult))
    return _collect(r, _pmap(_check_order_one, items, workers))


# -- 7: order two -------------------------------------------------------------------


def _check_order_two(item):
    G = _rebuild(item)
    checked, failures = 0, []
    for (i, j), h in pair_orders(G).items():
        checked += 1
        try:
            PS = order_two_certificate(G, i, j)
        except CritGroupError as exc:
            failures.append(f"{G.edges} ({i},{j}): {exc}")
            continue
        if (PS is not None) != (h == 2):
            failures.append(f"{G.edges} ({i},{j}): certificate {PS is not None}, order {h}")
        elif PS is not None and marking_from_path_system(G, PS).h != 2:
            failures.append(f"{G.edges} ({i},{j}): certificate marking has wrong order")
    return checked, failures


def non_converse_witness(h: int) -> tuple:
    """(pair order of v_1, v_h in C_h, number of h-path families accepted)."""
    C = cycle_graph(h)
    accepted = sum(1 for F in candidate_families(C, 1, h, h) if verify_path_system(C, F))
    return pair_order(C, 1, h), accepted


def suite_order_two(n_max=5, workers=None):
    r = SuiteResult("order-two-certificates", 7)
    _collect(r, _pmap(_check_order_two, _graphs(2, n_max), workers))
    for h in (3, 4):
        r.checked += 1
        order, accepted = non_converse_witness(h)
        if order != h or accepted:
            r.fail(f"C_{h}: order {order}, {accepted} accepted {h}-path families")
    return r


# -- 8: Laplacian collapsed values --------------------------------------------------


def _check_laplacian_scan(item):
    G = _rebuild(item)
    scan = cv.laplacian_scan(G, margin=G.n + 4)
    if scan.holds:
        return 1, []
    return 1, [f"{G.edges}: collapsed {scan.collapsed}"]


def suite_laplacian_bound(n_max=5, workers=None):
    r = SuiteResult("laplacian-collapsed-bound", 8)
    return _collect(r, _pmap(_check_laplacian_scan, _graphs(1, n_max), workers))


# -- 9: complete graphs ----------------------------------------------------------------


def suite_complete_graphs(n_lo=3, n_hi=7, workers=None):
    r = SuiteResult("complete-graphs", 9)
    for n in range(n_lo, n_hi + 1):
        r.checked += 1
        K = complete_graph(n)
        got = cv.collapsed_values(K.psd_laplacian()).collapsed
        if got != [n - 1, n + 1]:
            r.fail(f"K_{n}: collapsed {got}")
        for mu in (1, 2):
            r.checked += 1
            ck = Cokernel(K.laplacian().shift(mu))
            want = (mu + n,) * (n - 2) + ((mu + n) * mu,)
            if ck.torsion_factors != want or ck.free_rank:
                r.fail(f"K_{n}, mu={mu}: factors {ck.torsion_factors}, want {want}")
    return r


# -- 10: matrix families -------------------------------------------------------------------


def suite_families(workers=None):
    r = SuiteResult("collapsed-families", 10)

    def expect(label, M, want, lo=None, hi=None):
        r.checked += 1
        rep = cv.collapsed_values(M, lo, hi)
        if rep.collapsed != sorted(want) or not rep.verify():
            r.fail(f"{label}: collapsed {rep.collapsed}, want {sorted(want)}")
        return rep

    for n in range(4, 8):
        expect(f"P_{n}", path_graph(n).psd_laplacian(), {0, 1, 2, 3})
    for p, q in ((2, 2), (2, 3), (3, 3)):
        expect(f"K_{p},{q}", complete_bipartite(p, q).psd_laplacian(), {p - 1, p + 1, q - 1, q + 1})
    G = cv.many_collapsed_graph(8)
    M = G.laplacian()
    expect("many-collapsed n=8", M, cv.expected_many_collapsed(8))
    r.checked += 1
    if cv.eigenvector_collapse_pairs(M) != cv.expected_many_collapsed(8):
        r.fail("many-collapsed n=8: eigenvector pairs disagree")
    if not cv.is_spread(M):
        r.fail("many-collapsed n=8 is 0-collapsed")
    expect("a=1", cv.two_by_two(1), {-2, -1, 0, 1, 2})
    r.checked += 1
    rep = cv.collapsed_values(cv.block_family(2), 3, 12)
    if rep.collapsed != list(range(3, 13)):
        r.fail(f"block family k=2: collapsed {rep.collapsed}")
    return r


# -- 11: double root family -----------------------------------------------------------------


def suite_double_root(workers=None):
    r = SuiteResult("double-root-family", 11)
    r.checked += 1
    fam = cv.double_root_family((3, 5))
    if fam.ell != 31 or not (31 % 9 == 4 and 31 % 25 == 6):
        r.fail(f"ell = {fam.ell}")
    for mu in (26, 28):
        r.checked += 1
        s = cv.double_root_witness(fam.ell, mu)
        if s is None or not cv.check_witness(fam.matrix, mu, (1, 2, s)):
            r.fail(f"mu={mu}: witness {s}")
        if cv.collapse_witness(fam.matrix, mu) is None:
            r.fail(f"mu={mu}: not collapsed by the engine")
    return r


# -- 12: pairing -------------------------------------------------------------------------------


def suite_pairing(workers=None):
    r = SuiteResult("self-pairing", 12)
    r.checked += 1
    cg = chain_graph(1, 2, 3)
    got = pairing_self(cg.graph, cg.v, cg.w)
    inv = -1 / sum(Fraction(1, n) for n in cg.lengths)
    formula = inv - math.floor(inv)
    if not got == formula == Fraction(5, 11):
        r.fail(f"pairing {got}, formula {formula}")
    return r


# -- 13 and searches -------------------------------------------------------------------------------


def _cyclic_without(item, order, forbidden):
    G = _rebuild(item)
    if spanning_tree_count(G) != order:
        return None
    if critical_group(G).torsion_factors != (order,):
        return None
    orders = set(pair_orders(G).values())
    if orders & set(forbidden):
        return None
    return G


def _z12_probe(item):
    return _cyclic_without(item, 12, (2, 3))


def search_cyclic_without(n_max=6, max_mult=1, workers=None, probe=_z12_probe):
    """Graphs with Phi = Z/12 and no pair of order 2 or 3, in enumeration order."""
    hits = []
    for n in range(2, n_max + 1):
        hits += [G for G in _pmap(probe, _graphs(n, n, max_mult), workers) if G is not None]
    return hits


def suite_cyclic_witness(n_max=6, workers=None):
    r = SuiteResult("cyclic-witness-search", 13)
    r.checked = sum(1 for _ in _graphs(2, n_max))
    hits = search_cyclic_without(n_max, 1, workers)
    if hits:
        r.notes.append(f"witness: {hits[0].edges}")
    else:
        r.fail(f"no simple graph with n <= {n_max} has Phi = Z/12 without pairs of order 2 or 3")
        multi = search_cyclic_without(4, 2, workers)
        if multi:
            r.notes.append(f"allowing double edges, n = 4 already works: {multi[0].edges}")
    return r


def _exponent_probe(item):
    G = _rebuild(item)
    phi = critical_group(G)
    if phi.order == 1:
        return None
    if max(pair_orders(G).values()) == phi.exponent:
        return None
    return G


def search_exponent(n_max=5, max_mult=1, workers=None):
    """Graphs where no pair of vertices attains the exponent of Phi(G)."""
    return [G for G in _pmap(_exponent_probe, _graphs(2, n_max, max_mult), workers) if G is not None]


def _collapsed_count(item):
    G = _rebuild(item)
    return len(cv.collapsed_values(G.psd_laplacian()).collapsed), item


def search_max_collapsed(n: int, workers=None):
    """Largest number of collapsed values over connected simple graphs on n vertices."""
    best, where = -1, []
    for count, item in _pmap(_collapsed_count, _graphs(n, n), workers):
        if count > best:
            best, where = count, [item]
        elif count == best:
            where.append(item)
    return best, [_rebuild(x) for x in where]


SUITES = {
    "matrix-tree": suite_matrix_tree,
    "cycles": suite_cycles,
    "chains": suite_chains,
    "thickening": suite_thickening,
    "reduction": suite_reduction,
    "order-one": suite_order_one,
    "order-two": suite_order_two,
    "laplacian-bound": suite_laplacian_bound,
    "complete-graphs": suite_complete_graphs,
    "families": suite_families,
    "double-root": suite_double_root,
    "pairing": suite_pairing,
    "cyclic-witness": suite_cyclic_witness,
}

# suites whose size is governed by a vertex bound
N_MAX_SUITES = {
    "matrix-tree", "reduction", "order-one", "order-two", "laplacian-bound", "cyclic-witness",
}


def run_suite(name: str, n_max=None, workers=None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    kwargs = {"workers": workers}
    if n_max is not None and name in N_MAX_SUITES:
        kwargs["n_max"] = n_max
    return SUITES[name](**kwargs)
