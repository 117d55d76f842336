"""Named graphs and extremal families, with structural self-checks.

Every constructor output is checked on construction (order, regularity,
girth, and for transcribed graphs a golden canonical form), so a typo in an
edge list fails loudly instead of silently changing a result.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .graph import BipartiteGraph, canonical_form, cycle, from_canonical, graph_j
from .linalg import permanent_expand, permanent_ryser

__all__ = ["NamedGraph", "UnknownId", "BadParameter", "make", "list_ids",
           "pg_incidence", "conjecture_report"]


class UnknownId(KeyError):
    pass


class BadParameter(ValueError):
    pass


@dataclass(frozen=True)
class NamedGraph:
    id: str
    graph: BipartiteGraph
    provenance: str


def _check(g: BipartiteGraph, *, n=None, e=None, regular=None, girth=None, degrees=None):
    if n is not None and g.n != n:
        raise AssertionError(f"expected n={n}, got {g.n}")
    if e is not None and g.e() != e:
        raise AssertionError(f"expected {e} edges, got {g.e()}")
    if regular is not None and set(g.degrees().values()) != {regular}:
        raise AssertionError(f"expected a {regular}-regular graph")
    if girth is not None and g.girth() != girth:
        raise AssertionError(f"expected girth {girth}, got {g.girth()}")
    if degrees is not None and sorted(g.degrees().values()) != sorted(degrees):
        raise AssertionError("degree sequence differs from the documented one")


# ---------------------------------------------------------------------------
# finite projective planes


# GF(4) = {0, 1, w, w+1} encoded as 0..3; addition is xor
_GF4_MUL = (
    (0, 0, 0, 0),
    (0, 1, 2, 3),
    (0, 2, 3, 1),
    (0, 3, 1, 2),
)


def _field(q: int):
    if q in (2, 3):
        return (lambda a, b: (a + b) % q), (lambda a, b: (a * b) % q)
    if q == 4:
        return (lambda a, b: a ^ b), (lambda a, b: _GF4_MUL[a][b])
    raise BadParameter(f"projective planes are built for q in {{2, 3, 4}}, not {q}")


def _projective_points(q: int) -> list[tuple[int, int, int]]:
    # first nonzero coordinate equal to 1
    pts = []
    for v in itertools.product(range(q), repeat=3):
        nz = [c for c in v if c]
        if nz and nz[0] == 1:
            pts.append(v)
    return pts


def pg_incidence(q: int) -> BipartiteGraph:
    """Point-line incidence graph of PG(2, q): rows are points, columns lines."""
    add, mul = _field(q)
    pts = _projective_points(q)
    adj = []
    for p in pts:
        bits = 0
        for j, line in enumerate(pts):
            s = 0
            for a, b in zip(p, line):
                s = add(s, mul(a, b))
            if s == 0:
                bits |= 1 << j
        adj.append(bits)
    g = BipartiteGraph(tuple(adj), len(pts))
    _check(g, n=q * q + q + 1, regular=q + 1, girth=6)
    return g


def fano() -> BipartiteGraph:
    """Fano plane from the difference set {0, 1, 3} mod 7."""
    adj = []
    for pt in range(7):
        bits = 0
        for line in range(7):
            if (pt - line) % 7 in (0, 1, 3):
                bits |= 1 << line
        adj.append(bits)
    g = BipartiteGraph(tuple(adj), 7)
    _check(g, n=7, regular=3, girth=6)
    return g


def heawood() -> BipartiteGraph:
    """Heawood graph from its LCF code [5, -5]^7 on a 14-cycle."""
    rows = [f"v{i}" for i in range(0, 14, 2)]
    cols = [f"v{i}" for i in range(1, 14, 2)]
    edges = set()
    for i in range(14):
        edges.add(frozenset((i, (i + 1) % 14)))
        edges.add(frozenset((i, (i + (5 if i % 2 == 0 else -5)) % 14)))
    pairs = []
    for e in edges:
        a, b = sorted(e)
        pairs.append((f"v{a}", f"v{b}"))
    g = BipartiteGraph.from_edges(rows, cols, pairs).relabeled()
    _check(g, n=7, e=21, regular=3, girth=6)
    return g


def c_block(t: int) -> BipartiteGraph:
    """t disjoint hexagons, the block-diagonal matrix diag(C, ..., C)."""
    if t < 1:
        raise BadParameter("c_block needs t >= 1")
    g = cycle(6)
    out = g
    for _ in range(t - 1):
        out = out.disjoint_union(g)
    _check(out, n=3 * t, regular=2)
    return out.relabeled()


# ---------------------------------------------------------------------------
# determinant witnesses, transcribed once and locked by canonical form

# Type I vertex x whose deletion with y1 leaves J
_DET_WITNESS_62 = (
    ["x", "z1", "z2", "z3", "z4"], ["y1", "y2", "w1", "w2", "w3"],
    [("w3", "z2"), ("z2", "y2"), ("y2", "z1"), ("z1", "w2"), ("w2", "z4"), ("z4", "w3"),
     ("w3", "z3"), ("z3", "w1"), ("w1", "z1"),
     ("x", "y2"), ("x", "y1"), ("y1", "z3"), ("y1", "z4")],
)

# Type II vertex x whose four-vertex deletion leaves a hexagon p0..p300
_DET_WITNESS_64 = (
    ["x", "x1", "w2", "z1", "p240"], ["y1", "y2", "w1", "w3", "p300"],
    [("x", "y1"), ("x", "y2"), ("x1", "y1"), ("x1", "w1"), ("x1", "w3"),
     ("y2", "w2"), ("y2", "z1"),
     ("z1", "w1"), ("w1", "w2"), ("w2", "w3"), ("w3", "p240"), ("p240", "p300"), ("p300", "z1")],
)

# Type II vertex x whose four-vertex deletion leaves J, two attachments
_X6 = ["x", "x1", "x2", "x3", "x4", "x5"]
_Y6 = ["y1", "y2", "y3", "y4", "y5", "y6"]
_DET_WITNESS_65A = (
    _X6, _Y6,
    [("y6", "x2"), ("x2", "y3"), ("y3", "x5"), ("x5", "y5"), ("y5", "x4"), ("x4", "y6"),
     ("x5", "y4"), ("y4", "x3"), ("x3", "y6"),
     ("x", "y1"), ("x", "y2"), ("x1", "y1"), ("x1", "y4"), ("x1", "y3"), ("y2", "x2"), ("y2", "x3")],
)
_DET_WITNESS_65B = (
    _X6, _Y6,
    [("x2", "y3"), ("y3", "x3"), ("x3", "y6"), ("y6", "x5"), ("x5", "y5"), ("y5", "x2"),
     ("y6", "x4"), ("x4", "y4"), ("y4", "x2"),
     ("x", "y1"), ("x", "y2"), ("x1", "y1"), ("x1", "y6"), ("x1", "y3"), ("y2", "x3"), ("y2", "x2")],
)

# golden canonical forms; a transcription change must update these on purpose
_GOLDEN: dict[str, bytes] = {
    "det_witness_62": b"5x5:18,14,e,d,13",
    "det_witness_64": b"5x5:1c,12,9,e,15",
    "det_witness_65a": b"6x6:38,34,22,11,e,d",
    "det_witness_65b": b"6x6:38,14,2c,22,21,1b",
}


def _transcribed(spec, golden_key: str, **checks) -> BipartiteGraph:
    rows, cols, edges = spec
    g = BipartiteGraph.from_edges(rows, cols, edges)
    _check(g, **checks)
    want = _GOLDEN.get(golden_key)
    if want is not None and canonical_form(g) != want:
        raise AssertionError(f"{golden_key}: canonical form differs from the locked value")
    return g


# ---------------------------------------------------------------------------
# claim gadgets


def _heawood_minus_edge(tag: str) -> tuple[list, list, list]:
    """Heawood with one edge removed; returns (rows, cols, edges) with labels
    prefixed by ``tag`` and the deficient row/column listed first."""
    h = heawood()
    (r0, c0) = h.edges()[0]
    rows = [f"{tag}r{l}" for _, l in [r0] + [v for v in h.vertices() if v[0] == 0 and v != r0]]
    cols = [f"{tag}c{l}" for _, l in [c0] + [v for v in h.vertices() if v[0] == 1 and v != c0]]
    edges = [(f"{tag}r{a[1]}", f"{tag}c{b[1]}") for a, b in h.edges() if (a, b) != (r0, c0)]
    return rows, cols, edges


def first_step_case3() -> BipartiteGraph:
    """3-regular, C4-free: two copies of Heawood minus an edge joined through
    an adjacent pair u, v1.  Deleting u and v1 leaves two even components,
    each holding one neighbour of u and one of v1."""
    r1, c1, e1 = _heawood_minus_edge("a")
    r2, c2, e2 = _heawood_minus_edge("b")
    rows = ["u"] + r1 + r2
    cols = ["v1"] + c1 + c2
    edges = e1 + e2 + [("u", "v1"), ("u", c1[0]), ("u", c2[0]), ("v1", r1[0]), ("v1", r2[0])]
    g = BipartiteGraph.from_edges(rows, cols, edges)
    _check(g, n=15, regular=3)
    assert g.is_c4_free()
    return g


def type2_forb1_figure() -> BipartiteGraph:
    """J with a Type II vertex x hung off it through y1 (z = h4 is Type I)."""
    jg = graph_j()
    rows = list(jg.row_labels) + ["y1"]
    cols = list(jg.col_labels) + ["x"]
    edges = [(a[1], b[1]) for a, b in jg.edges()]
    # hexagon corner at 120 degrees is h2 (row), at 300 degrees h5 (column)
    edges += [("x", "h2"), ("x", "y1"), ("y1", "h5")]
    g = BipartiteGraph.from_edges(rows, cols, edges)
    _check(g, n=5, e=12)
    return g


# literal gadgets found by search; each entry is (rows as 0/1 strings, note)
_LITERAL_GADGETS: dict[str, tuple[tuple[str, ...], str]] = {
    "type1_split_single": (("00001", "00010", "00100", "01011", "11100"),
                           "deleting a Type I vertex and one neighbour leaves an odd part"),
    "type1_split_even": (("00001", "00010", "01100", "10101", "11010"),
                         "Type I deletion leaving only balanced parts"),
    "type1_split_odd": (("00001", "00010", "00011", "00101", "11110"),
                        "Type I deletion leaving unbalanced parts"),
    "type2_pair_even": (("00001", "00010", "00101", "01001", "10110"),
                        "Type II vertex and its heavy neighbour split the graph evenly"),
    "type2_pair_odd": (("0001", "0001", "0011", "1110"),
                       "Type II vertex and its heavy neighbour split off unbalanced parts"),
    "type2_quad_even": (("00010", "00101", "01001", "01110", "10001"),
                        "four-vertex Type II deletion with balanced parts"),
    "type2_quad_odd": (("00001", "00011", "00110", "01101", "11010"),
                       "four-vertex Type II deletion with unbalanced parts"),
}


# larger gadgets for the minimum-degree-3 disconnection claims, built by
# gluing vertex-deleted plane incidence graphs through a planted pair u, v1
# (row 0, column 0).  Rows are hex bitmasks over the columns.
_ENCODED_GADGETS: dict[str, tuple[str, str]] = {
    "maxdeg5_bridge_even": ("24x24:809,124,e2,1228,1e,1484,a44,1802,290,448,702,1150,224001,62000,530000,8a8000,1e000,484000,e02000,2d0000,308000,182001,448001,810001",
        "d5-g1-disc only, even split at R0-L0"),
    "maxdeg5_bridge_odd": ("25x25:1189,924,e2,1430,2228,1e,2484,1244,3802,a90,c48,2150,948000,c4000,1460000,250000,3c000,488000,1208001,1804000,aa0000,c10000,704000,1190000,120001",
        "d5-g1-disc only, odd split at L0-R0"),
    "maxdeg5_pair_case1_even": ("18x18:18001,294,72,910,e,524,e02,348,221,183,4c0,8a8,16000,d000,24001,3001,2a000,31000",
        "d5-g2-disc case1, even split at R0 L0"),
    "maxdeg5_pair_case1_odd": ("19x19:34021,924,430,228,1e,485,244,803,a90,c48,702,188,150,2a000,19000,4c000,7000,52000,61000",
        "d5-g2-disc case1, odd split at L0 R0"),
    "maxdeg5_pair_case2_3_even": ("19x19:48221,54,32,98,e,a4,c3,68,12a00,1900,28c00,44800,25200,70100,14400,19000,e100,22001,43400",
        "d5-g2-disc case2-3, even split at L0 R0"),
    "maxdeg5_pair_case2_3_odd": ("24x24:380021,4a4,62,a30,128,1f,244,904,c02,550,608,382,8c8,492000,71001,a18000,114000,f000,242000,922000,c01000,548000,8c4000,a8000",
        "d5-g2-disc case2-3, odd split at L0 R0"),
    "maxdeg4_bridge_even": ("19x19:31,924,e2,1228,1e,1484,244,1802,c48,702,188,1150,28001,1a000,4c000,6001,50001,62000,34000",
        "g1-disc only, even split at R0-L0"),
    "maxdeg4_bridge_odd": ("24x24:104001,494,72,911,e,a44,124,548,621,382,c1,8a8,492000,71000,a18000,f000,242000,922000,c01000,548000,624000,381000,8c4000,a8000",
        "g1-disc only, odd split at R0-L0"),
    "maxdeg4_pair_case1_even": ("14x14:c3,15,32,58,e,64,29,1500,c80,2600,380,2900,3080,1a00",
        "g2-disc case1, even split at L0 R0"),
    "maxdeg4_pair_case1_odd": ("24x24:808001,212,70,894,e,942,4a2,e00,2c8,324,181,444,828,212001,71000,518000,894000,f000,942000,4a2000,2c8000,324000,181001,444000",
        "g2-disc case1, odd split at R0 L0"),
    "maxdeg4_pair_case2_4_odd": ("19x19:31,924,e2,1228,1e,1484,244,1802,c48,702,188,1150,28001,1a000,4c000,6001,50001,62000,34000",
        "g2-disc case2-4, odd split at R0 L0"),
    "maxdeg4_pair_case2_even": ("24x24:104001,494,72,911,e,a44,124,548,621,382,c1,8a8,492000,71000,a18000,f000,242000,922000,c01000,548000,624000,381000,8c4000,a8000",
        "g2-disc case2, even split at R0 L0"),
    "maxdeg4_pair_case3_even": ("23x23:c1,a4,62,630,928,1e,a44,504,c02,150,209,890,292000,71000,18001,514000,f000,122000,601001,348000,181000,c4000,4a8000",
        "g2-disc case3, even split at R0 L0"),
    "maxdeg4_pair_case4_even": ("19x19:4061,424,928,1e,a84,144,c02,590,648,302,89,850,2a000,19000,4c000,7000,52000,61001,34000",
        "g2-disc case4, even split at L0 R0"),
}


def _literal(rows: tuple[str, ...]) -> BipartiteGraph:
    n = len(rows)
    adj = tuple(sum(1 << j for j, ch in enumerate(r) if ch == "1") for r in rows)
    return BipartiteGraph(adj, n)


# ---------------------------------------------------------------------------
# registry


_FIXED: dict[str, tuple[Callable[[], BipartiteGraph], str]] = {
    "k2": (lambda: BipartiteGraph((1,), 1), "single edge"),
    "j": (lambda: _check_j(graph_j()), "hexagon plus a path of length three across it"),
    "fano": (fano, "point-line incidence of the Fano plane"),
    "heawood": (heawood, "Heawood graph, the (3,6)-cage"),
    "det_witness_62": (lambda: _transcribed(_DET_WITNESS_62, "det_witness_62", n=5, e=13),
                       "Type I deletion leaving J; |det| = 5 at k = 8"),
    "det_witness_64": (lambda: _transcribed(_DET_WITNESS_64, "det_witness_64", n=5, e=13),
                       "Type II deletion leaving a hexagon; |det| = 4 at k = 8"),
    "det_witness_65a": (lambda: _transcribed(_DET_WITNESS_65A, "det_witness_65a", n=6, e=16),
                        "Type II deletion leaving J, degree-2 attachment; |det| = 5 at k = 10"),
    "det_witness_65b": (lambda: _transcribed(_DET_WITNESS_65B, "det_witness_65b", n=6, e=16),
                        "Type II deletion leaving J, degree-3 attachment; |det| = 6 at k = 10"),
    "first_step_case3": (first_step_case3,
                         "3-regular graph whose pivot deletion splits into two even parts"),
    "type2_forb1": (type2_forb1_figure, "J extended by a Type II vertex"),
}


def _check_j(g: BipartiteGraph) -> BipartiteGraph:
    _check(g, n=4, e=9, degrees=[2] * 6 + [3] * 2)
    return g


_PARAM = re.compile(r"^([a-z_]+?)_?\(?(\d+)\)?$")


def list_ids() -> list[str]:
    out = list(_FIXED) + list(_LITERAL_GADGETS) + list(_ENCODED_GADGETS)
    out += ["c(2n)", "c_block(t)", "pg_incidence(q)"]
    return out


@lru_cache(maxsize=None)
def make(id: str) -> NamedGraph:
    """Build the named graph ``id``; see :func:`list_ids`."""
    key = id.strip().lower()
    if key in _FIXED:
        fn, prov = _FIXED[key]
        return NamedGraph(key, fn(), prov)
    if key in _LITERAL_GADGETS:
        rows, prov = _LITERAL_GADGETS[key]
        return NamedGraph(key, _literal(rows), prov)
    if key in _ENCODED_GADGETS:
        enc, prov = _ENCODED_GADGETS[key]
        return NamedGraph(key, from_canonical(enc.encode()), prov)
    m = _PARAM.match(key)
    if m:
        name, p = m.group(1), int(m.group(2))
        if name == "c":
            if p < 4 or p % 2:
                raise BadParameter("c(m) needs an even cycle length m >= 4")
            return NamedGraph(key, cycle(p), f"cycle of length {p}")
        if name == "c_block":
            return NamedGraph(key, c_block(p), f"{p} disjoint hexagons")
        if name == "pg_incidence":
            if p not in (2, 3, 4):
                raise BadParameter("pg_incidence(q) needs q in {2, 3, 4}")
            return NamedGraph(key, pg_incidence(p), f"incidence graph of PG(2,{p})")
    raise UnknownId(id)


# ---------------------------------------------------------------------------
# conjecture harness


def conjecture_report(k: int, copies: range = range(1, 3)) -> dict:
    """Permanent and growth constant of the smallest k-regular girth-6
    bipartite graph (the PG(2, k-1) incidence graph), for k in {3, 4, 5}.

    Both permanent engines run and must agree.  ``copies`` lists disjoint
    multiples whose permanent is the matching power.
    """
    if k not in (3, 4, 5):
        raise BadParameter("conjecture_report covers k in {3, 4, 5}")
    g = pg_incidence(k - 1)
    m = g.to_biadjacency()
    p_ryser = permanent_ryser(m)
    p_expand = permanent_expand(m)
    if p_ryser != p_expand:
        raise AssertionError(f"permanent engines disagree: {p_ryser} vs {p_expand}")
    if k == 3:
        h = permanent_ryser(heawood().to_biadjacency())
        if h != p_ryser:
            raise AssertionError("Heawood and PG(2,2) permanents differ")
    v = g.n
    rows = []
    for t in copies:
        rows.append({"copies": t, "n": t * v, "perm": p_ryser ** t})
    return {
        "k": k,
        "v_k": v,
        "perm": p_ryser,
        "constant": p_ryser ** (1.0 / v),
        "constant_4dp": f"{p_ryser ** (1.0 / v):.4f}",
        "multiples": rows,
    }
