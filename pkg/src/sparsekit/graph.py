"""Balanced bipartite graphs as a structural view of a 0/1 matrix.

A vertex is a pair ``(side, label)``: side 0 indexes rows of the
bi-adjacency matrix, side 1 indexes columns.  Labels survive deletions, so a
vertex named before a deletion can still be referred to afterwards.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Optional, Sequence

from .linalg import BitMatrix, MalformedInput, parse_text

__all__ = [
    "BipartiteGraph",
    "UnbalancedDeletion",
    "VertexKind",
    "VertexClass",
    "classify_vertex",
    "find_deg2_path3",
    "is_named",
    "named_graph",
    "cycle",
    "graph_j",
    "canonical_form",
    "canonical_form_labelled",
    "from_canonical",
    "parse_graph6",
    "format_graph6",
    "read_graph",
]

Vertex = tuple[int, Hashable]


class UnbalancedDeletion(ValueError):
    pass


def vname(v: Vertex) -> str:
    return f"{'LR'[v[0]]}{v[1]}"


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    """Bipartite graph with rows (side 0) and columns (side 1).

    ``adj[i]`` is a bitmask over column positions.  Graphs built by users are
    balanced; unbalanced ones only arise as components, whose permanent is 0.
    """

    adj: tuple[int, ...]
    ncols: int
    row_labels: tuple = field(default=None)
    col_labels: tuple = field(default=None)

    def __post_init__(self):
        if self.row_labels is None:
            object.__setattr__(self, "row_labels", tuple(range(len(self.adj))))
        if self.col_labels is None:
            object.__setattr__(self, "col_labels", tuple(range(self.ncols)))
        if len(self.row_labels) != len(self.adj) or len(self.col_labels) != self.ncols:
            raise ValueError("label count does not match the matrix shape")
        full = (1 << self.ncols) - 1
        if any(r & ~full for r in self.adj):
            raise ValueError("row has bits outside the column range")

    # -- construction ------------------------------------------------------

    @classmethod
    def from_biadjacency(cls, m: BitMatrix, row_labels=None, col_labels=None) -> "BipartiteGraph":
        return cls(tuple(m.rows), m.n, row_labels, col_labels)

    @classmethod
    def from_edges(cls, rows: Sequence, cols: Sequence, edges: Iterable[tuple]) -> "BipartiteGraph":
        """Build from explicit row/column label lists and (row, col) label pairs."""
        rpos = {r: i for i, r in enumerate(rows)}
        cpos = {c: j for j, c in enumerate(cols)}
        adj = [0] * len(rows)
        for a, b in edges:
            if a in rpos and b in cpos:
                i, j = rpos[a], cpos[b]
            elif b in rpos and a in cpos:
                i, j = rpos[b], cpos[a]
            else:
                raise ValueError(f"edge {a}-{b} does not join a row to a column")
            adj[i] |= 1 << j
        return cls(tuple(adj), len(cols), tuple(rows), tuple(cols))

    def to_biadjacency(self) -> BitMatrix:
        if not self.balanced:
            raise ValueError("graph is not balanced")
        return BitMatrix(self.ncols, self.adj)

    # -- basic invariants ----------------------------------------------------

    @property
    def balanced(self) -> bool:
        return len(self.adj) == self.ncols

    @property
    def n(self) -> int:
        if not self.balanced:
            raise ValueError("graph is not balanced")
        return self.ncols

    def v(self) -> int:
        return len(self.adj) + self.ncols

    def e(self) -> int:
        return sum(r.bit_count() for r in self.adj)

    def k(self) -> int:
        return self.e() - self.v() // 2

    @cached_property
    def cols(self) -> tuple[int, ...]:
        out = [0] * self.ncols
        for i, r in enumerate(self.adj):
            while r:
                low = r & -r
                out[low.bit_length() - 1] |= 1 << i
                r ^= low
        return tuple(out)

    @cached_property
    def _pos(self) -> tuple[dict, dict]:
        return ({l: i for i, l in enumerate(self.row_labels)},
                {l: j for j, l in enumerate(self.col_labels)})

    def position(self, v: Vertex) -> int:
        side, label = v
        try:
            return self._pos[side][label]
        except KeyError:
            raise KeyError(f"no vertex {vname(v)}") from None

    def vertex(self, side: int, pos: int) -> Vertex:
        return (side, (self.row_labels, self.col_labels)[side][pos])

    def vertices(self) -> list[Vertex]:
        return [(0, l) for l in self.row_labels] + [(1, l) for l in self.col_labels]

    def order_key(self, v: Vertex) -> tuple[int, int]:
        return (v[0], self.position(v))

    def __contains__(self, v) -> bool:
        try:
            self.position(v)
        except (KeyError, TypeError, ValueError):
            return False
        return True

    def _mask(self, v: Vertex) -> int:
        side, _ = v
        p = self.position(v)
        return self.adj[p] if side == 0 else self.cols[p]

    def degree(self, v: Vertex) -> int:
        return self._mask(v).bit_count()

    def neighbors(self, v: Vertex) -> list[Vertex]:
        side = v[0]
        mask = self._mask(v)
        labels = self.col_labels if side == 0 else self.row_labels
        out = []
        while mask:
            low = mask & -mask
            out.append((1 - side, labels[low.bit_length() - 1]))
            mask ^= low
        return out

    def has_edge(self, a: Vertex, b: Vertex) -> bool:
        if a[0] == b[0]:
            return False
        if a[0] == 1:
            a, b = b, a
        return bool((self.adj[self.position(a)] >> self.position(b)) & 1)

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        out = []
        for i, r in enumerate(self.adj):
            while r:
                low = r & -r
                out.append(((0, self.row_labels[i]), (1, self.col_labels[low.bit_length() - 1])))
                r ^= low
        return out

    def degrees(self) -> dict[Vertex, int]:
        d = {(0, l): self.adj[i].bit_count() for i, l in enumerate(self.row_labels)}
        d.update({(1, l): self.cols[j].bit_count() for j, l in enumerate(self.col_labels)})
        return d

    def degree_profile(self) -> tuple[int, int, dict[Vertex, int]]:
        d = self.degrees()
        if not d:
            return 0, 0, d
        vals = d.values()
        return min(vals), max(vals), d

    # -- editing -------------------------------------------------------------

    def _induced(self, keep_rows: Sequence[int], keep_cols: Sequence[int]) -> "BipartiteGraph":
        adj = []
        for i in keep_rows:
            r = self.adj[i]
            bits = 0
            for new, old in enumerate(keep_cols):
                if (r >> old) & 1:
                    bits |= 1 << new
            adj.append(bits)
        return BipartiteGraph(tuple(adj), len(keep_cols),
                              tuple(self.row_labels[i] for i in keep_rows),
                              tuple(self.col_labels[j] for j in keep_cols))

    def delete_vertices(self, vs: Iterable[Vertex], allow_unbalanced: bool = False) -> "BipartiteGraph":
        vs = set(vs)
        drop_r = {self.position(v) for v in vs if v[0] == 0}
        drop_c = {self.position(v) for v in vs if v[0] == 1}
        if len(drop_r) != len(drop_c) and not allow_unbalanced:
            raise UnbalancedDeletion(
                f"deleting {len(drop_r)} rows and {len(drop_c)} columns unbalances the graph")
        keep_r = [i for i in range(len(self.adj)) if i not in drop_r]
        keep_c = [j for j in range(self.ncols) if j not in drop_c]
        return self._induced(keep_r, keep_c)

    def delete_edges(self, edges: Iterable[tuple[Vertex, Vertex]]) -> "BipartiteGraph":
        adj = list(self.adj)
        for a, b in edges:
            if a[0] == 1:
                a, b = b, a
            if a[0] != 0 or b[0] != 1 or not self.has_edge(a, b):
                raise ValueError(f"no edge {vname(a)}-{vname(b)}")
            adj[self.position(a)] &= ~(1 << self.position(b))
        return BipartiteGraph(tuple(adj), self.ncols, self.row_labels, self.col_labels)

    def delete_edge(self, a: Vertex, b: Vertex) -> "BipartiteGraph":
        return self.delete_edges([(a, b)])

    def induced(self, vs: Iterable[Vertex]) -> "BipartiteGraph":
        vs = set(vs)
        keep_r = [i for i, l in enumerate(self.row_labels) if (0, l) in vs]
        keep_c = [j for j, l in enumerate(self.col_labels) if (1, l) in vs]
        return self._induced(keep_r, keep_c)

    def side_swap(self) -> "BipartiteGraph":
        return BipartiteGraph(self.cols, len(self.adj), self.col_labels, self.row_labels)

    def relabeled(self) -> "BipartiteGraph":
        """Same adjacency with labels reset to positions."""
        return BipartiteGraph(self.adj, self.ncols)

    def disjoint_union(self, other: "BipartiteGraph") -> "BipartiteGraph":
        a = self.relabeled()
        shift = a.ncols
        adj = a.adj + tuple(r << shift for r in other.adj)
        return BipartiteGraph(adj, a.ncols + other.ncols)

    # -- structure queries ---------------------------------------------------

    def components(self) -> list[frozenset]:
        """Connected components as vertex sets, ordered by least vertex."""
        nr = len(self.adj)
        seen_r = 0
        seen_c = 0
        comps = []
        for start_side, start in [(0, i) for i in range(nr)] + [(1, j) for j in range(self.ncols)]:
            if start_side == 0 and (seen_r >> start) & 1:
                continue
            if start_side == 1 and (seen_c >> start) & 1:
                continue
            rows = (1 << start) if start_side == 0 else 0
            cols = (1 << start) if start_side == 1 else 0
            frontier_r, frontier_c = rows, cols
            while frontier_r or frontier_c:
                new_c = 0
                f = frontier_r
                while f:
                    low = f & -f
                    new_c |= self.adj[low.bit_length() - 1]
                    f ^= low
                new_r = 0
                f = frontier_c
                while f:
                    low = f & -f
                    new_r |= self.cols[low.bit_length() - 1]
                    f ^= low
                frontier_c = new_c & ~cols
                frontier_r = new_r & ~rows
                cols |= new_c
                rows |= new_r
            seen_r |= rows
            seen_c |= cols
            comp = [(0, self.row_labels[i]) for i in range(nr) if (rows >> i) & 1]
            comp += [(1, self.col_labels[j]) for j in range(self.ncols) if (cols >> j) & 1]
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_c4_free(self) -> bool:
        rows = self.adj
        for i in range(len(rows)):
            for j in range(i + 1, len(rows)):
                if (rows[i] & rows[j]).bit_count() >= 2:
                    return False
        return True

    def find_c4(self) -> Optional[tuple[Vertex, Vertex, Vertex, Vertex]]:
        """Some 4-cycle (row a, col b, row c, col d), lexicographically least."""
        rows = self.adj
        for i in range(len(rows)):
            for j in range(i + 1, len(rows)):
                common = rows[i] & rows[j]
                if common.bit_count() >= 2:
                    b = (common & -common).bit_length() - 1
                    rest = common & ~(1 << b)
                    d = (rest & -rest).bit_length() - 1
                    return (self.vertex(0, i), self.vertex(1, b), self.vertex(0, j), self.vertex(1, d))
        return None

    def girth(self) -> Optional[int]:
        """Length of a shortest cycle, or None for a forest."""
        best = None
        verts = self.vertices()
        for s in verts:
            dist = {s: 0}
            parent = {s: None}
            queue = [s]
            for x in queue:
                for y in self.neighbors(x):
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        parent[y] = x
                        queue.append(y)
                    elif parent[x] != y:
                        c = dist[x] + dist[y] + 1
                        if best is None or c < best:
                            best = c
        return best

    def is_cycle(self) -> bool:
        if self.v() < 4 or not self.is_connected():
            return False
        return all(d == 2 for d in self.degrees().values())

    def canonical_form(self) -> bytes:
        return canonical_form(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (self.adj, self.ncols, self.row_labels, self.col_labels) == (
            other.adj, other.ncols, other.row_labels, other.col_labels)

    def __hash__(self) -> int:
        return hash((self.adj, self.ncols, self.row_labels, self.col_labels))

    def __repr__(self) -> str:
        return f"BipartiteGraph(rows={len(self.adj)}, cols={self.ncols}, e={self.e()})"


# ---------------------------------------------------------------------------
# canonical labelling (individualization / refinement with orbit pruning)


def _refine(cells: list[list[int]], nbr: list[int]) -> list[list[int]]:
    cells = [list(c) for c in cells]
    changed = True
    while changed:
        changed = False
        masks = []
        for c in cells:
            m = 0
            for v in c:
                m |= 1 << v
            masks.append(m)
        for wi in range(len(cells)):
            w = masks[wi]
            out = []
            split = False
            for c in cells:
                if len(c) == 1:
                    out.append(c)
                    continue
                counts = {}
                for v in c:
                    counts.setdefault((nbr[v] & w).bit_count(), []).append(v)
                if len(counts) == 1:
                    out.append(c)
                else:
                    split = True
                    for key in sorted(counts):
                        out.append(counts[key])
            if split:
                cells = out
                changed = True
                break
    return cells


def _certificate(order: list[int], nr: int, nbr: list[int]) -> tuple[int, ...]:
    # order lists row vertices first (ids < nr) then column vertices
    colpos = {v: p for p, v in enumerate(order[nr:])}
    cert = []
    for v in order[:nr]:
        bits = 0
        m = nbr[v]
        while m:
            low = m & -m
            bits |= 1 << colpos[low.bit_length() - 1]
            m ^= low
        cert.append(bits)
    return tuple(cert)


def _canon_labelling(adj: Sequence[int], ncols: int) -> tuple[tuple[int, ...], list[int]]:
    """Canonical row-tuple and vertex order for a bipartite graph.

    Internal vertex ids: rows 0..nr-1, columns nr..nr+ncols-1.  Minimal
    certificate over the search tree; automorphisms found at equal leaves prune
    sibling branches lying in the same orbit of the pointwise stabilizer.
    """
    nr = len(adj)
    nv = nr + ncols
    nbr = [0] * nv
    for i, r in enumerate(adj):
        nbr[i] = r << nr
        m = r
        while m:
            low = m & -m
            nbr[nr + low.bit_length() - 1] |= 1 << i
            m ^= low
    init = [c for c in (list(range(nr)), list(range(nr, nv))) if c]
    best: list = [None, None]  # certificate, order
    first: list = [None, None]
    autos: list[list[int]] = []

    def orbits_fixing(prefix: list[int]) -> list[int]:
        parent = list(range(nv))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for g in autos:
            if all(g[p] == p for p in prefix):
                for a in range(nv):
                    ra, rb = find(a), find(g[a])
                    if ra != rb:
                        parent[ra] = rb
        return [find(a) for a in range(nv)]

    def search(cells: list[list[int]], prefix: list[int]):
        cells = _refine(cells, nbr)
        if all(len(c) == 1 for c in cells):
            order = [c[0] for c in cells]
            cert = _certificate(order, nr, nbr)
            if first[0] is None:
                first[0], first[1] = cert, order
            elif cert == first[0]:
                autos.append(_perm_between(first[1], order, nv))
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, order
            elif cert == best[0] and best[1] is not first[1]:
                autos.append(_perm_between(best[1], order, nv))
            return
        ti = next(i for i, c in enumerate(cells) if len(c) > 1)
        target = cells[ti]
        tried: list[int] = []
        for v in target:
            if tried:
                orb = orbits_fixing(prefix)
                if any(orb[v] == orb[t] for t in tried):
                    continue
            tried.append(v)
            rest = [u for u in target if u != v]
            search(cells[:ti] + [[v], rest] + cells[ti + 1:], prefix + [v])

    search(init, [])
    return best[0], best[1]


def _perm_between(a: list[int], b: list[int], nv: int) -> list[int]:
    g = [0] * nv
    for x, y in zip(a, b):
        g[x] = y
    return g


def canonical_rows(adj: Sequence[int], ncols: int) -> tuple[int, ...]:
    """Canonical form under row and column permutations (sides fixed)."""
    return _canon_labelling(adj, ncols)[0]


def _encode(nr: int, ncols: int, cert: tuple[int, ...]) -> bytes:
    body = ",".join(format(r, "x") for r in cert)
    return f"{nr}x{ncols}:{body}".encode()


def canonical_form_labelled(g: BipartiteGraph) -> bytes:
    """Canonical string with the two sides kept distinct."""
    return _encode(len(g.adj), g.ncols, canonical_rows(g.adj, g.ncols))


def canonical_form(g: BipartiteGraph) -> bytes:
    """Canonical string, invariant under relabelling and under side swap."""
    a = canonical_form_labelled(g)
    if len(g.adj) != g.ncols:
        return a
    b = canonical_form_labelled(g.side_swap())
    return min(a, b, key=lambda s: (len(s), s))


def from_canonical(s: bytes) -> BipartiteGraph:
    head, _, body = s.decode().partition(":")
    nr, ncols = (int(t) for t in head.split("x"))
    rows = tuple(int(t, 16) for t in body.split(",")) if body else ()
    if len(rows) != nr:
        raise ValueError("corrupt canonical string")
    return BipartiteGraph(rows, ncols)


# ---------------------------------------------------------------------------
# named small graphs


def cycle(length: int) -> BipartiteGraph:
    """The cycle C_length (length even, at least 4) as a bipartite graph."""
    if length < 4 or length % 2:
        raise ValueError("bipartite cycles have even length >= 4")
    n = length // 2
    # row i ~ columns i and i+1 (mod n)
    return BipartiteGraph(tuple((1 << i) | (1 << ((i + 1) % n)) for i in range(n)), n)


def graph_j() -> BipartiteGraph:
    """Hexagon with a two-vertex path joining two opposite corners."""
    # hexagon h0..h5, path h0 - a - b - h3; rows: h0, h2, h4, b
    return BipartiteGraph.from_edges(
        ["h0", "h2", "h4", "b"], ["h1", "h3", "h5", "a"],
        [("h0", "h1"), ("h2", "h1"), ("h2", "h3"), ("h4", "h3"), ("h4", "h5"), ("h0", "h5"),
         ("h0", "a"), ("b", "a"), ("b", "h3")])


def named_graph(which: str) -> BipartiteGraph:
    which = which.upper()
    if which == "K2":
        return BipartiteGraph((1,), 1)
    if which == "C6":
        return cycle(6)
    if which == "J":
        return graph_j()
    raise ValueError(f"unknown named graph {which!r}")


_NAMED_FORMS: dict[str, tuple[int, int, bytes]] = {}


def is_named(g: BipartiteGraph, which: str) -> bool:
    which = which.upper()
    if which not in _NAMED_FORMS:
        h = named_graph(which)
        _NAMED_FORMS[which] = (h.v(), h.e(), canonical_form(h))
    v, e, form = _NAMED_FORMS[which]
    if g.v() != v or g.e() != e:
        return False
    return canonical_form(g) == form


# ---------------------------------------------------------------------------
# degree-2 configurations


class VertexKind(enum.Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    NEITHER = "Neither"


@dataclass(frozen=True)
class VertexClass:
    kind: VertexKind
    y1: Optional[Vertex] = None
    y2: Optional[Vertex] = None
    x1: Optional[Vertex] = None

    def __bool__(self) -> bool:
        return self.kind is not VertexKind.NEITHER


NEITHER = VertexClass(VertexKind.NEITHER)


def classify_vertex(g: BipartiteGraph, x: Vertex) -> VertexClass:
    """Type I: degree 2 with both neighbours of degree 3.

    Type II: degree 2, neighbour ``y1`` of degree 2 whose other neighbour
    ``x1`` has degree 3, other neighbour ``y2`` of degree 3, and ``y2`` not
    adjacent to ``x1``.
    """
    if g.degree(x) != 2:
        return NEITHER
    a, b = g.neighbors(x)
    da, db = g.degree(a), g.degree(b)
    if da == 3 and db == 3:
        return VertexClass(VertexKind.TYPE_I, a, b)
    if {da, db} == {2, 3}:
        y1, y2 = (a, b) if da == 2 else (b, a)
        x1 = next(w for w in g.neighbors(y1) if w != x)
        if g.degree(x1) == 3 and not g.has_edge(y2, x1):
            return VertexClass(VertexKind.TYPE_II, y1, y2, x1)
    return NEITHER


def find_deg2_path3(g: BipartiteGraph) -> Optional[tuple[Vertex, Vertex, Vertex]]:
    """Least triple (u, v1, u1) of consecutive degree-2 vertices, v1 in the middle."""
    deg = g.degrees()
    best = None
    for v1, d in deg.items():
        if d != 2:
            continue
        a, b = g.neighbors(v1)
        if deg[a] != 2 or deg[b] != 2:
            continue
        if g.order_key(b) < g.order_key(a):
            a, b = b, a
        key = (g.order_key(a), g.order_key(v1), g.order_key(b))
        if best is None or key < best[0]:
            best = (key, (a, v1, b))
    return None if best is None else best[1]


# ---------------------------------------------------------------------------
# graph6 and file input


def _g6_n(data: bytes) -> tuple[int, int]:
    if data[0] != 126:
        return data[0] - 63, 1
    if data[1] != 126:
        return ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63), 4
    n = 0
    for c in data[2:8]:
        n = (n << 6) | (c - 63)
    return n, 8


def parse_graph6(text: str, n: Optional[int] = None) -> BipartiteGraph:
    """Parse a graph6 string whose first ``n`` vertices are the rows.

    ``text`` may carry a header line ``n=<int>``; otherwise ``n`` is required.
    """
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if lines and lines[0].startswith("n="):
        try:
            n = int(lines[0][2:])
        except ValueError:
            raise MalformedInput(f"bad header {lines[0]!r}", 1, 3) from None
        lines = lines[1:]
        lineno = 2
    else:
        lineno = 1
    if n is None:
        raise MalformedInput("graph6 input needs an 'n=<int>' header", 1, 1)
    if len(lines) != 1:
        raise MalformedInput("expected exactly one graph6 line", lineno, 1)
    s = lines[0]
    if s.startswith(">>graph6<<"):
        s = s[10:]
    data = s.encode()
    if any(c < 63 or c > 126 for c in data):
        raise MalformedInput("graph6 characters must lie in 63..126", lineno, 1)
    total, off = _g6_n(data)
    if total != 2 * n:
        raise MalformedInput(f"graph has {total} vertices, header says 2*{n}", lineno, 1)
    bits = []
    for c in data[off:]:
        v = c - 63
        bits.extend((v >> (5 - t)) & 1 for t in range(6))
    need = total * (total - 1) // 2
    if len(bits) < need:
        raise MalformedInput("graph6 string too short", lineno, len(s))
    adj = [0] * n
    idx = 0
    for j in range(1, total):
        for i in range(j):
            if bits[idx]:
                if (i < n) == (j < n):
                    raise MalformedInput(f"edge {i}-{j} lies inside one side", lineno, 1)
                adj[i] |= 1 << (j - n)
            idx += 1
    return BipartiteGraph(tuple(adj), n)


def format_graph6(g: BipartiteGraph, header: bool = True) -> str:
    n = g.n
    total = 2 * n
    bits = []
    for j in range(1, total):
        for i in range(j):
            bits.append(1 if (i < n <= j and (g.adj[i] >> (j - n)) & 1) else 0)
    while len(bits) % 6:
        bits.append(0)
    if total <= 62:
        out = [total + 63]
    else:
        out = [126, ((total >> 12) & 63) + 63, ((total >> 6) & 63) + 63, (total & 63) + 63]
    for t in range(0, len(bits), 6):
        v = 0
        for b in bits[t:t + 6]:
            v = (v << 1) | b
        out.append(v + 63)
    s = bytes(out).decode()
    return f"n={n}\n{s}\n" if header else s


def read_graph(text: str) -> BipartiteGraph:
    """Bi-adjacency text or headered graph6, detected from the first line."""
    first = text.lstrip().split("\n", 1)[0].strip()
    if first.startswith("n="):
        return parse_graph6(text)
    return BipartiteGraph.from_biadjacency(parse_text(text))
