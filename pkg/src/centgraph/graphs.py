"""Undirected simple graphs on ``0..n-1`` with Python-int bitset rows.

Covers components and diameters, closed-twin quotients, subordinate and
independent vertices, isomorphism search, and DOT/JSON export.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

ISO_LIMIT = 256


class GraphError(ValueError):
    pass


class IsomorphismLimitError(GraphError):
    pass


def _bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class SimpleGraph:
    """Immutable simple graph.  ``adj[v]`` is the bitset of neighbors of ``v``."""

    __slots__ = ("n", "adj", "labels")

    def __init__(self, adj: Sequence[int], labels: Sequence[str] | None = None):
        adj = tuple(int(a) for a in adj)
        n = len(adj)
        full = (1 << n) - 1
        for v, a in enumerate(adj):
            if a >> v & 1:
                raise GraphError(f"loop at vertex {v}")
            if a & ~full:
                raise GraphError(f"vertex {v} has a neighbor outside 0..{n - 1}")
            for w in _bits(a):
                if not adj[w] >> v & 1:
                    raise GraphError(f"edge {v}-{w} is not symmetric")
        if labels is None:
            labels = [str(v) for v in range(n)]
        if len(labels) != n:
            raise GraphError("label count does not match vertex count")
        self.n = n
        self.adj = adj
        self.labels = tuple(labels)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None) -> "SimpleGraph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(adj, labels)

    @classmethod
    def from_matrix(cls, m, labels: Sequence[str] | None = None) -> "SimpleGraph":
        """From a square boolean adjacency matrix (numpy array)."""
        import numpy as np

        m = np.asarray(m, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise GraphError("adjacency matrix must be square")
        if m.diagonal().any():
            raise GraphError(f"loop at vertex {int(np.argmax(m.diagonal()))}")
        if not np.array_equal(m, m.T):
            raise GraphError("adjacency matrix is not symmetric")
        packed = np.packbits(m, axis=1, bitorder="little")
        g = object.__new__(cls)
        g.n = m.shape[0]
        g.adj = tuple(int.from_bytes(row.tobytes(), "little") for row in packed)
        g.labels = tuple(labels) if labels is not None else tuple(str(v) for v in range(g.n))
        if len(g.labels) != g.n:
            raise GraphError("label count does not match vertex count")
        return g

    @classmethod
    def empty(cls, n: int) -> "SimpleGraph":
        return cls([0] * n)

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        full = (1 << n) - 1
        return cls([full ^ (1 << v) for v in range(n)])

    @classmethod
    def path(cls, n: int) -> "SimpleGraph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.edge_count})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SimpleGraph) and self.adj == other.adj

    def __hash__(self) -> int:
        return hash(self.adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def closed(self, v: int) -> int:
        return self.adj[v] | (1 << v)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    @property
    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]

    def degree_sequence(self) -> list[int]:
        return sorted((a.bit_count() for a in self.adj), reverse=True)

    def induced(self, vertices: Sequence[int]) -> "SimpleGraph":
        """Subgraph on ``vertices``, renumbered in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        mask = sum(1 << v for v in vertices)
        adj = [sum(1 << pos[w] for w in _bits(self.adj[v] & mask)) for v in vertices]
        return SimpleGraph(adj, [self.labels[v] for v in vertices])

    def distances_from(self, s: int) -> dict[int, int]:
        dist = {s: 0}
        seen = frontier = 1 << s
        d = 0
        while frontier:
            d += 1
            nxt = 0
            for v in _bits(frontier):
                nxt |= self.adj[v]
            frontier = nxt & ~seen
            seen |= frontier
            for v in _bits(frontier):
                dist[v] = d
        return dist

    def eccentricity(self, s: int) -> int:
        seen = frontier = 1 << s
        d = 0
        while True:
            nxt = 0
            for v in _bits(frontier):
                nxt |= self.adj[v]
            frontier = nxt & ~seen
            if not frontier:
                return d
            seen |= frontier
            d += 1


# ---------------------------------------------------------------- vertex status

@dataclass(frozen=True)
class VertexStatus:
    kind: str                                   # isolated | subordinate | independent
    dominators: tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.kind == "subordinate":
            return f"subordinateTo({','.join(map(str, self.dominators))})"
        return self.kind


def classify_vertex(g: SimpleGraph, v: int) -> VertexStatus:
    """Isolated, independent, or subordinate to the neighbors whose closed
    neighborhood strictly contains that of ``v``."""
    if not g.adj[v]:
        return VertexStatus("isolated")
    cv = g.closed(v)
    doms = tuple(w for w in _bits(g.adj[v]) if g.closed(w) & cv == cv and g.closed(w) != cv)
    return VertexStatus("subordinate", doms) if doms else VertexStatus("independent")


# ---------------------------------------------------------------- components

@dataclass(frozen=True)
class ComponentReport:
    component_id: int
    vertices: frozenset
    diameter: int
    is_complete: bool
    vertex_kinds: Mapping[int, VertexStatus] = field(compare=False)

    @property
    def is_trivial(self) -> bool:
        return len(self.vertices) == 1

    def __post_init__(self):
        assert self.is_complete == (self.diameter <= 1)
        assert (len(self.vertices) == 1) == (self.diameter == 0)


def component_vertex_sets(g: SimpleGraph) -> list[list[int]]:
    """Connected components, each sorted, ordered by least vertex."""
    seen = 0
    out = []
    for s in range(g.n):
        if seen >> s & 1:
            continue
        comp = frontier = 1 << s
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        out.append(list(_bits(comp)))
    return out


def component_diameter(g: SimpleGraph, vertices: Sequence[int]) -> int:
    # vertices with equal closed neighborhoods have equal eccentricity
    best = 0
    done: set[int] = set()
    for v in vertices:
        key = g.closed(v)
        if key in done:
            continue
        done.add(key)
        best = max(best, g.eccentricity(v))
    return best


def vertex_statuses(g: SimpleGraph, t: "TwinPartition | None" = None) -> list[VertexStatus]:
    """:func:`classify_vertex` for every vertex, computed once per closed-twin class.

    Twins share their closed neighborhood, so they share their status.
    """
    if t is None:
        t = closed_twin_partition(g)
    reps = [c[0] for c in t.classes]
    keys = [g.closed(r) for r in reps]
    masks = [sum(1 << v for v in c) for c in t.classes]
    out: list[VertexStatus] = [VertexStatus("isolated")] * g.n
    for i, r in enumerate(reps):
        if not g.adj[r]:
            continue
        k = keys[i]
        doms = 0
        for j, kj in enumerate(keys):
            if j != i and g.adj[r] >> reps[j] & 1 and kj & k == k:
                doms |= masks[j]
        st = VertexStatus("subordinate", tuple(_bits(doms))) if doms else VertexStatus("independent")
        for v in t.classes[i]:
            out[v] = st
    return out


def components(g: SimpleGraph) -> list[ComponentReport]:
    t = closed_twin_partition(g)
    status = vertex_statuses(g, t)
    reports = []
    for cid, verts in enumerate(component_vertex_sets(g)):
        diam = component_diameter(g, verts)
        kinds = {v: status[v] for v in verts}
        reports.append(ComponentReport(cid, frozenset(verts), diam, diam <= 1, kinds))
    return reports


def nontrivial_components(g: SimpleGraph) -> list[ComponentReport]:
    return [c for c in components(g) if not c.is_trivial]


# ---------------------------------------------------------------- closed twins

@dataclass(frozen=True)
class TwinPartition:
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.classes)

    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]


def closed_twin_partition(g: SimpleGraph) -> TwinPartition:
    """Classes of vertices sharing the same closed neighborhood."""
    by_key: dict[int, list[int]] = {}
    for v in range(g.n):
        by_key.setdefault(g.closed(v), []).append(v)
    classes = sorted((tuple(c) for c in by_key.values()), key=lambda c: c[0])
    class_of = [0] * g.n
    for i, cls in enumerate(classes):
        for v in cls:
            class_of[v] = i
        mask = sum(1 << v for v in cls)
        for v in cls:
            # equal closed neighborhoods force pairwise adjacency
            assert g.closed(v) & mask == mask
    return TwinPartition(tuple(classes), tuple(class_of))


def quotient_by_twins(g: SimpleGraph, t: TwinPartition | None = None) -> SimpleGraph:
    """Graph on twin classes; labels are those of each class's least vertex."""
    if t is None:
        t = closed_twin_partition(g)
    if sorted(v for c in t.classes for v in c) != list(range(g.n)):
        raise GraphError("partition does not cover the vertex set")
    keys = [g.closed(c[0]) for c in t.classes]
    if len(set(keys)) != len(keys):
        raise GraphError("two classes share a closed neighborhood; partition is too fine")
    for i, cls in enumerate(t.classes):
        for v in cls:
            if g.closed(v) != keys[i]:
                raise GraphError(f"vertices {cls[0]} and {v} are in one class but are not closed twins")
    # equal closed neighborhoods make adjacency between classes representative independent
    adj = []
    for i, cls in enumerate(t.classes):
        row = 0
        for w in _bits(g.adj[cls[0]]):
            if t.class_of[w] != i:
                row |= 1 << t.class_of[w]
        adj.append(row)
    return SimpleGraph(adj, [g.labels[c[0]] for c in t.classes])


# ---------------------------------------------------------------- isomorphism

def _refine(adjs: list[tuple[int, ...]], colors: list[list[int]]) -> list[list[int]]:
    """Joint colour refinement on several graphs so colour ids are comparable."""
    while True:
        sigs = []
        for adj, col in zip(adjs, colors):
            sigs.append([(col[v], tuple(sorted(col[w] for w in _bits(adj[v])))) for v in range(len(adj))])
        palette = {s: i for i, s in enumerate(sorted({s for ss in sigs for s in ss}))}
        new = [[palette[s] for s in ss] for ss in sigs]
        if all(len(set(n)) == len(set(c)) for n, c in zip(new, colors)):
            return new
        colors = new


def _histogram(col: list[int]) -> dict[int, int]:
    h: dict[int, int] = {}
    for c in col:
        h[c] = h.get(c, 0) + 1
    return h


def _iso_colored(adj1: tuple[int, ...], adj2: tuple[int, ...], col1: list[int], col2: list[int]) -> list[int] | None:
    """Colour-preserving isomorphism between two graphs, or None.  Complete search."""
    col1, col2 = _refine([adj1, adj2], [col1, col2])
    if _histogram(col1) != _histogram(col2):
        return None
    n = len(adj1)
    counts = _histogram(col1)
    if all(counts[c] == 1 for c in col1):
        where = {c: v for v, c in enumerate(col2)}
        f = [where[c] for c in col1]
        for v in range(n):
            img = 0
            for w in _bits(adj1[v]):
                img |= 1 << f[w]
            if img != adj2[f[v]]:
                return None
        return f
    target = min((c for c in counts if counts[c] > 1), key=lambda c: (counts[c], c))
    v = col1.index(target)
    fresh = max(max(col1), max(col2)) + 1
    for w in (u for u in range(n) if col2[u] == target):
        c1, c2 = list(col1), list(col2)
        c1[v] = c2[w] = fresh
        f = _iso_colored(adj1, adj2, c1, c2)
        if f is not None:
            return f
    return None


def _component_invariant(adj: tuple[int, ...], weights: list[int]) -> tuple:
    return (len(adj), sum(weights), tuple(sorted((weights[v], adj[v].bit_count()) for v in range(len(adj)))))


def isomorphic(g1: SimpleGraph, g2: SimpleGraph, limit: int = ISO_LIMIT) -> dict[int, int] | None:
    """A witness isomorphism ``g1 -> g2`` or ``None``.

    Both graphs are reduced to their closed-twin quotients weighted by class
    size; those are matched component by component with colour refinement and
    individualization, which is complete.  ``limit`` bounds each quotient
    component.
    """
    if g1.n != g2.n or g1.edge_count != g2.edge_count or g1.degree_sequence() != g2.degree_sequence():
        return None
    t1, t2 = closed_twin_partition(g1), closed_twin_partition(g2)
    if sorted(t1.sizes()) != sorted(t2.sizes()):
        return None
    q1, q2 = quotient_by_twins(g1, t1), quotient_by_twins(g2, t2)
    w1, w2 = t1.sizes(), t2.sizes()

    def pieces(q, w):
        out = []
        for verts in component_vertex_sets(q):
            if len(verts) > limit:
                raise IsomorphismLimitError(f"quotient component of {len(verts)} vertices exceeds limit {limit}")
            sub = q.induced(verts)
            ws = [w[v] for v in verts]
            out.append((verts, sub.adj, ws, _component_invariant(sub.adj, ws)))
        return out

    p1, p2 = pieces(q1, w1), pieces(q2, w2)
    if sorted(p[3] for p in p1) != sorted(p[3] for p in p2):
        return None
    used = [False] * len(p2)
    qmap: dict[int, int] = {}
    for verts1, adj1, ws1, inv1 in p1:
        # isomorphism is an equivalence, so a greedy choice never blocks a later match
        for k, (verts2, adj2, ws2, inv2) in enumerate(p2):
            if used[k] or inv2 != inv1:
                continue
            f = _iso_colored(adj1, adj2, list(ws1), list(ws2))
            if f is not None:
                used[k] = True
                for i, v in enumerate(verts1):
                    qmap[v] = verts2[f[i]]
                break
        else:
            return None
    mapping = {}
    for c1, c2 in qmap.items():
        for a, b in zip(t1.classes[c1], t2.classes[c2]):
            mapping[a] = b
    if not is_isomorphism(g1, g2, mapping):
        raise AssertionError("isomorphism search produced an invalid map")
    return mapping


def is_isomorphism(g1: SimpleGraph, g2: SimpleGraph, f: Mapping[int, int]) -> bool:
    if g1.n != g2.n or sorted(f) != list(range(g1.n)) or sorted(f.values()) != list(range(g2.n)):
        return False
    for v in range(g1.n):
        img = 0
        for w in _bits(g1.adj[v]):
            img |= 1 << f[w]
        if img != g2.adj[f[v]]:
            return False
    return True


def extend_iso_by_twin_permutations(g1: SimpleGraph, g2: SimpleGraph, f: Mapping[int, int],
                                    perms: Mapping[int, int]) -> dict[int, int]:
    """``x -> f(sigma(x))`` where ``sigma`` permutes vertices inside closed-twin classes of ``g1``."""
    t = closed_twin_partition(g1)
    sigma = {v: v for v in range(g1.n)}
    for v, w in perms.items():
        if t.class_of[v] != t.class_of[w]:
            raise GraphError(f"permutation moves {v} to {w} across twin classes")
        sigma[v] = w
    if sorted(sigma.values()) != list(range(g1.n)):
        raise GraphError("twin permutations do not form a bijection")
    out = {x: f[sigma[x]] for x in range(g1.n)}
    if not is_isomorphism(g1, g2, out):
        raise AssertionError("twin permutation broke the isomorphism")
    return out


# ---------------------------------------------------------------- export

_PALETTE = ("black", "red", "blue", "darkgreen", "purple", "orange", "brown", "teal", "magenta", "gold")
_SHAPES = ("box", "diamond", "hexagon", "triangle", "octagon", "house", "trapezium", "pentagon")


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: SimpleGraph, name: str = "G", twin_clusters: bool = False) -> str:
    reports = components(g)
    comp_of = {v: c.component_id for c in reports for v in c.vertices}
    shape = {}
    lines = [f"graph {_quote(name)} {{", "  node [shape=ellipse];"]
    if twin_clusters:
        t = closed_twin_partition(g)
        k = 0
        for cls in t.classes:
            if len(cls) < 2:
                continue
            lines.append(f"  subgraph cluster_twin{k} {{")
            lines.append(f"    label={_quote('twins ' + str(k))};")
            for v in cls:
                shape[v] = _SHAPES[k % len(_SHAPES)]
                lines.append(f"    n{v};")
            lines.append("  }")
            k += 1
    for v in range(g.n):
        c = comp_of[v]
        attrs = [f"label={_quote(g.labels[v])}", f"color={_PALETTE[c % len(_PALETTE)]}",
                 f"class={_quote('component' + str(c))}"]
        if v in shape:
            attrs.append(f"shape={shape[v]}")
        lines.append(f"  n{v} [{', '.join(attrs)}];")
    for u, v in g.edges():
        lines.append(f"  n{u} -- n{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_summary(g: SimpleGraph) -> dict:
    reports = components(g)
    comp_of = {v: c.component_id for c in reports for v in c.vertices}
    kinds = {v: c.vertex_kinds[v] for c in reports for v in c.vertices}
    return {
        "vertices": [
            {"id": v, "label": g.labels[v], "kind": str(kinds[v]), "component": comp_of[v]}
            for v in range(g.n)
        ],
        "edges": [[u, v] for u, v in g.edges()],
        "components": [
            {"id": c.component_id, "size": len(c.vertices), "diameter": c.diameter, "complete": c.is_complete}
            for c in reports
        ],
    }


def to_json(g: SimpleGraph, extra: Mapping | None = None) -> str:
    doc = graph_summary(g)
    if extra:
        doc.update(extra)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
