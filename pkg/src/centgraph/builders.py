"""Commuting graph, transversal graph and centralizer graph of a group.

``verify_correspondence`` ties the three together through explicit maps:
twin classes of the commuting graph go to ``Z(g)``, and a transversal
element goes to its own twin class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .fpclass2 import (
    Class2Group,
    centralizer_space,
    expand_to_table,
    transversal_vertices,
    vector_index,
    z_space,
)
from .graphs import (
    SimpleGraph,
    TwinPartition,
    closed_twin_partition,
    component_diameter,
    component_vertex_sets,
    quotient_by_twins,
)
from .groups import (
    CentralizerFamily,
    GroupError,
    GroupTable,
    centralizer,
    center,
    distinct_centralizer_family,
    z_of,
)


class AbelianGroupError(GroupError):
    """Raised for abelian input, which has no noncentral elements."""


@dataclass
class LabeledGroupGraph:
    graph: SimpleGraph
    kind: str                       # commuting | star | centralizer
    provenance: dict[str, Any]
    payload: list[Any]

    @property
    def n(self) -> int:
        return self.graph.n

    def label(self, v: int) -> str:
        return self.graph.labels[v]


def _reject_abelian(G: GroupTable) -> None:
    if G.is_abelian():
        raise AbelianGroupError(f"{G.name} is abelian; the graph would have no vertices")


def commuting_graph(G: GroupTable) -> LabeledGroupGraph:
    """Noncentral elements, joined when they commute."""
    _reject_abelian(G)
    ids = np.flatnonzero(~G.center_mask)
    m = G.commute[np.ix_(ids, ids)].copy()
    np.fill_diagonal(m, False)
    g = SimpleGraph.from_matrix(m, [f"g{int(x)}" for x in ids])
    assert g.n == G.order - int(G.center_mask.sum())
    return LabeledGroupGraph(g, "commuting", {"group": G.name}, [int(x) for x in ids])


def _coset_reps(G: GroupTable) -> tuple[np.ndarray, np.ndarray]:
    """For each element, the (least, greatest) id of its coset of Z(G)."""
    z = np.flatnonzero(G.center_mask)
    cos = G.table[:, z]
    return cos.min(axis=1), cos.max(axis=1)


def _star_from(G: GroupTable, transversal: np.ndarray) -> np.ndarray:
    m = G.commute[np.ix_(transversal, transversal)].copy()
    np.fill_diagonal(m, False)
    return m


def star_graph(G: GroupTable, check_transversal: bool = True) -> LabeledGroupGraph:
    """One vertex per noncentral coset of Z(G), represented by its least element.

    With ``check_transversal`` the graph is rebuilt from the greatest element of
    each coset and must come out identical.
    """
    _reject_abelian(G)
    lo, hi = _coset_reps(G)
    reps = np.unique(lo[~G.center_mask])
    m = _star_from(G, reps)
    if check_transversal:
        alt = hi[reps]
        if not np.array_equal(lo[alt], reps) or not np.array_equal(m, _star_from(G, alt)):
            raise AssertionError(f"transversal graph of {G.name} depends on the transversal")
    g = SimpleGraph.from_matrix(m, [f"g{int(x)}" for x in reps])
    assert g.n == G.order // int(G.center_mask.sum()) - 1
    return LabeledGroupGraph(g, "star", {"group": G.name, "transversal": "least"}, [int(x) for x in reps])


@dataclass(frozen=True)
class TableVertex:
    """A vertex of the centralizer graph of a table group."""

    center: Any          # Subgroup Z(g)
    centralizer: Any     # Subgroup C_G(g)
    representative: int


def centralizer_graph(G: GroupTable | Class2Group, family: CentralizerFamily | None = None) -> LabeledGroupGraph:
    """Distinct ``Z(g)``, with ``Z1 -- Z2`` when ``Z2 <= C_G(Z1)``."""
    if isinstance(G, Class2Group):
        return _class2_centralizer_graph(G)
    _reject_abelian(G)
    fam = family or distinct_centralizer_family(G)
    k = len(fam)
    zmask = np.zeros((k, G.order), dtype=bool)
    cz = np.zeros((k, G.order), dtype=bool)
    for i, Z in enumerate(fam.centers):
        zmask[i] = Z.mask
        cz[i] = G.commute[:, Z.ids].all(axis=1)          # C_G(Z_i)
    # Z_j <= C_G(Z_i)
    m = ~(zmask[None, :, :] & ~cz[:, None, :]).any(axis=2)
    np.fill_diagonal(m, False)
    labels = [f"Z(g{r})" for r in fam.representatives]
    payload = [TableVertex(z, c, r) for z, c, r in zip(fam.centers, fam.centralizers, fam.representatives)]
    return LabeledGroupGraph(SimpleGraph.from_matrix(m, labels), "centralizer", {"group": G.name}, payload)


def _class2_centralizer_graph(G: Class2Group) -> LabeledGroupGraph:
    from .fpclass2 import centralizer_of_space

    if not G.edges:
        raise AbelianGroupError(f"{G.name} is abelian; the graph would have no vertices")
    verts = transversal_vertices(G)
    k = len(verts)
    cz = [centralizer_of_space(G, v.center) for v in verts]
    m = np.zeros((k, k), dtype=bool)
    for i in range(k):
        for j in range(k):
            if i != j:
                m[i, j] = verts[j].center <= cz[i]
    labels = [v.label for v in verts]
    prov = {"group": G.name, "p": G.p, "n": G.n, "edges": str(G.s)}
    return LabeledGroupGraph(SimpleGraph.from_matrix(m, labels), "centralizer", prov, verts)


# ---------------------------------------------------------------- correspondence

@dataclass
class CorrespondenceReport:
    group: str
    failures: list[str] = field(default_factory=list)
    sizes: dict[str, int] = field(default_factory=dict)
    checks: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)


def _check_quotient_map(rep: CorrespondenceReport, name: str, src: SimpleGraph, dst: SimpleGraph,
                        f: dict[int, int]) -> None:
    if sorted(f.values()) != list(range(dst.n)) or len(f) != src.n:
        rep.fail(f"{name}: map is not a bijection ({src.n} -> {dst.n} vertices)")
        return
    for u in range(src.n):
        for v in range(u + 1, src.n):
            if src.has_edge(u, v) != dst.has_edge(f[u], f[v]):
                rep.fail(f"{name}: adjacency differs at ({src.labels[u]}, {src.labels[v]})")
                return
    rep.checks.append(name)


def check_component_bijection(g: SimpleGraph, t: TwinPartition, q: SimpleGraph) -> list[str]:
    """Components of ``g`` and ``g/~`` correspond; complete ones collapse to points,
    the rest keep their diameter."""
    errors = []
    qcomps = {frozenset(c): c for c in component_vertex_sets(q)}
    for comp in component_vertex_sets(g):
        image = frozenset(t.class_of[v] for v in comp)
        if image not in qcomps:
            errors.append(f"component of {g.labels[comp[0]]} does not map onto a component of the quotient")
            continue
        d = component_diameter(g, comp)
        dq = component_diameter(q, qcomps[image])
        if d <= 1 and len(image) != 1:
            errors.append(f"complete component of {g.labels[comp[0]]} maps to {len(image)} vertices")
        if d > 1 and d != dq:
            errors.append(f"component of {g.labels[comp[0]]}: diameter {d} becomes {dq}")
    if len(qcomps) != len(component_vertex_sets(g)):
        errors.append("component counts differ")
    return errors


def _verify_table(G: GroupTable, rep: CorrespondenceReport, exhaustive_limit: int = 128) -> None:
    fam = distinct_centralizer_family(G)
    c = commuting_graph(G)
    s = star_graph(G)
    z = centralizer_graph(G, fam)
    tc, ts = closed_twin_partition(c.graph), closed_twin_partition(s.graph)
    qc, qs = quotient_by_twins(c.graph, tc), quotient_by_twins(s.graph, ts)
    rep.sizes.update(commuting=c.n, star=s.n, centralizer=z.n, commuting_quotient=qc.n, star_quotient=qs.n)

    # [g] -> Z(g), read through the centralizer class of each member
    to_z: dict[int, int] = {}
    for i, cls in enumerate(tc.classes):
        images = {fam.class_of[c.payload[v]] for v in cls}
        if len(images) != 1:
            rep.fail(f"twin class of {c.graph.labels[cls[0]]} meets {len(images)} centralizers")
            return
        to_z[i] = images.pop()
    _check_quotient_map(rep, "commuting/~ -> centralizer", qc, z.graph, to_z)

    # transversal element x -> its class in the commuting graph
    pos = {g: v for v, g in enumerate(c.payload)}
    to_c: dict[int, int] = {}
    for i, cls in enumerate(ts.classes):
        images = {tc.class_of[pos[s.payload[v]]] for v in cls}
        if len(images) != 1:
            rep.fail(f"twin class of {s.graph.labels[cls[0]]} splits in the commuting graph")
            return
        to_c[i] = images.pop()
    _check_quotient_map(rep, "star/~ -> commuting/~", qs, qc, to_c)

    for name, g, t, q in (("commuting", c.graph, tc, qc), ("star", s.graph, ts, qs)):
        errs = check_component_bijection(g, t, q)
        rep.failures.extend(f"{name}: {e}" for e in errs)
        if not errs:
            rep.checks.append(f"{name} component bijection")

    # union law: per component of the centralizer graph, union of Z's equals union of C's
    for comp in component_vertex_sets(z.graph):
        zu = np.zeros(G.order, dtype=bool)
        cu = np.zeros(G.order, dtype=bool)
        for v in comp:
            zu |= fam.centers[v].mask
            cu |= fam.centralizers[v].mask
        if not np.array_equal(zu, cu):
            rep.fail(f"union law fails on the component of {z.graph.labels[comp[0]]}")
    rep.checks.append("component union law")

    if G.order <= exhaustive_limit:
        _check_distance_two(G, c, rep)


def _check_distance_two(G: GroupTable, c: LabeledGroupGraph, rep: CorrespondenceReport) -> None:
    """``d(g, h) <= 2`` in the commuting graph iff ``C(g) & C(h)`` is larger than ``Z(G)``."""
    zord = int(G.center_mask.sum())
    for u in range(c.n):
        dist = c.graph.distances_from(u)
        g = c.payload[u]
        inter = (G.commute[g] & G.commute[c.payload]).sum(axis=1)
        for v in range(c.n):
            near = dist.get(v, 3) <= 2
            if near != (inter[v] > zord):
                rep.fail(f"distance-2 criterion fails at ({c.graph.labels[u]}, {c.graph.labels[v]})")
                return
    rep.checks.append("distance-2 criterion")


def _enc_index(G: Class2Group, a) -> int:
    return vector_index(G, a) // G.p ** len(G.s)


def _verify_class2(G: Class2Group, rep: CorrespondenceReport) -> GroupTable:
    T = expand_to_table(G)
    q = G.p ** len(G.s)
    rep.sizes["order"] = T.order
    Zt = center(T)
    if Zt.order != G.center_order:
        rep.fail(f"center order {Zt.order} != predicted {G.center_order}")

    def proj(sub) -> set[int]:
        xs = {x // q for x in sub.members}
        if len(xs) * q != sub.order:
            rep.fail(f"subgroup of order {sub.order} is not a union of fibres over F_p^n")
        return xs

    for a in G.vectors():
        g = vector_index(G, a)
        if bool(T.center_mask[g]) != G.is_central(a):
            rep.fail(f"centrality of {a} disagrees")
            continue
        if G.is_central(a):
            continue
        C_lin = {_enc_index(G, b) for b in centralizer_space(G, a).elements()}
        Z_lin = {_enc_index(G, b) for b in z_space(G, a).elements()}
        if proj(centralizer(T, g)) != C_lin:
            rep.fail(f"centralizer of {a}: linear algebra disagrees with the table")
        if proj(z_of(T, g)) != Z_lin:
            rep.fail(f"Z of {a}: linear algebra disagrees with the table")
    rep.checks.append("linear algebra vs table")

    lin = centralizer_graph(G)
    tab = centralizer_graph(T)
    index = {frozenset(proj(v.center)): i for i, v in enumerate(tab.payload)}
    f: dict[int, int] = {}
    for i, v in enumerate(lin.payload):
        key = frozenset(_enc_index(G, b) for b in v.center.elements())
        if key not in index:
            rep.fail(f"{v.label} has no matching vertex in the table graph")
            return T
        f[i] = index[key]
    _check_quotient_map(rep, "linear centralizer graph -> table centralizer graph", lin.graph, tab.graph, f)
    return T


def verify_correspondence(G: GroupTable | Class2Group) -> CorrespondenceReport:
    """Check that commuting/~, star/~ and the centralizer graph agree through explicit maps.

    A :class:`Class2Group` is expanded to a table first and its linear-algebra
    centralizers and ``Z`` subspaces are compared against the table.
    """
    rep = CorrespondenceReport(G.name)
    if isinstance(G, Class2Group):
        T = _verify_class2(G, rep)
        if rep.ok:
            _verify_table(T, rep)
    else:
        _reject_abelian(G)
        _verify_table(G, rep)
    return rep
