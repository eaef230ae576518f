"""Executable checks of structural statements about centralizers and commuting graphs.

Everything here is computed on the quotient ``G/Z(G)``: whether two elements
commute depends only on their cosets, so centralizers, the centralizer graph
and the transversal graph are all determined by a ``k x k`` commuting matrix
with ``k = |G:Z(G)|``.  Statements about the full commuting graph are read off
the transversal graph, which differs from it only by blowing every vertex up
into ``|Z(G)|`` closed twins.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .builders import centralizer_graph, commuting_graph, star_graph
from .constructions import NAMED_GROUPS, as_table, named_group
from .fpclass2 import (
    Class2Group,
    ENUMERATION_LIMIT,
    SubspaceFp,
    VertexKind,
    build_class2,
    has_common_neighbor,
    monomial_label,
    predict_vertex_kind,
)
from .graphs import (
    SimpleGraph,
    classify_vertex,
    component_vertex_sets,
    components,
    isomorphic,
    is_isomorphism,
    vertex_statuses,
)
from .groups import (
    GroupError,
    GroupTable,
    SizeLimitError,
    abelian_invariants,
    centralizer_of_set,
    derived_subgroup,
    element_orders,
    load_cayley_table,
    lower_central_series,
    prime_power,
)

ISOCLINISM_SEARCH_LIMIT = 64


class UnknownCheckError(KeyError):
    pass


def _is_prime(n: int) -> bool:
    pp = prime_power(n)
    return pp is not None and pp[1] == 1


# ---------------------------------------------------------------- quotient model

@dataclass
class QuotientModel:
    """``G/Z(G)`` with its commuting relation.  Coset 0 is ``Z(G)`` itself."""

    name: str
    order: int
    center_order: int
    labels: list[str]
    commute: np.ndarray
    product: np.ndarray
    derived_order: int
    nilpotence: int | None
    upper_index: int | None          # |G : C_G(G_{n-1})| for class n >= 3
    source: Any = field(repr=False, default=None)
    vectors: np.ndarray | None = field(repr=False, default=None)

    @property
    def k(self) -> int:
        return len(self.labels)

    @property
    def prime(self) -> int | None:
        pp = prime_power(self.order)
        return pp[0] if pp else None

    @property
    def is_p_group(self) -> bool:
        return self.order > 1 and self.prime is not None


def model_from_table(T: GroupTable) -> QuotientModel:
    z = np.flatnonzero(T.center_mask)
    lo = T.table[:, z].min(axis=1).astype(np.int64)
    reps = np.unique(lo)
    index = np.full(T.order, -1, dtype=np.int64)
    index[reps] = np.arange(len(reps))
    coset = index[lo]
    commute = T.commute[np.ix_(reps, reps)]
    product = coset[T.table[np.ix_(reps, reps)]]
    series = lower_central_series(T)
    nilpotent = series[-1].order == 1
    cls = len(series) - 1 if nilpotent else None
    upper = None
    if nilpotent and cls >= 3:
        upper = T.order // centralizer_of_set(T, series[cls - 2]).order
    derived = series[1].order if len(series) > 1 else derived_subgroup(T).order
    return QuotientModel(T.name, T.order, len(z), [f"g{int(r)}" for r in reps], commute, product,
                         derived, cls, upper, source=T)


def model_from_class2(G: Class2Group, limit: int = ENUMERATION_LIMIT) -> QuotientModel:
    free = [i for i in range(G.n) if i not in set(G.degenerate_directions)]
    k = G.p ** len(free)
    if k > limit:
        raise SizeLimitError(f"|G:Z| = {k} exceeds enumeration limit {limit}")
    vecs = np.zeros((k, G.n), dtype=np.int64)
    if free:
        vecs[:, free] = np.array(list(itertools.product(range(G.p), repeat=len(free))), dtype=np.int64)
    p = G.p
    commute = np.ones((k, k), dtype=bool)
    for i, j in G.pairing_rows.values():
        commute &= (vecs[:, None, i] * vecs[None, :, j] - vecs[:, None, j] * vecs[None, :, i]) % p == 0
    w = p ** np.arange(len(free) - 1, -1, -1, dtype=np.int64)
    sub = vecs[:, free]
    product = ((sub[:, None, :] + sub[None, :, :]) % p) @ w if free else np.zeros((1, 1), dtype=np.int64)
    labels = [monomial_label(v) for v in vecs.tolist()]
    nil = 2 if G.edges else 1
    return QuotientModel(G.name, G.order, G.center_order, labels, commute, product,
                         G.derived_order, nil, None, source=G, vectors=vecs)


def as_model(G: GroupTable | Class2Group | QuotientModel) -> QuotientModel:
    if isinstance(G, QuotientModel):
        return G
    if isinstance(G, Class2Group):
        return model_from_class2(G)
    return model_from_table(G)


class CentralizerData:
    """Distinct centralizers, their centers, and the graphs built from them."""

    def __init__(self, m: QuotientModel):
        if m.k == 1:
            raise GroupError(f"{m.name} is abelian")
        self.m = m
        k = m.k
        self.packed = np.packbits(m.commute, axis=1)
        index: dict[bytes, int] = {}
        reps: list[int] = []
        class_of = np.full(k, -1, dtype=np.int64)
        for g in range(1, k):
            key = self.packed[g].tobytes()
            if key not in index:
                index[key] = len(reps)
                reps.append(g)
            class_of[g] = index[key]
        self.reps = reps
        self.class_of = class_of
        self.cmask = m.commute[reps].copy()
        self.zmask = np.array([self.cmask[c] & self.centralizer_of(self.cmask[c]) for c in range(len(reps))])
        self.abelian = np.array([np.array_equal(a, b) for a, b in zip(self.zmask, self.cmask)])
        self.csize = self.cmask.sum(axis=1)          # |C : Z(G)|
        self.zsize = self.zmask.sum(axis=1)          # |Z(g) : Z(G)|
        zkeys = {z.tobytes() for z in self.zmask}
        assert len(zkeys) == len(reps), "distinct centralizers share a center"

    def centralizer_of(self, mask: np.ndarray) -> np.ndarray:
        idx = np.flatnonzero(mask)
        if len(idx) == 0:
            return np.ones(self.m.k, dtype=bool)
        row = np.bitwise_and.reduce(self.packed[idx], axis=0)
        return np.unpackbits(row, count=self.m.k).astype(bool)

    def __len__(self) -> int:
        return len(self.reps)

    def label(self, c: int) -> str:
        return f"Z({self.m.labels[self.reps[c]]})"

    @cached_property
    def gz(self) -> SimpleGraph:
        n = len(self)
        cz = np.array([self.centralizer_of(z) for z in self.zmask])
        # Z_b <= C_G(Z_a)
        m = ~(self.zmask[None, :, :] & ~cz[:, None, :]).any(axis=2)
        np.fill_diagonal(m, False)
        return SimpleGraph.from_matrix(m, [self.label(c) for c in range(n)])

    @cached_property
    def gz_status(self):
        return vertex_statuses(self.gz)

    @cached_property
    def gz_components(self):
        return components(self.gz)

    @cached_property
    def star(self) -> SimpleGraph:
        m = self.m.commute[1:, 1:].copy()
        np.fill_diagonal(m, False)
        return SimpleGraph.from_matrix(m, self.m.labels[1:])

    @cached_property
    def star_status(self):
        return vertex_statuses(self.star)

    @cached_property
    def star_components(self):
        return components(self.star)

    @cached_property
    def _meet_sizes(self) -> np.ndarray:
        c = self.cmask[:, 1:].astype(np.float32)
        return np.rint(c @ c.T).astype(np.int64)

    @cached_property
    def trivial_meet(self) -> np.ndarray:
        """``[a, b]``: ``C_a & C_b`` is just ``Z(G)``."""
        return self._meet_sizes == 0

    @cached_property
    def contained(self) -> np.ndarray:
        """``[a, b]``: ``C_a <= C_b``."""
        return self._meet_sizes == (self.csize - 1)[:, None]

    @cached_property
    def classes_inside(self) -> np.ndarray:
        """``[c, e]``: some element of class ``e`` lies in ``C_c``."""
        onehot = np.zeros((self.m.k, len(self)), dtype=np.float32)
        onehot[np.arange(1, self.m.k), self.class_of[1:]] = 1
        return (self.cmask.astype(np.float32) @ onehot) > 0

    @cached_property
    def center_contained(self) -> np.ndarray:
        """``[a, b]``: ``Z_a <= Z_b``."""
        z = self.zmask.astype(np.float32)
        return np.rint(z @ z.T).astype(np.int64) == self.zsize[:, None]

    @cached_property
    def _subordinates(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {c: set() for c in range(len(self))}
        for v, st in enumerate(self.gz_status):
            if st.kind == "subordinate":
                for c in st.dominators:
                    out[c].add(v)
        return out

    def nontrivial(self):
        return [c for c in self.gz_components if not c.is_trivial]

    def subordinates_of(self, c: int) -> set[int]:
        return self._subordinates[c]

    def is_independent(self, c: int) -> bool:
        return self.gz_status[c].kind != "subordinate"


# ---------------------------------------------------------------- results

NOT_APPLICABLE = "notApplicable"


@dataclass
class CheckResult:
    check_id: str
    group: str
    hypothesis: bool
    conclusion: bool | str
    witness: dict | None = None
    elapsed: float = 0.0

    def __post_init__(self):
        if not self.hypothesis:
            self.conclusion = NOT_APPLICABLE
        if self.conclusion is False and not self.witness:
            self.witness = {"reason": "conclusion failed"}

    @property
    def passed(self) -> bool:
        return self.hypothesis and self.conclusion is True

    @property
    def failed(self) -> bool:
        return self.hypothesis and self.conclusion is False

    @property
    def vacuous(self) -> bool:
        return not self.hypothesis

    def to_dict(self) -> dict:
        d = {"checkId": self.check_id, "group": self.group, "hypothesis": self.hypothesis,
             "conclusion": self.conclusion, "ms": round(self.elapsed * 1000, 3)}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


Outcome = tuple[bool, bool, dict]


# ---------------------------------------------------------------- single-group checks

def _derived_bound(m: QuotientModel, d: CentralizerData) -> Outcome:
    hyp = m.derived_order ** 2 < m.k
    comps = d.gz_components
    concl = len(comps) == 1 and comps[0].diameter <= 2
    return hyp, concl, {"derivedOrder": m.derived_order, "centralIndex": m.k,
                        "components": len(comps), "diameters": sorted(c.diameter for c in comps)}


def _p3_ca(m: QuotientModel, d: CentralizerData) -> Outcome:
    p = m.prime
    hyp = m.is_p_group and m.k <= p**3
    bad = [d.label(c) for c in range(len(d)) if not d.abelian[c]]
    return hyp, not bad, {"centralIndex": m.k, "nonabelianCentralizers": bad[:5]}


def _p45_diameter(m: QuotientModel, d: CentralizerData) -> Outcome:
    p = m.prime
    hyp = m.is_p_group and m.k in (p**4, p**5)
    ca = bool(d.abelian.all())
    nt = d.nontrivial()
    concl = ca or (len(nt) == 1 and nt[0].diameter <= 4)
    return hyp, concl, {"centralIndex": m.k, "ca": ca, "nontrivialComponents": len(nt),
                        "diameters": [c.diameter for c in nt]}


def isolated_count_formula(m: QuotientModel, d: CentralizerData, g: int, u: int) -> Fraction:
    """``(|G| - |C_G(g)|) / (|Z(u)| - |Z(G)|)`` for class indices ``g`` and ``u``."""
    z = m.center_order
    return Fraction(m.order - int(d.csize[g]) * z, int(d.zsize[u]) * z - z)


def _p4_isolated(m: QuotientModel, d: CentralizerData) -> Outcome:
    p = m.prime
    ca = bool(d.abelian.all())
    hyp = m.is_p_group and m.k == p**4 and not ca
    w: dict[str, Any] = {"centralIndex": m.k, "ca": ca}
    if not hyp:
        return hyp, False, w
    isolated = [c for c in range(len(d)) if d.gz_status[c].kind == "isolated"]
    part1 = all(int(d.csize[c]) == p for c in isolated)
    nt = d.nontrivial()
    w.update(isolated=len(isolated), part1=part1, nontrivialComponents=len(nt))
    if len(nt) != 1:
        w["branch"] = "none"
        return hyp, part1, w
    xi = sorted(nt[0].vertices)
    indep = [c for c in xi if d.is_independent(c)]
    covered = np.zeros(m.k, dtype=bool)
    for c in xi:
        covered |= d.class_of == c
    covers_all = bool(covered[1:].all())
    w.update(independent=[d.label(c) for c in indep], coversAll=covers_all)
    ok = part1
    if len(indep) == 1 and not covers_all:
        w["branch"] = "uniqueIndependent"
        w["expected"] = p**3
        if isolated:
            f = isolated_count_formula(m, d, indep[0], isolated[0])
            w["formula"] = str(f)
            ok = ok and f == p**3
        ok = ok and len(isolated) == p**3
    elif len(indep) >= 2 and not covers_all:
        w["branch"] = "severalIndependent"
        bound = Fraction(p**4 - 2 * p**3 + p**2, p - 1)
        w["bound"] = str(bound)
        ok = ok and bound == p**2 * (p - 1) and len(isolated) <= p**3 - p**2
        # the union of two independent centralizers is large enough to force the bound
        g, h = indep[0], indep[1]
        union = int((d.cmask[g] | d.cmask[h])[1:].sum())
        w["unionSize"] = union
        ok = ok and union >= 2 * p**3 - p**2 - 1
    else:
        w["branch"] = "none"
    return hyp, ok, w


def _class_n(m: QuotientModel, d: CentralizerData) -> Outcome:
    p = m.prime
    hyp = bool(m.is_p_group and m.nilpotence and m.nilpotence >= 3 and m.upper_index in (p, p * p))
    nt = d.nontrivial()
    concl = len(nt) <= 1 and all(c.diameter <= 8 for c in nt)
    return hyp, concl, {"class": m.nilpotence, "upperIndex": m.upper_index,
                        "nontrivialComponents": len(nt), "diameters": [c.diameter for c in nt]}


def _isolated_conditions(m: QuotientModel, d: CentralizerData) -> np.ndarray:
    """Row per noncentral coset, seven columns for the seven conditions."""
    n = len(d)
    eye = np.eye(n, dtype=bool)
    inside = d.classes_inside
    z_eq = d.center_contained & d.center_contained.T
    # Z_e == C_c, compared through sizes and containment of Z_e in C_c
    z_in_c = np.rint(d.zmask.astype(np.float32) @ d.cmask.T.astype(np.float32)).astype(np.int64)
    z_is_c = (z_in_c.T == d.zsize[None, :]) & (d.zsize[None, :] == d.csize[:, None])
    status = np.array([st.kind for st in d.gz_status])
    per_class = np.stack([
        d.abelian & (status != "subordinate"),
        (eye | d.trivial_meet).all(axis=1),
        (~inside | eye).all(axis=1),
        (~inside | z_eq).all(axis=1),
        (~inside | z_is_c).all(axis=1),
        status == "isolated",
    ], axis=1)
    star_indep = np.array([st.kind != "subordinate" for st in d.star_status])
    cls = d.class_of[1:]
    return np.column_stack([d.abelian[cls] & star_indep, per_class[cls]])


def _isolated_equiv(m: QuotientModel, d: CentralizerData) -> Outcome:
    rows = _isolated_conditions(m, d)
    agree = (rows.all(axis=1) | ~rows.any(axis=1))
    w = {"allTrue": int(rows.all(axis=1).sum()), "allFalse": int((~rows.any(axis=1)).sum())}
    if not agree.all():
        g = int(np.argmin(agree)) + 1
        w["coset"] = m.labels[g]
        w["values"] = [bool(x) for x in rows[g - 1]]
    return True, bool(agree.all()), w


def _independent_conditions(m: QuotientModel, d: CentralizerData) -> np.ndarray:
    n = len(d)
    inside = d.classes_inside
    star_comp = {}
    for comp in d.star_components:
        for v in comp.vertices:
            star_comp[v + 1] = comp.vertices
    gz_comp = {v: comp.vertices for comp in d.gz_components for v in comp.vertices}
    own = []
    for c in range(n):
        rep = d.reps[c]
        cosets = frozenset(int(x) for x in np.flatnonzero(d.cmask[c][1:]))
        own.append((d.is_independent(c) and gz_comp[c] == frozenset({c} | d.subordinates_of(c)),
                    star_comp[rep] == cosets))
    own = np.array(own, dtype=bool)
    per_class = np.column_stack([
        (d.contained.T | d.trivial_meet).all(axis=1),
        (~inside | d.contained.T).all(axis=1),
        (~inside | d.center_contained).all(axis=1),
        own,
    ])
    return per_class[d.class_of[1:]]


def _independent_component_equiv(m: QuotientModel, d: CentralizerData) -> Outcome:
    rows = _independent_conditions(m, d)
    agree = rows.all(axis=1) | ~rows.any(axis=1)
    w = {"allTrue": int(rows.all(axis=1).sum()), "allFalse": int((~rows.any(axis=1)).sum())}
    if not agree.all():
        g = int(np.argmin(agree)) + 1
        w["coset"] = m.labels[g]
        w["values"] = [bool(x) for x in rows[g - 1]]
    return True, bool(agree.all()), w


def _star_shaped(d: CentralizerData, comp) -> int | None:
    """The independent nonisolated vertex whose subordinates make up ``comp``, if any."""
    for c in sorted(comp.vertices):
        if d.is_independent(c) and d.gz.adj[c] and comp.vertices == frozenset({c} | d.subordinates_of(c)):
            return c
    return None


def _ind_diam(m: QuotientModel, d: CentralizerData) -> Outcome:
    hits = [(d.label(c), comp.diameter) for comp in d.nontrivial() if (c := _star_shaped(d, comp)) is not None]
    concl = all(diam == 2 for _, diam in hits)
    return bool(hits), concl, {"components": [{"center": lab, "diameter": diam} for lab, diam in hits]}


def _prime_index_isolated(m: QuotientModel, d: CentralizerData) -> Outcome:
    cases = [c for c in range(len(d)) if _is_prime(int(d.csize[c]))]
    bad = [d.label(c) for c in cases if d.gz_status[c].kind != "isolated"]
    return bool(cases), not bad, {"primeIndexVertices": len(cases), "notIsolated": bad[:5]}


def _ca_empty(m: QuotientModel, d: CentralizerData) -> Outcome:
    ca = bool(d.abelian.all())
    empty = d.gz.edge_count == 0
    complete = all(c.is_complete for c in d.star_components)
    return True, ca == empty == complete, {"ca": ca, "emptyGraph": empty, "allComponentsComplete": complete}


def _f_group_independent(m: QuotientModel, d: CentralizerData) -> Outcome:
    n = len(d)
    strict = d.contained & ~np.eye(n, dtype=bool)
    f_group = not strict.any()
    gz_all = all(st.kind != "subordinate" for st in d.gz_status)
    star_all = all(st.kind != "subordinate" for st in d.star_status)
    return True, f_group == gz_all == star_all, {"fGroup": f_group, "allIndependentCentralizerGraph": gz_all,
                                                 "allIndependentCommutingGraph": star_all}


def _sub_nonabelian(m: QuotientModel, d: CentralizerData) -> Outcome:
    n = len(d)
    pairs = [(h, g) for h in range(n) for g in range(n) if h != g and d.contained[h, g]]
    bad = [(d.label(h), d.label(g)) for h, g in pairs if d.abelian[g]]
    return bool(pairs), not bad, {"strictPairs": len(pairs), "abelianLarger": bad[:5]}


def _component_union_subgroup(m: QuotientModel, d: CentralizerData) -> Outcome:
    out = []
    for comp in d.nontrivial():
        U = np.zeros(m.k, dtype=bool)
        for c in comp.vertices:
            U |= d.cmask[c]
        idx = np.flatnonzero(U)
        closed = bool(U[m.product[np.ix_(idx, idx)]].all())
        shape = "independentWithSubordinates" if _star_shaped(d, comp) is not None else "other"
        out.append({"size": len(comp.vertices), "diameter": comp.diameter, "isSubgroup": closed, "shape": shape})
    other = [c for c in out if c["shape"] == "other" and c["isSubgroup"]]
    return bool(out), True, {"exploratory": True, "components": out, "otherShapeSubgroups": len(other)}


def _class2_predictions(m: QuotientModel, d: CentralizerData) -> Outcome:
    """Structural claims about G(p, n, S) against the computed centralizer graph.

    Errors are tagged by the law they break.  ``prediction`` covers the
    guarded case analysis of :func:`predict_vertex_kind`; ``isolatedType`` and
    ``emptyDominators`` test the unguarded isolation claims as stated.
    """
    G = m.source
    if not isinstance(G, Class2Group) or not G.nondegenerate:
        return False, False, {"reason": "needs a nondegenerate class-2 group"}
    p, n = G.p, G.n
    w = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    errors: list[str] = []
    counts: dict[str, int] = {}
    kinds: dict[str, int] = {}

    def err(tag: str, msg: str) -> None:
        counts[tag] = counts.get(tag, 0) + 1
        errors.append(f"{tag}: {msg}")

    def coset_of(v) -> int:
        return int(np.dot(np.asarray(v, dtype=np.int64) % p, w))

    def cosets_of(V: SubspaceFp) -> np.ndarray:
        mask = np.zeros(m.k, dtype=bool)
        for v in V.elements():
            mask[coset_of(v)] = True
        return mask

    unit = [coset_of([1 if t == i else 0 for t in range(n)]) for i in range(n)]
    ucls = [int(d.class_of[u]) for u in unit]
    sbar = G.complement
    S = SimpleGraph.from_edges(n, [(i - 1, j - 1) for i, j in sbar.sorted_edges])
    preds = {}
    for g in range(1, m.k):
        a = tuple(int(x) for x in m.vectors[g])
        pr = predict_vertex_kind(G, a)
        preds[g] = pr
        kinds[pr.kind.value] = kinds.get(pr.kind.value, 0) + 1
        c = int(d.class_of[g])
        status = d.gz_status[c].kind
        support = frozenset(k + 1 for k, x in enumerate(a) if x)
        if len(support) >= 2 and not has_common_neighbor(G, support):
            if d.csize[c] != p or status != "isolated":
                err("isolatedType", f"C({m.labels[g]}) has index {d.csize[c]} over Z and is {status}")
        if pr.kind is VertexKind.TYPE2 and not pr.dominators and status != "isolated":
            err("emptyDominators", f"{m.labels[g]} is {status}")
        if pr.kind is VertexKind.UNCOVERED:
            continue
        if not np.array_equal(cosets_of(pr.predicted_centralizer), d.cmask[c]):
            err("prediction", f"centralizer of {m.labels[g]} ({pr.kind.value}) differs")
        if pr.predicted_status is not None and status != pr.predicted_status:
            err("prediction", f"{m.labels[g]} predicted {pr.predicted_status}, found {status}")
        if pr.kind is VertexKind.CLIQUE:
            for i in pr.support:
                if not d.contained[c, ucls[i - 1]]:
                    err("prediction", f"C({m.labels[g]}) not inside C(x{i})")

    for i in range(n):
        for j in range(i + 1, n):
            twins = S.closed(i) == S.closed(j)
            if (ucls[i] == ucls[j]) != twins:
                err("generatorTwins", f"C(x{i + 1}) = C(x{j + 1}) disagrees with the twin test")
            adjacent = S.has_edge(i, j) and not twins
            if ucls[i] != ucls[j] and d.gz.has_edge(ucls[i], ucls[j]) != adjacent:
                err("generatorAdjacency", f"C(x{i + 1}), C(x{j + 1})")
        if (classify_vertex(S, i).kind != "subordinate") != d.is_independent(ucls[i]):
            err("generatorIndependence", f"C(x{i + 1})")

    comp_of = {v: comp for comp in d.gz_components for v in comp.vertices}
    seen_star = set()
    pieces = []
    for verts in component_vertex_sets(S):
        X = frozenset(v + 1 for v in verts)
        l = components(S.induced(verts))[0].diameter
        home = {comp_of[ucls[v]].component_id for v in verts}
        if len(home) != 1:
            err("pieceMembership", f"generators of piece {sorted(X)} spread over several components")
            continue
        comp = comp_of[ucls[verts[0]]]
        if l <= 1:
            if not comp.is_trivial:
                err("completePiece", f"complete piece {sorted(X)} does not give an isolated vertex")
            continue
        expect = {ucls[v] for v in verts}
        for g, pr in preds.items():
            inside = pr.support <= X and (pr.kind is VertexKind.CLIQUE or
                                          (pr.kind is VertexKind.TYPE2 and bool(pr.dominators)))
            if inside:
                expect.add(int(d.class_of[g]))
        if set(comp.vertices) != expect:
            err("pieceMembership", f"component for piece {sorted(X)} has {len(comp.vertices)} vertices, "
                                   f"expected {len(expect)}")
        if not (l <= comp.diameter <= l + 2):
            err("pieceDiameter", f"piece {sorted(X)}: diameter {comp.diameter} outside [{l}, {l + 2}]")
        seen_star.add(comp.component_id)
        pieces.append({"generators": sorted(X), "pieceDiameter": l, "componentDiameter": comp.diameter,
                       "componentSize": len(comp.vertices), "exceedsPieceDiameter": comp.diameter > l})
    nontrivial = {c.component_id for c in d.nontrivial()}
    if nontrivial != seen_star:
        err("componentCount", f"{len(nontrivial)} nontrivial components but {len(seen_star)} noncomplete pieces")
    return True, not errors, {"kinds": kinds, "nontrivialComponents": len(nontrivial), "pieces": pieces,
                              "errorCounts": counts, "errors": errors[:10]}


SINGLE_CHECKS: dict[str, Callable[[QuotientModel, CentralizerData], Outcome]] = {
    "derivedBound": _derived_bound,
    "p3CA": _p3_ca,
    "p45Diameter": _p45_diameter,
    "p4Isolated": _p4_isolated,
    "classN": _class_n,
    "isolatedEquiv": _isolated_equiv,
    "independentComponentEquiv": _independent_component_equiv,
    "indDiam": _ind_diam,
    "primeIndexIsolated": _prime_index_isolated,
    "caEmpty": _ca_empty,
    "fGroupIndependent": _f_group_independent,
    "subNonabelian": _sub_nonabelian,
    "componentUnionSubgroup": _component_union_subgroup,
    "class2Predictions": _class2_predictions,
}


def run_check(check_id: str, G, data: CentralizerData | None = None) -> CheckResult:
    if check_id not in SINGLE_CHECKS:
        if check_id in PAIR_CHECKS:
            raise UnknownCheckError(f"{check_id} takes a pair of groups; use run_pair_check")
        raise UnknownCheckError(f"unknown check {check_id!r}")
    t0 = time.perf_counter()
    m = as_model(G)
    d = data or CentralizerData(m)
    hyp, concl, w = SINGLE_CHECKS[check_id](m, d)
    return CheckResult(check_id, m.name, bool(hyp), bool(concl), w, time.perf_counter() - t0)


# ---------------------------------------------------------------- isoclinism

@dataclass
class Isoclinism:
    alpha: dict[int, int]        # coset index -> coset index
    beta: dict[int, int]         # element of G1' -> element of G2'


def _coset_order(m: QuotientModel, x: int) -> int:
    k, y = 1, x
    while y != 0:
        y = int(m.product[y, x])
        k += 1
    return k


def _quotient_generators(m: QuotientModel) -> list[int]:
    gens: list[int] = []
    have = np.zeros(m.k, dtype=bool)
    have[0] = True
    for x in sorted(range(1, m.k), key=lambda x: -_coset_order(m, x)):
        if have[x]:
            continue
        gens.append(x)
        frontier = list(np.flatnonzero(have))
        while frontier:
            nxt = []
            for y in frontier:
                for s in gens:
                    z = int(m.product[y, s])
                    if not have[z]:
                        have[z] = True
                        nxt.append(z)
            frontier = nxt
    return gens


def _extend(gens: Sequence[int], images: Sequence[int], prod1, prod2, size: int) -> dict[int, int] | None:
    f = {0: 0}
    queue = [0]
    while queue:
        x = queue.pop()
        for s, t in zip(gens, images):
            y, fy = int(prod1[x, s]), int(prod2[f[x], t])
            if y in f:
                if f[y] != fy:
                    return None
            else:
                f[y] = fy
                queue.append(y)
    return f if len(f) == size else None


def find_isoclinism(T1: GroupTable, T2: GroupTable, limit: int = ISOCLINISM_SEARCH_LIMIT,
                    budget: int = 500_000) -> Isoclinism | None | str:
    """Exhaustive search for an isoclinism; ``"undecided"`` past ``limit`` or ``budget``."""
    m1, m2 = model_from_table(T1), model_from_table(T2)
    if m1.k != m2.k or m1.derived_order != m2.derived_order:
        return None
    if m1.k > limit:
        return "undecided"
    reps1 = [int(l[1:]) for l in m1.labels]
    reps2 = [int(l[1:]) for l in m2.labels]
    gens = _quotient_generators(m1)
    orders2 = [_coset_order(m2, x) for x in range(m2.k)]
    cands = [[y for y in range(m2.k) if orders2[y] == _coset_order(m1, g)] for g in gens]
    D1 = derived_subgroup(T1)
    tried = 0
    for images in itertools.product(*cands):
        tried += 1
        if tried > budget:
            return "undecided"
        f = _extend(gens, images, m1.product, m2.product, m1.k)
        if f is None or len(set(f.values())) != m1.k:
            continue
        beta: dict[int, int] = {}
        ok = True
        for a in range(m1.k):
            for b in range(m1.k):
                c1 = T1.commutator(reps1[a], reps1[b])
                c2 = T2.commutator(reps2[f[a]], reps2[f[b]])
                if beta.setdefault(c1, c2) != c2:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        full = _extend(list(beta), list(beta.values()), T1.table, T2.table, D1.order)
        if full is None or len(set(full.values())) != D1.order:
            continue
        return Isoclinism(f, full)
    return None


def isoclinism_refutation(T1: GroupTable, T2: GroupTable) -> str | None:
    """An invariant that differs between the groups and is preserved by isoclinism."""
    m1, m2 = model_from_table(T1), model_from_table(T2)
    if m1.k != m2.k:
        return f"|G:Z| differs ({m1.k} vs {m2.k})"
    D1, D2 = derived_subgroup(T1), derived_subgroup(T2)
    if D1.order != D2.order:
        return f"|G'| differs ({D1.order} vs {D2.order})"
    if D1.is_abelian() and D2.is_abelian():
        a1, a2 = abelian_invariants(T1, D1), abelian_invariants(T2, D2)
        if a1 != a2:
            return f"derived subgroups have invariants {list(a1)} vs {list(a2)}"
    o1 = sorted(element_orders(T1, D1.ids).tolist())
    o2 = sorted(element_orders(T2, D2.ids).tolist())
    if o1 != o2:
        return "derived subgroups have different element orders"
    return None


# ---------------------------------------------------------------- pair checks

@dataclass
class PairContext:
    T1: GroupTable
    T2: GroupTable

    @cached_property
    def c(self):
        return commuting_graph(self.T1), commuting_graph(self.T2)

    @cached_property
    def s(self):
        return star_graph(self.T1), star_graph(self.T2)

    @cached_property
    def c_iso(self):
        a, b = self.c
        return isomorphic(a.graph, b.graph)

    @cached_property
    def s_iso(self):
        a, b = self.s
        return isomorphic(a.graph, b.graph)


def _c_sizes(x: PairContext) -> Outcome:
    T1, T2 = x.T1, x.T2
    p1, p2 = prime_power(T1.order), prime_power(T2.order)
    same_p = bool(p1 and p2 and p1[0] == p2[0])
    iso = x.c_iso is not None
    z1, z2 = int(T1.center_mask.sum()), int(T2.center_mask.sum())
    eqs = [T1.order == T2.order, T1.order // z1 == T2.order // z2, z1 == z2]
    w = {"commutingIsomorphic": iso, "orders": [T1.order, T2.order], "centers": [z1, z2]}
    # the three equalities are equivalent whenever the commuting graphs match
    concl = (not iso or len(set(eqs)) == 1) and z1 == z2
    return iso and same_p, concl, w


def _c_star_equiv(x: PairContext) -> Outcome:
    hyp = x.T1.order == x.T2.order
    if not hyp:
        return False, False, {}
    ci, si = x.c_iso is not None, x.s_iso is not None
    w = {"commutingIsomorphic": ci, "transversalIsomorphic": si}
    if ci != si:
        w["brokenDirection"] = "commuting => transversal" if ci else "transversal => commuting"
    return True, ci == si, w


def _isoclinic_star(x: PairContext) -> Outcome:
    iso = find_isoclinism(x.T1, x.T2)
    if not isinstance(iso, Isoclinism):
        return False, False, {"isoclinism": "none" if iso is None else iso}
    s1, s2 = x.s
    m1, m2 = model_from_table(x.T1), model_from_table(x.T2)
    # transversal element a -> representative of alpha(aZ)
    pos1 = {int(l[1:]): i for i, l in enumerate(m1.labels)}
    rep2 = [int(l[1:]) for l in m2.labels]
    where2 = {g: v for v, g in enumerate(s2.payload)}
    phi = {v: where2[rep2[iso.alpha[pos1[g]]]] for v, g in enumerate(s1.payload)}
    explicit = is_isomorphism(s1.graph, s2.graph, phi)
    z1, z2 = centralizer_graph(x.T1), centralizer_graph(x.T2)
    gz_iso = isomorphic(z1.graph, z2.graph) is not None
    return True, explicit and gz_iso, {"explicitTransversalMap": explicit, "centralizerGraphsIsomorphic": gz_iso,
                                       "quotientOrder": m1.k}


def _not_isoclinic_refute(x: PairContext) -> Outcome:
    reason = isoclinism_refutation(x.T1, x.T2)
    if reason is None:
        return False, False, {}
    w = {"refutation": reason, "commutingIsomorphic": x.c_iso is not None}
    search = find_isoclinism(x.T1, x.T2)
    if isinstance(search, Isoclinism):
        w["search"] = "found an isoclinism"
        return True, False, w
    w["search"] = "none" if search is None else search
    return True, True, w


PAIR_CHECKS: dict[str, Callable[[PairContext], Outcome]] = {
    "cSizes": _c_sizes,
    "cStarEquiv": _c_star_equiv,
    "isoclinicStar": _isoclinic_star,
    "notIsoclinicRefute": _not_isoclinic_refute,
}


def run_pair_check(check_id: str, G1, G2, ctx: PairContext | None = None) -> CheckResult:
    if check_id not in PAIR_CHECKS:
        raise UnknownCheckError(f"unknown pair check {check_id!r}")
    t0 = time.perf_counter()
    x = ctx or PairContext(as_table(G1), as_table(G2))
    hyp, concl, w = PAIR_CHECKS[check_id](x)
    name = f"{x.T1.name}|{x.T2.name}"
    return CheckResult(check_id, name, bool(hyp), bool(concl), w, time.perf_counter() - t0)


# ---------------------------------------------------------------- suite

DEFAULT_CORPUS = (
    "Q8", "D8", "S3", "D16", "Q16", "SD16", "D32", "ES27", "ES27x9", "ES32",
    "example1_p2", "example1_p3", "example2_p2", "example2_p3",
    "gothic_2(2,2)", "gothic_3(3)", "gothic_2(3)", "gothic_2(3,2)", "gothic_3(3,2)",
    "D18", "GD18", "F14", "F21", "F42", "H42",
)

DEFAULT_PAIRS = (
    ("D8", "Q8"), ("D18", "GD18"), ("F42", "H42"), ("Q8", "Q8xC2"),
    ("ES27", "ES27xC3"), ("ES27", "ES27x9"), ("D16", "Q16"),
)

ALL_CHECKS = tuple(SINGLE_CHECKS) + tuple(PAIR_CHECKS)


_CLASS2_NAME = re.compile(r"G\((\d+),(\d+),([\d,\-]*)\)")


def resolve_group(entry: str):
    """A named group, a class-2 group written ``G(p,n,edges)``, or a Cayley file."""
    if entry in NAMED_GROUPS:
        return named_group(entry)
    hit = _CLASS2_NAME.fullmatch(entry)
    if hit:
        p, n, edges = hit.groups()
        return build_class2(int(p), int(n), edges)
    if os.path.exists(entry):
        with open(entry) as fh:
            name = os.path.splitext(os.path.basename(entry))[0]
            return load_cayley_table(fh.read(), validate=True, name=name)
    raise GroupError(f"cannot resolve corpus entry {entry!r}: not a group name, G(p,n,edges) or a readable file")


def _observation(m: QuotientModel, d: CentralizerData) -> dict:
    nt = d.nontrivial()
    return {"group": m.name, "centralIndex": m.k, "upperIndex": m.upper_index,
            "nontrivialComponents": len(nt), "maxDiameter": max((c.diameter for c in nt), default=0)}


def _run_group(entry: str, checks: Sequence[str]) -> tuple[list[CheckResult], dict]:
    G = resolve_group(entry)
    m = as_model(G)
    d = CentralizerData(m)
    results = [run_check(c, m, d) for c in checks]
    return results, _observation(m, d)


def _run_pair(a: str, b: str, checks: Sequence[str]) -> list[CheckResult]:
    ctx = PairContext(as_table(resolve_group(a)), as_table(resolve_group(b)))
    return [run_pair_check(c, None, None, ctx) for c in checks]


@dataclass
class SuiteReport:
    run_id: str
    corpus: list[str]
    pairs: list[tuple[str, str]]
    results: list[CheckResult]
    observations: list[dict]
    require_nonvacuous: bool = True

    @property
    def summary(self) -> dict:
        return {
            "pass": sum(r.passed for r in self.results),
            "fail": sum(r.failed for r in self.results),
            "vacuous": sum(r.vacuous for r in self.results),
            "vacuousChecks": self.vacuous_checks,
        }

    @property
    def vacuous_checks(self) -> list[str]:
        by: dict[str, bool] = {}
        for r in self.results:
            by[r.check_id] = by.get(r.check_id, False) or r.hypothesis
        return sorted(c for c, hit in by.items() if not hit)

    @property
    def ok(self) -> bool:
        s = self.summary
        return s["fail"] == 0 and not (self.require_nonvacuous and s["vacuousChecks"])

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if r.failed]

    def to_dict(self, timings: bool = True) -> dict:
        res = [r.to_dict() for r in self.results]
        if not timings:
            for r in res:
                r.pop("ms")
        return {"runId": self.run_id, "corpus": self.corpus + [f"{a}|{b}" for a, b in self.pairs],
                "results": res, "summary": self.summary, "observations": self.observations}

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), sort_keys=True, indent=2) + "\n"


def run_suite(corpus: Iterable[str] | None = None, check_ids: Iterable[str] | None = None,
              pairs: Iterable[tuple[str, str]] | None = None, workers: int = 1,
              require_nonvacuous: bool = True) -> SuiteReport:
    corpus = list(DEFAULT_CORPUS if corpus is None else corpus)
    pairs = list(DEFAULT_PAIRS if pairs is None else pairs)
    checks = list(ALL_CHECKS if check_ids is None else check_ids)
    for c in checks:
        if c not in SINGLE_CHECKS and c not in PAIR_CHECKS:
            raise UnknownCheckError(f"unknown check {c!r}")
    single = [c for c in checks if c in SINGLE_CHECKS]
    paired = [c for c in checks if c in PAIR_CHECKS]
    if not paired:
        pairs = []
    results: list[CheckResult] = []
    observations: list[dict] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futs = [ex.submit(_run_group, e, single) for e in corpus] if single else []
            pfuts = [ex.submit(_run_pair, a, b, paired) for a, b in pairs]
            for f in futs:
                r, o = f.result()
                results += r
                observations.append(o)
            for f in pfuts:
                results += f.result()
    else:
        if single:
            for e in corpus:
                r, o = _run_group(e, single)
                results += r
                observations.append(o)
        for a, b in pairs:
            results += _run_pair(a, b, paired)
    results.sort(key=lambda r: (r.group, r.check_id))
    observations.sort(key=lambda o: o["group"])
    digest = hashlib.sha1(json.dumps([corpus, [list(p) for p in pairs], checks]).encode()).hexdigest()[:12]
    return SuiteReport(digest, corpus, pairs, results, observations, require_nonvacuous)
