"""Class-2 p-groups G(p, n, S) handled through linear algebra over F_p.

An element is ``x_1^{a_1} ... x_n^{a_n} z`` with ``z`` central; modulo the
center it is the exponent vector ``a``.  Two elements commute iff the
alternating pairing ``a_i b_j - a_j b_i`` vanishes on every edge ``{i, j}``
of ``S``, so centralizers and the sets ``Z(g)`` are subspaces of ``F_p^n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .groups import GroupError, GroupTable, SizeLimitError

__all__ = [
    "EdgeSet",
    "Class2Group",
    "SubspaceFp",
    "VertexKind",
    "VertexKindPrediction",
    "TransversalVertex",
    "ENUMERATION_LIMIT",
    "TABLE_LIMIT",
    "is_prime",
    "rref_mod_p",
    "nullspace_mod_p",
    "build_class2",
    "commutator_exponents",
    "centralizer_space",
    "z_space",
    "centralizer_of_space",
    "transversal_vertices",
    "predict_vertex_kind",
    "has_common_neighbor",
    "expand_to_table",
    "vector_index",
    "monomial_label",
]

ENUMERATION_LIMIT = 3**8
TABLE_LIMIT = 6561

Vec = tuple[int, ...]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# -- linear algebra over F_p --------------------------------------------------


def rref_mod_p(rows: Iterable[Sequence[int]], n: int, p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over F_p; zero rows are dropped."""
    m = [[x % p for x in r] for r in rows]
    for r in m:
        if len(r) != n:
            raise ValueError(f"row of length {len(r)}, expected {n}")
    pivots: list[int] = []
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], p - 2, p)
        m[rank] = [(x * inv) % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    return m[:rank], pivots


def nullspace_mod_p(rows: Iterable[Sequence[int]], n: int, p: int) -> list[list[int]]:
    """Basis of ``{x : r . x = 0 for every row r}``."""
    red, pivots = rref_mod_p(rows, n, p)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, pc in zip(red, pivots):
            v[pc] = (-r[f]) % p
        basis.append(v)
    return basis


@dataclass(frozen=True)
class SubspaceFp:
    """Subspace of F_p^n stored by its canonical reduced row echelon basis.

    Two subspaces are equal iff their bases are equal, so instances hash and
    compare by value.
    """

    p: int
    n: int
    basis: tuple[Vec, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], n: int, p: int) -> "SubspaceFp":
        red, _ = rref_mod_p(vectors, n, p)
        return cls(p, n, tuple(tuple(r) for r in red))

    @classmethod
    def null(cls, rows: Iterable[Sequence[int]], n: int, p: int) -> "SubspaceFp":
        return cls.span(nullspace_mod_p(rows, n, p), n, p)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @cached_property
    def _pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(b) if x) for b in self.basis)

    def __contains__(self, v) -> bool:
        # subtract the pivot combination and see if anything is left
        w = [x % self.p for x in v]
        for b, pc in zip(self.basis, self._pivots):
            f = w[pc]
            if f:
                w = [(x - f * y) % self.p for x, y in zip(w, b)]
        return not any(w)

    def __le__(self, other: "SubspaceFp") -> bool:
        return all(b in other for b in self.basis)

    def __lt__(self, other: "SubspaceFp") -> bool:
        return self.dimension < other.dimension and self <= other

    def __len__(self) -> int:
        return self.p**self.dimension

    def elements(self) -> Iterator[Vec]:
        for coeffs in itertools.product(range(self.p), repeat=self.dimension):
            v = [0] * self.n
            for c, b in zip(coeffs, self.basis):
                if c:
                    v = [(x + c * y) % self.p for x, y in zip(v, b)]
            yield tuple(v)

    def __add__(self, other: "SubspaceFp") -> "SubspaceFp":
        return SubspaceFp.span(self.basis + other.basis, self.n, self.p)

    def __repr__(self) -> str:
        return f"SubspaceFp(p={self.p}, dim={self.dimension}, basis={list(self.basis)})"


# -- the group ----------------------------------------------------------------


@dataclass(frozen=True)
class EdgeSet:
    """A simple graph on ``{1..n}`` given by unordered pairs ``(i, j)``, ``i < j``."""

    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        norm = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            i, j = min(i, j), max(i, j)
            if not (1 <= i and j <= self.n):
                raise ValueError(f"edge {i}-{j} has an endpoint outside 1..{self.n}")
            norm.add((i, j))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def of(cls, n: int, edges: Iterable[tuple[int, int]]) -> "EdgeSet":
        return cls(n, frozenset(tuple(e) for e in edges))

    @classmethod
    def parse(cls, text: str, n: int) -> "EdgeSet":
        """Parse ``"1-3,1-4,2-4"``."""
        edges = []
        for tok in text.split(","):
            tok = tok.strip()
            if not tok:
                continue
            try:
                a, b = tok.split("-")
                edges.append((int(a), int(b)))
            except ValueError:
                raise ValueError(f"bad edge token {tok!r}; expected i-j") from None
        if len(set(tuple(sorted(e)) for e in edges)) != len(edges):
            raise ValueError("duplicate edge in edge list")
        return cls.of(n, edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __str__(self) -> str:
        return ",".join(f"{i}-{j}" for i, j in sorted(self.edges))

    @cached_property
    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def complement(self) -> "EdgeSet":
        all_pairs = itertools.combinations(range(1, self.n + 1), 2)
        return EdgeSet(self.n, frozenset(e for e in all_pairs if e not in self.edges))

    @cached_property
    def neighbors(self) -> dict[int, frozenset]:
        nb: dict[int, set] = {v: set() for v in range(1, self.n + 1)}
        for i, j in self.edges:
            nb[i].add(j)
            nb[j].add(i)
        return {v: frozenset(s) for v, s in nb.items()}

    def isolated_vertices(self) -> list[int]:
        return [v for v, s in self.neighbors.items() if not s]

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges


class Class2Group:
    """The group G(p, n, S).

    Generators ``x_1..x_n`` and central ``z_{ij}`` for each edge ``{i,j}`` of
    ``S`` with ``[x_i, x_j] = z_{ij}``; generators not joined in ``S``
    commute.  Only ``i < j`` exponents are stored; ``z_{ji}`` is the inverse.
    """

    def __init__(self, p: int, n: int, s: EdgeSet, name: str | None = None):
        if not is_prime(p):
            raise GroupError(f"p = {p} is not prime")
        if n < 1:
            raise GroupError("n must be at least 1")
        if s.n != n:
            raise GroupError(f"edge set is on {s.n} vertices, expected {n}")
        self.p = p
        self.n = n
        self.s = s
        self.name = name or f"G({p},{n},{s})"

    def __repr__(self) -> str:
        return f"Class2Group(p={self.p}, n={self.n}, S={{{self.s}}})"

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.s.sorted_edges

    @property
    def order(self) -> int:
        return self.p ** (self.n + len(self.s))

    @cached_property
    def degenerate_directions(self) -> tuple[int, ...]:
        """0-based coordinates of generators that are central (isolated in S)."""
        return tuple(v - 1 for v in self.s.isolated_vertices())

    @property
    def nondegenerate(self) -> bool:
        return not self.degenerate_directions

    @property
    def center_order(self) -> int:
        return self.p ** (len(self.s) + len(self.degenerate_directions))

    @property
    def central_index(self) -> int:
        """``|G : Z(G)|``."""
        return self.order // self.center_order

    @property
    def derived_order(self) -> int:
        # every z_ij is a commutator, so G' = <z_ij>
        return self.p ** len(self.s)

    @property
    def complement(self) -> EdgeSet:
        return self.s.complement

    @cached_property
    def pairing_rows(self) -> dict[tuple[int, int], tuple[int, int]]:
        """Edge ``{i,j}`` -> 0-based coordinate pair of the form ``a_i b_j - a_j b_i``."""
        return {(i, j): (i - 1, j - 1) for i, j in self.edges}

    def is_central(self, a: Sequence[int]) -> bool:
        deg = set(self.degenerate_directions)
        return all(x % self.p == 0 for k, x in enumerate(a) if k not in deg)

    def commutes(self, a: Sequence[int], b: Sequence[int]) -> bool:
        p = self.p
        return all((a[i] * b[j] - a[j] * b[i]) % p == 0 for i, j in self.pairing_rows.values())

    def constraint_rows(self, a: Sequence[int]) -> list[list[int]]:
        """Rows ``r`` with ``r . b == [a, b]_{ij}`` for each edge (the ``z_ij`` exponent)."""
        rows = []
        for i, j in self.pairing_rows.values():
            r = [0] * self.n
            r[j] = a[i] % self.p
            r[i] = (-a[j]) % self.p
            rows.append(r)
        return rows

    def vectors(self) -> Iterator[Vec]:
        """All of F_p^n in lexicographic order."""
        return itertools.product(range(self.p), repeat=self.n)

    def complement_adjacent(self, i: int, j: int) -> bool:
        return i != j and not self.s.adjacent(i, j)


def build_class2(p: int, n: int, s: EdgeSet | Iterable[tuple[int, int]] | str, name: str | None = None) -> Class2Group:
    try:
        if isinstance(s, str):
            s = EdgeSet.parse(s, n)
        elif not isinstance(s, EdgeSet):
            s = EdgeSet.of(n, s)
    except ValueError as e:
        raise GroupError(f"bad edge set: {e}") from None
    return Class2Group(p, n, s, name=name)


def _check_vec(G: Class2Group, a: Sequence[int]) -> Vec:
    if len(a) != G.n:
        raise ValueError(f"vector of length {len(a)} for a group on {G.n} generators")
    return tuple(int(x) % G.p for x in a)


def commutator_exponents(G: Class2Group, a: Sequence[int], b: Sequence[int]) -> dict[tuple[int, int], int]:
    """Exponent of ``z_ij`` in ``[a, b]`` for every edge ``(i, j)`` of S."""
    a, b = _check_vec(G, a), _check_vec(G, b)
    return {e: (a[i] * b[j] - a[j] * b[i]) % G.p for e, (i, j) in G.pairing_rows.items()}


def centralizer_space(G: Class2Group, a: Sequence[int]) -> SubspaceFp:
    """Image of ``C_G(g)`` in ``F_p^n`` for ``g`` with exponent vector ``a``."""
    a = _check_vec(G, a)
    if G.is_central(a):
        raise GroupError(f"{a} is central in {G.name}")
    return SubspaceFp.null(G.constraint_rows(a), G.n, G.p)


def centralizer_of_space(G: Class2Group, V: SubspaceFp) -> SubspaceFp:
    rows = [r for b in V.basis for r in G.constraint_rows(b)]
    return SubspaceFp.null(rows, G.n, G.p)


def z_space(G: Class2Group, a: Sequence[int]) -> SubspaceFp:
    """Image of ``Z(g) = Z(C_G(g))``: the part of the centralizer commuting with all of it."""
    a = _check_vec(G, a)
    C = centralizer_space(G, a)
    rows = G.constraint_rows(a) + [r for b in C.basis for r in G.constraint_rows(b)]
    return SubspaceFp.null(rows, G.n, G.p)


def monomial_label(a: Sequence[int]) -> str:
    """``(1,0,2,0) -> "x1*x3^2"``."""
    parts = []
    for k, e in enumerate(a, start=1):
        if e == 1:
            parts.append(f"x{k}")
        elif e:
            parts.append(f"x{k}^{e}")
    return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class TransversalVertex:
    centralizer: SubspaceFp
    center: SubspaceFp
    representative: Vec
    multiplicity: int

    @property
    def label(self) -> str:
        return f"Z({monomial_label(self.representative)})"


def transversal_vertices(G: Class2Group, limit: int = ENUMERATION_LIMIT) -> list[TransversalVertex]:
    """Group the noncentral vectors of F_p^n by centralizer.

    Returns one entry per distinct centralizer, ordered by representative
    (the lexicographically least vector of its class).  Multiplicities count
    vectors, so they sum to ``p^n - p^d`` with ``d`` the number of central
    generators.
    """
    if G.p**G.n > limit:
        raise SizeLimitError(f"p^n = {G.p ** G.n} exceeds enumeration limit {limit}")
    found: dict[SubspaceFp, list] = {}
    for a in G.vectors():
        if G.is_central(a):
            continue
        C = centralizer_space(G, a)
        if C in found:
            found[C][1] += 1
        else:
            found[C] = [a, 1]
    out = []
    for C, (rep, mult) in found.items():
        out.append(TransversalVertex(C, z_space(G, rep), rep, mult))
    out.sort(key=lambda v: v.representative)
    return out


class VertexKind(str, Enum):
    CLIQUE = "cliqueCase"
    TYPE2 = "type2WithDominators"
    ISOLATED = "isolatedCase"
    CENTRAL = "centralElement"
    UNCOVERED = "uncovered"


@dataclass(frozen=True)
class VertexKindPrediction:
    """Which structural case a vector falls into, read off the complement of S.

    ``predicted_centralizer`` is the subspace the matching case yields and
    ``predicted_status`` the expected standing of the vertex in the
    centralizer graph (``"isolated"``, ``"subordinate"`` or ``None`` when the
    case says nothing).
    """

    kind: VertexKind
    support: frozenset = frozenset()
    common_neighbors: frozenset = frozenset()
    dominators: frozenset = frozenset()
    predicted_centralizer: SubspaceFp | None = None
    predicted_status: str | None = None


def has_common_neighbor(G: Class2Group, support: Iterable[int]) -> bool:
    """Whether some generator is equal or adjacent in the complement of S to every index in ``support``."""
    support = frozenset(support)
    nb = G.complement.neighbors
    return any(support <= (nb[v] | {v}) for v in range(1, G.n + 1))


def _s_connected(G: Class2Group, support: frozenset) -> bool:
    adj = G.s.neighbors
    start = next(iter(support))
    seen, todo = {start}, [start]
    while todo:
        v = todo.pop()
        for w in adj[v]:
            if w in support and w not in seen:
                seen.add(w)
                todo.append(w)
    return seen == support


def predict_vertex_kind(G: Class2Group, a: Sequence[int]) -> VertexKindPrediction:
    """Classify ``a`` by its support in the complement graph of S.

    Vertices in the returned sets are 1-based generator indices.
    """
    a = _check_vec(G, a)
    if G.is_central(a):
        return VertexKindPrediction(VertexKind.CENTRAL)
    nb = G.complement.neighbors
    verts = range(1, G.n + 1)
    support = frozenset(k + 1 for k, x in enumerate(a) if x)

    def unit(j: int) -> list[int]:
        v = [0] * G.n
        v[j - 1] = 1
        return v

    def common(C) -> frozenset:
        return frozenset(v for v in verts if v not in C and all(c in nb[v] for c in C))

    # clique support: C(g) is spanned by the clique and its common neighbours
    if all(j in nb[i] for i, j in itertools.combinations(sorted(support), 2)):
        D = common(support)
        V = SubspaceFp.span([unit(j) for j in support | D], G.n, G.p)
        return VertexKindPrediction(VertexKind.CLIQUE, support, D, frozenset(), V)

    # <g>Z is the whole centralizer only when the S-edges inside the support
    # connect it; otherwise each S-component of the support commutes with g
    if not has_common_neighbor(G, support) and _s_connected(G, support):
        V = SubspaceFp.span([a], G.n, G.p)
        return VertexKindPrediction(VertexKind.ISOLATED, support, frozenset(), frozenset(), V, "isolated")

    # split the support into the pairwise-far part and the members dominating it
    dom_t = frozenset(t for t in support if support - {t} <= nb[t])
    core = support - dom_t
    D = common(core)
    far = all(j not in nb[i] for i, j in itertools.combinations(sorted(core), 2))
    if len(core) >= 2 and far and D:
        E = frozenset(d for d in D if D - {d} <= nb[d])
        if dom_t <= E:
            core_vec = [x if (k + 1) in core else 0 for k, x in enumerate(a)]
            V = SubspaceFp.span([core_vec] + [unit(j) for j in D], G.n, G.p)
            # with E empty the vertex can still sit above a vertex of disconnected support
            status = "subordinate" if E else None
            return VertexKindPrediction(VertexKind.TYPE2, core, D, E, V, status)
    return VertexKindPrediction(VertexKind.UNCOVERED, support)


def vector_index(G: Class2Group, a: Sequence[int]) -> int:
    """Id of ``x^a`` (z-part trivial) in :func:`expand_to_table`."""
    idx = 0
    for x in a:
        idx = idx * G.p + (int(x) % G.p)
    return idx * G.p ** len(G.s)


def expand_to_table(G: Class2Group, limit: int = TABLE_LIMIT) -> GroupTable:
    """Full Cayley table of G(p, n, S).

    Element ``x^a z^c`` has id ``enc(a) * p^|S| + enc(c)`` with big-endian
    base-p encodings, so the identity is 0 and each coset of ``<z_ij>`` is a
    contiguous block.  Normal form multiplication moves every ``x_j`` of the
    right factor left past the ``x_i`` (``i > j``) of the left factor, which
    adds ``-a_j b_i`` to the exponent of ``z_ij`` for each edge ``i < j``.
    """
    p, n, m = G.p, G.n, len(G.s)
    N = G.order
    if N > limit:
        raise SizeLimitError(f"|G| = {N} exceeds table limit {limit}")
    P, Q = p**n, p**m
    xa = np.array(list(G.vectors()), dtype=np.int64).reshape(P, n)
    xw = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    x_sum = ((xa[:, None, :] + xa[None, :, :]) % p) @ xw
    zc = np.array(list(itertools.product(range(p), repeat=m)), dtype=np.int64).reshape(Q, m)
    zw = p ** np.arange(m - 1, -1, -1, dtype=np.int64)
    z_sum = ((zc[:, None, :] + zc[None, :, :]) % p) @ zw
    corr = np.zeros((P, P, m), dtype=np.int64)
    for e, (i, j) in enumerate(G.pairing_rows.values()):
        corr[:, :, e] = -xa[:, None, j] * xa[None, :, i]
    corr_idx = (corr % p) @ zw
    # element (a, c) * (b, d) = (a + b, c + d + corr(a, b))
    z_part = z_sum[z_sum[None, :, None, :], corr_idx[:, None, :, None]]
    table = (x_sum[:, None, :, None] * Q + z_part).reshape(N, N)
    return GroupTable(table, name=G.name)
