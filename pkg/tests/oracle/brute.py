"""Independent brute-force reference computations.

Groups are built here from permutations, matrices, affine maps and explicit
cocycles, never from the library's constructors, and every quantity is
computed straight from the definitions with Python sets and networkx.
"""

from __future__ import annotations

import itertools
from collections import Counter

import networkx as nx


# ---------------------------------------------------------------- groups

class Group:
    def __init__(self, gens, mul, identity, name):
        elems = [identity]
        seen = {identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = mul(x, s)
                    if y not in seen:
                        seen.add(y)
                        elems.append(y)
                        nxt.append(y)
            frontier = nxt
        self.elems = elems
        self.index = {e: i for i, e in enumerate(elems)}
        self.n = len(elems)
        self.name = name
        self.t = [[self.index[mul(a, b)] for b in elems] for a in elems]
        self.inv = [row.index(0) for row in self.t]

    def commute(self, a, b):
        return self.t[a][b] == self.t[b][a]

    def comm(self, a, b):
        t, inv = self.t, self.inv
        return t[t[inv[a]][inv[b]]][t[a][b]]


def perm_mul(a, b):
    """Apply a, then b."""
    return tuple(b[a[i]] for i in range(len(a)))


def dihedral_perm(m):
    r = tuple((i + 1) % m for i in range(m))
    s = tuple((-i) % m for i in range(m))
    return Group([r, s], perm_mul, tuple(range(m)), f"D{2 * m}")


def mat_mul_mod(q):
    def mul(a, b):
        (a11, a12, a21, a22), (b11, b12, b21, b22) = a, b
        return ((a11 * b11 + a12 * b21) % q, (a11 * b12 + a12 * b22) % q,
                (a21 * b11 + a22 * b21) % q, (a21 * b12 + a22 * b22) % q)
    return mul


def two_group_matrix(kind, order):
    """Dihedral, quaternion or semidihedral 2-groups inside GL(2, F_17)."""
    q, m = 17, order // 2
    zeta = next(z for z in range(2, q) if pow(z, m, q) == 1 and all(pow(z, d, q) != 1 for d in range(1, m)))
    if kind == "semidihedral":
        r = (zeta, 0, 0, pow(zeta, m // 2 - 1, q))
        s = (0, 1, 1, 0)
    else:
        r = (zeta, 0, 0, pow(zeta, -1, q))
        s = (0, q - 1, 1, 0) if kind == "quaternion" else (0, 1, 1, 0)
    return Group([r, s], mat_mul_mod(q), (1, 0, 0, 1), f"{kind}{order}")


def affine(modulus, mults, name, dim=1):
    """x -> a x + b with a in ``mults`` over Z_modulus (dim 1) or F_p^dim with scalar a."""
    if dim == 1:
        mul = lambda f, g: ((f[0] * g[0]) % modulus, (f[1] * g[0] + g[1]) % modulus)
        gens = [(a, 0) for a in mults] + [(1, 1)]
        return Group(gens, mul, (1, 0), name)

    def mul(f, g):
        return ((f[0] * g[0]) % modulus, tuple((x * g[0] + y) % modulus for x, y in zip(f[1], g[1])))
    zero = tuple([0] * dim)
    gens = [(a, zero) for a in mults] + [(1, tuple(int(i == j) for j in range(dim))) for i in range(dim)]
    return Group(gens, mul, (1, zero), name)


def product(G, H, name):
    mul = lambda x, y: (G.t[x[0]][y[0]], H.t[x[1]][y[1]])
    gens = [(i, 0) for i in range(G.n)] + [(0, j) for j in range(H.n)]
    return Group(gens, mul, (0, 0), name)


def cyclic(n):
    return Group([1], lambda a, b: (a + b) % n, 0, f"C{n}")


def cocycle_group(p, n, edges, name):
    """x^a z^c with (a, c)(b, d) = (a + b, c + d + (a_i b_j)_{ij}).

    The cocycle differs from the library's normal form but has the same
    commutator pairing, so the groups are isomorphic."""
    edges = sorted(edges)

    def mul(x, y):
        a, c = x
        b, d = y
        s = tuple((u + v) % p for u, v in zip(a, b))
        z = tuple((c[k] + d[k] + a[i - 1] * b[j - 1]) % p for k, (i, j) in enumerate(edges))
        return (s, z)
    zero = (tuple([0] * n), tuple([0] * len(edges)))
    gens = [(tuple(int(i == j) for j in range(n)), zero[1]) for i in range(n)]
    return Group(gens, mul, zero, name)


def central_product_d8():
    D = dihedral_perm(4)
    z = D.t[D.index[(1, 2, 3, 0)]][D.index[(1, 2, 3, 0)]]

    def canon(x):
        return min(x, (D.t[x[0]][z], D.t[x[1]][z]))
    mul = lambda x, y: canon((D.t[x[0]][y[0]], D.t[x[1]][y[1]]))
    gens = [canon((i, 0)) for i in range(D.n)] + [canon((0, j)) for j in range(D.n)]
    return Group(gens, mul, (0, 0), "D8oD8")


# ---------------------------------------------------------------- subgroups

def closure(G, gens):
    out = {0}
    frontier = [0]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = G.t[x][s]
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


def commutator_group(G, A, B):
    return closure(G, {G.comm(a, b) for a in A for b in B})


def lower_central(G):
    series = [frozenset(range(G.n))]
    while True:
        nxt = commutator_group(G, series[-1], range(G.n))
        if nxt == series[-1]:
            return series, False
        series.append(nxt)
        if len(nxt) == 1:
            return series, True


def element_order(G, x):
    k, y = 1, x
    while y != 0:
        y = G.t[y][x]
        k += 1
    return k


# ---------------------------------------------------------------- commuting structure

class Relation:
    """A set of vertices with a commuting relation; quotient-level analysis."""

    def __init__(self, points, commute, center_order):
        self.points = list(points)
        self.commute = commute
        self.center_order = center_order
        cen = [x for x in self.points if all(commute(x, y) for y in self.points)]
        self.central = set(cen)
        self.noncentral = [x for x in self.points if x not in self.central]
        self.C = {x: frozenset(y for y in self.points if commute(x, y)) for x in self.noncentral}
        self.Z = {x: frozenset(y for y in self.C[x] if all(commute(y, w) for w in self.C[x])) for x in self.noncentral}

    def centralizer_of(self, S):
        return frozenset(y for y in self.points if all(self.commute(y, s) for s in S))

    def gamma(self):
        zs = sorted(set(self.Z.values()), key=lambda z: sorted(map(str, z)))
        g = nx.Graph()
        g.add_nodes_from(range(len(zs)))
        cz = [self.centralizer_of(z) for z in zs]
        for a, b in itertools.combinations(range(len(zs)), 2):
            if zs[b] <= cz[a]:
                assert zs[a] <= cz[b]
                g.add_edge(a, b)
        return g, zs

    def star(self):
        g = nx.Graph()
        g.add_nodes_from(self.noncentral)
        for a, b in itertools.combinations(self.noncentral, 2):
            if self.commute(a, b):
                g.add_edge(a, b)
        return g


def closed_nbhd(g, v):
    return frozenset(g[v]) | {v}


def status_counts(g):
    out = Counter()
    for v in g:
        if g.degree(v) == 0:
            out["isolated"] += 1
            continue
        cv = closed_nbhd(g, v)
        if any(cv < closed_nbhd(g, w) for w in g[v]):
            out["subordinate"] += 1
        else:
            out["independent"] += 1
    return dict(out)


def component_profile(g):
    prof = []
    for comp in nx.connected_components(g):
        sub = g.subgraph(comp)
        prof.append([len(comp), nx.diameter(sub) if len(comp) > 1 else 0])
    return sorted(prof)


def twin_class_count(g):
    return len({closed_nbhd(g, v) if g.degree(v) else frozenset([v]) for v in g})


def relation_metrics(R: Relation) -> dict:
    gz, zs = R.gamma()
    cs = set(R.C.values())
    star = R.star()
    strict = any(a < b for a in cs for b in cs)
    ca = all(all(R.commute(x, y) for x in c for y in c) for c in cs)
    return {
        "centralIndex": len(R.points),
        "distinctCentralizers": len(cs),
        "gz": {"vertices": gz.number_of_nodes(), "edges": gz.number_of_edges(),
               "components": component_profile(gz), "status": status_counts(gz)},
        "star": {"vertices": star.number_of_nodes(), "edges": star.number_of_edges(),
                 "components": component_profile(star), "twinClasses": twin_class_count(star),
                 "status": status_counts(star)},
        "ca": ca,
        "fGroup": not strict,
        "centralizerIndices": sorted(Counter(len(c) for c in cs).items()),
    }


def group_metrics(G: Group) -> dict:
    center = frozenset(x for x in range(G.n) if all(G.commute(x, y) for y in range(G.n)))
    # cosets of the center, least element as representative
    rep = {x: min(G.t[x][z] for z in center) for x in range(G.n)}
    reps = sorted(set(rep.values()))
    R = Relation(reps, G.commute, len(center))
    m = relation_metrics(R)
    series, nilpotent = lower_central(G)
    derived = commutator_group(G, range(G.n), range(G.n))
    cls = len(series) - 1 if nilpotent else None
    upper = None
    if nilpotent and cls >= 3:
        last = series[cls - 2]      # G_{n-1}, with series[0] = G_1
        upper = G.n // len([x for x in range(G.n) if all(G.commute(x, y) for y in last)])
    comm = nx.Graph()
    nonc = [x for x in range(G.n) if x not in center]
    comm.add_nodes_from(nonc)
    comm.add_edges_from((a, b) for a, b in itertools.combinations(nonc, 2) if G.commute(a, b))
    m.update({
        "order": G.n,
        "centerOrder": len(center),
        "derivedOrder": len(derived),
        "derivedElementOrders": sorted(Counter(element_order(G, x) for x in derived).items()),
        "nilpotenceClass": cls,
        "upperIndex": upper,
        "commuting": {"vertices": comm.number_of_nodes(), "edges": comm.number_of_edges(),
                      "components": component_profile(comm), "twinClasses": twin_class_count(comm)},
    })
    return m


def class2_metrics(p, n, edges) -> dict:
    """Quotient-level metrics of G(p, n, S) from the pairing alone."""
    edges = sorted(edges)
    vecs = list(itertools.product(range(p), repeat=n))
    commute = lambda a, b: all((a[i - 1] * b[j - 1] - a[j - 1] * b[i - 1]) % p == 0 for i, j in edges)
    isolated = {v for v in range(1, n + 1) if not any(v in e for e in edges)}
    # quotient by the center: drop the central coordinates
    free = [k for k in range(n) if k + 1 not in isolated]
    pts = [v for v in vecs if all(v[k] == 0 for k in range(n) if k not in free)]
    z = p ** (len(edges) + len(isolated))
    m = relation_metrics(Relation(pts, commute, z))
    m.update({"order": p ** (n + len(edges)), "centerOrder": z, "derivedOrder": p ** len(edges)})
    m["commutingVertices"] = (len(pts) - 1) * z
    return m
