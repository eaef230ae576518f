"""Factories for the groups used throughout the package.

Table-backed groups are returned as :class:`GroupTable`; the class-2 families
come back as :class:`Class2Group` and can be expanded on demand.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .fpclass2 import Class2Group, EdgeSet, build_class2, expand_to_table, is_prime
from .groups import GroupError, GroupTable, SizeLimitError, direct_product, prime_power

CONSTRUCTION_LIMIT = 10_000


class DegenerateGroupWarning(UserWarning):
    """A class-2 group with a central generator."""


def _guard(order: int, what: str) -> None:
    if order > CONSTRUCTION_LIMIT:
        raise SizeLimitError(
            f"{what} has order {order} > {CONSTRUCTION_LIMIT}; "
            "use the structured class-2 representation instead of a table"
        )


def cyclic(n: int, name: str | None = None) -> GroupTable:
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    _guard(n, f"C{n}")
    i = np.arange(n)
    return GroupTable((i[:, None] + i[None, :]) % n, name=name or f"C{n}")


def abelian(moduli: Sequence[int], name: str | None = None) -> GroupTable:
    """Direct product of cyclic groups, ids in mixed radix (first factor most significant)."""
    G = cyclic(moduli[0])
    for m in moduli[1:]:
        G = direct_product(G, cyclic(m), limit=CONSTRUCTION_LIMIT)
    G.name = name or "x".join(f"C{m}" for m in moduli)
    return G


def semidirect(kernel: GroupTable, phi: Sequence[int], d: int, name: str | None = None) -> GroupTable:
    """``K x| C_d`` where the generator of ``C_d`` acts on ``K`` by the automorphism ``phi``.

    ``(x, i) * (y, j) = (x * phi^i(y), i + j mod d)``; the pair ``(x, i)`` has id
    ``x * d + i``.
    """
    k = kernel.order
    n = k * d
    _guard(n, "semidirect product")
    phi = np.asarray(phi, dtype=np.int64)
    if sorted(phi.tolist()) != list(range(k)):
        raise GroupError("action is not a permutation of the kernel")
    kt = kernel.table.astype(np.int64)
    if not np.array_equal(phi[kt], kt[np.ix_(phi, phi)]):
        raise GroupError("action is not a homomorphism of the kernel")
    powers = [np.arange(k)]
    for _ in range(d):
        powers.append(phi[powers[-1]])
    if not np.array_equal(powers[d], powers[0]):
        raise GroupError(f"action does not have order dividing {d}")
    pw = np.stack(powers[:d])                       # pw[i, y] = phi^i(y)
    x = np.arange(k)[:, None, None, None]
    i = np.arange(d)[None, :, None, None]
    y = np.arange(k)[None, None, :, None]
    j = np.arange(d)[None, None, None, :]
    t = kt[x, pw[i, y]] * d + (i + j) % d
    return GroupTable(t.reshape(n, n), name=name or f"{kernel.name}:C{d}")


def metacyclic(m: int, e: int, t: int, name: str | None = None) -> GroupTable:
    """``<r, s | r^m, s^2 = r^t, s r s^-1 = r^e>``; ``r^i s^j`` has id ``j * m + i``."""
    if (e * e) % m != 1 % m or (e * t - t) % m:
        raise GroupError("parameters do not define a group")
    _guard(2 * m, "metacyclic group")
    i = np.arange(m)
    tab = np.empty((2 * m, 2 * m), dtype=np.int64)
    for j in (0, 1):
        for l in (0, 1):
            ex = i[:, None] + pow(e, j, m) * i[None, :] + (t if j and l else 0)
            tab[j * m:(j + 1) * m, l * m:(l + 1) * m] = ((j + l) % 2) * m + ex % m
    return GroupTable(tab, name=name or f"M({m},{e},{t})")


def dihedral(m: int) -> GroupTable:
    """Dihedral group of order ``2m`` (``m >= 3``); ``dihedral(3)`` is S3."""
    if m < 3:
        raise GroupError("dihedral needs m >= 3")
    return metacyclic(m, -1 % m, 0, name="S3" if m == 3 else f"D{2 * m}")


def _inversion(G: GroupTable) -> np.ndarray:
    if not G.is_abelian():
        raise GroupError("generalized dihedral needs an abelian kernel")
    return np.asarray(G.inverses, dtype=np.int64)


def generalized_dihedral(moduli: Sequence[int], name: str | None = None) -> GroupTable:
    """``A x| C_2`` with inversion, ``A`` the abelian group with the given cyclic factors."""
    A = abelian(moduli)
    return semidirect(A, _inversion(A), 2, name=name or f"Dih({A.name})")


def two_group(kind: str, order: int) -> GroupTable:
    """Dihedral, semidihedral or generalized quaternion group of order ``2^k``."""
    pp = prime_power(order)
    if pp is None or pp[0] != 2 or order < 8:
        raise GroupError(f"order {order} is not a power of 2 that is at least 8")
    m = order // 2
    if kind == "dihedral":
        return metacyclic(m, m - 1, 0, name=f"D{order}")
    if kind == "quaternion":
        return metacyclic(m, m - 1, m // 2, name=f"Q{order}")
    if kind == "semidihedral":
        if order < 16:
            raise GroupError("semidihedral needs order >= 16")
        return metacyclic(m, m // 2 - 1, 0, name=f"SD{order}")
    raise GroupError(f"unknown 2-group kind {kind!r}")


# ---------------------------------------------------------------- Frobenius

def _mult_order(u: int, n: int) -> int:
    if math.gcd(u, n) != 1:
        return 0
    k, x = 1, u % n
    while x != 1 % n:
        x = x * u % n
        k += 1
    return k


def _mat_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def _mat_pow(a: np.ndarray, e: int, p: int) -> np.ndarray:
    r = np.eye(a.shape[0], dtype=np.int64)
    while e:
        if e & 1:
            r = _mat_mul(r, a, p)
        a = _mat_mul(a, a, p)
        e >>= 1
    return r


def _companion(coeffs: Sequence[int], p: int) -> np.ndarray:
    """Companion matrix of ``x^a + c_{a-1} x^{a-1} + ... + c_0``."""
    a = len(coeffs)
    c = np.zeros((a, a), dtype=np.int64)
    c[1:, :-1] = np.eye(a - 1, dtype=np.int64)
    c[:, -1] = [(-x) % p for x in coeffs]
    return c


def singer_cycle(p: int, a: int) -> np.ndarray:
    """Companion matrix of the lexicographically first primitive polynomial of degree ``a``.

    Its multiplicative order is ``p^a - 1``.
    """
    full = p**a - 1
    primes = [q for q in range(2, full + 1) if full % q == 0 and is_prime(q)]
    eye = np.eye(a, dtype=np.int64)
    for coeffs in itertools.product(range(p), repeat=a):
        if coeffs[0] == 0:
            continue
        c = _companion(coeffs, p)
        if not np.array_equal(_mat_pow(c, full, p), eye):
            continue
        if all(not np.array_equal(_mat_pow(c, full // q, p), eye) for q in primes):
            return c
    raise GroupError(f"no primitive polynomial of degree {a} over F_{p}")  # unreachable


def _check_fixed_point_free(phi: np.ndarray, d: int) -> None:
    cur = np.arange(len(phi))
    for i in range(1, d):
        cur = phi[cur]
        fixed = np.flatnonzero(cur == np.arange(len(phi)))
        if len(fixed) > 1:
            raise GroupError(f"action power {i} fixes kernel element {int(fixed[1])}")


def frobenius(kernel_kind: str, kernel_order: int, complement_order: int,
              seed: int | None = None, name: str | None = None) -> GroupTable:
    """Frobenius group with kernel ``C_{p^a}`` or ``F_p^a`` and cyclic complement of order ``d``.

    For a cyclic kernel ``seed`` is the acting unit (default: the least unit
    giving a fixed-point-free action of order ``d``).  For an elementary kernel
    the action is ``M^(k (p^a - 1) / d)`` with ``M`` a Singer cycle and ``k = seed``
    (default 1, must be prime to ``d``).
    """
    pp = prime_power(kernel_order)
    if pp is None:
        raise GroupError(f"kernel order {kernel_order} is not a prime power")
    p, a = pp
    d = complement_order
    if d < 2:
        raise GroupError("complement order must be at least 2")
    n = kernel_order
    if kernel_kind == "cyclic":
        if seed is None:
            for u in range(2, n):
                if _mult_order(u, n) == d and all(pow(u, i, p) != 1 for i in range(1, d)):
                    seed = u
                    break
            else:
                raise GroupError(f"C{n} has no fixed-point-free automorphism of order {d}")
        if _mult_order(seed, n) != d:
            raise GroupError(f"unit {seed} does not have order {d} mod {n}")
        K = cyclic(n)
        phi = (np.arange(n) * seed) % n
        default_name = f"C{n}:C{d}"
    elif kernel_kind in ("elementary", "elementaryAbelian"):
        if (p**a - 1) % d:
            raise GroupError(f"{d} does not divide {p}^{a} - 1")
        k = 1 if seed is None else seed
        if math.gcd(k, d) != 1:
            raise GroupError(f"seed {k} is not prime to {d}")
        M = _mat_pow(singer_cycle(p, a), k * (p**a - 1) // d, p)
        K = abelian([p] * a)
        vecs = np.array(list(itertools.product(range(p), repeat=a)), dtype=np.int64).reshape(n, a)
        w = p ** np.arange(a - 1, -1, -1, dtype=np.int64)
        phi = ((vecs @ M.T) % p) @ w
        default_name = f"{K.name}:C{d}"
    else:
        raise GroupError(f"unknown kernel kind {kernel_kind!r}")
    _check_fixed_point_free(phi, d)
    return semidirect(K, phi, d, name=name or default_name)


# ---------------------------------------------------------------- class-2 families

def extraspecial(p: int, r: int, name: str | None = None) -> GroupTable:
    """``F_p^(2r) x F_p`` with ``(v, z)(w, y) = (v + w, z + y + sum v_{2i-1} w_{2i})``.

    Center and derived subgroup are both the ``F_p`` factor.  For odd ``p`` this
    is the exponent-``p`` extraspecial group of order ``p^(1+2r)``.
    """
    if not is_prime(p) or r < 1:
        raise GroupError("extraspecial needs a prime p and r >= 1")
    m = 2 * r
    n = p ** (m + 1)
    _guard(n, "extraspecial group")
    vecs = np.array(list(itertools.product(range(p), repeat=m)), dtype=np.int64)
    w = p ** np.arange(m - 1, -1, -1, dtype=np.int64)
    vsum = ((vecs[:, None, :] + vecs[None, :, :]) % p) @ w
    beta = (vecs[:, None, 0::2] * vecs[None, :, 1::2]).sum(axis=2) % p
    z = np.arange(p)
    t = vsum[:, None, :, None] * p + (z[None, :, None, None] + z[None, None, None, :] + beta[:, None, :, None]) % p
    return GroupTable(t.reshape(n, n), name=name or f"ES{n}")


def gothic(p: int, parts: Sequence[int], name: str | None = None) -> Class2Group:
    """``G(p, n*, S*)`` with ``S*`` the complement of a disjoint union of paths.

    Part ``i`` contributes a path with ``n_i`` edges on ``n_i + 1`` consecutive
    vertices.  A single part of length 2 gives a degenerate group (vertex 2 is
    isolated in ``S*``); it is returned with a warning.
    """
    parts = list(parts)
    if not parts or any(ni < 2 for ni in parts):
        raise GroupError("each part must be at least 2")
    n_star = sum(parts) + len(parts)
    path_edges = []
    start = 1
    for ni in parts:
        path_edges += [(j, j + 1) for j in range(start, start + ni)]
        start += ni + 1
    s_star = EdgeSet.of(n_star, path_edges).complement
    label = ",".join(map(str, parts))
    G = build_class2(p, n_star, s_star, name=name or f"gothic_{p}({label})")
    if not G.nondegenerate:
        warnings.warn(f"{G.name} is degenerate: generators {[i + 1 for i in G.degenerate_directions]} are central",
                      DegenerateGroupWarning, stacklevel=2)
    return G


def path_parts(G: Class2Group) -> list[list[tuple[int, int]]]:
    """The path edge sets of the complement, one list per connected piece."""
    comp = G.complement
    seen: set[int] = set()
    pieces = []
    for v in range(1, G.n + 1):
        if v in seen:
            continue
        stack, piece = [v], set()
        while stack:
            u = stack.pop()
            if u in piece:
                continue
            piece.add(u)
            stack.extend(comp.neighbors[u])
        seen |= piece
        pieces.append(sorted(e for e in comp.sorted_edges if e[0] in piece))
    return pieces


NAMED_EDGE_SETS = {
    "example1": "1-3,1-4,2-4,3-4",
    "example2": "1-4,2-4,3-4",
}


def named_example(which: str, p: int) -> Class2Group:
    if which not in NAMED_EDGE_SETS:
        raise GroupError(f"unknown example {which!r}; choose from {sorted(NAMED_EDGE_SETS)}")
    return build_class2(p, 4, NAMED_EDGE_SETS[which], name=f"{which}_p{p}")


# ---------------------------------------------------------------- specs

FAMILIES = (
    "gpns", "gothic", "dihedral", "generalizedDihedral", "quaternion", "semidihedral",
    "frobeniusCyclicKernel", "frobeniusElementaryKernel", "directProduct", "namedExample",
    "cyclic", "extraspecial", "semidirectCyclic",
)


@dataclass(frozen=True)
class FamilySpec:
    """A recipe for one group.

    ``params`` keys per family:

    ============================  ==========================================
    gpns                          p, n, edges ("1-3,2-4")
    gothic                        p, parts (list)
    dihedral, quaternion,         order
    semidihedral
    generalizedDihedral           moduli (list of cyclic factor orders)
    frobeniusCyclicKernel         kernel, complement, seed (optional)
    frobeniusElementaryKernel     kernel, complement, seed (optional)
    directProduct                 factors (list of FamilySpec)
    namedExample                  which, p
    cyclic                        order
    extraspecial                  p, r
    semidirectCyclic              modulus, unit, complement
    ============================  ==========================================
    """

    family: str
    params: dict[str, Any] = field(default_factory=dict)
    name: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GroupError(f"unknown family {self.family!r}")

    def __hash__(self):
        return hash((self.family, repr(sorted(self.params.items())), self.name))

    def build(self) -> GroupTable | Class2Group:
        f, a = self.family, self.params
        if f == "gpns":
            G = build_class2(int(a["p"]), int(a["n"]), a.get("edges", ""))
        elif f == "gothic":
            G = gothic(int(a["p"]), [int(x) for x in a["parts"]])
        elif f == "namedExample":
            G = named_example(a["which"], int(a["p"]))
        elif f == "dihedral":
            order = int(a["order"])
            if order % 2:
                raise GroupError("dihedral order must be even")
            G = dihedral(order // 2)
        elif f in ("quaternion", "semidihedral"):
            G = two_group(f, int(a["order"]))
        elif f == "generalizedDihedral":
            G = generalized_dihedral([int(x) for x in a["moduli"]])
        elif f in ("frobeniusCyclicKernel", "frobeniusElementaryKernel"):
            kind = "cyclic" if f == "frobeniusCyclicKernel" else "elementary"
            G = frobenius(kind, int(a["kernel"]), int(a["complement"]), a.get("seed"))
        elif f == "directProduct":
            tables = [as_table(s.build()) for s in a["factors"]]
            G = tables[0]
            for H in tables[1:]:
                G = direct_product(G, H, limit=CONSTRUCTION_LIMIT)
        elif f == "cyclic":
            G = cyclic(int(a["order"]))
        elif f == "extraspecial":
            G = extraspecial(int(a["p"]), int(a["r"]))
        else:  # semidirectCyclic
            n, u, d = int(a["modulus"]), int(a["unit"]), int(a["complement"])
            if _mult_order(u, n) == 0 or pow(u, d, n) != 1 % n:
                raise GroupError(f"{u} is not a unit of order dividing {d} mod {n}")
            G = semidirect(cyclic(n), (np.arange(n) * u) % n, d)
        if self.name:
            G.name = self.name
        return G


def as_table(G: GroupTable | Class2Group) -> GroupTable:
    if isinstance(G, GroupTable):
        return G
    _guard(G.order, G.name)
    return expand_to_table(G, limit=CONSTRUCTION_LIMIT)


def _spec(family: str, name: str, **params) -> FamilySpec:
    return FamilySpec(family, params, name)


NAMED_GROUPS: dict[str, FamilySpec] = {
    "S3": _spec("dihedral", "S3", order=6),
    "D8": _spec("dihedral", "D8", order=8),
    "Q8": _spec("quaternion", "Q8", order=8),
    "D16": _spec("dihedral", "D16", order=16),
    "Q16": _spec("quaternion", "Q16", order=16),
    "SD16": _spec("semidihedral", "SD16", order=16),
    "D32": _spec("dihedral", "D32", order=32),
    "ES27": _spec("gpns", "ES27", p=3, n=2, edges="1-2"),
    "ES27x9": _spec("semidirectCyclic", "ES27x9", modulus=9, unit=4, complement=3),
    "ES32": _spec("extraspecial", "ES32", p=2, r=2),
    "example1_p2": _spec("namedExample", "example1_p2", which="example1", p=2),
    "example1_p3": _spec("namedExample", "example1_p3", which="example1", p=3),
    "example2_p2": _spec("namedExample", "example2_p2", which="example2", p=2),
    "example2_p3": _spec("namedExample", "example2_p3", which="example2", p=3),
    "gothic_2(2,2)": _spec("gothic", "gothic_2(2,2)", p=2, parts=[2, 2]),
    "gothic_3(3)": _spec("gothic", "gothic_3(3)", p=3, parts=[3]),
    "gothic_2(3)": _spec("gothic", "gothic_2(3)", p=2, parts=[3]),
    "gothic_2(3,2)": _spec("gothic", "gothic_2(3,2)", p=2, parts=[3, 2]),
    "gothic_3(3,2)": _spec("gothic", "gothic_3(3,2)", p=3, parts=[3, 2]),
    "D18": _spec("frobeniusCyclicKernel", "D18", kernel=9, complement=2),
    "GD18": _spec("frobeniusElementaryKernel", "GD18", kernel=9, complement=2),
    "F14": _spec("frobeniusCyclicKernel", "F14", kernel=7, complement=2),
    "F21": _spec("frobeniusCyclicKernel", "F21", kernel=7, complement=3),
    "F42": _spec("frobeniusCyclicKernel", "F42", kernel=7, complement=6),
    "H42": _spec("directProduct", "H42", factors=[
        _spec("frobeniusCyclicKernel", "F14", kernel=7, complement=2),
        _spec("cyclic", "C3", order=3),
    ]),
    "Q8xC2": _spec("directProduct", "Q8xC2", factors=[
        _spec("quaternion", "Q8", order=8), _spec("cyclic", "C2", order=2),
    ]),
    "ES27xC3": _spec("directProduct", "ES27xC3", factors=[
        _spec("gpns", "ES27", p=3, n=2, edges="1-2"), _spec("cyclic", "C3", order=3),
    ]),
}


def named_group(name: str) -> GroupTable | Class2Group:
    try:
        spec = NAMED_GROUPS[name]
    except KeyError:
        raise GroupError(f"unknown group {name!r}") from None
    return spec.build()
