"""Finite groups given by a full multiplication (Cayley) table.

Elements are integer ids ``0 .. order-1`` and element ``0`` is always the
identity.  Subgroups are explicit sorted sets of element ids.  Everything here
is brute force over the table, which keeps it usable as an oracle for the
structured class-2 code in :mod:`centgraph.fpclass2`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GroupError",
    "CayleyFormatError",
    "SizeLimitError",
    "NotNilpotent",
    "NOT_NILPOTENT",
    "LOAD_LIMIT",
    "VALIDATE_LIMIT",
    "GroupTable",
    "Subgroup",
    "CentralizerFamily",
    "load_cayley_table",
    "dump_cayley_table",
    "generate",
    "center",
    "centralizer",
    "centralizer_of_set",
    "z_of",
    "commutator_subgroup",
    "derived_subgroup",
    "lower_central_series",
    "nilpotence_class",
    "is_ca_group",
    "is_f_group",
    "distinct_centralizer_family",
    "direct_product",
    "element_orders",
    "abelian_invariants",
    "prime_power",
]

LOAD_LIMIT = 10_000
VALIDATE_LIMIT = 2048


class GroupError(ValueError):
    """Invalid group data or a request the group cannot satisfy."""


class CayleyFormatError(GroupError):
    pass


class SizeLimitError(GroupError):
    pass


class NotNilpotent:
    """Marker returned by :func:`nilpotence_class` for non-nilpotent groups."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NOT_NILPOTENT"

    def __reduce__(self):
        return (NotNilpotent, ())


NOT_NILPOTENT = NotNilpotent()


def prime_power(n: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``n == p**k`` and ``k >= 1``, else ``None``."""
    if n < 2:
        return None
    p = next(d for d in range(2, n + 1) if n % d == 0)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _table_dtype(order: int):
    return np.int16 if order < 2**15 else np.int32


class GroupTable:
    """A finite group stored as its ``order x order`` multiplication table.

    ``table[i, j]`` is the id of ``(element i) * (element j)``.  The table is
    checked to be a Latin square with two-sided identity ``0`` on
    construction; associativity is only checked by :meth:`check_associative`.
    """

    def __init__(self, table, name: str = "G"):
        arr = np.asarray(table)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise GroupError(f"table must be a nonempty square array, got shape {arr.shape}")
        m = arr.shape[0]
        if arr.dtype.kind not in "iu":
            raise GroupError("table entries must be integers")
        if arr.min() < 0 or arr.max() >= m:
            raise GroupError(f"table entry out of range [0, {m})")
        arr = arr.astype(_table_dtype(m))
        ids = np.arange(m)
        if not (np.array_equal(arr[0], ids) and np.array_equal(arr[:, 0], ids)):
            raise GroupError("element 0 is not a two-sided identity")
        seen = np.zeros((m, m), dtype=bool)
        seen[ids[:, None], arr] = True
        rows_ok = seen.all(axis=1)
        if not rows_ok.all():
            raise GroupError(f"row {int(np.argmin(rows_ok))} is not a permutation")
        seen[:] = False
        seen[arr, ids[None, :]] = True
        cols_ok = seen.all(axis=0)
        if not cols_ok.all():
            raise GroupError(f"column {int(np.argmin(cols_ok))} is not a permutation")
        arr.setflags(write=False)
        self.table = arr
        self.order = m
        self.name = name

    identity_id = 0

    def __repr__(self) -> str:
        return f"GroupTable(name={self.name!r}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def commutator(self, a: int, b: int) -> int:
        """``[a, b] = a^-1 b^-1 a b``."""
        t, iv = self.table, self.inverses
        return int(t[t[iv[a], iv[b]], t[a, b]])

    @cached_property
    def inverses(self) -> np.ndarray:
        inv = np.argmax(self.table == 0, axis=1)
        inv.setflags(write=False)
        return inv

    @cached_property
    def commute(self) -> np.ndarray:
        """Boolean matrix, ``commute[a, b]`` iff ``ab == ba``."""
        c = self.table == self.table.T
        c.setflags(write=False)
        return c

    @cached_property
    def center_mask(self) -> np.ndarray:
        mask = self.commute.all(axis=1)
        mask.setflags(write=False)
        return mask

    def is_abelian(self) -> bool:
        return bool(self.center_mask.all())

    def check_associative(self, limit: int = VALIDATE_LIMIT) -> None:
        """Raise :class:`GroupError` unless ``(ab)c == a(bc)`` for all triples."""
        if self.order > limit:
            raise SizeLimitError(
                f"associativity check on order {self.order} exceeds limit {limit}"
            )
        t = self.table.astype(np.intp)
        for a in range(self.order):
            left = t[t[a]]  # left[b, c] = (ab)c
            right = t[a][t]  # right[b, c] = a(bc)
            if not np.array_equal(left, right):
                b, c = np.argwhere(left != right)[0]
                raise GroupError(f"table is not associative at ({a}, {b}, {c})")

    def subgroup(self, members: Iterable[int]) -> "Subgroup":
        return Subgroup(self, tuple(sorted(set(int(x) for x in members))))

    def subgroup_from_mask(self, mask: np.ndarray) -> "Subgroup":
        return Subgroup(self, tuple(int(x) for x in np.flatnonzero(mask)))

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))


@dataclass(frozen=True)
class Subgroup:
    """A subgroup as an explicit sorted tuple of element ids."""

    parent: GroupTable = field(compare=False, repr=False)
    members: tuple[int, ...]
    _set: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_set", frozenset(self.members))
        if not self.members or self.members[0] != 0:
            raise GroupError("subgroup must contain the identity")
        if self.parent.order % len(self.members):
            raise GroupError(
                f"subgroup of size {len(self.members)} violates Lagrange in order {self.parent.order}"
            )

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, g) -> bool:
        return g in self._set

    def __le__(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def __lt__(self, other: "Subgroup") -> bool:
        return self._set < other._set

    def __ge__(self, other: "Subgroup") -> bool:
        return self._set >= other._set

    def __gt__(self, other: "Subgroup") -> bool:
        return self._set > other._set

    def __and__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, tuple(sorted(self._set & other._set)))

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        return m

    @cached_property
    def ids(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.intp)

    def is_abelian(self) -> bool:
        ids = self.ids
        return bool(self.parent.commute[np.ix_(ids, ids)].all())

    def is_closed(self) -> bool:
        """Full closure check (products and inverses stay inside)."""
        ids = self.ids
        prods = self.parent.table[np.ix_(ids, ids)]
        return bool(self.mask[prods].all() and self.mask[self.parent.inverses[ids]].all())


def load_cayley_table(
    text: str,
    validate: bool = False,
    name: str = "G",
    limit: int = LOAD_LIMIT,
    validate_limit: int = VALIDATE_LIMIT,
) -> GroupTable:
    """Parse the plain-text Cayley format.

    Line 1 holds the order ``m``; the next ``m`` lines hold ``m`` ids each.
    Lines starting with ``#`` and blank lines are ignored.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise CayleyFormatError("empty Cayley document")
    try:
        m = int(lines[0])
    except ValueError:
        raise CayleyFormatError(f"first line must be the order, got {lines[0]!r}") from None
    if m < 1:
        raise CayleyFormatError("order must be positive")
    if m > limit:
        raise SizeLimitError(f"order {m} exceeds load limit {limit}")
    rows = lines[1:]
    if len(rows) != m:
        raise CayleyFormatError(f"expected {m} table rows, found {len(rows)}")
    data = []
    for i, row in enumerate(rows):
        parts = row.split()
        if len(parts) != m:
            raise CayleyFormatError(f"row {i} has {len(parts)} entries, expected {m}")
        try:
            data.append([int(x) for x in parts])
        except ValueError:
            raise CayleyFormatError(f"row {i} contains a non-integer entry") from None
    arr = np.array(data, dtype=np.int64)
    if arr.min() < 0 or arr.max() >= m:
        raise CayleyFormatError(f"entry out of range [0, {m})")
    try:
        G = GroupTable(arr, name=name)
    except GroupError as exc:
        raise CayleyFormatError(str(exc)) from None
    if validate:
        G.check_associative(limit=validate_limit)
    return G


def dump_cayley_table(G: GroupTable, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {ln}" for ln in comment.splitlines())
    out.append(str(G.order))
    out.extend(" ".join(map(str, row)) for row in G.table.tolist())
    return "\n".join(out) + "\n"


def generate(G: GroupTable, gens: Iterable[int]) -> Subgroup:
    """Subgroup generated by ``gens`` (closure under right multiplication)."""
    t = G.table
    inside = np.zeros(G.order, dtype=bool)
    inside[0] = True
    elems = [0]
    used: list[int] = []
    for s in gens:
        s = int(s)
        if inside[s]:
            continue
        used.append(s)
        # every element reached so far must be re-multiplied by the new generator
        frontier = list(elems)
        while frontier:
            nxt = []
            for x in frontier:
                for g in used:
                    y = int(t[x, g])
                    if not inside[y]:
                        inside[y] = True
                        elems.append(y)
                        nxt.append(y)
            frontier = nxt
    return G.subgroup_from_mask(inside)


def center(G: GroupTable) -> Subgroup:
    return G.subgroup_from_mask(G.center_mask)


def centralizer(G: GroupTable, g: int) -> Subgroup:
    return G.subgroup_from_mask(G.commute[g])


def centralizer_of_set(G: GroupTable, S: Subgroup | Iterable[int]) -> Subgroup:
    ids = np.asarray(list(S), dtype=np.intp)
    if ids.size == 0:
        return G.whole()
    return G.subgroup_from_mask(G.commute[:, ids].all(axis=1))


def _center_of_members(G: GroupTable, ids: np.ndarray) -> np.ndarray:
    mask = np.zeros(G.order, dtype=bool)
    mask[ids[G.commute[np.ix_(ids, ids)].all(axis=1)]] = True
    return mask


def z_of(G: GroupTable, g: int) -> Subgroup:
    """``Z(g) = Z(C_G(g))`` for a noncentral element ``g``."""
    if G.center_mask[g]:
        raise GroupError(f"Z(g) is only defined for noncentral g; element {g} is central")
    ids = np.flatnonzero(G.commute[g])
    return G.subgroup_from_mask(_center_of_members(G, ids))


def _generating_set(G: GroupTable, H: Subgroup) -> list[int]:
    gens: list[int] = []
    cur = G.trivial()
    for x in H.members:
        if x not in cur:
            gens.append(x)
            cur = generate(G, gens)
    return gens


def commutator_subgroup(G: GroupTable, H: Subgroup, K: Subgroup) -> Subgroup:
    """``[H, K]``, generated by all ``[h, k]``.

    Small inputs use every pair; larger ones take the normal closure in
    ``<H, K>`` of the commutators of generating sets, which is the same group.
    """
    t, iv = G.table.astype(np.intp), G.inverses
    if H.order * K.order <= 2**20:
        h, k = H.ids, K.ids
        comms = t[t[np.ix_(iv[h], iv[k])], t[np.ix_(h, k)]]
        return generate(G, np.unique(comms))
    gh, gk = _generating_set(G, H), _generating_set(G, K)
    seeds = {G.commutator(a, b) for a in gh for b in gk}
    N = generate(G, seeds)
    conj = gh + gk
    while True:
        gens = _generating_set(G, N)
        extra = {int(t[t[iv[c], n], c]) for n in gens for c in conj}
        if all(e in N for e in extra):
            return N
        N = generate(G, list(N.members) + sorted(extra))


def derived_subgroup(G: GroupTable) -> Subgroup:
    W = G.whole()
    return commutator_subgroup(G, W, W)


def lower_central_series(G: GroupTable) -> list[Subgroup]:
    """``[G_1 = G, G_2 = G', ...]``, strictly descending.

    Stops at the trivial subgroup, or at the first term with
    ``[G_i, G] == G_i`` when the group is not nilpotent.
    """
    W = G.whole()
    series = [W]
    while series[-1].order > 1:
        nxt = commutator_subgroup(G, series[-1], W)
        if nxt == series[-1]:
            break
        series.append(nxt)
    return series


def nilpotence_class(G: GroupTable) -> int | NotNilpotent:
    series = lower_central_series(G)
    if series[-1].order > 1:
        return NOT_NILPOTENT
    return len(series) - 1


def _noncentral_centralizer_masks(G: GroupTable) -> dict[bytes, tuple[int, np.ndarray]]:
    """Distinct centralizers of noncentral elements, keyed by packed row."""
    seen: dict[bytes, tuple[int, np.ndarray]] = {}
    packed = np.packbits(G.commute, axis=1)
    for g in np.flatnonzero(~G.center_mask):
        key = packed[g].tobytes()
        if key not in seen:
            seen[key] = (int(g), G.commute[g])
    return seen


def is_ca_group(G: GroupTable) -> bool:
    for _, row in _noncentral_centralizer_masks(G).values():
        ids = np.flatnonzero(row)
        if not G.commute[np.ix_(ids, ids)].all():
            return False
    return True


def is_f_group(G: GroupTable) -> bool:
    rows = [row for _, row in _noncentral_centralizer_masks(G).values()]
    for i, a in enumerate(rows):
        for j, b in enumerate(rows):
            if i != j and not (a & ~b).any():
                return False
    return True


@dataclass
class CentralizerFamily:
    """The distinct centralizers C(g) and their centers Z(g), index-aligned."""

    centralizers: list[Subgroup]
    centers: list[Subgroup]
    representatives: list[int]
    class_of: dict[int, int]

    def __len__(self) -> int:
        return len(self.centralizers)


def distinct_centralizer_family(G: GroupTable, verify: bool = True) -> CentralizerFamily:
    """Deduplicated centralizers of noncentral elements, with their ``Z(g)``.

    Representatives are the least element id in each class.  With ``verify``
    the pairing ``C -> Z`` is checked to be injective and containment
    reversing.
    """
    if G.is_abelian():
        raise GroupError(f"{G.name} is abelian; it has no noncentral elements")
    packed = np.packbits(G.commute, axis=1)
    index: dict[bytes, int] = {}
    reps: list[int] = []
    class_of: dict[int, int] = {}
    for g in np.flatnonzero(~G.center_mask):
        key = packed[g].tobytes()
        if key not in index:
            index[key] = len(reps)
            reps.append(int(g))
        class_of[int(g)] = index[key]
    cents = [centralizer(G, g) for g in reps]
    zs = [z_of(G, g) for g in reps]
    if verify:
        if len(set(zs)) != len(zs):
            raise AssertionError("distinct centralizers with equal Z(g)")
        for i in range(len(reps)):
            for j in range(len(reps)):
                if (cents[i] <= cents[j]) != (zs[j] <= zs[i]):
                    raise AssertionError(
                        f"C -> Z not containment reversing at reps {reps[i]}, {reps[j]}"
                    )
    return CentralizerFamily(cents, zs, reps, class_of)


def direct_product(G: GroupTable, H: GroupTable, limit: int = LOAD_LIMIT) -> GroupTable:
    """Componentwise product; element ``(g, h)`` has id ``g * |H| + h``."""
    n = G.order * H.order
    if n > limit:
        raise SizeLimitError(f"direct product of order {n} exceeds limit {limit}")
    a = G.table.astype(np.int64)
    b = H.table.astype(np.int64)
    t = (a[:, None, :, None] * H.order + b[None, :, None, :]).reshape(n, n)
    return GroupTable(t, name=f"{G.name}x{H.name}")


def element_orders(G: GroupTable, ids: Sequence[int] | None = None) -> np.ndarray:
    ids = np.arange(G.order) if ids is None else np.asarray(ids, dtype=np.intp)
    t = G.table
    cur = ids.copy()
    orders = np.zeros(len(ids), dtype=np.int64)
    k = 1
    while (orders == 0).any():
        done = (cur == 0) & (orders == 0)
        orders[done] = k
        cur = t[cur, ids]
        k += 1
    return orders


def abelian_invariants(G: GroupTable, H: Subgroup | None = None) -> tuple[int, ...]:
    """Elementary divisors (prime powers, sorted) of an abelian subgroup."""
    H = G.whole() if H is None else H
    if not H.is_abelian():
        raise GroupError("abelian invariants requested for a nonabelian subgroup")
    orders = element_orders(G, H.members)
    result: list[int] = []
    n = H.order
    for p in _prime_factors(n):
        # counts[k] = #{x : x^(p^k) = 1}; log_p of successive ratios counts cyclic factors
        counts = [1]
        k = 1
        while True:
            c = int(sum(1 for o in orders if (p**k) % o == 0))
            if c == counts[-1]:
                break
            counts.append(c)
            k += 1
        ranks = [round(math.log(counts[i] // counts[i - 1], p)) for i in range(1, len(counts))]
        ranks.append(0)
        for i in range(len(ranks) - 1):
            result.extend([p ** (i + 1)] * (ranks[i] - ranks[i + 1]))
    return tuple(sorted(result))
