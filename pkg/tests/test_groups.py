import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from centgraph.constructions import (
    abelian,
    cyclic,
    dihedral,
    frobenius,
    generalized_dihedral,
    two_group,
)
from centgraph.groups import (
    NOT_NILPOTENT,
    GroupError,
    GroupTable,
    SizeLimitError,
    abelian_invariants,
    center,
    centralizer,
    centralizer_of_set,
    derived_subgroup,
    direct_product,
    distinct_centralizer_family,
    dump_cayley_table,
    element_orders,
    generate,
    is_ca_group,
    is_f_group,
    load_cayley_table,
    lower_central_series,
    nilpotence_class,
    prime_power,
    z_of,
)

from conftest import table


def q8_elements(T):
    """Name Q8 elements: -1 is the central involution; i, j generate."""
    minus = next(g for g in range(1, 8) if T.center_mask[g])
    i = next(g for g in range(8) if element_orders(T, [g])[0] == 4)
    j = next(g for g in range(8) if element_orders(T, [g])[0] == 4 and not T.commute[i, g])
    return minus, i, j


SMALL = ["S3", "D8", "Q8", "D16", "Q16", "SD16", "ES27", "ES27x9", "D18", "GD18", "F21", "H42", "Q8xC2", "ES32"]


# ---------------------------------------------------------------- loading

def test_trivial_group_from_text():
    G = load_cayley_table("1\n0\n", validate=True)
    assert G.order == 1
    assert G.is_abelian()


def test_round_trip_with_comments():
    T = table("S3")
    text = dump_cayley_table(T, comment="symmetric group\nsecond line")
    assert text.startswith("# symmetric group\n# second line\n6\n")
    back = load_cayley_table(text, validate=True)
    assert np.array_equal(back.table, T.table)


def test_s3_loaded_from_text():
    rows = [[0, 1, 2, 3, 4, 5], [1, 2, 0, 5, 3, 4], [2, 0, 1, 4, 5, 3],
            [3, 4, 5, 0, 1, 2], [4, 5, 3, 2, 0, 1], [5, 3, 4, 1, 2, 0]]
    text = "6\n" + "\n".join(" ".join(map(str, r)) for r in rows)
    G = load_cayley_table(text, validate=True)
    assert center(G).order == 1
    assert sum(1 for o in element_orders(G) if o == 2) == 3


@pytest.mark.parametrize("text", [
    "2\n0 1\n",            # too few rows
    "2\n0 1\n1 2\n",       # entry out of range
    "2\n0 1\n1 1\n",       # repeated entry in a row
    "2\n1 0\n0 1\n",       # 0 is not the identity
    "x\n",                  # order is not an integer
    "2\n0 1\n1 0 1\n",     # ragged row
    "",
])
def test_malformed_tables_rejected(text):
    with pytest.raises(GroupError):
        load_cayley_table(text)


def test_nonassociative_latin_square_caught_only_when_validating():
    # a loop of order 5 that is not a group
    rows = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    text = "5\n" + "\n".join(" ".join(map(str, r)) for r in rows)
    load_cayley_table(text)
    with pytest.raises(GroupError, match="associative"):
        load_cayley_table(text, validate=True)


def test_load_limits():
    text = dump_cayley_table(cyclic(12))
    with pytest.raises(SizeLimitError):
        load_cayley_table(text, limit=10)
    with pytest.raises(SizeLimitError):
        load_cayley_table(text, validate=True, validate_limit=10)


# ---------------------------------------------------------------- centers and centralizers

def test_q8_center_and_centralizers():
    T = table("Q8")
    minus, i, j = q8_elements(T)
    assert center(T).members == (0, minus)
    Ci = centralizer(T, i)
    assert set(Ci) == {0, minus, i, T.inv(i)}
    assert centralizer_of_set(T, Ci) == Ci
    assert z_of(T, i) == Ci
    assert derived_subgroup(T).members == (0, minus)
    assert [H.order for H in lower_central_series(T)] == [8, 2, 1]
    assert nilpotence_class(T) == 2
    assert is_ca_group(T) and is_f_group(T)
    fam = distinct_centralizer_family(T)
    assert [c.order for c in fam.centralizers] == [4, 4, 4]


def test_s3():
    T = table("S3")
    assert center(T).order == 1
    involution = next(g for g in range(6) if element_orders(T, [g])[0] == 2)
    assert centralizer(T, involution).order == 2
    assert derived_subgroup(T).order == 3
    assert nilpotence_class(T) is NOT_NILPOTENT
    assert not isinstance(NOT_NILPOTENT, int)
    assert is_ca_group(T)
    assert sorted(c.order for c in distinct_centralizer_family(T).centralizers) == [2, 2, 2, 3]


def test_d8_rotation_center():
    T = dihedral(4)
    r = next(g for g in range(8) if element_orders(T, [g])[0] == 4)
    assert z_of(T, r).order == 4
    assert is_ca_group(T)
    assert nilpotence_class(T) == 2


def test_d16_series():
    T = dihedral(8)
    assert [H.order for H in lower_central_series(T)] == [16, 4, 2, 1]
    assert nilpotence_class(T) == 3
    # the centralizer of the central involution is the whole group
    z = next(g for g in range(1, 16) if T.center_mask[g])
    assert centralizer(T, z).order == 16


def test_abelian_cases():
    A = abelian([2, 6])
    assert center(A).order == A.order
    assert derived_subgroup(A).order == 1
    assert [H.order for H in lower_central_series(A)] == [12, 1]
    assert nilpotence_class(A) == 1
    assert is_ca_group(A)
    with pytest.raises(GroupError):
        distinct_centralizer_family(A)
    assert abelian_invariants(A) == (2, 2, 3)


def test_central_element_has_no_z():
    T = table("Q8")
    minus, _, _ = q8_elements(T)
    with pytest.raises(GroupError):
        z_of(T, minus)
    assert centralizer(T, minus).order == 8
    assert centralizer_of_set(T, center(T)).order == 8
    assert centralizer_of_set(T, T.whole()) == center(T)


@pytest.mark.parametrize("p", [2, 3])
def test_extraspecial_p3_has_p_plus_1_centralizers(p):
    T = table("D8" if p == 2 else "ES27")
    assert len(distinct_centralizer_family(T)) == p + 1


def test_direct_products():
    K = direct_product(cyclic(2), cyclic(2))
    assert K.order == 4 and all(K.mul(g, g) == 0 for g in range(4))
    G = table("S3")
    GT = direct_product(G, cyclic(1))
    assert np.array_equal(GT.table, G.table)
    H = direct_product(frobenius("cyclic", 7, 2), cyclic(3))
    assert H.order == 42 and center(H).order == 3
    with pytest.raises(SizeLimitError):
        direct_product(cyclic(200), cyclic(200))


def test_prime_power():
    assert prime_power(1) is None
    assert prime_power(8) == (2, 3)
    assert prime_power(12) is None
    assert prime_power(7) == (7, 1)


def test_abelian_invariants_of_derived_subgroups():
    assert abelian_invariants(table("D18"), derived_subgroup(table("D18"))) == (9,)
    assert abelian_invariants(table("GD18"), derived_subgroup(table("GD18"))) == (3, 3)
    with pytest.raises(GroupError):
        abelian_invariants(table("S3"))


def test_generate_and_subgroup_checks():
    T = table("D16")
    r = next(g for g in range(16) if element_orders(T, [g])[0] == 8)
    H = generate(T, [r])
    assert H.order == 8 and H.is_closed() and H.is_abelian()
    with pytest.raises(GroupError):
        T.subgroup([1, 2])
    with pytest.raises(GroupError):
        T.subgroup([0, 1, 2])   # 3 does not divide 16


# ---------------------------------------------------------------- structural laws over the corpus

def _noncentral(T):
    return [int(g) for g in np.flatnonzero(~T.center_mask)]


@pytest.mark.parametrize("name", SMALL)
def test_centralizer_laws(name):
    T = table(name)
    nc = _noncentral(T)
    C = {g: centralizer(T, g) for g in nc}
    Z = {g: z_of(T, g) for g in nc}
    Zg = center(T)
    for a in nc:
        assert Zg < Z[a] <= C[a] and a in Z[a]
        assert centralizer_of_set(T, Z[a]) == C[a]                       # double centralizer
        cover = set().union(*(Z[b] for b in nc if b in C[a]))
        assert cover == set(C[a])                                        # covered by the Z(b)
        p = prime_power(T.order)
        if p and C[a].order // Zg.order <= p[0] ** 2:
            assert C[a].is_abelian()
    for a, b in itertools.product(nc, repeat=2):
        assert (a in C[b]) == (Z[a] <= C[b]) == (Z[b] <= C[a])
        assert (a in Z[b]) == (Z[a] <= Z[b])
        assert (C[a] == C[b]) == (Z[a] == Z[b])
        assert (C[a] <= C[b]) == (Z[b] <= Z[a])


@pytest.mark.parametrize("name", SMALL)
def test_intersection_law(name):
    """Z(g) & Z(h) is Z(G) or generated by the Z(c) for noncentral c inside it."""
    T = table(name)
    nc = _noncentral(T)
    fam = distinct_centralizer_family(T)
    Zg = center(T)
    for Za, Zb in itertools.combinations(fam.centers, 2):
        meet = Za & Zb
        if meet == Zg:
            continue
        inside = [c for c in nc if c in meet]
        gen = generate(T, [x for c in inside for x in z_of(T, c)])
        assert gen == meet


# ---------------------------------------------------------------- property tests

def _relabel(T: GroupTable, perm) -> GroupTable:
    """Same group with non-identity ids permuted."""
    perm = np.asarray(perm)
    inv = np.argsort(perm)
    return GroupTable(perm[T.table[np.ix_(inv, inv)]], name=T.name)


groups = st.sampled_from(["S3", "D8", "Q8", "D16", "SD16", "ES27", "D18", "GD18", "F21", "Q8xC2"])


@settings(max_examples=40, deadline=None)
@given(name=groups, data=st.data())
def test_invariants_survive_relabeling(name, data):
    T = table(name)
    rest = data.draw(st.permutations(range(1, T.order)))
    R = _relabel(T, [0, *rest])
    R.check_associative()
    assert center(R).order == center(T).order
    assert derived_subgroup(R).order == derived_subgroup(T).order
    assert nilpotence_class(R) == nilpotence_class(T)
    assert is_ca_group(R) == is_ca_group(T)
    assert is_f_group(R) == is_f_group(T)
    assert sorted(element_orders(R).tolist()) == sorted(element_orders(T).tolist())
    assert sorted(c.order for c in distinct_centralizer_family(R).centralizers) == \
        sorted(c.order for c in distinct_centralizer_family(T).centralizers)


@settings(max_examples=25, deadline=None)
@given(a=groups, b=st.sampled_from([1, 2, 3, 4]))
def test_direct_product_with_cyclic(a, b):
    G = table(a)
    P = direct_product(G, cyclic(b))
    assert center(P).order == center(G).order * b
    assert derived_subgroup(P).order == derived_subgroup(G).order
    assert is_ca_group(P) == is_ca_group(G)
    assert len(distinct_centralizer_family(P)) == len(distinct_centralizer_family(G))


@settings(max_examples=30, deadline=None)
@given(m=st.integers(3, 20))
def test_dihedral_family(m):
    T = dihedral(m)
    assert T.order == 2 * m
    assert center(T).order == (2 if m % 2 == 0 else 1)
    # every reflection is an involution
    assert sum(1 for o in element_orders(T) if o == 2) == m + (1 if m % 2 == 0 else 0)
    T.check_associative()


@settings(max_examples=15, deadline=None)
@given(k=st.integers(3, 6), kind=st.sampled_from(["dihedral", "quaternion", "semidihedral"]))
def test_two_group_class(k, kind):
    if kind == "semidihedral" and k < 4:
        return
    T = two_group(kind, 2**k)
    assert nilpotence_class(T) == k - 1
    assert center(T).order == 2


@settings(max_examples=10, deadline=None)
@given(moduli=st.lists(st.sampled_from([2, 3, 4, 5]), min_size=1, max_size=3))
def test_generalized_dihedral_derived(moduli):
    T = generalized_dihedral(moduli)
    A = int(np.prod(moduli))
    assert T.order == 2 * A
    # the derived subgroup is the image of squaring on the abelian part
    assert derived_subgroup(T).order == int(np.prod([m // (2 if m % 2 == 0 else 1) for m in moduli]))
