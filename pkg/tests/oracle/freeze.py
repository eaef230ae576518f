"""Regenerate ``frozen.json`` from the brute-force reference.

    python -m tests.oracle.freeze
"""

from __future__ import annotations

import itertools
import json
import pathlib
import time

from . import brute as B

OUT = pathlib.Path(__file__).with_name("frozen.json")

EXAMPLE1 = [(1, 3), (1, 4), (2, 4), (3, 4)]
EXAMPLE2 = [(1, 4), (2, 4), (3, 4)]


def gothic_edges(parts):
    n = sum(parts) + len(parts)
    paths, start = set(), 1
    for k in parts:
        paths |= {(v, v + 1) for v in range(start, start + k)}
        start += k + 1
    return n, [e for e in itertools.combinations(range(1, n + 1), 2) if e not in paths]


def table_groups():
    F14 = B.affine(7, [6], "F14")
    C3 = B.cyclic(3)
    C2 = B.cyclic(2)
    Q8 = B.two_group_matrix("quaternion", 8)
    ES27 = B.cocycle_group(3, 2, [(1, 2)], "ES27")
    return {
        "S3": B.dihedral_perm(3),
        "D8": B.dihedral_perm(4),
        "Q8": Q8,
        "D16": B.two_group_matrix("dihedral", 16),
        "Q16": B.two_group_matrix("quaternion", 16),
        "SD16": B.two_group_matrix("semidihedral", 16),
        "D32": B.dihedral_perm(16),
        "ES27": ES27,
        "ES27x9": B.affine(9, [4], "C9:C3"),
        "ES32": B.central_product_d8(),
        "D18": B.affine(9, [8], "D18"),
        "GD18": B.affine(3, [2], "GD18", dim=2),
        "F14": F14,
        "F21": B.affine(7, [2], "F21"),
        "F42": B.affine(7, [3], "F42"),
        "H42": B.product(F14, C3, "H42"),
        "Q8xC2": B.product(Q8, C2, "Q8xC2"),
        "ES27xC3": B.product(ES27, C3, "ES27xC3"),
        "example1_p2": B.cocycle_group(2, 4, EXAMPLE1, "example1_p2"),
        "example2_p2": B.cocycle_group(2, 4, EXAMPLE2, "example2_p2"),
        "gothic_2(3)": B.cocycle_group(2, *gothic_edges([3]), "gothic_2(3)"),
    }


def class2_groups():
    out = {
        "ES27": (3, 2, [(1, 2)]),
        "example1_p2": (2, 4, EXAMPLE1),
        "example1_p3": (3, 4, EXAMPLE1),
        "example2_p2": (2, 4, EXAMPLE2),
        "example2_p3": (3, 4, EXAMPLE2),
    }
    for p, parts in [(2, [2, 2]), (3, [3]), (2, [3]), (2, [3, 2]), (3, [3, 2])]:
        n, e = gothic_edges(parts)
        out[f"gothic_{p}({','.join(map(str, parts))})"] = (p, n, e)
    return out


def main():
    doc = {"tables": {}, "class2": {}}
    for name, G in table_groups().items():
        t = time.time()
        doc["tables"][name] = B.group_metrics(G)
        print(f"{name}: {time.time() - t:.1f}s")
    for name, (p, n, e) in class2_groups().items():
        t = time.time()
        doc["class2"][name] = B.class2_metrics(p, n, e)
        print(f"{name}: {time.time() - t:.1f}s")
    OUT.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")


if __name__ == "__main__":
    main()
