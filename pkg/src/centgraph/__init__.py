"""Commuting graphs, transversal graphs and centralizer graphs of finite groups."""

from .builders import (
    AbelianGroupError,
    LabeledGroupGraph,
    centralizer_graph,
    commuting_graph,
    star_graph,
    verify_correspondence,
)
from .constructions import FamilySpec, NAMED_GROUPS, as_table, named_group
from .fpclass2 import Class2Group, EdgeSet, build_class2, centralizer_space, expand_to_table, z_space
from .graphs import SimpleGraph, classify_vertex, components, isomorphic, to_dot, to_json
from .groups import GroupError, GroupTable, dump_cayley_table, load_cayley_table
from .verifier import CheckResult, find_isoclinism, run_check, run_pair_check, run_suite

__all__ = [
    "AbelianGroupError", "CheckResult", "Class2Group", "EdgeSet", "FamilySpec", "GroupError", "GroupTable",
    "LabeledGroupGraph", "NAMED_GROUPS", "SimpleGraph", "as_table", "build_class2", "centralizer_graph",
    "centralizer_space", "classify_vertex", "commuting_graph", "components", "dump_cayley_table",
    "expand_to_table", "find_isoclinism", "isomorphic", "load_cayley_table", "named_group",
    "run_check", "run_pair_check", "run_suite", "star_graph", "to_dot", "to_json", "verify_correspondence",
    "z_space",
]
__version__ = "0.1.0"
