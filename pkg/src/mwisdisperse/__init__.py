"""Disperser-based maximum weight independent set solvers for hereditary graph classes."""

from .assembly import AssemblyInput, AssemblyOutput, assemble, atoms_to_matching, build_auxiliary, matching_to_atoms
from .classes import CgeT, ExplicitH, GraphClass, LgeT, Pt, YgeT, parse_class
from .dispersers import (Disperser, DisperserParams, build_disperser, disperser_lget, disperser_yget,
                         heavy_cover_search, heavy_vertices, is_good, is_uniform, strong_disperser_longhole,
                         strong_disperser_pt, uniform_disperser)
from .esd import (Atom, AtomFamily, DisperserEntry, Esd, atom_family_of_independent_set, atoms, conflicts,
                  peripheral_vertices, restrict_esd, shatters, trivial_esd, validate_esd)
from .generators import generate
from .graph import (Graph, WeightFn, closed_neighborhood, connected_components, dump_graph, is_independent,
                    load_graph)
from .matching import EdgeWeightedGraph, Matching, brute_force_matching, max_weight_matching
from .pathfinder import ClassViolation, gyarfas_family, gyarfas_select, long_hole_family, long_hole_select
from .patterns import find_induced_copy, freeness_check
from .solvers import (SolveResult, TreeDecomposition, mwis_bruteforce, mwis_hfree_approx, mwis_hfree_exact,
                      qptas, rescale_weights, subexp_exact, treedecomp_longhole, validate_tree_decomposition)
from .tree_oracle import SigmaParams, claw_shatter, find_claw, find_induced_tree, find_lobster

__version__ = "0.1.0"

__all__ = [
    "AssemblyInput", "AssemblyOutput", "assemble", "atoms_to_matching", "build_auxiliary", "matching_to_atoms",
    "CgeT", "ExplicitH", "GraphClass", "LgeT", "Pt", "YgeT", "parse_class",
    "Disperser", "DisperserParams", "build_disperser", "disperser_lget", "disperser_yget", "heavy_cover_search",
    "heavy_vertices", "is_good", "is_uniform", "strong_disperser_longhole", "strong_disperser_pt",
    "uniform_disperser",
    "Atom", "AtomFamily", "DisperserEntry", "Esd", "atom_family_of_independent_set", "atoms", "conflicts",
    "peripheral_vertices", "restrict_esd", "shatters", "trivial_esd", "validate_esd",
    "generate",
    "Graph", "WeightFn", "closed_neighborhood", "connected_components", "dump_graph", "is_independent",
    "load_graph",
    "EdgeWeightedGraph", "Matching", "brute_force_matching", "max_weight_matching",
    "ClassViolation", "gyarfas_family", "gyarfas_select", "long_hole_family", "long_hole_select",
    "find_induced_copy", "freeness_check",
    "SolveResult", "TreeDecomposition", "mwis_bruteforce", "mwis_hfree_approx", "mwis_hfree_exact", "qptas",
    "rescale_weights", "subexp_exact", "treedecomp_longhole", "validate_tree_decomposition",
    "SigmaParams", "claw_shatter", "find_claw", "find_induced_tree", "find_lobster",
]
