import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwisdisperse import (Esd, Graph, atom_family_of_independent_set, atoms, conflicts, peripheral_vertices,
                          restrict_esd, shatters, trivial_esd, validate_esd)
from mwisdisperse.esd import dump_esd, family_is_independent, load_esd
from mwisdisperse.generators import complete_graph, path_graph, random_esd_instance, subdivided_star
from mwisdisperse.graph import iter_bits, popcount, to_mask
from mwisdisperse.patterns import CapExceeded

from strategies import graphs, naive_shatters, naive_shatters_minimal, random_independent

EDGE = Graph.from_edges(2, [(0, 1)])
E = (0, 1)
A, B, C = 0, 1, 2


def p3_esd():
    """P_3 = a-b-c over a single pattern edge uv with ends {a} at u and {c} at v."""
    return Esd.build(EDGE, {0: [], 1: []}, {E: ([A, B, C], [A], [C])})


def by_kind(G, d):
    return {(a.kind, a.key): a for a in atoms(G, d)}


# -- validate_esd -------------------------------------------------------------------

@given(graphs())
def test_trivial_esd_is_valid(G):
    assert validate_esd(G, trivial_esd(G)).ok


def test_p3_esd_is_valid():
    assert validate_esd(path_graph(3), p3_esd()).ok


def test_moving_b_to_a_vertex_set_is_reported():
    d = Esd.build(EDGE, {0: [B], 1: []}, {E: ([A, C], [A], [C])})
    rep = validate_esd(path_graph(3), d)
    assert not rep.ok
    assert any("edge 1-2" in v for v in rep.violations)


def test_validator_lists_every_defect():
    G = path_graph(3)
    d = Esd(Graph.empty(2), [0b011, 0b010])
    rep = validate_esd(G, d)
    assert any("lies in both" in v for v in rep.violations)
    assert any("not covered" in v for v in rep.violations)
    ends_outside = Esd.build(EDGE, {0: [], 1: []}, {E: ([A, B], [C], [])})
    assert any("not inside" in v for v in validate_esd(G, ends_outside).violations)


def test_validator_requires_full_adjacency_at_shared_end():
    # two pattern edges meeting at x = 1; their ends at 1 must be complete to each other
    H = path_graph(3)
    G = Graph.empty(2)
    d = Esd.build(H, {0: [], 1: [], 2: []}, {(0, 1): ([0], [], [0]), (1, 2): ([1], [1], [])})
    assert any("fully adjacent" in v for v in validate_esd(G, d).violations)
    G2 = Graph.from_edges(2, [(0, 1)])
    assert validate_esd(G2, d).ok


# -- trivial_esd and atoms --------------------------------------------------------------

def test_trivial_esd_examples():
    d = trivial_esd(complete_graph(3))
    assert d.pattern.n == 1 and d.vertex_masks == (0b111,)
    assert trivial_esd(Graph.empty(3)).pattern.n == 3
    G = Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
    d = trivial_esd(G)
    assert d.pattern.n == 2
    assert sorted(popcount(a.mask) for a in atoms(G, d)) == [2, 3]


@given(graphs())
def test_trivial_atoms_are_the_components(G):
    d = trivial_esd(G)
    got = [a.vertices for a in atoms(G, d)]
    assert got == G.components()
    for a in atoms(G, d):
        assert a.trivial == (len(a.vertices) == 1)


def test_atoms_of_p3_esd():
    got = {k: a.vertices for k, a in by_kind(path_graph(3), p3_esd()).items()}
    assert got == {
        ("edge_bot", E): {B},
        ("edge_end", (E, 0)): {A, B},
        ("edge_end", (E, 1)): {B, C},
        ("edge_full", E): {A, B, C},
        ("vertex", 0): set(),
        ("vertex", 1): set(),
    }


def test_atoms_include_triangles():
    K3 = complete_graph(3)
    G = Graph.empty(4)
    d = Esd.build(K3, {0: [0], 1: [], 2: []}, {(0, 1): ([1], [], [])}, {(0, 1, 2): [2, 3]})
    assert validate_esd(G, d).ok
    got = by_kind(G, d)
    assert got[("triangle", (0, 1, 2))].vertices == {2, 3}
    assert got[("edge_full", (0, 1))].vertices == {0, 1, 2, 3}
    assert got[("edge_full", (1, 2))].vertices == {2, 3}


# -- conflicts ---------------------------------------------------------------------------

def test_conflict_examples():
    G = path_graph(3)
    d = p3_esd()
    got = by_kind(G, d)
    assert conflicts(got[("edge_bot", E)], got[("edge_end", (E, 0))], d)
    assert not conflicts(got[("vertex", 0)], got[("vertex", 1)], d)
    K3 = complete_graph(3)
    dt = Esd(K3, [0, 0, 0], triangle_masks={(0, 1, 2): 1})
    at = by_kind(Graph.empty(1), dt)
    assert conflicts(at[("edge_full", (0, 1))], at[("triangle", (0, 1, 2))], dt)
    assert not conflicts(at[("edge_bot", (0, 1))], at[("triangle", (0, 1, 2))], dt)


def test_conflict_cases_on_a_path_pattern():
    H = path_graph(3)
    d = Esd(H, [0, 0, 0])
    got = by_kind(Graph.empty(0), d)
    e, f = (0, 1), (1, 2)
    # both use the shared end at 1
    assert conflicts(got[("edge_end", (e, 1))], got[("edge_full", f)], d)
    assert conflicts(got[("edge_end", (e, 1))], got[("edge_end", (f, 1))], d)
    # end atoms against the vertex atom they contain
    assert conflicts(got[("edge_end", (e, 1))], got[("vertex", 1)], d)
    assert conflicts(got[("edge_full", e)], got[("vertex", 0)], d)
    assert not conflicts(got[("edge_end", (e, 0))], got[("vertex", 1)], d)
    assert not conflicts(got[("edge_end", (e, 0))], got[("edge_end", (f, 2))], d)
    assert not conflicts(got[("edge_bot", e)], got[("edge_full", f)], d)


# -- random valid decompositions ---------------------------------------------------------

esd_instances = st.builds(lambda seed, h, n: random_esd_instance(random.Random(seed), h, n),
                          st.integers(0, 10 ** 9), st.integers(1, 4), st.integers(0, 10))


@given(esd_instances)
def test_random_instances_are_valid(inst):
    G, d = inst
    assert validate_esd(G, d).ok
    assert sum(popcount(m) for _, m in d.parts()) == len(G)


@given(esd_instances)
def test_nonconflicting_atoms_are_disjoint_and_nonadjacent(inst):
    G, d = inst
    lst = atoms(G, d)
    for a1, a2 in itertools.combinations(lst, 2):
        assert conflicts(a1, a2, d) == conflicts(a2, a1, d)
        if not conflicts(a1, a2, d):
            assert a1.mask & a2.mask == 0
            assert G.closed_mask(a1.mask) & a2.mask == 0


@given(esd_instances)
def test_nonempty_atom_bound_when_every_edge_set_is_nonempty(inst):
    G, d = inst
    if all(d.edge(e) for e in d.edges()):
        assert sum(1 for a in atoms(G, d) if a.mask) <= 5 * len(G)


def test_nonempty_atom_bound_needs_nonempty_edge_sets():
    # one vertex sitting at a pattern vertex of degree 3 lights up every end atom there
    H = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    G = Graph.empty(1)
    d = Esd(H, [1, 0, 0, 0])
    assert validate_esd(G, d).ok
    assert sum(1 for a in atoms(G, d) if a.mask) == 7 > 5 * len(G)


@given(esd_instances, st.integers(0, 10 ** 6))
def test_atom_family_of_independent_set(inst, seed):
    G, d = inst
    I = random_independent(G, random.Random(seed))
    fam = atom_family_of_independent_set(G, d, I)
    assert family_is_independent(fam.atoms, d)
    assert I & ~fam.mask() == 0


def test_atom_family_examples():
    G = path_graph(3)
    d = p3_esd()
    fam = atom_family_of_independent_set(G, d, {A, C})
    assert [(a.kind, a.key) for a in fam] == [("edge_full", E)]
    fam = atom_family_of_independent_set(G, d, {B})
    assert [(a.kind, a.key) for a in fam] == [("edge_bot", E), ("vertex", 0), ("vertex", 1)]
    G2 = Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
    fam = atom_family_of_independent_set(G2, trivial_esd(G2), set())
    assert [a.vertices for a in fam] == G2.components()
    with pytest.raises(ValueError):
        atom_family_of_independent_set(G, d, {A, B})


# -- restriction and peripheral vertices ---------------------------------------------------

def test_restrict_examples():
    G = path_graph(3)
    d = p3_esd()
    assert restrict_esd(d, set(), G) == d
    r = restrict_esd(d, {B}, G)
    assert r.edge(E) == to_mask([A, C]) and r.end(E, 0) == 1 << A and r.end(E, 1) == 1 << C
    G2 = Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
    r2 = restrict_esd(trivial_esd(G2), {3, 4}, G2)
    assert r2.vertex_masks == (0b111, 0)


@given(esd_instances, st.integers(0, 10 ** 6))
def test_restriction_stays_valid(inst, seed):
    G, d = inst
    rng = random.Random(seed)
    removed = {v for v in range(G.n) if rng.random() < 0.3}
    r = restrict_esd(d, removed, G)
    assert validate_esd(G.remove(to_mask(removed)), r).ok


def test_peripheral_examples():
    G = path_graph(3)
    assert peripheral_vertices(G, trivial_esd(G)) == frozenset()
    assert peripheral_vertices(G, p3_esd()) == {A, C}
    wide = Esd.build(EDGE, {0: [], 1: []}, {E: ([A, B, C], [A, B], [C])})
    G2 = Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    assert validate_esd(G2, wide).ok
    assert peripheral_vertices(G2, wide) == {C}


# -- shattering ------------------------------------------------------------------------------

def test_shatters_examples():
    G = Graph.empty(3)
    assert shatters(G, trivial_esd(G), {0, 1, 2})
    claw = subdivided_star([1, 1, 1])
    assert not shatters(claw, trivial_esd(claw), {1, 2, 3})
    spread = Graph.from_edges(6, [(0, 1), (2, 3), (4, 5)])
    assert shatters(spread, trivial_esd(spread), {0, 2, 4})


def test_shatters_cap_and_arity():
    G = path_graph(15)
    with pytest.raises(CapExceeded):
        shatters(G, trivial_esd(G), {0, 1, 2})
    with pytest.raises(ValueError):
        shatters(path_graph(3), trivial_esd(path_graph(3)), {0, 1})


@settings(max_examples=80)
@given(esd_instances, st.data())
def test_shatters_matches_triple_enumeration(inst, data):
    G, d = inst
    if len(G) < 3:
        return
    Z = data.draw(st.lists(st.integers(0, G.n - 1), min_size=3, max_size=3, unique=True))
    assert shatters(G, d, Z) == naive_shatters(G, d, Z) == naive_shatters_minimal(G, d, Z)


def with_pendant_strips(rng, G, d):
    """Attach three new pattern leaves, each carrying a strip z - y whose far end z is peripheral."""
    H = d.pattern
    h, n = H.n, G.n
    anchors = [rng.randrange(h) for _ in range(3)]
    P = Graph.from_edges(h + 3, H.edges() + [(x, h + i) for i, x in enumerate(anchors)])
    gedges = list(G.edges())
    vm = list(d.vertex_masks) + [0, 0, 0]
    em, endm = dict(d.edge_masks), dict(d.end_masks)
    Z = []
    for i, x in enumerate(anchors):
        z, y = n + 2 * i, n + 2 * i + 1
        e = (x, h + i)
        em[e] = (1 << z) | (1 << y)
        endm[(e, h + i)] = 1 << z
        endm[(e, x)] = 1 << y
        gedges.append((z, y))
        # y joins the x end: complete to the other ends at x, optionally adjacent to η(x)
        for f in P.edges():
            if f != e and x in f:
                for v in iter_bits(endm.get((f, x), 0)):
                    gedges.append((y, v))
        for v in iter_bits(vm[x]):
            if rng.random() < 0.5:
                gedges.append((y, v))
        Z.append(z)
    G2 = Graph.from_edges(n + 6, set(tuple(sorted(e)) for e in gedges))
    return G2, Esd(P, vm, em, endm, d.triangle_masks), Z


def test_peripheral_terminals_are_shattered():
    """Three peripheral terminals are always shattered."""
    for seed in range(150):
        rng = random.Random(seed)
        G, d = random_esd_instance(rng, rng.randint(1, 4), rng.randint(0, 6))
        G, d, Z = with_pendant_strips(rng, G, d)
        assert validate_esd(G, d).ok
        assert set(Z) <= peripheral_vertices(G, d)
        assert shatters(G, d, Z), seed


def test_interchange_roundtrip():
    for seed in range(30):
        G, d = random_esd_instance(random.Random(seed), 4, 9)
        assert load_esd(dump_esd(d)) == d
    with pytest.raises(ValueError):
        load_esd('{"pattern": {"n": 2}}')


def test_atom_vertex_sets_are_subsets():
    for seed in range(50):
        G, d = random_esd_instance(random.Random(seed), 4, 10)
        for a in atoms(G, d):
            assert all(v in G for v in iter_bits(a.mask))
