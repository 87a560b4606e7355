import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mwisdisperse import (CgeT, ClassViolation, Graph, Pt, WeightFn, freeness_check, generate, gyarfas_family,
                          gyarfas_select, long_hole_family, long_hole_select)
from mwisdisperse.generators import chordal_graph, cycle_graph, path_graph, random_weights, star_graph
from mwisdisperse.pathfinder import check_gyarfas, gyarfas_path, long_hole_separator

from strategies import graphs

UNIT = WeightFn.uniform


def is_induced_path(G, path):
    if len(set(path)) != len(path):
        return False
    for i, a in enumerate(path):
        for j in range(i + 1, len(path)):
            if G.has_edge(a, path[j]) != (j == i + 1):
                return False
    return True


def to_nx(G, keep):
    H = nx.Graph()
    H.add_nodes_from(keep)
    H.add_edges_from((a, b) for a, b in G.edges() if a in keep and b in keep)
    return H


def certificate_holds(G, w, u, alpha, path):
    """(P1)-(P3) recomputed with networkx, independent of the library's level graphs."""
    total = sum(w[v] for v in G.vertices())
    heavy = lambda comp: sum(w[v] for v in comp) > (1 - alpha) * total
    if path and (path[0] != u or not is_induced_path(G, path)):
        return False
    V = set(G.vertices())

    def level(i):
        if i == 0:
            return V - {u}
        removed = set()
        for v in path[:i]:
            removed |= {v} | set(G.neighbors(v))
        return V - removed

    k = len(path) - 1
    for i in range(k + 1):
        comps = nx.connected_components(to_nx(G, level(i)))
        if not any(heavy(c) and set(G.neighbors(path[i])) & c for c in comps):
            return False
    return not any(heavy(c) for c in nx.connected_components(to_nx(G, level(k + 1))))


def components_after(G, X):
    return [set(c) for c in nx.connected_components(to_nx(G, set(G.vertices()) - X))]


def closed(G, path):
    return set(path) | {y for v in path for y in G.neighbors(v)}


# -- family --------------------------------------------------------------------------------------

def test_family_k2():
    fam = gyarfas_family(Graph.from_edges(2, [(0, 1)]), 0)
    assert () in fam and (0,) in fam


@given(graphs(min_n=1, max_n=9, connected=True), st.data())
def test_family_members_are_induced_paths_from_u(G, data):
    u = data.draw(st.integers(0, G.n - 1))
    fam = gyarfas_family(G, u)
    assert len(fam) <= G.n ** 2
    assert fam[0] == ()
    for path in fam:
        assert not path or path[0] == u
        assert is_induced_path(G, path)


def test_family_rejects_disconnected_or_missing_start():
    with pytest.raises(ValueError):
        gyarfas_family(Graph.empty(2), 0)
    with pytest.raises(ValueError):
        gyarfas_family(path_graph(3), 7)


# -- select ------------------------------------------------------------------------------------------

def test_select_p4_quarter():
    cert = gyarfas_select(path_graph(4), 0, UNIT(4), Fraction(1, 4))
    assert cert.path == ()


def test_select_p4_third():
    cert = gyarfas_select(path_graph(4), 0, UNIT(4), Fraction(1, 3))
    assert cert.path == (0,)
    assert cert.level_max == (3, 2)


def test_select_star_from_center():
    G = star_graph(4)
    for alpha in (Fraction(1, 10), Fraction(1, 4), Fraction(49, 100)):
        cert = gyarfas_select(G, 0, UNIT(5), alpha)
        # G - u splits into singletons, so nothing is heavy already at level 0
        assert cert.path == ()
        assert cert.level_max == (1,)
        # (u) would need a heavy component of G - u next to u
        assert check_gyarfas(G, UNIT(5), 0, alpha, (0,)) is None


def test_alpha_range():
    with pytest.raises(ValueError):
        gyarfas_select(path_graph(4), 0, UNIT(4), Fraction(1, 2))
    with pytest.raises(ValueError):
        gyarfas_select(path_graph(4), 0, UNIT(4), 0)


alphas = st.fractions(min_value=Fraction(1, 100), max_value=Fraction(49, 100))


@given(graphs(min_n=1, max_n=9, connected=True), st.data(), alphas)
def test_select_certificate_recomputed(G, data, alpha):
    w = WeightFn(tuple(data.draw(st.lists(st.integers(0, 9), min_size=G.n, max_size=G.n))))
    u = data.draw(st.integers(0, G.n - 1))
    cert = gyarfas_select(G, u, w, alpha)
    assert certificate_holds(G, w, u, alpha, cert.path)
    direct = gyarfas_path(G, u, w, alpha)
    assert certificate_holds(G, w, u, alpha, direct)


@given(st.integers(0, 10 ** 9))
def test_select_paths_are_short_on_pt_free_graphs(seed):
    rng = random.Random(seed)
    G, w = generate(f"repaired:{rng.randint(4, 11)}:0.4:pt:5", seed)
    for C in G.component_masks():
        H = G.subgraph(C)
        u = min(H.vertices())
        assert len(gyarfas_select(H, u, w, Fraction(1, 4)).path) < 5


# -- long holes ----------------------------------------------------------------------------------------

def test_long_hole_family_sizes():
    rng = random.Random(3)
    for t in (4, 5, 6):
        for _ in range(10):
            G = chordal_graph(rng.randint(2, 12), rng)
            for C in G.component_masks():
                H = G.subgraph(C)
                fam = long_hole_family(H, t)
                assert len(fam) <= 2 * len(H) ** 2
                assert all(1 <= len(p) <= t - 1 for p in fam)
                assert all(is_induced_path(H, p) for p in fam)


def test_long_hole_family_keeps_short_gyarfas_paths():
    G = star_graph(5)  # diameter 2
    u = 0
    fam = long_hole_family(G, 5, u)
    assert set(p for p in gyarfas_family(G, u) if p) <= set(fam)


def test_long_hole_select_c4():
    G = cycle_graph(4)
    Q = long_hole_select(G, 5, UNIT(4))
    assert len(Q) <= 4
    assert all(len(c) <= 3 for c in components_after(G, closed(G, Q)))


@pytest.mark.parametrize("n", [1, 5, 12, 40])
@pytest.mark.parametrize("t", [4, 6])
def test_long_hole_select_paths(n, t):
    G = path_graph(n)
    Q = long_hole_select(G, t, UNIT(n))
    assert all(4 * len(c) <= 3 * n for c in components_after(G, closed(G, Q)))


def test_long_hole_select_single_vertex():
    G = Graph.empty(1)
    Q = long_hole_select(G, 5, UNIT(1))
    assert Q == (0,) and components_after(G, closed(G, Q)) == []


def test_long_hole_select_reports_long_cycles():
    with pytest.raises(ClassViolation) as info:
        long_hole_select(cycle_graph(40), 5, UNIT(40))
    assert len(info.value.witness) >= 5


@given(st.integers(0, 10 ** 9), st.sampled_from([4, 5, 6]))
def test_long_hole_select_balances_free_graphs(seed, t):
    rng = random.Random(seed)
    n = rng.randint(1, 13)
    G = chordal_graph(n, rng) if rng.random() < 0.5 else generate(f"repaired:{n}:0.3:hole:{t}", seed)[0]
    assert freeness_check(G, CgeT(t))[0]
    w = random_weights(G.n, rng, 0, 9)
    for C in G.component_masks():
        H = G.subgraph(C)
        total = w.total(C)
        for find in (long_hole_select, long_hole_separator):
            Q = find(H, t, w)
            assert 1 <= len(Q) < max(t, 4) and is_induced_path(H, Q)
            assert all(4 * sum(w[v] for v in comp) <= 3 * total for comp in components_after(H, closed(H, Q)))


def test_pt_free_paths_stay_below_t():
    rng = random.Random(8)
    for _ in range(30):
        G, _ = generate(f"repaired:{rng.randint(3, 12)}:0.4:pt:6", rng.randrange(10 ** 6))
        assert freeness_check(G, Pt(6))[0]
        for C in G.component_masks():
            H = G.subgraph(C)
            assert all(len(p) < 6 for p in gyarfas_family(H, min(H.vertices())))
