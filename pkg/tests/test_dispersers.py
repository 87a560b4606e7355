import itertools
import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mwisdisperse import (ClassViolation, Graph, Pt, WeightFn, disperser_lget, disperser_yget, freeness_check,
                          generate, heavy_cover_search, heavy_vertices, is_good, is_uniform,
                          strong_disperser_longhole, strong_disperser_pt, uniform_disperser, validate_esd)
from mwisdisperse.classes import GraphClass
from mwisdisperse.dispersers import (DisperserParams, PreconditionError, class_delta, degree_condition,
                                     disperser_from_dict, disperser_to_dict, good_entry, heavy_cover_bound,
                                     independent_sets_upto, is_uniform_sizes, uniform_disperser_sparse,
                                     uniform_params)
from mwisdisperse.esd import trivial_entry
from mwisdisperse.generators import (chordal_graph, cycle_graph, line_graph, path_graph, random_graph,
                                     random_weights, star_graph)
from mwisdisperse.graph import iter_bits, to_mask

from strategies import graphs, random_independent

Q = Fraction(1, 4)


# -- is_good ------------------------------------------------------------------------------------

def test_empty_cut_of_connected_graph_is_not_shrinking():
    G = path_graph(5)
    rep = is_good(G, WeightFn.uniform(5), trivial_entry(G, 0), Q, Fraction(1, 100))
    assert not rep.shrinking and not rep.good


def test_cutting_everything():
    G = path_graph(4)
    e = trivial_entry(G, G.present)
    assert is_good(G, WeightFn.uniform(4), e, Q, Q).shrinking
    assert not is_good(G, WeightFn.uniform(4), e, Q, Q).safe
    assert is_good(G, WeightFn.uniform(4, 0), e, Q, Q).good


def test_neighbourhood_of_a_heavy_guess_is_zero_half_good():
    # P5 with I = {0, 2, 4} and J = {2}: X = N(J) = {1, 3} carries no I-weight
    G = path_graph(5)
    wI = WeightFn((1, 0, 1, 0, 1))
    e = trivial_entry(G, to_mask([1, 3]))
    assert is_good(G, wI, e, 0, Fraction(1, 2)).good


def test_trivial_atoms_are_exempt():
    G = Graph.empty(1)
    assert is_good(G, WeightFn((5,)), trivial_entry(G, 0), Q, Q).good


# -- is_uniform -------------------------------------------------------------------------------------

def test_uniform_examples():
    G = Graph.from_edges(16, [(i, i + 1) for i in range(15) if i != 7])
    assert is_uniform(G, trivial_entry(G, 0), Fraction(1, 2))
    assert not is_uniform(G, trivial_entry(G, G.present), Fraction(1, 2))
    whole = path_graph(16)
    assert not is_uniform(whole, trivial_entry(whole, 0), Fraction(1, 2))


def test_uniform_rejects_floats_and_range():
    with pytest.raises(TypeError):
        is_uniform_sizes(16, 1, [4], 0.5)
    with pytest.raises(ValueError):
        is_uniform_sizes(16, 1, [4], 1)


@given(st.integers(2, 400), st.integers(0, 30), st.lists(st.integers(0, 400), max_size=4),
       st.sampled_from([Fraction(1, 2), Fraction(1, 9), Fraction(2, 3), Fraction(1, 41)]))
def test_uniform_sizes_match_exact_real_arithmetic(n, x, sizes, xi):
    sizes = [min(a, n) for a in sizes]
    p, q = xi.numerator, xi.denominator
    # n^ξ compared through integer q-th powers: a <= n^ξ b  <=>  a^q <= n^p b^q
    checks = [(x ** q * n ** p <= (n - a) ** q and n ** p <= (n - a) ** q) for a in sizes]
    if not sizes:
        checks = [x ** q * n ** p <= n ** q]
    expect = all(checks)
    assert is_uniform_sizes(n, x, sizes, xi) == expect


# -- heavy vertices --------------------------------------------------------------------------------

def test_heavy_examples():
    G = path_graph(5)
    w = WeightFn.uniform(5)
    assert heavy_vertices(G, w, {0, 2}, 0) == frozenset(range(5))
    assert heavy_vertices(G, w, {2}, 1) == frozenset({1, 2, 3})
    S = star_graph(4)
    leaves = {1, 2, 3, 4}
    assert 0 in heavy_vertices(S, WeightFn.uniform(5), leaves, Fraction(1, 2))
    assert heavy_vertices(S, WeightFn.uniform(5), leaves, Fraction(1, 2)) == frozenset({0})


def test_heavy_errors():
    with pytest.raises(ValueError):
        heavy_vertices(path_graph(3), WeightFn.uniform(3), {0, 1}, Q)
    with pytest.raises(ValueError):
        heavy_vertices(path_graph(3), WeightFn.uniform(3, 0), {0}, Q)


def test_cover_examples():
    G = Graph.empty(4)
    assert heavy_cover_search(G, WeightFn.uniform(4), {0, 1, 2, 3}, Fraction(1, 2)) == frozenset()
    assert heavy_cover_search(path_graph(3), WeightFn.uniform(3), {1}, Fraction(1, 2)) == frozenset({1})


def test_cover_bound_is_exact():
    for n in range(2, 200):
        for beta in (Fraction(1, 4), Fraction(1, 3), Fraction(2, 5), Fraction(1, 2)):
            k = heavy_cover_bound(n, beta)
            assert 2 ** (k * beta.numerator) >= n ** beta.denominator
            assert k == 0 or 2 ** ((k - 1) * beta.numerator) < n ** beta.denominator


def _smallest_cover(G, I, Z):
    for r in range(len(I) + 1):
        for c in itertools.combinations(sorted(I), r):
            if Z <= set().union(*[{v} | set(G.neighbors(v)) for v in c]):
                return r


@given(st.integers(0, 10 ** 9))
def test_cover_is_smallest_and_within_bound(seed):
    rng = random.Random(seed)
    G = random_graph(12, rng.choice([0.2, 0.35, 0.5]), rng)
    w = random_weights(12, rng, 1, 9)
    I = random_independent(G, rng, 0.6) or 1
    beta = rng.choice([Fraction(1, 4), Fraction(1, 8), Fraction(1, 2)])
    J = heavy_cover_search(G, w, I, beta)
    Z = heavy_vertices(G, w, I, beta)
    assert J <= set(iter_bits(I))
    assert Z <= {y for v in J for y in (v, *G.neighbors(v))}
    assert len(J) == _smallest_cover(G, set(iter_bits(I)), set(Z))
    assert len(J) <= math.ceil(math.log2(12) / beta)


# -- parameters and helpers ------------------------------------------------------------------------

def test_params_range():
    with pytest.raises(ValueError):
        DisperserParams(Fraction(1, 2), Q)
    with pytest.raises(ValueError):
        DisperserParams(Q, 0)
    assert DisperserParams("1/8", "1/16").gamma == Fraction(1, 8)


def test_class_delta():
    assert class_delta(GraphClass("pt", 5), Q) == Fraction(1, 80)
    assert class_delta(GraphClass("claw", 1), Q) == Fraction(1, 401) ** 8
    assert class_delta(GraphClass("lobster", 1), Q) == Fraction(1, 401) ** 40


@given(graphs(max_n=8), st.integers(0, 3))
def test_independent_sets_upto(G, k):
    got = independent_sets_upto(G, k)
    expect = [to_mask(c) for r in range(k + 1) for c in itertools.combinations(range(G.n), r)
              if G.is_independent_mask(to_mask(c))]
    assert sorted(got) == sorted(expect) and len(got) == len(set(got))


# -- strong dispersers ------------------------------------------------------------------------------

def test_single_vertex():
    G = Graph.empty(1)
    D = strong_disperser_pt(G, Q, 4)
    assert D.strong and len(D) >= 1
    assert good_entry(G, WeightFn((3,)), D, {0}) is not None


def goodness_sweep(G, D, rng, samples=10):
    for e in D:
        assert validate_esd(G.remove(e.X), e.esd).ok
    w = random_weights(G.n, rng, 1, 9)
    for _ in range(samples):
        I = random_independent(G, rng, 0.5)
        if I:
            assert good_entry(G, w, D, I) is not None


def test_cographs_pt4():
    rng = random.Random(1)
    for _ in range(25):
        G, _ = generate("cograph:10", rng.randrange(10 ** 6))
        assert freeness_check(G, Pt(4))[0]
        D = strong_disperser_pt(G, Q, 4)
        assert D.strong
        goodness_sweep(G, D, rng)


def test_p5_free_graphs():
    rng = random.Random(2)
    for _ in range(20):
        G, _ = generate("repaired:10:0.4:pt:5", rng.randrange(10 ** 6))
        goodness_sweep(G, strong_disperser_pt(G, Q, 5), rng)


def test_chordal_graphs_t4():
    rng = random.Random(3)
    for _ in range(25):
        G = chordal_graph(10, rng)
        D = strong_disperser_longhole(G, Q, 4)
        assert D.strong
        goodness_sweep(G, D, rng)


def test_c4_with_t5_every_unit_weight_set():
    G = cycle_graph(4)
    D = strong_disperser_longhole(G, Q, 5)
    unit = WeightFn.uniform(4)
    for I in independent_sets_upto(G, 2):
        if I:
            assert good_entry(G, unit, D, I) is not None


def test_pt_disperser_reports_long_paths():
    with pytest.raises(ClassViolation):
        strong_disperser_pt(path_graph(8), Q, 4)


def test_stats_are_reported():
    D = strong_disperser_pt(path_graph(3), Q, 4)
    assert D.stats["guesses"] == len(independent_sets_upto(path_graph(3), 1))
    assert D.stats["entries"] == len(D)


def test_line_graphs_claw_free():
    rng = random.Random(4)
    for _ in range(10):
        G = line_graph(random_graph(5, 0.6, rng))
        if not G.n:
            continue
        D = disperser_yget(G, Q, 1)
        goodness_sweep(G, D, rng)


def test_claw_disperser_reports_planted_claw():
    with pytest.raises(ClassViolation) as info:
        # the pipeline searches from the lowest vertex, so make it a tip: centre 1, leaves 0, 2, 3
        disperser_yget(Graph.from_edges(4, [(0, 1), (1, 2), (1, 3)]), Q, 1)
    assert len(info.value.witness) == 4


def test_lobster_disperser_small_instance():
    rng = random.Random(5)
    G = cycle_graph(7)
    goodness_sweep(G, disperser_lget(G, Q, 1), rng)


def test_serialization_roundtrip():
    G = chordal_graph(8, random.Random(6))
    D = strong_disperser_longhole(G, Q, 4)
    back = disperser_from_dict(json.loads(json.dumps(disperser_to_dict(D))))
    assert [e.X for e in back] == [e.X for e in D]
    assert back.params.gamma == D.params.gamma and back.strong


# -- uniform dispersers ----------------------------------------------------------------------------

def test_uniform_params():
    assert uniform_params(GraphClass("pt", 5)) == uniform_params(GraphClass("hole", 5))
    assert uniform_params(GraphClass("pt", 5)).tau == Fraction(1, 16)
    assert uniform_params(GraphClass("claw", 1)).xi == Fraction(1, 9)
    assert uniform_params(GraphClass("lobster", 1)).xi == Fraction(1, 41)


def test_uniform_preconditions():
    with pytest.raises(PreconditionError):
        uniform_disperser(Graph.empty(2), GraphClass("pt", 5))
    with pytest.raises(PreconditionError):
        uniform_disperser(star_graph(20), GraphClass("pt", 5))
    assert not degree_condition(star_graph(20), Fraction(1, 16), Fraction(1, 2))


def test_uniform_unchecked_construction_on_small_graph():
    G = path_graph(4)
    e = uniform_disperser(G, GraphClass("pt", 5), check=False)
    assert e.esd.is_trivial() and validate_esd(G.remove(e.X), e.esd).ok


def b_ary_tree(b, h, pendant=False):
    """Complete b-ary tree of height h as adjacency lists; optionally a pendant leaf on the root."""
    adj = [[]]
    level = [0]
    for _ in range(h):
        nxt = []
        for v in level:
            for _ in range(b):
                c = len(adj)
                adj.append([v])
                adj[v].append(c)
                nxt.append(c)
        level = nxt
    if pendant:
        # relabel so vertex 0 is a new leaf hanging off the root
        adj = [[1]] + [[y + 1 for y in nb] for nb in adj]
        adj[1].append(0)
    return adj


def test_uniform_sparse_small_tree_meets_the_definition():
    adj = b_ary_tree(8, 3, pendant=True)
    n = len(adj)
    with pytest.raises(PreconditionError):
        uniform_disperser_sparse(adj, 2 * 3 + 3)
    X, sizes = uniform_disperser_sparse(adj, 2 * 3 + 3, check=False)
    # Q = (0,): after N[0] = {0, 1} the eight subtrees are all light
    assert X == {0, 1}
    assert sorted(sizes) == [(n - 2) // 8] * 8
