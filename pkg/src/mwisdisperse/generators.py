"""Deterministic instance generators.

A generator spec is a colon-separated string, e.g. ``path:10``,
``random:12:0.3`` or ``repaired:14:0.4:pt:5``.  Every generator draws from a
single ``random.Random(seed)`` so the output is a pure function of
(spec, seed, weight range).

``filtered`` rejects whole graphs until one avoids the class obstruction;
``repaired`` instead keeps one random graph and adds (or, for complete
obstructions, deletes) an edge inside each witness until none is left, which
is far cheaper for dense classes like P_5-free.
"""

from __future__ import annotations

import itertools
import random

from .classes import GraphClass, parse_class
from .graph import Graph, WeightFn
from .patterns import freeness_check


class GenerationError(RuntimeError):
    pass


def _path_edges(n):
    return [(i, i + 1) for i in range(n - 1)]


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, _path_edges(n))


def cycle_graph(n: int) -> Graph:
    edges = _path_edges(n)
    if n >= 3:
        edges.append((0, n - 1))
    return Graph.from_edges(n, edges)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def split_graph(n: int, rng: random.Random, p: float = 0.5) -> Graph:
    """Clique on a random half, independent set on the rest, random edges between."""
    k = rng.randint(1, max(1, n - 1)) if n > 1 else n
    clique = list(range(k))
    edges = list(itertools.combinations(clique, 2))
    edges += [(c, s) for c in clique for s in range(k, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def line_graph(base: Graph) -> Graph:
    """Line graph of ``base``; vertices are base edges in sorted order."""
    E = base.edges()
    edges = [(i, j) for i, j in itertools.combinations(range(len(E)), 2) if set(E[i]) & set(E[j])]
    return Graph.from_edges(len(E), edges)


def subdivided_star(legs: list[int]) -> Graph:
    """Center 0 with one induced path of the given length per leg."""
    edges = []
    nxt = 1
    for length in legs:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph.from_edges(nxt, edges)


def lobster_graph(t: int) -> Graph:
    """The lobster with every skeleton edge replaced by a path of ``t`` edges."""
    skeleton = [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 6), (3, 7)]
    edges = []
    nxt = 8
    for a, b in skeleton:
        prev = a
        for _ in range(t - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, b))
    return Graph.from_edges(nxt, edges)


def cograph(n: int, rng: random.Random) -> Graph:
    """Random cograph (P_4-free) built by random unions and joins."""
    parts = [[i] for i in range(n)]
    edges: list[tuple[int, int]] = []
    while len(parts) > 1:
        a = parts.pop(rng.randrange(len(parts)))
        b = parts.pop(rng.randrange(len(parts)))
        if rng.random() < 0.5:
            edges.extend((min(x, y), max(x, y)) for x in a for y in b)
        parts.append(a + b)
    return Graph.from_edges(n, edges)


def chordal_graph(n: int, rng: random.Random, p: float = 0.5) -> Graph:
    """Random chordal graph: each new vertex attaches to a clique of the earlier ones."""
    edges = []
    adj: list[set[int]] = [set() for _ in range(n)]
    for v in range(1, n):
        if rng.random() < 0.15:
            continue
        u = rng.randrange(v)
        clique = [u] + [x for x in sorted(adj[u]) if x < v and rng.random() < p]
        # keep only a clique: greedily retain mutually adjacent vertices
        kept = []
        for x in clique:
            if all(y in adj[x] for y in kept):
                kept.append(x)
        for x in kept:
            edges.append((x, v))
            adj[x].add(v)
            adj[v].add(x)
    return Graph.from_edges(n, edges)


def repair(G: Graph, cls: GraphClass, rng: random.Random, budget: int = 10_000) -> Graph:
    """Destroy every obstruction of ``cls`` by editing one vertex pair inside each witness."""
    n = G.n
    edges = set(G.edges())
    for _ in range(budget):
        H = Graph.from_edges(n, sorted(edges))
        ok, witness = freeness_check(H, cls)
        if ok:
            return H
        W = sorted(witness)
        non_edges = [(a, b) for a, b in itertools.combinations(W, 2) if (a, b) not in edges]
        if non_edges:
            edges.add(rng.choice(non_edges))
        else:
            present = [(a, b) for a, b in itertools.combinations(W, 2) if (a, b) in edges]
            edges.discard(rng.choice(present))
    raise GenerationError(f"repair budget exhausted for {cls}")


def random_weights(n: int, rng: random.Random, lo: int = 1, hi: int = 10) -> WeightFn:
    return WeightFn(tuple(rng.randint(lo, hi) for _ in range(n)))


def generate(spec: str, seed: int, weight_range: tuple[int, int] = (1, 10),
             budget: int = 2000, load_pattern=None) -> tuple[Graph, WeightFn]:
    """Build (graph, weights) from a generator spec; see the module docstring."""
    rng = random.Random(seed)
    kind, *args = spec.split(":")
    kind = kind.lower()

    def num(i, cast=int):
        try:
            return cast(args[i])
        except (IndexError, ValueError):
            raise ValueError(f"bad generator spec {spec!r}") from None

    if kind == "path":
        G = path_graph(num(0))
    elif kind == "cycle":
        G = cycle_graph(num(0))
    elif kind == "complete":
        G = complete_graph(num(0))
    elif kind == "star":
        G = star_graph(num(0))
    elif kind == "empty":
        G = Graph.empty(num(0))
    elif kind == "random":
        G = random_graph(num(0), num(1, float), rng)
    elif kind == "split":
        G = split_graph(num(0), rng)
    elif kind == "cograph":
        G = cograph(num(0), rng)
    elif kind == "chordal":
        G = chordal_graph(num(0), rng)
    elif kind == "line":
        # line graph of G(m, p); claw-free by construction
        G = line_graph(random_graph(num(0), num(1, float), rng))
    elif kind == "claw":
        t = num(0)
        G = subdivided_star([t, t, t])
    elif kind == "lobster":
        G = lobster_graph(num(0))
    elif kind in ("filtered", "repaired"):
        n, p = num(0), num(1, float)
        cls = parse_class(":".join(args[2:]), load_pattern)
        if kind == "filtered":
            for _ in range(budget):
                G = random_graph(n, p, rng)
                if freeness_check(G, cls)[0]:
                    break
            else:
                raise GenerationError(f"rejection budget exhausted for {spec}")
        else:
            G = repair(random_graph(n, p, rng), cls, rng)
    else:
        raise ValueError(f"unknown generator {kind!r}")
    lo, hi = weight_range
    return G, random_weights(G.n, rng, lo, hi)


def random_esd_instance(rng: random.Random, h: int, n: int, p_pattern: float = 0.5,
                        p_inner: float = 0.4, p_cross: float = 0.5):
    """A random pattern H, a random η on ``n`` vertices, and a graph G for which η is valid.

    Each vertex goes to a random vertex, edge or triangle part (edge parts also
    pick ends at random).  G gets random edges inside parts, random edges of the
    optional permitted kinds, and all edges that full adjacency forces.
    """
    from .esd import Esd

    H = random_graph(h, p_pattern, rng)
    probe = Esd(H, [0] * h)
    edges, tris = H.edges(), probe.triangles()
    parts = [("vertex", x) for x in range(h)] + [("edge", e) for e in edges] + [("triangle", T) for T in tris]
    where, ends = [], []
    for _ in range(n):
        part = rng.choice(parts)
        where.append(part)
        ends.append(frozenset(x for x in part[1] if rng.random() < 0.5) if part[0] == "edge" else frozenset())
    gedges = []
    for a, b in itertools.combinations(range(n), 2):
        pa, pb = where[a], where[b]
        if pa == pb:
            if rng.random() < p_inner:
                gedges.append((a, b))
            continue
        forced = optional = False
        for (x, y) in ((a, b), (b, a)):
            px, py = where[x], where[y]
            if px[0] == "edge" and py[0] == "edge" and ends[x] & ends[y] & set(px[1]) & set(py[1]):
                forced = True
            if px[0] == "vertex" and py[0] == "edge" and px[1] in ends[y]:
                optional = True
            if px[0] == "triangle" and py[0] == "edge" and set(py[1]) <= set(px[1]) and ends[y] == set(py[1]):
                optional = True
        if forced or (optional and rng.random() < p_cross):
            gedges.append((a, b))
    G = Graph.from_edges(n, gedges)
    vm = [0] * h
    em, endm, tm = {e: 0 for e in edges}, {}, {T: 0 for T in tris}
    for e in edges:
        endm[(e, e[0])] = endm[(e, e[1])] = 0
    for v, part in enumerate(where):
        bit = 1 << v
        if part[0] == "vertex":
            vm[part[1]] |= bit
        elif part[0] == "edge":
            em[part[1]] |= bit
            for x in ends[v]:
                endm[(part[1], x)] |= bit
        else:
            tm[part[1]] |= bit
    return G, Esd(H, vm, em, endm, tm)
