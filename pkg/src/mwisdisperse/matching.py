"""Maximum-weight matching in general graphs with signed integer edge weights.

The blossom algorithm itself comes from networkx.  Edges of weight <= 0
never help, so matchings use positive edges only, and ties are broken towards
the lexicographically smallest sorted edge list.  With every weight positive,
no optimum contains another, so "smallest" just means: the smallest edge of
the symmetric difference belongs to the winner.  That is exactly what the
perturbed weight ``w * 2^m + 2^(m-1-rank)`` rewards, so one integer-exact
blossom run returns the tie-broken optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .graph import checked

BRUTE_FORCE_CAP = 24


@dataclass(frozen=True)
class EdgeWeightedGraph:
    """Vertices ``0..n-1`` and a map from edges (u < v) to signed weights."""

    n: int
    weights: dict = field(hash=False)

    def __post_init__(self):
        norm = {}
        for (u, v), x in self.weights.items():
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"bad edge ({u}, {v})")
            e = (u, v) if u < v else (v, u)
            if e in norm:
                raise ValueError(f"duplicate edge {e}")
            norm[e] = checked(int(x))
        object.__setattr__(self, "weights", norm)

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.weights)


@dataclass(frozen=True)
class Matching:
    edges: tuple[tuple[int, int], ...]
    weight: int

    def __contains__(self, e) -> bool:
        return tuple(sorted(e)) in self.edges

    def __len__(self) -> int:
        return len(self.edges)


def is_matching(edges) -> bool:
    seen = set()
    for u, v in edges:
        if u in seen or v in seen:
            return False
        seen.update((u, v))
    return True


def _make(g: EdgeWeightedGraph, edges) -> Matching:
    es = tuple(sorted(tuple(sorted(e)) for e in edges))
    return Matching(es, checked(sum(g.weights[e] for e in es)))


def max_weight_matching(g: EdgeWeightedGraph) -> Matching:
    """Heaviest matching (not maximum cardinality); lexicographically smallest among optima."""
    pos = [e for e in g.edges() if g.weights[e] > 0]
    if not pos:
        return Matching((), 0)
    m = len(pos)
    nxg = nx.Graph()
    for rank, e in enumerate(pos):
        nxg.add_edge(*e, weight=(g.weights[e] << m) + (1 << (m - 1 - rank)))
    found = nx.max_weight_matching(nxg, maxcardinality=False)
    return _make(g, found)


def brute_force_matching(g: EdgeWeightedGraph, cap: int = BRUTE_FORCE_CAP) -> Matching:
    """Exhaustive oracle over all matchings; same tie-break as :func:`max_weight_matching`."""
    E = g.edges()
    if len(E) > cap:
        raise ValueError(f"{len(E)} edges exceed the brute-force cap {cap}")
    best_key = (0, [])
    chosen: list[tuple[int, int]] = []

    def rec(i: int, used: set, weight: int):
        nonlocal best_key
        if i == len(E):
            key = (-weight, sorted(chosen))
            if key < best_key:
                best_key = (key[0], list(key[1]))
            return
        u, v = E[i]
        if g.weights[E[i]] > 0 and u not in used and v not in used:
            chosen.append(E[i])
            used.update((u, v))
            rec(i + 1, used, weight + g.weights[E[i]])
            used.difference_update((u, v))
            chosen.pop()
        rec(i + 1, used, weight)

    rec(0, set(), 0)
    return _make(g, best_key[1])
