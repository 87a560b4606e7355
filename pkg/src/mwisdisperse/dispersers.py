"""Dispersers: families of cuts (X, ESD of G - X), and checks of their quality.

A disperser for G is good if, for every independent set I with positive
weight, some member is (γ, δ)-good for the weights restricted to I.  The
builders here materialise the guess-heavy construction: guess a small
independent set J that dominates all heavy vertices, cut N(J), and in every
component of G - N[J] use a class-specific family of cuts (Gyárfás paths,
long-hole separators, the claw or lobster pipeline).
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .classes import GraphClass
from .esd import DisperserEntry, atoms, esd_to_dict, esd_from_dict, trivial_entry
from .graph import Graph, WeightFn, iter_bits, lowest, popcount, to_mask
from .pathfinder import (ClassViolation, gyarfas_family, gyarfas_select, long_hole_family,
                         long_hole_select, path_mask)
from .tree_oracle import EsdProvider, Failure, SigmaParams, esd_key, find_claw, find_lobster

DEFAULT_J_CAP = 1


class PreconditionError(ValueError):
    pass


class DisperserUnavailable(RuntimeError):
    """No member of the enumerated family qualifies (for instance, missing shattering ESDs)."""


# ---------------------------------------------------------------------------
# quality predicates

@dataclass(frozen=True)
class GoodReport:
    shrinking: bool
    safe: bool

    @property
    def good(self) -> bool:
        return self.shrinking and self.safe


def is_good(G: Graph, w: WeightFn, entry: DisperserEntry, gamma, delta) -> GoodReport:
    """δ-shrinking and γ-safe, with trivial atoms exempt."""
    gamma, delta = Fraction(gamma), Fraction(delta)
    total = w.total(G.present)
    wx = w.total(entry.X)
    shrinking = True
    safe = wx <= gamma * total
    for a in atoms(G.remove(entry.X), entry.esd):
        if a.trivial:
            continue
        wa = w.total(a.mask)
        if wa > (1 - delta) * total:
            shrinking = False
        if wx > gamma * (total - wa):
            safe = False
    return GoodReport(shrinking, safe)


def _xi(xi) -> Fraction:
    if isinstance(xi, float):
        raise TypeError("ξ must be rational (int, Fraction or 'p/q' string)")
    x = Fraction(xi)
    if not 0 < x < 1:
        raise ValueError("ξ must lie in (0, 1)")
    return x


def is_uniform_sizes(n: int, x: int, atom_sizes: Sequence[int], xi) -> bool:
    """|X| <= n^-ξ (n - |A|) and |A| <= n - n^ξ for every atom size |A|, in integers.

    The first reads (|X| n^ξ)^q <= (n - |A|)^q, i.e. |X|^q n^p <= (n - |A|)^q.
    With no atoms at all (X = V(G)) the size bound |X| <= n^(1-ξ), which every
    atom would imply, is still enforced.
    """
    xi = _xi(xi)
    p, q = xi.numerator, xi.denominator
    if not atom_sizes and x ** q * n ** p > n ** q:
        return False
    for a in atom_sizes:
        rest = n - a
        if rest < 0 or x ** q * n ** p > rest ** q:
            return False
        if n ** p > rest ** q:
            return False
    return True


def is_uniform(G: Graph, entry: DisperserEntry, xi) -> bool:
    sizes = [popcount(a.mask) for a in atoms(G.remove(entry.X), entry.esd)]
    return is_uniform_sizes(len(G), popcount(entry.X), sizes, xi)


# ---------------------------------------------------------------------------
# heavy vertices

def heavy_vertices(G: Graph, w: WeightFn, I, beta) -> frozenset[int]:
    """Vertices v with w(N[v] ∩ I) >= β w(I)."""
    Im = to_mask(I)
    if not G.is_independent_mask(Im):
        raise ValueError("I must be independent")
    wi = w.total(Im)
    if wi <= 0:
        raise ValueError("w(I) must be positive")
    beta = Fraction(beta)
    return frozenset(v for v in G.vertices() if w.total(G.closed_mask(1 << v) & Im) >= beta * wi)


def heavy_cover_bound(n: int, beta) -> int:
    """⌈β⁻¹ log2 n⌉: the least k with 2^(k p) >= n^q for β = p/q.

    Exact when n^q is of manageable size; for the tiny β of the claw and
    lobster regimes the bound is astronomically large and a float estimate is
    used (it only ever gets capped).
    """
    beta = Fraction(beta)
    if n < 2:
        return 1
    p, q = beta.numerator, beta.denominator
    est = math.ceil(q * math.log2(n) / p)
    if q * n.bit_length() > 1 << 16:
        return est
    target = n ** q
    k = max(est - 2, 0)
    while 2 ** (k * p) < target:
        k += 1
    while k > 0 and 2 ** ((k - 1) * p) >= target:
        k -= 1
    return k


def heavy_cover_search(G: Graph, w: WeightFn, I, beta, exhaustive_cap: int = 16) -> frozenset[int]:
    """A smallest J ⊆ I with N[J] containing every β-heavy vertex.

    Greedy set cover first; then smaller sizes are tried exhaustively when I
    is small enough.  The size is checked against ⌈β⁻¹ log2 n⌉.
    """
    beta = Fraction(beta)
    if not 0 < beta <= Fraction(1, 2):
        raise ValueError("β must lie in (0, 1/2]")
    Im = to_mask(I)
    Z = to_mask(heavy_vertices(G, w, Im, beta))
    cover = {v: G.closed_mask(1 << v) for v in iter_bits(Im)}
    left, J = Z, []
    while left:
        v = max(cover, key=lambda x: (popcount(cover[x] & left), -x))
        if not cover[v] & left:
            raise AssertionError("heavy vertex outside N[I]")
        J.append(v)
        left &= ~cover[v]
    best = sorted(J)
    if popcount(Im) <= exhaustive_cap:
        for size in range(len(best)):
            hit = next((c for c in itertools.combinations(sorted(cover), size)
                        if not Z & ~_union(cover[x] for x in c)), None)
            if hit is not None:
                best = list(hit)
                break
    bound = heavy_cover_bound(len(G), beta)
    if len(best) > bound:
        raise AssertionError(f"cover of size {len(best)} exceeds ⌈β⁻¹ log n⌉ = {bound}")
    return frozenset(best)


def _union(masks) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


# ---------------------------------------------------------------------------
# dispersers

@dataclass(frozen=True)
class DisperserParams:
    gamma: Fraction
    delta: Fraction
    j_cap: int = DEFAULT_J_CAP

    def __post_init__(self):
        for name in ("gamma", "delta"):
            v = Fraction(getattr(self, name))
            if not 0 < v < Fraction(1, 2):
                raise ValueError(f"{name} must lie in (0, 1/2)")
            object.__setattr__(self, name, v)


@dataclass
class Disperser:
    entries: tuple[DisperserEntry, ...]
    params: DisperserParams
    strong: bool
    stats: dict = field(default_factory=dict)
    failures: tuple[Failure, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def class_delta(cls: GraphClass, gamma) -> Fraction:
    """δ = p(γ) for the class: γ/(4t) for P_t / long holes, σ^8 and σ^40 for claws and lobsters."""
    gamma = Fraction(gamma)
    if cls.kind in ("pt", "hole"):
        return gamma / (4 * max(cls.t, 1))
    sigma = class_sigma(cls, gamma)
    return sigma ** 8 if cls.kind == "claw" else sigma ** 40


def class_sigma(cls: GraphClass, gamma) -> Fraction:
    """σ = min(γ, 1/(100t+1)) with t raised to at least 4."""
    t = max(cls.t, 4)
    return min(Fraction(gamma), Fraction(1, 100 * t + 1))


def independent_sets_upto(G: Graph, k: int) -> list[int]:
    """All independent sets with at most k vertices, by size and then lexicographically."""
    out = [0]
    level = [(0, -1)]
    verts = G.vertices()
    for _ in range(k):
        nxt = []
        for mask, last in level:
            blocked = G.closed_mask(mask)
            for v in verts:
                if v > last and not blocked >> v & 1:
                    nxt.append((mask | 1 << v, v))
        out.extend(m for m, _ in nxt)
        level = nxt
    return out


def guess_heavy(G: Graph, component_family, params: DisperserParams, bound: int) -> Disperser:
    """Lift per-component families through every guess J of at most min(bound, j_cap) vertices.

    ``component_family(C)`` returns (entries, failures) for the connected graph C.
    Every guess contributes X = N(J) with the component partition, and, for
    every component C of G - N[J], each C-entry (X', ESD') as X' ∪ N(J).
    """
    fam: dict[tuple, DisperserEntry] = {}
    failures: list[Failure] = []
    guesses = 0
    k = min(bound, params.j_cap)
    for J in independent_sets_upto(G, k):
        guesses += 1
        NJ = G.closed_mask(J)
        XJ = NJ & ~J
        _add(fam, trivial_entry(G, XJ))
        comps = G.component_masks(G.present & ~NJ)
        singles = [1 << v for v in iter_bits(J)]
        for C in comps:
            entries, fails = component_family(G.subgraph(C))
            failures.extend(f for f in fails if f not in failures)
            others = [c for c in comps if c != C] + singles
            for e in entries:
                X = XJ | e.X
                if e.esd.is_trivial():
                    _add(fam, trivial_entry(G, X))
                else:
                    _add(fam, DisperserEntry(X, e.esd.with_isolated(others)))
    entries = tuple(fam.values())
    strong = all(e.esd.is_trivial() for e in entries)
    stats = {"guesses": guesses, "entries": len(entries), "j_bound": bound, "j_used": k,
             "failures": len(failures)}
    return Disperser(entries, params, strong, stats, tuple(failures))


def _add(fam: dict, e: DisperserEntry):
    key = (e.X, None) if e.esd.is_trivial() else (e.X, esd_key(e.esd))
    fam.setdefault(key, e)


def lemma_j_bound(n: int, delta) -> int:
    """Guesses J have at most 2 p(γ)^-1 log2 n + 1 vertices (p(γ) = δ)."""
    return heavy_cover_bound(n, Fraction(delta) / 2) + 1


@lru_cache(maxsize=16384)
def _pt_family(C: Graph, t: int) -> tuple[tuple[DisperserEntry, ...], tuple]:
    u = lowest(C.present)
    out = {}
    for Q in gyarfas_family(C, u):
        if len(Q) >= t:
            raise ClassViolation(f"induced path on {t} vertices found", Q[:t])
        X = C.closed_mask(path_mask(Q)) if Q else 1 << u
        out.setdefault(X, trivial_entry(C, X))
    return tuple(out.values()), ()


@lru_cache(maxsize=16384)
def _hole_family(C: Graph, t: int) -> tuple[tuple[DisperserEntry, ...], tuple]:
    out = {}
    for Q in long_hole_family(C, t):
        X = C.closed_mask(path_mask(Q))
        out.setdefault(X, trivial_entry(C, X))
    return tuple(out.values()), ()


def _claw_family(t: int, provider: EsdProvider | None):
    params = SigmaParams.for_t(t)

    def family(C: Graph):
        res = find_claw(C, lowest(C.present), params, provider=provider, witness_t=t)
        if res.found:
            raise ClassViolation(f"induced (>={t})-claw found", res.claw)
        return res.family, res.failures

    return family


def _lobster_family(t: int, provider: EsdProvider | None):
    params = SigmaParams.for_t(t)

    def family(C: Graph):
        res = find_lobster(C, params, provider=provider, witness_t=t)
        if res.found:
            raise ClassViolation(f"induced (>={t})-lobster found", res.lobster)
        return res.family, res.failures

    return family


def _build(G: Graph, cls: GraphClass, gamma, family, j_cap: int) -> Disperser:
    delta = class_delta(cls, gamma)
    params = DisperserParams(Fraction(gamma), delta, j_cap)
    return guess_heavy(G, family, params, lemma_j_bound(max(len(G), 2), delta))


def strong_disperser_pt(G: Graph, gamma, t: int, j_cap: int = DEFAULT_J_CAP) -> Disperser:
    return _build(G, GraphClass("pt", t), gamma, lambda C: _pt_family(C, t), j_cap)


def strong_disperser_longhole(G: Graph, gamma, t: int, j_cap: int = DEFAULT_J_CAP) -> Disperser:
    return _build(G, GraphClass("hole", t), gamma, lambda C: _hole_family(C, t), j_cap)


def disperser_yget(G: Graph, gamma, t: int, j_cap: int = DEFAULT_J_CAP,
                   provider: EsdProvider | None = None) -> Disperser:
    return _build(G, GraphClass("claw", t), gamma, _claw_family(t, provider), j_cap)


def disperser_lget(G: Graph, gamma, t: int, j_cap: int = DEFAULT_J_CAP,
                   provider: EsdProvider | None = None) -> Disperser:
    return _build(G, GraphClass("lobster", t), gamma, _lobster_family(t, provider), j_cap)


def build_disperser(G: Graph, cls: GraphClass, gamma, j_cap: int = DEFAULT_J_CAP,
                    provider: EsdProvider | None = None) -> Disperser:
    if cls.kind == "pt":
        return strong_disperser_pt(G, gamma, cls.t, j_cap)
    if cls.kind == "hole":
        return strong_disperser_longhole(G, gamma, cls.t, j_cap)
    if cls.kind == "claw":
        return disperser_yget(G, gamma, cls.t, j_cap, provider)
    if cls.kind == "lobster":
        return disperser_lget(G, gamma, cls.t, j_cap, provider)
    raise ValueError(f"no disperser for class {cls}")


def good_entry(G: Graph, w: WeightFn, disperser: Disperser, I, gamma=None, delta=None) -> int | None:
    """Index of the first entry that is (γ, δ)-good for w restricted to I, or None."""
    Im = to_mask(I)
    wi = WeightFn(tuple(w[v] if Im >> v & 1 else 0 for v in range(len(w.values))))
    gamma = disperser.params.gamma if gamma is None else gamma
    delta = disperser.params.delta if delta is None else delta
    for i, e in enumerate(disperser.entries):
        if is_good(G, wi, e, gamma, delta).good:
            return i
    return None


def disperser_to_dict(d: Disperser) -> dict:
    return {"gamma": str(d.params.gamma), "delta": str(d.params.delta), "strong": d.strong,
            "entries": [{"X": sorted(e.X_set), "esd": esd_to_dict(e.esd)} for e in d.entries]}


def disperser_from_dict(obj: dict) -> Disperser:
    params = DisperserParams(Fraction(obj["gamma"]), Fraction(obj["delta"]))
    entries = tuple(DisperserEntry(to_mask(e["X"]), esd_from_dict(e["esd"])) for e in obj["entries"])
    return Disperser(entries, params, all(e.esd.is_trivial() for e in entries))


# ---------------------------------------------------------------------------
# uniform dispersers

@dataclass(frozen=True)
class UniformParams:
    """ξ, τ and n0 of the uniform construction for one class."""

    xi: Fraction
    tau: Fraction
    n0: int


def uniform_params(cls: GraphClass) -> UniformParams:
    """(1/2, 1/(4(t-1)), 16) for P_t and long holes; (1/9, 1, ...) and (1/41, 1, ...) for claws and lobsters.

    For claws and lobsters n0 is the least n with n^ξ > 100t, so that σ = n^-ξ is in range.
    """
    t = max(cls.t, 2)
    if cls.kind in ("pt", "hole"):
        return UniformParams(Fraction(1, 2), Fraction(1, 4 * (t - 1)), 16)
    if cls.kind in ("claw", "lobster"):
        xi = Fraction(1, 9) if cls.kind == "claw" else Fraction(1, 41)
        te = max(cls.t, 4)
        # n^ξ > 100t  <=>  n > (100t)^(1/ξ)
        return UniformParams(xi, Fraction(1), (100 * te) ** xi.denominator + 1)
    raise ValueError(f"no uniform disperser for class {cls}")


def degree_condition(G: Graph, tau, xi) -> bool:
    """|N[v]| <= τ n^ξ for every v, exactly: (|N[v]| / τ)^q <= n^p."""
    tau, xi = Fraction(tau), _xi(xi)
    n = len(G)
    p, q = xi.numerator, xi.denominator
    for v in G.vertices():
        r = popcount(G.closed_mask(1 << v)) / tau
        if r.numerator ** q > n ** p * r.denominator ** q:
            return False
    return True


def uniform_disperser(G: Graph, cls: GraphClass, params: UniformParams | None = None,
                      check: bool = True, provider: EsdProvider | None = None) -> DisperserEntry:
    """One ξ-uniform disperser of a connected G, or an error.

    With ``check`` the degree precondition and n >= n0 are enforced; without
    it the construction still runs and the caller decides what to do with
    the entry (it is uniform only when :func:`is_uniform` says so).
    """
    if not G.present or not G.is_connected():
        raise PreconditionError("graph must be connected and nonempty")
    up = uniform_params(cls) if params is None else params
    if check:
        if len(G) < up.n0:
            raise PreconditionError(f"n = {len(G)} is below n0 = {up.n0}")
        if not degree_condition(G, up.tau, up.xi):
            raise PreconditionError("some |N[v]| exceeds τ n^ξ")
    u = lowest(G.present)
    unit = WeightFn.uniform(G.n)
    if cls.kind == "pt":
        Q = gyarfas_select(G, u, unit, Fraction(1, 4)).path
        X = G.closed_mask(path_mask(Q)) if Q else 1 << u
        entry = trivial_entry(G, X)
    elif cls.kind == "hole":
        Q = long_hole_select(G, cls.t, unit, Fraction(1, 4), u)
        entry = trivial_entry(G, G.closed_mask(path_mask(Q)))
    elif cls.kind in ("claw", "lobster"):
        sp = SigmaParams.for_t(cls.t)
        if cls.kind == "claw":
            res = find_claw(G, u, sp, provider=provider, witness_t=cls.t)
            if res.found:
                raise ClassViolation(f"induced (>={cls.t})-claw found", res.claw)
        else:
            res = find_lobster(G, sp, provider=provider, witness_t=cls.t)
            if res.found:
                raise ClassViolation(f"induced (>={cls.t})-lobster found", res.lobster)
        entry = next((e for e in res.family if is_uniform(G, e, up.xi)), None)
        if entry is None and not check:
            entry = _most_progress(G, res.family)
        if entry is None:
            raise DisperserUnavailable("no uniform member in the family"
                                       + (f" ({len(res.failures)} members lacked a shattering ESD)"
                                          if res.failures else ""))
    else:
        raise ValueError(f"no uniform disperser for class {cls}")
    if check and not is_uniform(G, entry, up.xi):
        raise AssertionError("constructed entry is not ξ-uniform")
    return entry


def _most_progress(G: Graph, family) -> DisperserEntry | None:
    """Entry with the smallest largest atom (then smallest X) among those leaving no atom equal to G."""
    best, best_key = None, None
    for e in family:
        sizes = [popcount(a.mask) for a in atoms(G.remove(e.X), e.esd)]
        biggest = max(sizes, default=0)
        if biggest >= len(G):
            continue
        key = (biggest, popcount(e.X))
        if best_key is None or key < best_key:
            best, best_key = e, key
    return best


# adjacency-list variant for large sparse graphs ------------------------------------------

def _components_sparse(adj: Sequence[Sequence[int]], alive: bytearray) -> list[list[int]]:
    n = len(adj)
    seen = bytearray(n)
    comps = []
    for s in range(n):
        if not alive[s] or seen[s]:
            continue
        seen[s] = 1
        comp, dq = [s], deque([s])
        while dq:
            x = dq.popleft()
            for y in adj[x]:
                if alive[y] and not seen[y]:
                    seen[y] = 1
                    comp.append(y)
                    dq.append(y)
        comps.append(comp)
    return comps


def gyarfas_path_sparse(adj: Sequence[Sequence[int]], u: int, alpha=Fraction(1, 4)) -> list[int]:
    """Gyárfás path for unit weights on an adjacency-list graph (connected, ids 0..n-1).

    Follows the heavy component (more than (1 - α) n vertices) of G - N[v_0..v_i]
    until none is left; the empty list stands for the empty path.
    """
    alpha = Fraction(alpha)
    n = len(adj)

    def heavy_comp(alive):
        for c in _components_sparse(adj, alive):
            if len(c) * alpha.denominator > (alpha.denominator - alpha.numerator) * n:
                return set(c)
        return None

    alive = bytearray([1]) * n
    alive[u] = 0
    D = heavy_comp(alive)
    if D is None:
        return []
    path = [u]
    for y in adj[u]:
        alive[y] = 0
    while True:
        D_next = heavy_comp(alive)
        if D_next is None:
            return path
        last = path[-1]
        nxt = min(y for y in adj[last] if y in D and any(z in D_next for z in adj[y]))
        path.append(nxt)
        alive[nxt] = 0
        for y in adj[nxt]:
            alive[y] = 0
        D = D_next


def uniform_disperser_sparse(adj: Sequence[Sequence[int]], t: int, check: bool = True) -> tuple[set[int], list[int]]:
    """The P_t-free uniform construction on an adjacency list: (X, component sizes of G - X).

    The graph is trusted to be connected and P_t-free; a path with t vertices raises.
    """
    n = len(adj)
    up = uniform_params(GraphClass("pt", t))
    if check:
        if n < up.n0:
            raise PreconditionError(f"n = {n} is below n0 = {up.n0}")
        q, p = up.xi.denominator, up.xi.numerator
        for v in range(n):
            r = (len(adj[v]) + 1) / up.tau
            if r.numerator ** q > n ** p * r.denominator ** q:
                raise PreconditionError("some |N[v]| exceeds τ n^ξ")
    Q = gyarfas_path_sparse(adj, 0)
    if len(Q) >= t:
        raise ClassViolation(f"induced path on {t} vertices found", tuple(Q[:t]))
    X = set(Q) | {y for v in Q for y in adj[v]} if Q else {0}
    alive = bytearray([1]) * n
    for v in X:
        alive[v] = 0
    sizes = [len(c) for c in _components_sparse(adj, alive)]
    if check and not is_uniform_sizes(n, len(X), sizes, up.xi):
        raise AssertionError("constructed entry is not ξ-uniform")
    return X, sizes
