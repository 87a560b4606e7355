"""Induced trees through three terminals, and the claw / lobster pipelines.

``find_induced_tree`` is an exhaustive stand-in for a three-in-a-tree
algorithm.  ``claw_shatter`` either returns an induced tree through Z or an
ESD that shatters Z; it can only certify an ESD itself when Z is split over
several components, otherwise it needs one supplied from outside, and it
reports a failure when neither is available.

``find_claw`` and ``find_lobster`` enumerate families of (X, ESD) pairs that
do not depend on the weights.  For every weight function meeting the
lightness precondition, some member is balanced (see :func:`meets_bounds`),
unless the graph contains the forbidden claw or lobster, which is then
returned instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .esd import DisperserEntry, Esd, atoms, shatters, trivial_entry, trivial_esd, validate_esd
from .graph import Graph, WeightFn, from_mask, iter_bits, lowest, popcount, to_mask
from .pathfinder import gyarfas_family, level_graph_mask, path_mask
from .patterns import (CapExceeded, claw_parts, find_subdivided_tree, is_claw_at_least,
                       is_lobster_at_least, lobster_shape, tip_rooted_claw_shape)

TREE_CAP = 20
SHATTER_CAP = 20
LOBSTER_CAP = 14

EsdProvider = Callable[[Graph, frozenset], "Esd | None"]


class ExternalEsdError(ValueError):
    """A supplied ESD is not valid for the graph or does not shatter Z."""


# ---------------------------------------------------------------------------
# induced trees

def _distances(G: Graph, src: int) -> dict[int, int]:
    dist = {src: 0}
    frontier = 1 << src
    seen = frontier
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= G.adj[v]
        nxt &= G.present & ~seen
        for v in iter_bits(nxt):
            dist[v] = d
        seen |= nxt
        frontier = nxt
    return dist


def find_induced_tree(G: Graph, Z, cap: int = TREE_CAP) -> frozenset[int] | None:
    """Smallest vertex set S containing Z with G[S] a tree, or None if there is none.

    A smallest such set is inclusion-minimal.  It is the union of induced
    paths from a median vertex to the three terminals, which is how the
    search enumerates it: for growing size bounds, every center, and legs
    grown one vertex at a time, each new vertex seeing exactly one tree vertex.
    """
    Z = sorted(set(Z))
    if len(Z) != 3:
        raise ValueError("Z must have exactly three vertices")
    if any(z not in G for z in Z):
        raise ValueError("Z must lie in the graph")
    if len(G) > cap:
        raise CapExceeded(f"graph has {len(G)} vertices, induced-tree cap is {cap}")
    comp = G.component_of(Z[0])
    if any(not comp >> z & 1 for z in Z):
        return None
    dist = {z: _distances(G, z) for z in Z}
    INF = len(G) + 1

    def legs(center: int, budget: int):
        """First tree within ``budget`` vertices, legs grown towards Z in order."""

        def lower(tree: int, todo: list[int]) -> int:
            return sum(dist[z].get(center, INF) for z in todo if not tree >> z & 1)

        def leg(tree: int, size: int, todo: list[int]):
            todo = [z for z in todo if not tree >> z & 1]
            if not todo:
                return tree
            z = todo[0]
            if size + lower(tree, todo) > budget:
                return None
            return grow(center, tree, size, z, todo)

        def grow(last: int, tree: int, size: int, z: int, todo: list[int]):
            for x in iter_bits(G.adj[last] & G.present & ~tree):
                if G.adj[x] & tree != 1 << last:
                    continue
                nt = tree | 1 << x
                ns = size + 1
                if x == z:
                    found = leg(nt, ns, todo[1:])
                else:
                    rest = dist[z].get(x, INF) + sum(dist[y].get(center, INF) for y in todo[1:] if not nt >> y & 1)
                    if ns + rest > budget:
                        continue
                    found = grow(x, nt, ns, z, todo)
                if found is not None:
                    return found
            return None

        return leg(1 << center, 1, Z)

    for budget in range(3, popcount(comp) + 1):
        for c in iter_bits(comp):
            found = legs(c, budget)
            if found is not None:
                return from_mask(found)
    return None


def is_induced_tree(G: Graph, S) -> bool:
    m = to_mask(S)
    if not m:
        return False
    H = G.subgraph(m)
    return H.is_connected() and H.num_edges() == popcount(m) - 1


# ---------------------------------------------------------------------------
# claw shatter

@dataclass(frozen=True)
class TreeOrEsd:
    """Exactly one of ``tree``, ``esd`` and ``failure`` is set."""

    tree: frozenset[int] | None = None
    esd: Esd | None = None
    failure: str | None = None
    source: str = ""


def claw_shatter(G: Graph, Z, external: Esd | None = None, cap: int = TREE_CAP,
                 shatter_cap: int = SHATTER_CAP) -> TreeOrEsd:
    """An induced tree through Z, or an ESD of G shattering Z, or a failure.

    ``external`` may be an ESD of G or of the component holding Z; in the
    latter case every other component becomes an isolated pattern vertex.
    An external ESD that is invalid or does not shatter Z raises
    :class:`ExternalEsdError`.
    """
    Z = frozenset(Z)
    if len(Z) != 3:
        raise ValueError("Z must have exactly three vertices")
    zs = sorted(Z)
    comp = G.component_of(zs[0])
    if any(not comp >> z & 1 for z in zs):
        return TreeOrEsd(esd=trivial_esd(G), source="split")
    tree = find_induced_tree(G, Z, cap)
    if tree is not None:
        return TreeOrEsd(tree=tree, source="tree")
    if external is None:
        return TreeOrEsd(failure="three-in-a-tree constructive step unavailable")
    covered = external.covered()
    if covered == comp:
        d = external.with_isolated(c for c in G.component_masks() if c != comp)
    elif covered == G.present:
        d = external
    else:
        raise ExternalEsdError("external ESD covers neither the graph nor the component of Z")
    rep = validate_esd(G, d)
    if not rep.ok:
        raise ExternalEsdError("external ESD is invalid: " + "; ".join(rep.violations[:3]))
    if not shatters(G.subgraph(comp), d.minus(~comp), Z, cap=shatter_cap):
        raise ExternalEsdError("external ESD does not shatter Z")
    return TreeOrEsd(esd=d, source="external")


def restricting_provider(d: Esd) -> EsdProvider:
    """Provider handing out ``d`` cut down to the component of Z in the asked-for graph."""

    def provide(G: Graph, Z: frozenset) -> Esd | None:
        comp = G.component_of(min(Z))
        return d.minus(~comp)

    return provide


# ---------------------------------------------------------------------------
# parameters and bounds

@dataclass(frozen=True)
class SigmaParams:
    t: int
    sigma: Fraction

    def __post_init__(self):
        if self.t < 4:
            raise ValueError("t must be at least 4")
        s = Fraction(self.sigma)
        if not 0 < s < Fraction(1, 100 * self.t):
            raise ValueError(f"σ must lie in (0, 1/(100t)), got {s}")
        object.__setattr__(self, "sigma", s)

    @classmethod
    def for_t(cls, t: int, sigma=None) -> "SigmaParams":
        """Parameters for claws or lobsters with legs >= t; t is raised to 4 and σ defaults to 1/(100t+1)."""
        te = max(t, 4)
        return cls(te, Fraction(1, 100 * te + 1) if sigma is None else Fraction(sigma))


def is_light(G: Graph, w: WeightFn, sigma, power: int) -> bool:
    """w(N[v]) <= σ^power · w(G) for every vertex v."""
    bound = Fraction(sigma) ** power * w.total(G.present)
    return all(w.total(G.closed_mask(1 << v)) <= bound for v in G.vertices())


def meets_bounds(G: Graph, w: WeightFn, entry: DisperserEntry, sigma, shrink_power: int,
                 safe_power: int = 1) -> bool:
    """w(A) <= (1 - σ^shrink_power) w(G) and w(X) <= σ^safe_power · w(G - A) for every atom A."""
    s = Fraction(sigma)
    total = w.total(G.present)
    wx = w.total(entry.X)
    shrink = 1 - s ** shrink_power
    safe = s ** safe_power
    for a in atoms(G.remove(entry.X), entry.esd):
        wa = w.total(a.mask)
        if wa > shrink * total or wx > safe * (total - wa):
            return False
    return True


# ---------------------------------------------------------------------------
# claws

@dataclass(frozen=True)
class Failure:
    """A family member that could not be produced because no shattering ESD was available."""

    stage: str
    Z: tuple[int, ...]
    reason: str


@dataclass(frozen=True)
class ClawResult:
    """Either ``claw`` (with ``tip`` among its tips) or the enumerated family."""

    tip: int
    claw: frozenset[int] | None = None
    source: str = ""
    family: tuple[DisperserEntry, ...] = ()
    failures: tuple[Failure, ...] = ()
    shatter_calls: int = 0

    @property
    def found(self) -> bool:
        return self.claw is not None


class _Family:
    """Insertion-ordered, deduplicated collection of entries and failures."""

    def __init__(self):
        self.entries: dict[tuple, DisperserEntry] = {}
        self.failures: list[Failure] = []
        self.shatter_calls = 0

    def add(self, e: DisperserEntry):
        key = (e.X, None) if e.esd.is_trivial() else (e.X, esd_key(e.esd))
        self.entries.setdefault(key, e)

    def fail(self, f: Failure):
        if f not in self.failures:
            self.failures.append(f)


def esd_key(d: Esd) -> tuple:
    return (d.pattern, d.vertex_masks, tuple(sorted((k, v) for k, v in d.edge_masks.items() if v)),
            tuple(sorted((k, v) for k, v in d.end_masks.items() if v)),
            tuple(sorted((k, v) for k, v in d.triangle_masks.items() if v)))


def _shatter(G: Graph, Z, provider: EsdProvider | None, fam: _Family, stage: str) -> TreeOrEsd:
    fam.shatter_calls += 1
    external = None
    if provider is not None and len({G.component_of(z) for z in Z}) == 1:
        external = provider(G, frozenset(Z))
    try:
        res = claw_shatter(G, Z, external)
    except ExternalEsdError as exc:
        res = TreeOrEsd(failure=f"external ESD rejected: {exc}")
    if res.failure is not None:
        fam.fail(Failure(stage, tuple(sorted(Z)), res.failure))
    return res


def find_claw(G: Graph, u: int, params: SigmaParams, w: WeightFn | None = None,
              provider: EsdProvider | None = None, witness_t: int | None = None,
              direct: bool = True) -> ClawResult:
    """A (>=t)-claw with tip u, or the weight-independent family of cuts.

    ``witness_t`` (default ``params.t``) is the leg length sought by the
    direct search that backs up the enumeration; any smaller value still
    yields a valid class witness for the smaller t.  If ``w`` is given the
    lightness precondition w(N[v]) <= σ^8 w(G) is checked first.
    """
    if not G.is_connected() or u not in G:
        raise ValueError("find_claw needs a connected graph containing u")
    if w is not None and not is_light(G, w, params.sigma, 8):
        raise ValueError("weights violate w(N[v]) <= σ^8 · w(G)")
    wt = params.t if witness_t is None else witness_t
    if provider is None:
        return _find_claw_cached(G, u, params.t, wt, direct)
    return _find_claw(G, u, params.t, wt, direct, provider)


@lru_cache(maxsize=8192)
def _find_claw_cached(G: Graph, u: int, t: int, wt: int, direct: bool) -> ClawResult:
    return _find_claw(G, u, t, wt, direct, None)


def _find_claw(G: Graph, u: int, t: int, wt: int, direct: bool, provider) -> ClawResult:
    fam = _Family()
    fam.add(trivial_entry(G, 1 << u))
    for Q in gyarfas_family(G, u):
        if not Q:
            continue
        k = len(Q) - 1
        prefix = 0
        for i in range(k + 1):
            prefix |= 1 << Q[i]
            fam.add(trivial_entry(G, G.closed_mask(prefix)))
        for p in range(t + 2, k + 1):
            for q in range(p + t + 2, k - t - 1):
                cut = _claw_cut(G, Q, p, q, t)
                Gp = G.remove(cut["removed"])
                Z = (Q[0], Q[p], Q[q])
                res = _shatter(Gp, Z, provider, fam, f"claw:Q={Q},p={p},q={q}")
                if res.tree is not None:
                    claw = res.tree
                    if not is_claw_at_least(G, claw, t, tip=u):
                        raise AssertionError("tree from the claw construction is not a (>=t)-claw")
                    return ClawResult(u, claw, "pipeline", shatter_calls=fam.shatter_calls)
                if res.esd is not None:
                    X = cut["X"]
                    fam.add(DisperserEntry(X, res.esd.minus(X)))
    if direct:
        found = find_subdivided_tree(G, tip_rooted_claw_shape(wt), root_vertex=u)
        if found is not None:
            return ClawResult(u, found[0], "direct", shatter_calls=fam.shatter_calls)
    return ClawResult(u, None, "", tuple(fam.entries.values()), tuple(fam.failures), fam.shatter_calls)


def _claw_cut(G: Graph, Q, p: int, q: int, t: int) -> dict:
    Q1, Q2, Q3 = path_mask(Q[:t]), path_mask(Q[p:p + t]), path_mask(Q[q:q + t])
    keep = path_mask((Q[t], Q[p + t], Q[q + t]))
    opened = G.open_mask(Q1) | G.open_mask(Q2) | G.open_mask(Q3)
    return {"removed": opened & ~keep, "X": G.closed_mask(Q1 | Q2 | Q3)}


def t_claw(G: Graph, claw, t: int, toward: int) -> tuple[int, int]:
    """(mask of the vertices within distance t of the center, tip of that t-claw on the leg to ``toward``)."""
    mask = to_mask(claw)
    parts = claw_parts(G, mask)
    if parts is None:
        raise ValueError("not a subdivided claw")
    c = parts[0]
    H = G.subgraph(mask)
    dist = _distances(H, c)
    T = to_mask(v for v, d in dist.items() if d <= t)
    # walk from ``toward`` to the center; the tip is the vertex at distance t
    d_to = _distances(H, toward)
    on_path = [v for v in dist if dist[v] + d_to[v] == d_to[c]]
    tip = next(v for v in on_path if dist[v] == t)
    return T, tip


# ---------------------------------------------------------------------------
# lobsters

@dataclass(frozen=True)
class LobsterResult:
    lobster: frozenset[int] | None = None
    source: str = ""
    family: tuple[DisperserEntry, ...] = ()
    failures: tuple[Failure, ...] = ()
    shatter_calls: int = 0

    @property
    def found(self) -> bool:
        return self.lobster is not None


class _Found(Exception):
    def __init__(self, lobster: frozenset[int]):
        self.lobster = lobster


def _lift(G: Graph, base: int, inner: DisperserEntry, pivot: int, others) -> DisperserEntry:
    """X = base ∪ X', ESD = ESD' without ``pivot`` plus one isolated piece per other component."""
    X = base | inner.X
    if inner.esd.is_trivial():
        return trivial_entry(G, X)
    return DisperserEntry(X, inner.esd.minus(1 << pivot).with_isolated(others))


def _lifted(G: Graph, entry: DisperserEntry) -> DisperserEntry:
    return trivial_entry(G, entry.X) if entry.esd.is_trivial() else entry


def find_lobster(G: Graph, params: SigmaParams, w: WeightFn | None = None,
                 provider: EsdProvider | None = None, witness_t: int | None = None,
                 cap: int = LOBSTER_CAP, direct: bool = True) -> LobsterResult:
    """A (>=t)-lobster, or the weight-independent family of cuts.

    With ``w`` given, the lightness precondition w(N[v]) <= σ^40 w(G) is checked.
    """
    if not G.is_connected():
        raise ValueError("find_lobster needs a connected graph")
    if len(G) > cap:
        raise CapExceeded(f"graph has {len(G)} vertices, lobster cap is {cap}")
    if w is not None and not is_light(G, w, params.sigma, 40):
        raise ValueError("weights violate w(N[v]) <= σ^40 · w(G)")
    wt = params.t if witness_t is None else witness_t
    fam = _Family()
    try:
        _right_claw_stage(G, params, provider, fam)
    except _Found as found:
        return LobsterResult(found.lobster, "pipeline", shatter_calls=fam.shatter_calls)
    if direct:
        found = find_subdivided_tree(G, lobster_shape(wt))
        if found is not None:
            return LobsterResult(found[0], "direct", shatter_calls=fam.shatter_calls)
    return LobsterResult(None, "", tuple(fam.entries.values()), tuple(fam.failures), fam.shatter_calls)


def _claw(G: Graph, u: int, params: SigmaParams, provider) -> ClawResult:
    # the pipeline only uses claws it built itself, so the direct search stays off
    return find_claw(G, u, params, provider=provider, direct=False)


def _right_claw_stage(G: Graph, params: SigmaParams, provider, fam: _Family):
    t = params.t
    u = lowest(G.present)
    fam.add(trivial_entry(G, 1 << u))
    for Q in gyarfas_family(G, u):
        for p in range(len(Q)):
            fam.add(trivial_entry(G, G.closed_mask(path_mask(Q[:p + 1]))))
            level = level_graph_mask(G, Q, u, p)
            base = G.present & ~level
            vp = Q[p]
            comps = G.component_masks(level)
            for D in comps:
                if not G.adj[vp] & D:
                    continue
                others = [c for c in comps if c != D]
                G1 = G.subgraph(D | 1 << vp)
                res = _claw(G1, vp, params, provider)
                for f in res.failures:
                    fam.fail(f)
                fam.shatter_calls += res.shatter_calls
                if res.claw is None:
                    for e in res.family:
                        fam.add(_lift(G, base, e, vp, others))
                    continue
                T, w = t_claw(G, res.claw, t, vp)
                _left_claw_stage(G, params, provider, fam, T, w)


def _left_claw_stage(G: Graph, params: SigmaParams, provider, fam: _Family, T: int, w: int):
    t = params.t
    XT = G.closed_mask(T & ~(1 << w))
    fam.add(trivial_entry(G, XT))
    J = G.present & ~XT
    comps = G.component_masks(J)
    for D in comps:
        if not G.adj[w] & D:
            continue
        others = [c for c in comps if c != D]
        G2 = G.subgraph(D | 1 << w)

        def up(e: DisperserEntry) -> DisperserEntry:
            return _lift(G, XT, e, w, others)

        for P in gyarfas_family(G2, w):
            for r in range(len(P)):
                fam.add(up(trivial_entry(G2, G2.closed_mask(path_mask(P[:r + 1])))))
                level = level_graph_mask(G2, P, w, r)
                base = G2.present & ~level
                yr = P[r]
                comps2 = G2.component_masks(level)
                for D2 in comps2:
                    if not G2.adj[yr] & D2:
                        continue
                    others2 = [c for c in comps2 if c != D2]
                    G3 = G2.subgraph(D2 | 1 << yr)
                    res = _claw(G3, yr, params, provider)
                    for f in res.failures:
                        fam.fail(f)
                    fam.shatter_calls += res.shatter_calls
                    if res.claw is None:
                        for e in res.family:
                            fam.add(up(_lift(G2, base, e, yr, others2)))
                        continue
                    S, v = t_claw(G, res.claw, t, yr)
                    _final_stage(G, params, provider, fam, T, w, S, v, P, r)


def _final_stage(G: Graph, params: SigmaParams, provider, fam: _Family, T: int, w: int,
                 S: int, v: int, P, r: int):
    t = params.t
    # p needs some q with p > t+1, q-p > t+1 and r-q > t+1; G4 does not depend on q
    for p in range(t + 2, r - 2 * t - 3):
        P2 = path_mask(P[p:p + t])
        removed = ((G.closed_mask(S & ~(1 << v)) & ~(1 << v))
                   | (G.closed_mask(T & ~(1 << w)) & ~(1 << w))
                   | (G.open_mask(P2) & ~(1 << P[p + t])))
        G4 = G.remove(removed)
        Z = (v, w, P[p])
        res = _shatter(G4, Z, provider, fam, f"lobster:P={P},p={p},r={r}")
        if res.tree is not None:
            lobster = from_mask(T | to_mask(res.tree) | S)
            if not is_lobster_at_least(G, lobster, t):
                raise AssertionError("union of the claws and the tree is not a (>=t)-lobster")
            raise _Found(lobster)
        if res.esd is not None:
            X = G.closed_mask(S | T | P2)
            fam.add(DisperserEntry(X, res.esd.minus(X)))
