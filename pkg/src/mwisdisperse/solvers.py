"""MWIS solvers built on dispersers, plus the exact baseline and a tree decomposition.

``qptas`` rescales the weights, then recurses: at every node it builds the
class disperser, solves every atom of every entry one level deeper with a
shrinking weight bound, assembles each entry through a matching and keeps the
best.  ``subexp_exact`` branches on high-degree vertices and otherwise uses a
single uniform disperser, guessing the solution's intersection with X.  The
H-free wrappers reduce an H-free graph to a claw-free remainder.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .assembly import AssemblyInput, assemble, assemble_trivial
from .classes import GraphClass, YgeT
from .dispersers import (DEFAULT_J_CAP, DisperserUnavailable, PreconditionError, UniformParams,
                         build_disperser, class_delta, heavy_cover_bound, independent_sets_upto,
                         uniform_disperser, uniform_params)
from .esd import atoms, restrict_esd
from .graph import Graph, WeightFn, from_mask, iter_bits, popcount, to_mask
from .pathfinder import ClassViolation, long_hole_separator, path_mask
from .patterns import CapExceeded, covering_claw_length, find_induced_copy
from .tree_oracle import EsdProvider

BRUTE_FORCE_CAP = 24


@dataclass(frozen=True)
class SolveResult:
    """An independent set (bitmask), its weight and solver statistics."""

    mask: int
    weight: int
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def set(self) -> frozenset[int]:
        return from_mask(self.mask)


def _result(G: Graph, w: WeightFn, mask: int, stats: dict, started: float) -> SolveResult:
    if not G.is_independent_mask(mask):
        raise AssertionError("solver returned a dependent set")
    stats["wall_time"] = round(time.perf_counter() - started, 6)
    return SolveResult(mask, w.total(mask), stats)


def _better(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """(weight, mask) a beats b: heavier, or equal and the first differing vertex is in a."""
    if a[0] != b[0]:
        return a[0] > b[0]
    diff = a[1] ^ b[1]
    return bool(diff) and bool(a[1] & diff & -diff)


# ---------------------------------------------------------------------------
# exact baseline

def mwis_bruteforce(G: Graph, w: WeightFn, cap: int = BRUTE_FORCE_CAP) -> SolveResult:
    """Exact MWIS by branching on a maximum-degree vertex, with component splitting and memo.

    Ties go to the set that contains the smallest vertex on which two optima differ.
    """
    started = time.perf_counter()
    if len(G) > cap:
        raise CapExceeded(f"{len(G)} vertices exceed the brute-force cap {cap}")
    best, stats = _exact_search(G, w)
    return _result(G, w, best[1], stats, started)


def _exact_search(G: Graph, w: WeightFn) -> tuple[tuple[int, int], dict]:
    memo: dict[int, tuple[int, int]] = {}
    stats = {"nodes": 0}

    def solve(mask: int) -> tuple[int, int]:
        if not mask:
            return (0, 0)
        hit = memo.get(mask)
        if hit is not None:
            return hit
        stats["nodes"] += 1
        comps = G.component_masks(mask)
        if len(comps) > 1:
            weight, out = 0, 0
            for c in comps:
                cw, cm = solve(c)
                weight, out = weight + cw, out | cm
            res = (weight, out)
        else:
            v = max(iter_bits(mask), key=lambda x: (popcount(G.adj[x] & mask), -x))
            if not G.adj[v] & mask:
                res = (w.total(mask), mask)
            else:
                without = solve(mask & ~(1 << v))
                rest = solve(mask & ~G.closed_mask(1 << v))
                with_v = (rest[0] + w[v], rest[1] | 1 << v)
                res = with_v if _better(with_v, without) else without
        memo[mask] = res
        return res

    return solve(G.present), stats


# ---------------------------------------------------------------------------
# rescaling

@dataclass(frozen=True)
class ScaleCertificate:
    """Data behind the (1 - ε) loss bound: every weight w(v) became floor(w(v) · factor)."""

    n: int
    eps: Fraction
    max_before: int
    max_after: int
    factor: Fraction
    discarded: frozenset[int]


def _eps(eps) -> Fraction:
    e = Fraction(eps) if not isinstance(eps, float) else Fraction(str(eps))
    if not 0 < e < 1:
        raise ValueError(f"ε must lie in (0, 1), got {eps}")
    if e.numerator != 1:
        raise ValueError(f"1/ε must be an integer, got ε = {e}")
    return e


def rescale_weights(G: Graph, w: WeightFn, eps) -> tuple[WeightFn, ScaleCertificate]:
    """Scale so the maximum weight is exactly n/ε, floor, and zero out vertices that drop to 0."""
    e = _eps(eps)
    n = len(G)
    top = max((w[v] for v in G.vertices()), default=0)
    if top == 0:
        raise ValueError("all weights are zero")
    target = Fraction(n) / e  # an integer since 1/ε is
    factor = target / top
    vals = [0] * G.n
    discarded = []
    for v in G.vertices():
        x = math.floor(w[v] * factor)
        if x == 0:
            discarded.append(v)
        vals[v] = x
    cert = ScaleCertificate(n, e, top, int(target), factor, frozenset(discarded))
    return WeightFn(tuple(vals)), cert


# ---------------------------------------------------------------------------
# QPTAS

@dataclass(frozen=True)
class QptasConfig:
    """User ε, the class, and the internal accounting.

    The recursion runs with ε/``factor``; ``m`` and ``gamma`` follow from that
    internal value and n.  γ uses the ceiling of log2 so it is rational and
    never larger than the real-valued formula.
    """

    eps: Fraction
    cls: GraphClass
    factor: int = 4
    j_cap: int = DEFAULT_J_CAP
    checks: bool = True
    provider: EsdProvider | None = None

    def __post_init__(self):
        object.__setattr__(self, "eps", _eps(self.eps))
        if self.factor < 1:
            raise ValueError("factor must be a positive integer")

    @property
    def internal_eps(self) -> Fraction:
        return self.eps / self.factor

    def m(self, n: int) -> Fraction:
        return Fraction(n * n) / self.internal_eps

    def gamma(self, n: int) -> Fraction:
        e = self.internal_eps
        ratio = self.m(max(n, 1))
        log = max(0, math.ceil(math.log2(ratio)))
        # math.log2 on a Fraction can be off near powers of two; correct exactly
        while 2 ** log < ratio:
            log += 1
        while log > 0 and 2 ** (log - 1) >= ratio:
            log -= 1
        return e / (1 + log)

    def delta(self, n: int) -> Fraction:
        return class_delta(self.cls, self.gamma(n))


def qptas(G: Graph, w: WeightFn, eps, cls: GraphClass, config: QptasConfig | None = None) -> SolveResult:
    """Approximate MWIS on a graph from ``cls`` (P_t, long-hole, claw or lobster free)."""
    started = time.perf_counter()
    cfg = QptasConfig(eps, cls) if config is None else config
    stats = {"nodes": 0, "depth": 0, "matching_calls": 0, "entries": 0, "memo_hits": 0, "base_cutoffs": 0}
    if not any(w[v] for v in G.vertices()):
        return _result(G, w, 0, stats, started)
    n = len(G)
    ws, cert = rescale_weights(G, w, cfg.internal_eps)
    work = G.subgraph(ws.positive_mask())
    gamma, delta, m = cfg.gamma(n), cfg.delta(n), cfg.m(n)
    stats.update(gamma=str(gamma), delta_bits=delta.denominator.bit_length(), m=str(m),
                 discarded=len(cert.discarded))

    # bound at depth d is m (1 - δ)^d; memoise by mask alone when it never drops below 1
    shrink = 1 - delta
    by_mask_only = m * shrink ** len(work) >= 1
    bounds: list[Fraction] = [m]

    def bound_at(d: int) -> Fraction:
        while len(bounds) <= d:
            bounds.append(bounds[-1] * shrink)
        return bounds[d]

    memo: dict = {}

    def solve(mask: int, depth: int) -> int:
        key = mask if by_mask_only else (mask, depth)
        if key in memo:
            stats["memo_hits"] += 1
            return memo[key]
        stats["nodes"] += 1
        stats["depth"] = max(stats["depth"], depth)
        GM = work.subgraph(mask)
        if not by_mask_only and bound_at(depth) < 1:
            stats["base_cutoffs"] += 1
            res = 0
        elif not GM.num_edges():
            res = mask
        else:
            res = _best_entry(GM, mask, depth)
        memo[key] = res
        return res

    def _best_entry(GM: Graph, mask: int, depth: int) -> int:
        D = build_disperser(GM, cfg.cls, gamma, cfg.j_cap, cfg.provider)
        best, best_w = None, -1
        for entry in D.entries:
            rest = GM.remove(entry.X)
            atom_list = atoms(rest, entry.esd)
            if any(a.mask == mask for a in atom_list):
                continue  # no progress
            stats["entries"] += 1
            per_atom = {a.ident: (a.mask if a.trivial else solve(a.mask, depth + 1))
                        for a in atom_list if a.mask}
            if entry.esd.is_trivial():
                got = assemble_trivial(list(per_atom.values()))
            else:
                stats["matching_calls"] += 1
                inp = AssemblyInput(rest, ws, entry.esd, per_atom, atom_list)
                got = assemble(inp, checks=cfg.checks).result
            gw = ws.total(got)
            if gw > best_w:
                best, best_w = got, gw
        if best is None:
            raise DisperserUnavailable(f"no disperser entry makes progress on {sorted(from_mask(mask))}")
        return best

    out = solve(work.present, 0)
    stats["memo_by_mask"] = by_mask_only
    return _result(G, w, out, stats, started)


# ---------------------------------------------------------------------------
# subexponential exact recursion

@dataclass(frozen=True)
class SubexpConfig:
    """ξ, τ and n0 of the recursion.

    ``check`` demands n0^p >= 3^q for ξ = p/q (so n0 > e^(1/ξ)) and makes the
    uniform construction enforce its preconditions.  With ``check`` off,
    non-uniform entries are used whenever every atom is smaller than the
    current graph, which keeps the recursion exact.
    """

    xi: Fraction
    tau: Fraction
    n0: int
    check: bool = True
    checks: bool = True
    provider: EsdProvider | None = None

    def __post_init__(self):
        object.__setattr__(self, "xi", Fraction(self.xi))
        object.__setattr__(self, "tau", Fraction(self.tau))
        if not 0 < self.xi < 1 or self.tau <= 0 or self.n0 < 1:
            raise ValueError("need 0 < ξ < 1, τ > 0 and n0 >= 1")
        if self.check and self.n0 ** self.xi.numerator < 3 ** self.xi.denominator:
            raise ValueError(f"n0 = {self.n0} does not exceed e^(1/ξ)")

    @classmethod
    def for_class(cls, klass: GraphClass, **kw) -> "SubexpConfig":
        up = uniform_params(klass)
        n0 = up.n0
        # the smallest n0 with n0^p >= 3^q, if the class default is smaller
        while n0 ** up.xi.numerator < 3 ** up.xi.denominator:
            n0 += 1
        return cls(up.xi, up.tau, n0, **kw)

    @classmethod
    def permissive(cls, klass: GraphClass, **kw) -> "SubexpConfig":
        """Small n0 and no degree branching, so the disperser path runs at desk scale."""
        up = uniform_params(klass)
        return cls(up.xi, Fraction(1 << 20), 2, check=False, **kw)

    def uniform(self) -> UniformParams:
        return UniformParams(self.xi, self.tau, self.n0)


def _high_degree(G: Graph, mask: int, tau: Fraction, xi: Fraction) -> int | None:
    """A vertex maximising |N[v]| among those with |N[v]| > τ n^ξ, exactly; None if there is none."""
    n = popcount(mask)
    p, q = xi.numerator, xi.denominator
    best, best_deg = None, -1
    for v in iter_bits(mask):
        deg = popcount(G.adj[v] & mask) + 1
        r = Fraction(deg) / tau
        if r.numerator ** q > n ** p * r.denominator ** q and deg > best_deg:
            best, best_deg = v, deg
    return best


def _max_degree_vertex(G: Graph, mask: int) -> int:
    return max(iter_bits(mask), key=lambda x: (popcount(G.adj[x] & mask), -x))


def _independent_subsets(G: Graph, X: int) -> list[int]:
    out = [0]
    for v in iter_bits(X):
        out += [s | 1 << v for s in out if not G.adj[v] & s]
    return out


def subexp_exact(G: Graph, w: WeightFn, cls: GraphClass, config: SubexpConfig | None = None,
                 cap: int = BRUTE_FORCE_CAP) -> SolveResult:
    """Exact MWIS through uniform dispersers; small or awkward pieces go to the exact baseline."""
    started = time.perf_counter()
    cfg = SubexpConfig.for_class(cls) if config is None else config
    stats = {"nodes": 0, "depth": 0, "matching_calls": 0, "brute_force": 0, "degree_branches": 0,
             "disperser_nodes": 0, "fallbacks": 0, "fallback_reasons": []}
    memo: dict[int, tuple[int, int]] = {}

    def base(mask: int) -> tuple[int, int]:
        if popcount(mask) > cap:
            raise CapExceeded(f"{popcount(mask)} vertices exceed the brute-force cap {cap}")
        stats["brute_force"] += 1
        found, _ = _exact_search(G.subgraph(mask), w)
        return found

    def branch(mask: int, v: int, depth: int) -> tuple[int, int]:
        without = solve(mask & ~(1 << v), depth + 1)
        rest = solve(mask & ~G.closed_mask(1 << v), depth + 1)
        with_v = (rest[0] + w[v], rest[1] | 1 << v)
        return with_v if _better(with_v, without) else without

    def solve(mask: int, depth: int) -> tuple[int, int]:
        if not mask:
            return (0, 0)
        if mask in memo:
            return memo[mask]
        stats["nodes"] += 1
        stats["depth"] = max(stats["depth"], depth)
        comps = G.component_masks(mask)
        if popcount(mask) <= cfg.n0:
            res = base(mask)
        elif len(comps) > 1:
            weight, out = 0, 0
            for c in comps:
                cw, cm = solve(c, depth + 1)
                weight, out = weight + cw, out | cm
            res = (weight, out)
        else:
            v = _high_degree(G, mask, cfg.tau, cfg.xi)
            if v is not None:
                stats["degree_branches"] += 1
                res = branch(mask, v, depth)
            else:
                res = disperse(mask, depth)
        memo[mask] = res
        return res

    def fallback(mask: int, depth: int, reason: str) -> tuple[int, int]:
        stats["fallbacks"] += 1
        if reason not in stats["fallback_reasons"]:
            stats["fallback_reasons"].append(reason)
        return branch(mask, _max_degree_vertex(G, mask), depth)

    def disperse(mask: int, depth: int) -> tuple[int, int]:
        GM = G.subgraph(mask)
        try:
            entry = uniform_disperser(GM, cls, cfg.uniform(), check=cfg.check, provider=cfg.provider)
        except (DisperserUnavailable, PreconditionError) as exc:
            return fallback(mask, depth, type(exc).__name__)
        rest_all = GM.remove(entry.X)
        if any(a.mask == mask for a in atoms(rest_all, entry.esd)):
            return fallback(mask, depth, "no progress")
        stats["disperser_nodes"] += 1
        best = None
        for Y in _independent_subsets(G, entry.X):
            removed = entry.X | G.closed_mask(Y)
            rest = GM.remove(removed)
            d = restrict_esd(entry.esd, removed)
            atom_list = atoms(rest, d)
            per_atom = {a.ident: solve(a.mask, depth + 1)[1] for a in atom_list if a.mask}
            if d.is_trivial():
                got = assemble_trivial(list(per_atom.values()))
            else:
                stats["matching_calls"] += 1
                got = assemble(AssemblyInput(rest, w, d, per_atom, atom_list), checks=cfg.checks).result
            cand = (w.total(got | Y), got | Y)
            if best is None or _better(cand, best):
                best = cand
        return best

    out = solve(G.present, 0)
    return _result(G, w, out[1], stats, started)


# ---------------------------------------------------------------------------
# H-free wrappers

def _check_pattern(H: Graph) -> int:
    if not H.present:
        raise ValueError("pattern graph is empty")
    return covering_claw_length(H)


def maximal_component_embedding(G: Graph, H: Graph) -> tuple[list[int], int]:
    """Greedily grow a family of components of H with an induced copy in G.

    Returns the chosen component masks (of H) and the vertex mask of the copy in G.
    """
    chosen: list[int] = []
    union, X = 0, 0
    for comp in H.component_masks():
        pattern, _ = H.subgraph(union | comp).compact()
        emb = find_induced_copy(G, pattern)
        if emb is not None:
            chosen.append(comp)
            union |= comp
            X = to_mask(emb.values())
    return chosen, X


def _require_hfree(G: Graph, H: Graph) -> None:
    pattern, _ = H.compact()
    emb = find_induced_copy(G, pattern)
    if emb is not None:
        raise ClassViolation("graph contains an induced copy of the pattern", frozenset(emb.values()))


@dataclass(frozen=True)
class HfreeConfig:
    """``j_cap`` limits the size of guessed sets J; None means the bound ⌈β⁻¹ log n⌉."""

    j_cap: int | None = None
    check_free: bool = True
    qptas_factor: int = 4
    subexp: str = "strict"  # or "permissive"


def mwis_hfree_approx(G: Graph, w: WeightFn, eps, H: Graph, config: HfreeConfig | None = None) -> SolveResult:
    """Approximate MWIS on an H-free graph, H a disjoint union of paths and subdivided claws."""
    started = time.perf_counter()
    cfg = HfreeConfig() if config is None else config
    e = _eps(eps)
    L = _check_pattern(H)
    if cfg.check_free:
        _require_hfree(G, H)
    beta = e / (2 * len(H))
    bound = heavy_cover_bound(max(len(G), 2), beta)
    k = bound if cfg.j_cap is None else min(bound, cfg.j_cap)
    inner = YgeT(L)
    stats = {"guesses": 0, "pruned": 0, "j_bound": bound, "j_used": k, "claw_length": L,
             "qptas_calls": 0, "nodes": 0, "matching_calls": 0, "depth": 0}
    cache: dict[int, int] = {}
    best = (0, 0)
    best_set = None
    for J in independent_sets_upto(G, k):
        stats["guesses"] += 1
        G1 = G.remove(G.closed_mask(J))
        wJ = w.total(J)
        if best_set is not None and wJ + w.total(G1.present) <= best[0]:
            stats["pruned"] += 1
            continue
        _, X = maximal_component_embedding(G1, H)
        G2 = G1.remove(G1.closed_mask(X))
        if G2.present not in cache:
            stats["qptas_calls"] += 1
            sub = qptas(G2, w, e / 2, inner, QptasConfig(e / 2, inner, factor=cfg.qptas_factor))
            for key in ("nodes", "matching_calls"):
                stats[key] += sub.stats[key]
            stats["depth"] = max(stats["depth"], sub.stats["depth"])
            cache[G2.present] = sub.mask
        got = cache[G2.present] | J
        cand = (w.total(got), got)
        if best_set is None or cand[0] > best[0]:
            best, best_set = cand, got
    return _result(G, w, best_set or 0, stats, started)


def mwis_hfree_exact(G: Graph, w: WeightFn, H: Graph, config: HfreeConfig | None = None,
                     cap: int = BRUTE_FORCE_CAP) -> SolveResult:
    """Exact MWIS on an H-free graph: degree branching, then a claw-free remainder per guess Z."""
    started = time.perf_counter()
    cfg = HfreeConfig() if config is None else config
    L = _check_pattern(H)
    if cfg.check_free:
        _require_hfree(G, H)
    inner = YgeT(L)
    sub_cfg = SubexpConfig.permissive(inner) if cfg.subexp == "permissive" else SubexpConfig.for_class(inner)
    h = len(H)
    stats = {"nodes": 0, "depth": 0, "degree_branches": 0, "guesses": 0, "subexp_calls": 0,
             "matching_calls": 0, "fallbacks": 0}
    memo: dict[int, tuple[int, int]] = {}

    def solve(mask: int, depth: int) -> tuple[int, int]:
        if not mask:
            return (0, 0)
        if mask in memo:
            return memo[mask]
        stats["nodes"] += 1
        stats["depth"] = max(stats["depth"], depth)
        comps = G.component_masks(mask)
        n = popcount(mask)
        if len(comps) > 1:
            weight, out = 0, 0
            for c in comps:
                cw, cm = solve(c, depth + 1)
                weight, out = weight + cw, out | cm
            res = (weight, out)
        else:
            # |N[v]| > n^(1/9)  <=>  |N[v]|^9 > n
            v = max(iter_bits(mask), key=lambda x: (popcount(G.adj[x] & mask), -x))
            if (popcount(G.adj[v] & mask) + 1) ** 9 > n:
                stats["degree_branches"] += 1
                without = solve(mask & ~(1 << v), depth + 1)
                rest = solve(mask & ~G.closed_mask(1 << v), depth + 1)
                with_v = (rest[0] + w[v], rest[1] | 1 << v)
                res = with_v if _better(with_v, without) else without
            else:
                res = guess(mask)
        memo[mask] = res
        return res

    def guess(mask: int) -> tuple[int, int]:
        GM = G.subgraph(mask)
        _, X = maximal_component_embedding(GM, H)
        NX = GM.closed_mask(X)
        if popcount(NX) ** 9 >= popcount(mask) * h ** 9:
            raise AssertionError("|N[X]| is not below n^(1/9) |V(H)|")
        best = None
        for Z in _independent_subsets(GM, NX):
            stats["guesses"] += 1
            rest = GM.remove(NX | GM.closed_mask(Z))
            stats["subexp_calls"] += 1
            sub = subexp_exact(rest, w, inner, sub_cfg, cap)
            stats["matching_calls"] += sub.stats["matching_calls"]
            stats["fallbacks"] += sub.stats["fallbacks"]
            cand = (sub.weight + w.total(Z), sub.mask | Z)
            if best is None or _better(cand, best):
                best = cand
        return best

    out = solve(G.present, 0)
    return _result(G, w, out[1], stats, started)


# ---------------------------------------------------------------------------
# tree decompositions of long-hole-free graphs

@dataclass(frozen=True)
class TreeDecomposition:
    """A tree on nodes 0..k-1 and a bag (vertex mask) per node."""

    tree: Graph
    bags: dict
    width: int
    bound: int = 0
    stats: dict = field(default_factory=dict, compare=False)

    def bag_sets(self) -> dict[int, frozenset[int]]:
        return {i: from_mask(b) for i, b in self.bags.items()}


def validate_tree_decomposition(G: Graph, td: TreeDecomposition) -> list[str]:
    """Problems with ``td`` as a decomposition of G; empty when valid."""
    problems = []
    T = td.tree
    nodes = set(td.bags)
    if nodes != set(T.vertices()):
        problems.append("bag keys differ from the tree's nodes")
    if T.present and (not T.is_connected() or T.num_edges() != len(T) - 1):
        problems.append("the tree is not a tree")
    covered = 0
    for b in td.bags.values():
        covered |= b
    for v in iter_bits(G.present & ~covered):
        problems.append(f"vertex {v} is in no bag")
    for u, v in G.edges():
        pair = 1 << u | 1 << v
        if not any(b & pair == pair for b in td.bags.values()):
            problems.append(f"edge {u}-{v} is in no bag")
    for v in G.vertices():
        holding = to_mask(i for i, b in td.bags.items() if b >> v & 1)
        if holding and len(T.component_masks(holding)) != 1:
            problems.append(f"bags holding vertex {v} are not connected in the tree")
    width = max((popcount(b) for b in td.bags.values()), default=0) - 1
    if width != td.width:
        problems.append(f"stated width {td.width} differs from {width}")
    return problems


def treedecomp_longhole(G: Graph, t: int, c_t: int | None = None) -> TreeDecomposition:
    """Tree decomposition of a C_{>=t}-free graph with width at most 3(t-1)(Δ+1), t raised to 4.

    A node handles (C, W): W separates C from the rest and |W| <= 2k where
    k = (t-1)(Δ+1) bounds |N[Q]| for the separator paths.  Small pieces become
    leaves.  Otherwise W is padded with vertices of C up to 2k and a path Q is
    chosen so that every component of G[C ∪ W] - N[Q] carries at most k
    vertices of W; weighting C lightly as well keeps the recursion moving when
    N[Q] misses C.  The bag is W ∪ N[Q].  ``c_t`` (default 3t) only feeds the
    reported comparison width <= c_t Δ.
    """
    te = max(t, 4)
    ct = 3 * t if c_t is None else c_t
    delta = G.max_degree() if G.present else 0
    k = (te - 1) * (delta + 1)
    bags: list[int] = []
    edges: list[tuple[int, int]] = []
    separators = 0
    stack = [(G.present, 0, None)]
    while stack:
        C, W, parent = stack.pop()
        node = len(bags)
        U = C | W
        if parent is not None:
            edges.append((parent, node))
        if popcount(U) <= 3 * k + 1:
            bags.append(U)
            continue
        GU = G.subgraph(U)
        comps = GU.component_masks()
        if len(comps) > 1:
            bags.append(W)
            for K in comps:
                if K & C:
                    stack.append((K & C, G.open_mask(K & C) & W, node))
            continue
        for v in iter_bits(C):
            if popcount(W) >= 2 * k:
                break
            W |= 1 << v
            C &= ~(1 << v)
        M = popcount(C)
        weights = [0] * G.n
        for v in iter_bits(W):
            weights[v] = M
        for v in iter_bits(C):
            weights[v] = 1
        alpha = Fraction(1, 2) - Fraction(1, 8 * k)
        Q = long_hole_separator(GU, te, WeightFn(tuple(weights)), alpha)
        separators += 1
        S = GU.closed_mask(path_mask(Q))
        if popcount(S) > k:
            raise AssertionError("separator larger than (t-1)(Δ+1)")
        bag = W | S
        bags.append(bag)
        for E in G.component_masks(C & ~S):
            WE = G.open_mask(E)
            if WE & ~bag:
                raise AssertionError("a piece has neighbours outside the bag")
            if popcount(WE) > 2 * k:
                raise AssertionError("boundary grew beyond 2k")
            if E == C and WE == W:
                raise AssertionError("separator made no progress")
            stack.append((E, WE, node))
    tree = Graph.from_edges(len(bags), edges)
    width = max(popcount(b) for b in bags) - 1 if bags else -1
    td = TreeDecomposition(tree, dict(enumerate(bags)), width, 3 * k,
                           {"separators": separators, "nodes": len(bags), "t_used": te, "max_degree": delta,
                            "c_t": ct, "within_ct_bound": width <= ct * delta})
    if width > 3 * k:
        raise AssertionError(f"width {width} exceeds 3k = {3 * k}")
    return td


__all__ = [
    "BRUTE_FORCE_CAP", "SolveResult", "mwis_bruteforce", "ScaleCertificate", "rescale_weights",
    "QptasConfig", "qptas", "SubexpConfig", "subexp_exact", "HfreeConfig", "maximal_component_embedding",
    "mwis_hfree_approx", "mwis_hfree_exact", "TreeDecomposition", "validate_tree_decomposition",
    "treedecomp_longhole",
]
