"""Gyárfás paths and the long-hole separator.

A Gyárfás path from ``u`` grows an induced path v_0 = u, v_1, ... that keeps
chasing the heavy component of G - N[v_0..v_i].  Which component is heavy
depends on the weights, but it is always the one containing some fixed vertex
z, so running the construction once per z (and keeping every prefix) yields a
weight-independent family of at most n^2 paths that contains a good path for
every weight function.

For the empty path the level graph G_0 is G - u, see ``level_graph``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .graph import Graph, WeightFn, iter_bits, lowest
from .patterns import find_long_hole

Path = tuple[int, ...]


class ClassViolation(ValueError):
    """The input is outside the promised class; ``witness`` is the obstruction found."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def _require_connected(G: Graph, u: int | None = None) -> None:
    if not G.present:
        raise ValueError("graph is empty")
    if not G.is_connected():
        raise ValueError("graph must be connected")
    if u is not None and u not in G:
        raise ValueError(f"vertex {u} is not in the graph")


def gyarfas_family(G: Graph, u: int) -> list[Path]:
    """Deduplicated family of Gyárfás paths from ``u``, the empty path first."""
    _require_connected(G, u)
    return list(_family(G, u))


@lru_cache(maxsize=4096)
def _family(G: Graph, u: int) -> tuple[Path, ...]:
    out: dict[Path, None] = {(): None}
    if G.present & ~(1 << u):
        # (u) is the k = 0 member for any z != u; a lone vertex has no such z
        out[(u,)] = None
    for z in iter_bits(G.present & ~(1 << u)):
        path = [u]
        removed = G.closed_mask(1 << u) & ~(1 << u)  # N(v_0); v_0 itself is removed too
        removed |= 1 << u
        # D_0 is the component of G - u holding z
        D = G.component_of(z, G.present & ~(1 << u))
        while True:
            rest = G.present & ~removed
            if not rest >> z & 1:
                break
            D_next = G.component_of(z, rest)
            last = path[-1]
            cands = G.adj[last] & D
            nxt = None
            for c in iter_bits(cands):
                if G.adj[c] & D_next:
                    nxt = c
                    break
            if nxt is None:
                # z is cut off from the path's frontier; cannot happen on a connected G
                raise AssertionError("Gyárfás construction stalled")
            path.append(nxt)
            out.setdefault(tuple(path), None)
            removed |= G.closed_mask(1 << nxt)
            D = D_next
    return tuple(out)


def level_graph_mask(G: Graph, path: Path, u: int, i: int) -> int:
    """Vertex mask of G_i: G - u for i = 0 (also for the empty path), else G - N[v_0..v_{i-1}]."""
    if i == 0:
        return G.present & ~(1 << u)
    m = 0
    for v in path[:i]:
        m |= 1 << v
    return G.present & ~G.closed_mask(m)


def _frac(alpha) -> Fraction:
    a = Fraction(alpha)
    if not 0 < a < Fraction(1, 2):
        raise ValueError(f"α must lie in (0, 1/2), got {alpha}")
    return a


def heavy(weight: int, total: int, alpha: Fraction) -> bool:
    """w > (1 - α) w(G), exactly."""
    return weight * alpha.denominator > (alpha.denominator - alpha.numerator) * total


@dataclass(frozen=True)
class SeparatorCertificate:
    """A path with the heaviest component weight of every level graph G_0..G_{k+1}."""

    path: Path
    start: int
    alpha: Fraction
    total: int
    level_max: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.path) - 1


def check_gyarfas(G: Graph, w: WeightFn, u: int, alpha, path: Path) -> SeparatorCertificate | None:
    """Recompute (P1)-(P3) for ``path``; a certificate if they hold, else None."""
    alpha = _frac(alpha)
    total = w.total(G.present)
    if path and path[0] != u:
        return None
    k = len(path) - 1
    level_max = []
    for i in range(k + 2):
        mask = level_graph_mask(G, path, u, i)
        comps = G.component_masks(mask)
        level_max.append(max((w.total(c) for c in comps), default=0))
        if i <= k:
            # (P3): a heavy component of G_i containing a neighbour of v_i
            if not any(heavy(w.total(c), total, alpha) and G.adj[path[i]] & c for c in comps):
                return None
        elif any(heavy(w.total(c), total, alpha) for c in comps):
            return None
    return SeparatorCertificate(tuple(path), u, alpha, total, tuple(level_max))


def gyarfas_select(G: Graph, u: int, w: WeightFn, alpha) -> SeparatorCertificate:
    for path in gyarfas_family(G, u):
        cert = check_gyarfas(G, w, u, alpha, path)
        if cert is not None:
            return cert
    raise AssertionError("no Gyárfás path satisfies (P1)-(P3)")


def gyarfas_path(G: Graph, u: int, w: WeightFn, alpha) -> Path:
    """The Gyárfás path for one weight function, built directly (no family)."""
    _require_connected(G, u)
    alpha = _frac(alpha)
    total = w.total(G.present)

    def heavy_comp(mask: int) -> int:
        return next((c for c in G.component_masks(mask) if heavy(w.total(c), total, alpha)), 0)

    D = heavy_comp(G.present & ~(1 << u))
    if not D:
        return ()
    path = [u]
    removed = G.closed_mask(1 << u)
    while True:
        D_next = heavy_comp(G.present & ~removed)
        if not D_next:
            return tuple(path)
        nxt = next((c for c in iter_bits(G.adj[path[-1]] & D) if G.adj[c] & D_next), None)
        if nxt is None:
            raise AssertionError("Gyárfás construction stalled")
        path.append(nxt)
        removed |= G.closed_mask(1 << nxt)
        D = D_next


def long_hole_family(G: Graph, t: int, u: int | None = None) -> list[Path]:
    """Paths on fewer than max(t, 4) vertices; an empty Gyárfás path becomes (u)."""
    _require_connected(G, u)
    t = max(t, 4)
    u = lowest(G.present) if u is None else u
    out: dict[Path, None] = {}
    for R in _family(G, u):
        if not R:
            out.setdefault((u,), None)
        elif len(R) < t:
            out.setdefault(R, None)
        else:
            k = len(R) - 1
            out.setdefault(R[k - t + 1:k], None)
            out.setdefault(R[k - t + 2:], None)
    return list(out)


def balanced(G: Graph, w: WeightFn, X: int, alpha=Fraction(1, 4)) -> bool:
    """Every component of G - X weighs at most (1 - α) w(G)."""
    a = Fraction(alpha)
    total = w.total(G.present)
    return not any(heavy(w.total(c), total, a) for c in G.component_masks(G.present & ~X))


def path_mask(path: Path) -> int:
    m = 0
    for v in path:
        m |= 1 << v
    return m


def long_hole_separator(G: Graph, t: int, w: WeightFn, alpha=Fraction(1, 4), u: int | None = None) -> Path:
    """Like :func:`long_hole_select` but from the single weighted Gyárfás path; linear in the path length."""
    _require_connected(G, u)
    te = max(t, 4)
    u = lowest(G.present) if u is None else u
    R = gyarfas_path(G, u, w, alpha)
    if not R:
        cands = [(u,)]
    elif len(R) < te:
        cands = [R]
    else:
        k = len(R) - 1
        cands = [R[k - te + 1:k], R[k - te + 2:]]
    for Q in cands:
        if balanced(G, w, G.closed_mask(path_mask(Q)), alpha):
            return Q
    return long_hole_select(G, t, w, alpha, u)


def long_hole_select(G: Graph, t: int, w: WeightFn, alpha=Fraction(1, 4), u: int | None = None) -> Path:
    """First family path Q with every component of G - N[Q] of weight <= (1 - α) w(G).

    Any α < 1/2 works on C_{>=t}-free graphs; the default gives the 3/4 bound.
    """
    for Q in long_hole_family(G, t, u):
        if balanced(G, w, G.closed_mask(path_mask(Q)), alpha):
            return Q
    hole = find_long_hole(G, max(t, 4))
    if hole is not None:
        raise ClassViolation(f"no balanced path; class violation suspected (hole of length {len(hole)})", hole)
    raise AssertionError("no balanced path on a long-hole-free graph")
