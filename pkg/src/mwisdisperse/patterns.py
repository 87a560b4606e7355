"""Induced-structure searches: pattern embeddings, paths, holes, subdivided trees.

All searches are exhaustive backtracking and meant for desk-scale graphs.
They return the lexicographically first witness their search order reaches,
which is deterministic because vertices are always scanned in ascending order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classes import GraphClass
from .graph import Graph, from_mask, iter_bits, popcount, to_mask


class CapExceeded(ValueError):
    """Input is larger than the configured exhaustive-search cap."""


DEFAULT_CAPS = {"pattern": 12, "pt": 64, "hole": 40, "claw": 40, "lobster": 30, "hfree": 64}


# ---------------------------------------------------------------------------
# pattern embedding

def find_induced_copy(G: Graph, pattern: Graph, cap: int = DEFAULT_CAPS["pattern"]) -> dict[int, int] | None:
    """Return an injective map pattern-vertex -> G-vertex realising an induced copy, or None."""
    pverts = pattern.vertices()
    if len(pverts) > cap:
        raise CapExceeded(f"pattern has {len(pverts)} vertices, cap is {cap}")
    if not pverts:
        return {}
    order = _bfs_order(pattern)
    placed: list[tuple[int, int]] = []
    used = 0

    def extend(i: int):
        nonlocal used
        if i == len(order):
            return dict(placed)
        p = order[i]
        pdeg = pattern.degree(p)
        anchor = next((img for q, img in placed if pattern.has_edge(p, q)), None)
        cands = G.adj[anchor] if anchor is not None else G.present
        for x in iter_bits(cands & ~used):
            if G.degree(x) < pdeg:
                continue
            if any(pattern.has_edge(p, q) != G.has_edge(x, img) for q, img in placed):
                continue
            placed.append((p, x))
            used |= 1 << x
            found = extend(i + 1)
            if found is not None:
                return found
            placed.pop()
            used &= ~(1 << x)
        return None

    return extend(0)


def _bfs_order(H: Graph) -> list[int]:
    order = []
    seen = 0
    for comp in H.component_masks():
        start = max(iter_bits(comp), key=lambda v: (H.degree(v), -v))
        queue = [start]
        seen |= 1 << start
        while queue:
            v = queue.pop(0)
            order.append(v)
            for x in iter_bits(H.adj[v] & ~seen):
                seen |= 1 << x
                queue.append(x)
    return order


# ---------------------------------------------------------------------------
# induced paths and holes

def find_induced_path(G: Graph, t: int) -> tuple[int, ...] | None:
    """An induced path on exactly ``t`` vertices, or None."""
    if t <= 0:
        return ()
    for s in iter_bits(G.present):
        found = _extend_path(G, [s], 1 << s, t)
        if found:
            return tuple(found)
    return None


def _extend_path(G: Graph, path: list[int], mask: int, t: int):
    if len(path) == t:
        return path
    last = path[-1]
    for x in iter_bits(G.adj[last] & ~mask):
        if G.adj[x] & mask != 1 << last:
            continue
        path.append(x)
        found = _extend_path(G, path, mask | 1 << x, t)
        if found:
            return found
        path.pop()
    return None


def induced_paths_from(G: Graph, start: int, max_len: int | None = None) -> list[tuple[int, ...]]:
    """All induced paths starting at ``start`` (including the one-vertex path)."""
    out: list[tuple[int, ...]] = []
    path = [start]

    def rec(mask: int):
        out.append(tuple(path))
        if max_len is not None and len(path) >= max_len:
            return
        last = path[-1]
        for x in iter_bits(G.adj[last] & ~mask):
            if G.adj[x] & mask != 1 << last:
                continue
            path.append(x)
            rec(mask | 1 << x)
            path.pop()

    rec(1 << start)
    return out


def find_long_hole(G: Graph, t: int) -> tuple[int, ...] | None:
    """An induced cycle on at least max(t, 4) vertices, in cycle order, or None."""
    need = max(t, 4)
    for s in iter_bits(G.present):
        higher = G.present & ~((1 << (s + 1)) - 1)
        for a in iter_bits(G.adj[s] & higher):
            found = _extend_hole(G, s, [s, a], (1 << s) | (1 << a), higher, need)
            if found:
                return tuple(found)
    return None


def _extend_hole(G, s, path, mask, allowed, need):
    last = path[-1]
    for x in iter_bits(G.adj[last] & allowed & ~mask):
        touch = G.adj[x] & mask
        if touch == 1 << last:
            path.append(x)
            found = _extend_hole(G, s, path, mask | 1 << x, allowed, need)
            if found:
                return found
            path.pop()
        elif touch == (1 << last) | (1 << s) and len(path) >= 2:
            if len(path) + 1 >= need and x > path[1]:
                return path + [x]
    return None


# ---------------------------------------------------------------------------
# subdivided trees

@dataclass(frozen=True)
class TreeShape:
    """A tree skeleton whose edges must become induced paths of some minimum length.

    ``edges`` lists (parent, child, min_edges) in an order where each parent is
    already placed; ``root`` is placed first.
    """

    nodes: int
    root: int
    edges: tuple[tuple[int, int, int], ...]

    def degree(self, node: int) -> int:
        return sum(1 for a, b, _ in self.edges if node in (a, b))

    def is_leaf(self, node: int) -> bool:
        return self.degree(node) == 1


def claw_shape(t: int) -> TreeShape:
    """(>=t)-claw rooted at its center (node 0)."""
    return TreeShape(4, 0, ((0, 1, t), (0, 2, t), (0, 3, t)))


def tip_rooted_claw_shape(t: int) -> TreeShape:
    """(>=t)-claw rooted at tip 1; node 0 is the center."""
    return TreeShape(4, 1, ((1, 0, t), (0, 2, t), (0, 3, t)))


def lobster_shape(t: int) -> TreeShape:
    """(>=t)-lobster: spine a0..a4 = nodes 0..4, pendants b1,b2,b3 = nodes 5,6,7."""
    return TreeShape(8, 2, ((2, 1, t), (1, 0, t), (1, 5, t), (2, 6, t),
                            (2, 3, t), (3, 4, t), (3, 7, t)))


def find_subdivided_tree(G: Graph, shape: TreeShape, root_vertex: int | None = None,
                         within: int | None = None) -> tuple[frozenset[int], dict[int, int]] | None:
    """Find an induced subdivision of ``shape`` in G.

    Returns (vertex set, map skeleton node -> vertex) or None.  Legs to leaf
    nodes are grown to exactly their minimum length; internal legs may be longer.
    """
    allowed = G.present if within is None else G.present & within
    degree = [shape.degree(v) for v in range(shape.nodes)]
    leaf = [d == 1 for d in degree]
    edges = shape.edges

    def place(i: int, tree: int, image: dict[int, int]):
        if i == len(edges):
            return tree, image
        a, b, need = edges[i]
        start = image[a]

        def grow(last: int, length: int, tree: int):
            for x in iter_bits(G.adj[last] & allowed & ~tree):
                if G.adj[x] & tree != 1 << last:
                    continue
                nt = tree | 1 << x
                nl = length + 1
                if nl >= need:
                    if leaf[b]:
                        found = place(i + 1, nt, {**image, b: x})
                        if found:
                            return found
                        continue
                    if popcount(G.adj[x] & allowed) >= degree[b]:
                        found = place(i + 1, nt, {**image, b: x})
                        if found:
                            return found
                found = grow(x, nl, nt)
                if found:
                    return found
            return None

        return grow(start, 0, tree)

    roots = [root_vertex] if root_vertex is not None else list(iter_bits(allowed))
    for r in roots:
        if not allowed >> r & 1:
            continue
        if popcount(G.adj[r] & allowed) < degree[shape.root]:
            continue
        found = place(0, 1 << r, {shape.root: r})
        if found:
            tree, image = found
            return from_mask(tree), image
    return None


def tree_skeleton(G: Graph, vertices) -> tuple[dict[int, int], list[tuple[int, int, int]]] | None:
    """Contract an induced tree to its skeleton.

    Returns (degree of every non-degree-2 vertex, list of (x, y, path length))
    or None when ``vertices`` does not induce a tree.
    """
    mask = to_mask(vertices)
    k = popcount(mask)
    if k == 0:
        return None
    H = G.subgraph(mask)
    if H.num_edges() != k - 1 or not H.is_connected():
        return None
    deg = {v: popcount(G.adj[v] & mask) for v in iter_bits(mask)}
    if k == 1:
        return deg, []
    nodes = {v for v, d in deg.items() if d != 2}
    segs = []
    for x in sorted(nodes):
        for y in iter_bits(G.adj[x] & mask):
            prev, cur, length = x, y, 1
            while cur not in nodes:
                nxt = next(iter_bits(G.adj[cur] & mask & ~(1 << prev)))
                prev, cur, length = cur, nxt, length + 1
            if x < cur:
                segs.append((x, cur, length))
    return {v: deg[v] for v in nodes}, segs


def claw_parts(G: Graph, vertices) -> tuple[int, tuple[int, int, int], tuple[int, int, int]] | None:
    """(center, tips, leg lengths) if ``vertices`` induces a subdivided claw."""
    sk = tree_skeleton(G, vertices)
    if sk is None:
        return None
    deg, segs = sk
    centers = [v for v, d in deg.items() if d == 3]
    tips = sorted(v for v, d in deg.items() if d == 1)
    if len(centers) != 1 or len(tips) != 3 or len(deg) != 4:
        return None
    c = centers[0]
    lengths = {}
    for x, y, length in segs:
        other = y if x == c else x
        lengths[other] = length
    return c, tuple(tips), tuple(lengths[v] for v in tips)


def is_claw_at_least(G: Graph, vertices, t: int, tip: int | None = None) -> bool:
    parts = claw_parts(G, vertices)
    if parts is None:
        return False
    _, tips, lengths = parts
    if tip is not None and tip not in tips:
        return False
    return min(lengths) >= t


def is_lobster_at_least(G: Graph, vertices, t: int) -> bool:
    """True iff ``vertices`` induces a subdivision of the lobster with all paths >= t edges."""
    sk = tree_skeleton(G, vertices)
    if sk is None:
        return False
    deg, segs = sk
    branch = [v for v, d in deg.items() if d == 3]
    leaves = [v for v, d in deg.items() if d == 1]
    if len(branch) != 3 or len(leaves) != 5 or len(deg) != 8:
        return False
    if any(length < t for _, _, length in segs):
        return False
    nbrs = {v: set() for v in deg}
    for x, y, _ in segs:
        nbrs[x].add(y)
        nbrs[y].add(x)
    middle = [b for b in branch if len(nbrs[b] & set(branch)) == 2]
    ends = [b for b in branch if len(nbrs[b] & set(branch)) == 1]
    return len(middle) == 1 and len(ends) == 2


# ---------------------------------------------------------------------------
# freeness

def freeness_check(G: Graph, cls: GraphClass, cap: int | None = None) -> tuple[bool, frozenset[int] | None]:
    """(True, None) if G avoids the class obstruction, else (False, witness vertex set)."""
    limit = DEFAULT_CAPS[cls.kind] if cap is None else cap
    if len(G) > limit:
        raise CapExceeded(f"graph has {len(G)} vertices, cap for {cls.kind} is {limit}")
    if cls.kind == "pt":
        found = find_induced_path(G, cls.t)
        return (found is None, None if found is None else frozenset(found))
    if cls.kind == "hole":
        found = find_long_hole(G, cls.t)
        return (found is None, None if found is None else frozenset(found))
    if cls.kind == "claw":
        found = find_subdivided_tree(G, claw_shape(cls.t))
        return (found is None, None if found is None else found[0])
    if cls.kind == "lobster":
        found = find_subdivided_tree(G, lobster_shape(cls.t))
        return (found is None, None if found is None else found[0])
    pattern, _ = cls.pattern.compact()
    emb = find_induced_copy(G, pattern)
    return (emb is None, None if emb is None else frozenset(emb.values()))


def covering_claw_length(H: Graph) -> int:
    """Leg length L such that every component of H (paths / subdivided claws) embeds in the L-claw.

    Raises ValueError if some component is neither a path nor a subdivided claw.
    """
    L = 1
    for comp in H.component_masks():
        sk = tree_skeleton(H, comp)
        if sk is None:
            raise ValueError("pattern component is not a tree")
        deg, segs = sk
        if max(deg.values(), default=0) > 3 or sum(1 for d in deg.values() if d == 3) > 1:
            raise ValueError("pattern component is neither a path nor a subdivided claw")
        if any(d == 3 for d in deg.values()):
            L = max(L, max(length for _, _, length in segs))
        else:
            L = max(L, popcount(comp) // 2)
    return L
