"""Simple undirected graphs over a fixed vertex id space, plus vertex weights.

Vertices are integers ``0..n-1``.  Adjacency is stored as one bitmask per
vertex, which keeps neighbourhood and component queries cheap for the small
graphs this package targets.  Induced subgraphs keep the ids of their parent
(``present`` marks which ids are alive), so vertex sets computed on a
subgraph can be used on the parent without any relabelling.

Graphs and weight functions are immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

MAX_WEIGHT = (1 << 63) - 1


class GraphFormatError(ValueError):
    """Raised for malformed graph text; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# bitmask helpers

def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int] | int) -> int:
    if isinstance(vertices, int):
        return vertices
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def from_mask(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


# ---------------------------------------------------------------------------

class Graph:
    """Simple undirected graph; see the module docstring for the id model."""

    __slots__ = ("n", "adj", "present", "_hash")

    def __init__(self, n: int, adj: tuple[int, ...], present: int | None = None):
        if len(adj) != n:
            raise ValueError("adjacency length must equal n")
        self.n = n
        self.present = (1 << n) - 1 if present is None else present
        self.adj = adj
        self._hash = None

    # construction -----------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    # basic queries ------------------------------------------------------------

    def vertices(self) -> list[int]:
        return list(iter_bits(self.present))

    def vertex_set(self) -> frozenset[int]:
        return from_mask(self.present)

    def __len__(self) -> int:
        return popcount(self.present)

    def __contains__(self, v: int) -> bool:
        return 0 <= v < self.n and bool(self.present >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def max_degree(self) -> int:
        return max((self.degree(v) for v in iter_bits(self.present)), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in iter_bits(self.present):
            for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1)):
                out.append((u, v))
        return out

    def num_edges(self) -> int:
        return sum(popcount(self.adj[v]) for v in iter_bits(self.present)) // 2

    # derived graphs ------------------------------------------------------------

    def subgraph(self, vertices: Iterable[int] | int) -> "Graph":
        """Induced subgraph on ``vertices`` (ids preserved)."""
        keep = to_mask(vertices) & self.present
        adj = tuple(a & keep if keep >> v & 1 else 0 for v, a in enumerate(self.adj))
        return Graph(self.n, adj, keep)

    def remove(self, vertices: Iterable[int] | int) -> "Graph":
        return self.subgraph(self.present & ~to_mask(vertices))

    def compact(self) -> tuple["Graph", list[int]]:
        """Relabel the present vertices to ``0..k-1``; returns the graph and old ids."""
        old = self.vertices()
        index = {v: i for i, v in enumerate(old)}
        edges = [(index[u], index[v]) for u, v in self.edges()]
        return Graph.from_edges(len(old), edges), old

    # neighbourhoods and components ----------------------------------------------

    def closed_mask(self, mask: int) -> int:
        out = mask & self.present
        for v in iter_bits(out):
            out |= self.adj[v]
        return out

    def open_mask(self, mask: int) -> int:
        mask &= self.present
        return self.closed_mask(mask) & ~mask

    def component_of(self, v: int, within: int | None = None) -> int:
        allowed = self.present if within is None else within & self.present
        seen = 1 << v
        frontier = seen
        while frontier:
            nxt = 0
            for x in iter_bits(frontier):
                nxt |= self.adj[x]
            nxt &= allowed & ~seen
            seen |= nxt
            frontier = nxt
        return seen

    def component_masks(self, within: int | None = None) -> list[int]:
        """Components of the subgraph induced by ``within`` (default: all), by min vertex."""
        left = self.present if within is None else within & self.present
        out = []
        while left:
            comp = self.component_of(lowest(left), left)
            out.append(comp)
            left &= ~comp
        return out

    def components(self) -> list[frozenset[int]]:
        return [from_mask(c) for c in self.component_masks()]

    def is_connected(self) -> bool:
        return len(self.component_masks()) <= 1

    def is_independent_mask(self, mask: int) -> bool:
        for v in iter_bits(mask):
            if self.adj[v] & mask:
                return False
        return True

    # dunder -------------------------------------------------------------------------

    def _key(self):
        return (self.n, self.present, self.adj)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, vertices={len(self)}, edges={self.num_edges()})"


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightFn:
    """Nonnegative 64-bit vertex weights indexed by vertex id."""

    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        for i, x in enumerate(vals):
            if not isinstance(x, int) or isinstance(x, bool):
                raise TypeError(f"weight of vertex {i} is not an integer: {x!r}")
            if x < 0:
                raise ValueError(f"weight of vertex {i} is negative: {x}")
            if x > MAX_WEIGHT:
                raise OverflowError(f"weight of vertex {i} exceeds 64 bits")

    @classmethod
    def uniform(cls, n: int, value: int = 1) -> "WeightFn":
        return cls((value,) * n)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, v: int) -> int:
        return self.values[v]

    def total(self, vertices: Iterable[int] | int) -> int:
        if isinstance(vertices, int):
            s = sum(self.values[v] for v in iter_bits(vertices))
        else:
            s = sum(self.values[v] for v in vertices)
        return checked(s)

    def restricted(self, keep: Iterable[int] | int) -> "WeightFn":
        """Weights zeroed outside ``keep`` (the w_I of an independent set I)."""
        m = to_mask(keep)
        return WeightFn(tuple(x if m >> v & 1 else 0 for v, x in enumerate(self.values)))

    def positive_mask(self) -> int:
        return to_mask(v for v, x in enumerate(self.values) if x > 0)


def checked(value: int) -> int:
    """Overflow guard for 64-bit signed arithmetic."""
    if value > MAX_WEIGHT or value < -MAX_WEIGHT - 1:
        raise OverflowError(f"value {value} does not fit in 64 bits")
    return value


# ---------------------------------------------------------------------------
# module level API

def closed_neighborhood(G: Graph, S: Iterable[int]) -> frozenset[int]:
    return from_mask(G.closed_mask(to_mask(S)))


def open_neighborhood(G: Graph, S: Iterable[int]) -> frozenset[int]:
    return from_mask(G.open_mask(to_mask(S)))


def connected_components(G: Graph) -> list[frozenset[int]]:
    return G.components()


def is_independent(G: Graph, S: Iterable[int]) -> bool:
    return G.is_independent_mask(to_mask(S))


def load_graph(text: str) -> tuple[Graph, WeightFn]:
    """Parse the ``p``/``e``/``n``/``c`` line format.

    Weights default to 1 for vertices without an ``n`` line.
    """
    n = None
    declared_m = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    weights: dict[int, int] = {}

    def ints(parts, count, lineno):
        if len(parts) != count:
            raise GraphFormatError(f"expected {count} fields, got {len(parts)}", lineno)
        try:
            return [int(x) for x in parts]
        except ValueError:
            raise GraphFormatError("non-integer field", lineno) from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tag, *rest = line.split()
        if tag == "p":
            if n is not None:
                raise GraphFormatError("duplicate header", lineno)
            n, declared_m = ints(rest, 2, lineno)
            if n < 0 or declared_m < 0:
                raise GraphFormatError("negative header value", lineno)
            continue
        if n is None:
            raise GraphFormatError("data before 'p' header", lineno)
        if tag == "e":
            u, v = ints(rest, 2, lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"vertex out of range in edge {u} {v}", lineno)
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}", lineno)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {u} {v}", lineno)
            seen.add(key)
            edges.append(key)
        elif tag == "n":
            v, w = ints(rest, 2, lineno)
            if not 0 <= v < n:
                raise GraphFormatError(f"vertex out of range in weight line {v}", lineno)
            if w < 0:
                raise GraphFormatError(f"negative weight {w}", lineno)
            if w > MAX_WEIGHT:
                raise GraphFormatError(f"weight {w} exceeds 64 bits", lineno)
            if v in weights:
                raise GraphFormatError(f"duplicate weight for vertex {v}", lineno)
            weights[v] = w
        else:
            raise GraphFormatError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise GraphFormatError("missing 'p' header")
    if declared_m != len(edges):
        raise GraphFormatError(f"header declares {declared_m} edges, found {len(edges)}")
    G = Graph.from_edges(n, edges)
    w = WeightFn(tuple(weights.get(v, 1) for v in range(n)))
    return G, w


def dump_graph(G: Graph, w: WeightFn | None = None, comment: str | None = None) -> str:
    """Inverse of :func:`load_graph` for canonical graphs."""
    lines = []
    if comment:
        lines.extend(f"c {c}" for c in comment.splitlines())
    edges = G.edges()
    lines.append(f"p {G.n} {len(edges)}")
    lines.extend(f"e {u} {v}" for u, v in edges)
    if w is not None:
        lines.extend(f"n {v} {w[v]}" for v in range(G.n))
    return "\n".join(lines) + "\n"
