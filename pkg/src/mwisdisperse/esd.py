"""Extended strip decompositions (ESDs), their atoms, and conflicts between atoms.

An ESD of G is a pattern graph H together with vertex sets of G attached to
every H-vertex, H-edge, edge end and H-triangle.  The vertex, edge and triangle
sets partition V(G); edge-end sets are subsets of their edge's set.  Every
G-edge must either stay inside one part or be one of the permitted kinds of
crossing edge, see :func:`validate_esd`.

All sets are stored as bitmasks over G's vertex ids.  Empty sets are allowed
and kept as they are.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable

from .graph import Graph, from_mask, iter_bits, popcount, to_mask
from .patterns import CapExceeded, induced_paths_from

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


def _edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


class Esd:
    """Pattern graph ``pattern`` plus the η map, stored as bitmasks.

    ``ends[(e, x)]`` is the set attached to the end of edge ``e`` at H-vertex ``x``.
    Missing edge, end and triangle keys mean the empty set.
    """

    __slots__ = ("pattern", "vertex_masks", "edge_masks", "end_masks", "triangle_masks", "_triangles")

    def __init__(self, pattern: Graph, vertex_masks, edge_masks=None, end_masks=None, triangle_masks=None):
        self.pattern = pattern
        self.vertex_masks = tuple(vertex_masks)
        if len(self.vertex_masks) != pattern.n:
            raise ValueError("one vertex set per pattern vertex required")
        self.edge_masks = {e: m for e, m in (edge_masks or {}).items()}
        self.end_masks = {k: m for k, m in (end_masks or {}).items()}
        self.triangle_masks = {T: m for T, m in (triangle_masks or {}).items()}
        edges = set(pattern.edges())
        for e in self.edge_masks:
            if e not in edges:
                raise ValueError(f"η given for non-edge {e} of the pattern")
        for (e, x) in self.end_masks:
            if e not in edges or x not in e:
                raise ValueError(f"η given for invalid edge end {(e, x)}")
        self._triangles = None
        for T in self.triangle_masks:
            if T not in self.triangles():
                raise ValueError(f"η given for non-triangle {T} of the pattern")

    # construction ---------------------------------------------------------------

    @classmethod
    def build(cls, pattern: Graph, vertices: dict[int, Iterable[int]] | None = None,
              edges: dict[Edge, tuple[Iterable[int], Iterable[int], Iterable[int]]] | None = None,
              triangles: dict[Triangle, Iterable[int]] | None = None) -> "Esd":
        """Convenience constructor from plain sets.

        ``edges[(a, b)] = (all, end at a, end at b)`` with a < b.
        """
        vm = [0] * pattern.n
        for x, S in (vertices or {}).items():
            vm[x] = to_mask(S)
        em, endm = {}, {}
        for (a, b), (S, Sa, Sb) in (edges or {}).items():
            e = _edge(a, b)
            if e != (a, b):
                Sa, Sb = Sb, Sa
            em[e] = to_mask(S)
            endm[(e, e[0])] = to_mask(Sa)
            endm[(e, e[1])] = to_mask(Sb)
        tm = {tuple(sorted(T)): to_mask(S) for T, S in (triangles or {}).items()}
        return cls(pattern, vm, em, endm, tm)

    # accessors ------------------------------------------------------------------------

    def edges(self) -> list[Edge]:
        return self.pattern.edges()

    def triangles(self) -> list[Triangle]:
        if self._triangles is None:
            H = self.pattern
            out = []
            for a, b in H.edges():
                for c in iter_bits(H.adj[a] & H.adj[b]):
                    if c > b:
                        out.append((a, b, c))
            self._triangles = out
        return self._triangles

    def triangles_of(self, e: Edge) -> list[Triangle]:
        return [T for T in self.triangles() if e[0] in T and e[1] in T]

    def vertex(self, x: int) -> int:
        return self.vertex_masks[x]

    def edge(self, e: Edge) -> int:
        return self.edge_masks.get(e, 0)

    def end(self, e: Edge, x: int) -> int:
        return self.end_masks.get((e, x), 0)

    def triangle(self, T: Triangle) -> int:
        return self.triangle_masks.get(T, 0)

    def incident(self, x: int) -> list[Edge]:
        return [_edge(x, y) for y in iter_bits(self.pattern.adj[x])]

    def parts(self) -> list[tuple[tuple, int]]:
        """All partition classes as (label, mask): vertices, then edges, then triangles."""
        out = [(("vertex", x), m) for x, m in enumerate(self.vertex_masks)]
        out += [(("edge", e), self.edge(e)) for e in self.edges()]
        out += [(("triangle", T), self.triangle(T)) for T in self.triangles()]
        return out

    def covered(self) -> int:
        m = 0
        for _, s in self.parts():
            m |= s
        return m

    def is_trivial(self) -> bool:
        return self.pattern.num_edges() == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Esd):
            return False
        strip = lambda d: {k: v for k, v in d.items() if v}
        return (self.pattern == other.pattern and self.vertex_masks == other.vertex_masks
                and strip(self.edge_masks) == strip(other.edge_masks)
                and strip(self.end_masks) == strip(other.end_masks)
                and strip(self.triangle_masks) == strip(other.triangle_masks))

    def __hash__(self):
        return hash((self.pattern, self.vertex_masks))

    def __repr__(self) -> str:
        return f"Esd(pattern={self.pattern!r})"

    # derived decompositions --------------------------------------------------------------

    def with_isolated(self, masks: Iterable[int]) -> "Esd":
        """Append one isolated pattern vertex per given set."""
        masks = list(masks)
        H = self.pattern
        k = len(masks)
        adj = H.adj + (0,) * k
        P = Graph(H.n + k, adj, H.present | (((1 << k) - 1) << H.n))
        return Esd(P, self.vertex_masks + tuple(masks), self.edge_masks, self.end_masks, self.triangle_masks)

    def minus(self, removed: int) -> "Esd":
        keep = ~removed
        return Esd(self.pattern,
                   [m & keep for m in self.vertex_masks],
                   {e: m & keep for e, m in self.edge_masks.items()},
                   {k: m & keep for k, m in self.end_masks.items()},
                   {T: m & keep for T, m in self.triangle_masks.items()})


# ---------------------------------------------------------------------------

def trivial_esd(G: Graph, within: int | None = None) -> Esd:
    """Edgeless pattern with one vertex per component (ordered by minimum vertex)."""
    comps = G.component_masks(within)
    return Esd(Graph.empty(len(comps)), comps)


@dataclass(frozen=True)
class DisperserEntry:
    """A cut X (bitmask) together with an ESD of G - X."""

    X: int
    esd: Esd

    @property
    def X_set(self) -> frozenset[int]:
        return from_mask(self.X)

    def rest(self, G: Graph) -> Graph:
        return G.remove(self.X)

    def is_valid(self, G: Graph) -> bool:
        return validate_esd(G.remove(self.X), self.esd).ok


def trivial_entry(G: Graph, X: int) -> DisperserEntry:
    """X with the component partition of G - X."""
    return DisperserEntry(X & G.present, trivial_esd(G, G.present & ~X))


@dataclass
class EsdReport:
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_esd(G: Graph, d: Esd) -> EsdReport:
    """Check the three defining conditions; every violation is listed."""
    bad: list[str] = []
    V = G.present
    owner: dict[int, tuple] = {}
    for label, m in d.parts():
        if m & ~V:
            bad.append(f"{label} contains non-vertices {sorted(iter_bits(m & ~V))}")
        for v in iter_bits(m & V):
            if v in owner:
                bad.append(f"vertex {v} lies in both {owner[v]} and {label}")
            else:
                owner[v] = label
    missing = V & ~to_mask(owner)
    if missing:
        bad.append(f"vertices {sorted(iter_bits(missing))} are not covered")
    for e in d.edges():
        for x in e:
            extra = d.end(e, x) & ~d.edge(e)
            if extra:
                bad.append(f"end set of {e} at {x} is not inside η{e}: {sorted(iter_bits(extra))}")
    # full adjacency between end sets meeting at a pattern vertex
    for x in iter_bits(d.pattern.present):
        inc = d.incident(x)
        for e, f in itertools.combinations(inc, 2):
            A, B = d.end(e, x), d.end(f, x)
            for a in iter_bits(A):
                missing_nbrs = B & ~G.adj[a] & ~(1 << a)
                if missing_nbrs:
                    bad.append(f"ends of {e} and {f} at {x} not fully adjacent: "
                               f"{a} misses {sorted(iter_bits(missing_nbrs))}")
    # edge types
    for u, v in G.edges():
        if owner.get(u) == owner.get(v) and u in owner:
            continue
        if not _permitted(d, u, v, owner):
            bad.append(f"edge {u}-{v} between {owner.get(u)} and {owner.get(v)} is not permitted")
    return EsdReport(bad)


def _permitted(d: Esd, u: int, v: int, owner) -> bool:
    for a, b in ((u, v), (v, u)):
        la, lb = owner.get(a), owner.get(b)
        if la is None or lb is None:
            return False
        ba, bb = 1 << a, 1 << b
        if la[0] == "edge" and lb[0] == "edge":
            e, f = la[1], lb[1]
            for x in set(e) & set(f):
                if d.end(e, x) & ba and d.end(f, x) & bb:
                    return True
        if la[0] == "vertex" and lb[0] == "edge":
            x, e = la[1], lb[1]
            if x in e and d.end(e, x) & bb:
                return True
        if la[0] == "triangle" and lb[0] == "edge":
            T, e = la[1], lb[1]
            if e[0] in T and e[1] in T and d.end(e, e[0]) & d.end(e, e[1]) & bb:
                return True
    return False


def restrict_esd(d: Esd, removed: Iterable[int] | int, G: Graph | None = None) -> Esd:
    """Remove ``removed`` from every η-set.  If G is given the result is validated on G - removed."""
    rm = to_mask(removed)
    out = d.minus(rm)
    if G is not None:
        rep = validate_esd(G.remove(rm), out)
        if not rep.ok:
            raise ValueError("restricted decomposition is invalid: " + "; ".join(rep.violations))
    return out


def peripheral_vertices(G: Graph, d: Esd) -> frozenset[int]:
    out = 0
    H = d.pattern
    for w in iter_bits(H.present):
        if H.degree(w) != 1:
            continue
        e = d.incident(w)[0]
        s = d.end(e, w)
        if popcount(s) == 1:
            out |= s
    return from_mask(out)


# ---------------------------------------------------------------------------
# atoms

KIND_ORDER = {"edge_bot": 0, "edge_end": 1, "edge_full": 2, "vertex": 3, "triangle": 4}


@dataclass(frozen=True)
class Atom:
    """An atom: ``kind`` in edge_bot / edge_end / edge_full / vertex / triangle.

    ``key`` is the edge, (edge, end vertex), pattern vertex or triangle.
    """

    kind: str
    key: tuple | int
    mask: int
    trivial: bool = False

    @property
    def vertices(self) -> frozenset[int]:
        return from_mask(self.mask)

    @property
    def ident(self) -> tuple:
        return (KIND_ORDER[self.kind], self.key)

    def __repr__(self) -> str:
        return f"Atom({self.kind}, {self.key}, {sorted(self.vertices)})"


def atoms(G: Graph, d: Esd) -> list[Atom]:
    """All atoms of ``d``; per edge (bot, end a, end b, full), then vertices, then triangles."""
    out: list[Atom] = []
    H = d.pattern
    for e in d.edges():
        a, b = e
        full_e, ea, eb = d.edge(e), d.end(e, a), d.end(e, b)
        out.append(Atom("edge_bot", e, full_e & ~(ea | eb)))
        out.append(Atom("edge_end", (e, a), d.vertex(a) | (full_e & ~eb)))
        out.append(Atom("edge_end", (e, b), d.vertex(b) | (full_e & ~ea)))
        m = d.vertex(a) | d.vertex(b) | full_e
        for T in d.triangles_of(e):
            m |= d.triangle(T)
        out.append(Atom("edge_full", e, m))
    for x in iter_bits(H.present):
        m = d.vertex(x)
        trivial = H.degree(x) == 0 and popcount(m) == 1 and not (G.adj[lowest_bit(m)] & G.present)
        out.append(Atom("vertex", x, m, trivial))
    for T in d.triangles():
        out.append(Atom("triangle", T, d.triangle(T)))
    return out


def lowest_bit(m: int) -> int:
    return (m & -m).bit_length() - 1


def conflicts(a1: Atom, a2: Atom, d: Esd) -> bool:
    """True iff one of the four listed conflict cases applies (symmetric)."""
    if a1.ident == a2.ident:
        return False
    return _conflict(a1, a2) or _conflict(a2, a1)


def _edge_of(a: Atom) -> Edge | None:
    if a.kind in ("edge_bot", "edge_full"):
        return a.key
    if a.kind == "edge_end":
        return a.key[0]
    return None


def _conflict(a: Atom, b: Atom) -> bool:
    ea, eb = _edge_of(a), _edge_of(b)
    # (i) the four atoms of one edge pairwise conflict
    if ea is not None and ea == eb:
        return True
    # (ii) end / full atoms against the vertex atom of their endpoint(s)
    if b.kind == "vertex":
        if a.kind == "edge_full" and b.key in a.key:
            return True
        if a.kind == "edge_end" and a.key[1] == b.key:
            return True
    # (iii) at a shared endpoint x, atoms of two edges that both "use" the x end
    ua, ub = _ends_used(a), _ends_used(b)
    if ea is not None and eb is not None and ea != eb and ua & ub:
        return True
    # (iv) full edge atom against triangles containing the edge
    if a.kind == "edge_full" and b.kind == "triangle":
        if a.key[0] in b.key and a.key[1] in b.key:
            return True
    return False


def _ends_used(a: Atom) -> set[int]:
    if a.kind == "edge_full":
        return set(a.key)
    if a.kind == "edge_end":
        return {a.key[1]}
    return set()


@dataclass(frozen=True)
class AtomFamily:
    atoms: tuple[Atom, ...]
    independent: bool = False

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def idents(self) -> list[tuple]:
        return sorted(a.ident for a in self.atoms)

    def mask(self) -> int:
        m = 0
        for a in self.atoms:
            m |= a.mask
        return m


def family_is_independent(atoms_: Iterable[Atom], d: Esd) -> bool:
    lst = list(atoms_)
    return not any(conflicts(x, y, d) for x, y in itertools.combinations(lst, 2))


def atom_family_of_independent_set(G: Graph, d: Esd, I: Iterable[int] | int) -> AtomFamily:
    """The family 𝒜_I: independent, and its union covers I (both asserted)."""
    Im = to_mask(I)
    if not G.is_independent_mask(Im):
        raise ValueError("I is not independent")
    by_ident = {a.ident: a for a in atoms(G, d)}
    chosen = []
    meets = lambda m: bool(m & Im)
    for e in d.edges():
        a, b = e
        ma, mb = meets(d.end(e, a)), meets(d.end(e, b))
        if ma and mb:
            chosen.append(by_ident[(KIND_ORDER["edge_full"], e)])
        elif ma:
            chosen.append(by_ident[(KIND_ORDER["edge_end"], (e, a))])
        elif mb:
            chosen.append(by_ident[(KIND_ORDER["edge_end"], (e, b))])
        else:
            chosen.append(by_ident[(KIND_ORDER["edge_bot"], e)])
    for x in iter_bits(d.pattern.present):
        if not any(meets(d.end(e, x)) for e in d.incident(x)):
            chosen.append(by_ident[(KIND_ORDER["vertex"], x)])
    for T in d.triangles():
        if all(not meets(d.end(e, e[0])) or not meets(d.end(e, e[1]))
               for e in (_edge(T[0], T[1]), _edge(T[0], T[2]), _edge(T[1], T[2]))):
            chosen.append(by_ident[(KIND_ORDER["triangle"], T)])
    fam = AtomFamily(tuple(chosen), independent=True)
    assert family_is_independent(chosen, d), "𝒜_I is not independent"
    assert Im & ~fam.mask() & G.present == 0, "𝒜_I does not cover I"
    return fam


# ---------------------------------------------------------------------------
# shattering

def shatters(G: Graph, d: Esd, Z: Iterable[int], cap: int = 14) -> bool:
    """No atom meets-or-touches all three of any disjoint, non-adjacent induced paths from Z.

    A path is touched by atom A when N[A] meets it.  Since prefixes of a
    witness triple are again a witness triple, it suffices to consider, per
    atom, paths whose last vertex is their first vertex in N[A].
    """
    Z = sorted(set(Z))
    if len(Z) != 3:
        raise ValueError("Z must have exactly three vertices")
    if len(G) > cap:
        raise CapExceeded(f"graph has {len(G)} vertices, shatters cap is {cap}")
    paths = {z: [(to_mask(p), G.closed_mask(to_mask(p)), p[-1]) for p in induced_paths_from(G, z)] for z in Z}
    for atom in atoms(G, d):
        if not atom.mask:
            continue
        touch = G.closed_mask(atom.mask)
        cands = []
        for z in Z:
            lst = []
            for pm, pn, last in paths[z]:
                if pm & touch and popcount(pm & touch) == 1 and (touch >> last & 1):
                    lst.append((pm, pn))
            if not lst:
                break
            cands.append(lst)
        else:
            if _disjoint_triple(cands):
                return False
    return True


def _disjoint_triple(cands) -> bool:
    A, B, C = cands
    for pa, na in A:
        for pb, nb in B:
            if pb & na:
                continue
            for pc, nc in C:
                if not (pc & na) and not (pc & nb):
                    return True
    return False


def witness_triple(G: Graph, d: Esd, Z: Iterable[int]) -> tuple | None:
    """The first (atom, paths) that violate shattering, for reporting; None if Z is shattered."""
    Z = sorted(set(Z))
    paths = {z: induced_paths_from(G, z) for z in Z}
    for atom in atoms(G, d):
        touch = G.closed_mask(atom.mask)
        lists = [[p for p in paths[z] if to_mask(p) & touch] for z in Z]
        for p1, p2, p3 in itertools.product(*lists):
            m1, m2, m3 = to_mask(p1), to_mask(p2), to_mask(p3)
            n1, n2 = G.closed_mask(m1), G.closed_mask(m2)
            if not (m2 & n1) and not (m3 & n1) and not (m3 & n2):
                return atom, (p1, p2, p3)
    return None


# ---------------------------------------------------------------------------
# interchange format

def esd_to_dict(d: Esd) -> dict:
    lst = lambda m: sorted(iter_bits(m))
    return {
        "pattern": {"n": d.pattern.n, "edges": [list(e) for e in d.edges()]},
        "eta": {
            "vertices": [lst(m) for m in d.vertex_masks],
            "edges": [{"edge": list(e), "all": lst(d.edge(e)), "end_u": lst(d.end(e, e[0])),
                       "end_v": lst(d.end(e, e[1]))} for e in d.edges()],
            "triangles": [{"triangle": list(T), "all": lst(d.triangle(T))} for T in d.triangles()],
        },
    }


def esd_from_dict(obj: dict) -> Esd:
    try:
        pat = obj["pattern"]
        H = Graph.from_edges(int(pat["n"]), [tuple(e) for e in pat["edges"]])
        eta = obj["eta"]
        verts = {x: S for x, S in enumerate(eta.get("vertices", []))}
        if len(verts) != H.n:
            raise ValueError("eta.vertices must list one set per pattern vertex")
        edges = {}
        for item in eta.get("edges", []):
            a, b = item["edge"]
            edges[(a, b)] = (item.get("all", []), item.get("end_u", []), item.get("end_v", []))
        tris = {tuple(item["triangle"]): item.get("all", []) for item in eta.get("triangles", [])}
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed decomposition: {exc}") from None
    return Esd.build(H, verts, edges, tris)


def dump_esd(d: Esd) -> str:
    return json.dumps(esd_to_dict(d), indent=1, sort_keys=True) + "\n"


def load_esd(text: str) -> Esd:
    return esd_from_dict(json.loads(text))
