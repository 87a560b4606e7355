"""Combine per-atom independent sets into one independent set via a matching.

Given an ESD (H, η) and an independent set I(A) inside every atom A, build
H' (H plus a private vertex x_e per edge e, adjacent to both ends of e) with
edge weights w'.  A matching M of H' picks one atom per "slot": the edge e
picks the full atom of e, the edge x_e u the end atom at u, and unmatched
pieces fall back to bottom, vertex and triangle atoms.  The sum of w(I(A))
over the picked family equals a + w'(M), so a maximum-weight matching gives
the best independent family of atoms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .esd import KIND_ORDER, Atom, AtomFamily, Esd, atoms, conflicts, family_is_independent
from .graph import Graph, WeightFn, checked, iter_bits
from .matching import EdgeWeightedGraph, Matching, is_matching, max_weight_matching

BOT, END, FULL, VERTEX, TRIANGLE = (KIND_ORDER[k] for k in ("edge_bot", "edge_end", "edge_full", "vertex", "triangle"))


class AssemblyError(ValueError):
    pass


@dataclass
class AssemblyInput:
    """``per_atom`` maps ``Atom.ident`` to an independent set (bitmask) inside that atom."""

    G: Graph
    w: WeightFn
    d: Esd
    per_atom: dict[tuple, int]
    atom_list: list[Atom] = field(default=None)

    def __post_init__(self):
        if self.atom_list is None:
            self.atom_list = atoms(self.G, self.d)
        self.by_ident = {a.ident: a for a in self.atom_list}

    def chosen(self, ident: tuple) -> int:
        a = self.by_ident[ident]
        if ident in self.per_atom:
            return self.per_atom[ident]
        if a.mask:
            raise AssemblyError(f"no independent set given for nonempty atom {a}")
        return 0

    def value(self, ident: tuple) -> int:
        return self.w.total(self.chosen(ident))

    def check(self) -> None:
        for a in self.atom_list:
            s = self.chosen(a.ident)
            if s & ~a.mask:
                raise AssemblyError(f"set for {a} leaves the atom")
            if not self.G.is_independent_mask(s):
                raise AssemblyError(f"set for {a} is not independent")


@dataclass
class AuxGraph:
    """H' with weights w'; vertex ``h + i`` is x_e for the i-th edge of H."""

    graph: EdgeWeightedGraph
    offset: int
    slot: dict  # H'-edge -> atom ident it selects
    x_index: dict  # H-edge -> id of x_e


@dataclass
class AssemblyOutput:
    aux: AuxGraph
    offset_a: int
    matching: Matching
    family: AtomFamily
    result: int  # bitmask

    @property
    def result_set(self) -> frozenset[int]:
        return frozenset(iter_bits(self.result))


def build_auxiliary(inp: AssemblyInput) -> tuple[AuxGraph, int]:
    d = inp.d
    h = d.pattern.n
    val = inp.value
    weights, slot, x_index = {}, {}, {}
    a = sum(val((VERTEX, x)) for x in iter_bits(d.pattern.present))
    for i, e in enumerate(d.edges()):
        u, v = e
        x = h + i
        x_index[e] = x
        bot = val((BOT, e))
        a += bot
        weights[(u, x)] = val((END, (e, u))) - val((VERTEX, u)) - bot
        weights[(v, x)] = val((END, (e, v))) - val((VERTEX, v)) - bot
        full = val((FULL, e)) - val((VERTEX, u)) - val((VERTEX, v)) - bot
        for T in d.triangles_of(e):
            full -= val((TRIANGLE, T))
        weights[e] = checked(full)
        slot[(u, x)] = (END, (e, u))
        slot[(v, x)] = (END, (e, v))
        slot[e] = (FULL, e)
    for T in d.triangles():
        a += val((TRIANGLE, T))
    aux = AuxGraph(EdgeWeightedGraph(h + len(x_index), weights), checked(a), slot, x_index)
    return aux, aux.offset


def atoms_to_matching(family, inp: AssemblyInput, aux: AuxGraph | None = None, checks: bool = True) -> Matching:
    """M(𝒜): e for full atoms, x_e u for end atoms at u."""
    fam = list(family)
    if checks and not family_is_independent(fam, inp.d):
        raise AssemblyError("atom family is not independent")
    if aux is None:
        aux, _ = build_auxiliary(inp)
    edges = []
    for atom in fam:
        if atom.kind == "edge_full":
            edges.append(atom.key)
        elif atom.kind == "edge_end":
            e, u = atom.key
            edges.append(tuple(sorted((u, aux.x_index[e]))))
    g = aux.graph
    M = Matching(tuple(sorted(edges)), checked(sum(g.weights[x] for x in edges)))
    if checks:
        if not is_matching(M.edges):
            raise AssemblyError("M(𝒜) is not a matching")
        total = sum(inp.value(atom.ident) for atom in fam)
        if M.weight < total - aux.offset:
            raise AssemblyError("w'(M(𝒜)) is below Σ w(I(A)) - a")
    return M


def matching_to_atoms(M: Matching, inp: AssemblyInput, aux: AuxGraph | None = None, checks: bool = True) -> AtomFamily:
    """𝒜(M) following the five insertion rules; independence and the weight identity are checked."""
    if checks and not is_matching(M.edges):
        raise AssemblyError("not a matching")
    if aux is None:
        aux, _ = build_auxiliary(inp)
    d = inp.d
    chosen = []
    in_m = set(M.edges)
    matched = set()
    for u, v in M.edges:
        matched.update((u, v))
    for e in d.edges():
        x = aux.x_index[e]
        u, v = e
        xu, xv = tuple(sorted((u, x))), tuple(sorted((v, x)))
        if e in in_m:
            chosen.append((FULL, e))
        elif xu in in_m:
            chosen.append((END, (e, u)))
        elif xv in in_m:
            chosen.append((END, (e, v)))
        else:
            chosen.append((BOT, e))
    for x in iter_bits(d.pattern.present):
        if x not in matched:
            chosen.append((VERTEX, x))
    for T in d.triangles():
        a, b, c = T
        if not ({(a, b), (a, c), (b, c)} & in_m):
            chosen.append((TRIANGLE, T))
    fam = AtomFamily(tuple(inp.by_ident[i] for i in chosen), independent=True)
    if checks:
        if not family_is_independent(fam.atoms, d):
            raise AssemblyError("𝒜(M) is not independent")
        total = sum(inp.value(i) for i in chosen)
        if total != aux.offset + M.weight:
            raise AssemblyError(f"Σ w(I(A)) = {total} differs from a + w'(M) = {aux.offset + M.weight}")
    return fam


def assemble(inp: AssemblyInput, checks: bool = True) -> AssemblyOutput:
    if checks:
        inp.check()
    aux, a = build_auxiliary(inp)
    M = max_weight_matching(aux.graph) if aux.graph.weights else Matching((), 0)
    fam = matching_to_atoms(M, inp, aux, checks)
    result = 0
    for atom in fam:
        result |= inp.chosen(atom.ident)
    if checks:
        if not inp.G.is_independent_mask(result):
            raise AssemblyError("assembled set is not independent")
        if inp.w.total(result) != a + M.weight:
            raise AssemblyError("assembled weight differs from a + w'(M)")
    return AssemblyOutput(aux, a, M, fam, result)


def assemble_trivial(per_component: list[int]) -> int:
    """Fast path for edgeless patterns: the union of the per-component sets."""
    out = 0
    for s in per_component:
        out |= s
    return out


def best_family_bruteforce(inp: AssemblyInput) -> int:
    """Maximum of Σ w(I(A)) over all independent families (test oracle, few atoms only)."""
    lst = inp.atom_list
    if len(lst) > 20:
        raise ValueError("too many atoms for the brute-force oracle")
    best = 0

    def rec(i: int, picked: list[Atom], total: int):
        nonlocal best
        if i == len(lst):
            best = max(best, total)
            return
        rec(i + 1, picked, total)
        a = lst[i]
        if all(not conflicts(a, b, inp.d) for b in picked):
            picked.append(a)
            rec(i + 1, picked, total + inp.value(a.ident))
            picked.pop()

    rec(0, [], 0)
    return best

