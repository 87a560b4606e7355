"""Tags for the hereditary graph classes the solvers understand."""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph

KINDS = ("pt", "hole", "claw", "lobster", "hfree")


@dataclass(frozen=True)
class GraphClass:
    """One of: P_t-free, long-hole-free, (>=t)-claw-free, (>=t)-lobster-free, H-free.

    ``t`` is unused for ``hfree``; ``pattern`` is only set for ``hfree``.
    """

    kind: str
    t: int = 0
    pattern: Graph | None = field(default=None, compare=False)
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown class kind {self.kind!r}")
        if self.kind == "hfree":
            if self.pattern is None:
                raise ValueError("hfree class needs a pattern graph")
        elif self.t < 1:
            raise ValueError(f"class parameter t must be positive, got {self.t}")

    def __str__(self) -> str:
        if self.kind == "hfree":
            return f"hfree:{self.label or 'H'}"
        return f"{self.kind}:{self.t}"


def Pt(t: int) -> GraphClass:
    return GraphClass("pt", t)


def CgeT(t: int) -> GraphClass:
    return GraphClass("hole", t)


def YgeT(t: int) -> GraphClass:
    return GraphClass("claw", t)


def LgeT(t: int) -> GraphClass:
    return GraphClass("lobster", t)


def ExplicitH(pattern: Graph, label: str = "H") -> GraphClass:
    return GraphClass("hfree", 0, pattern, label)


def parse_class(text: str, load_pattern=None) -> GraphClass:
    """Parse ``pt:5``, ``hole:5``, ``claw:1``, ``lobster:1`` or ``hfree:FILE``.

    ``load_pattern`` maps the FILE part of ``hfree`` to a Graph.
    """
    kind, sep, arg = text.partition(":")
    if not sep or not arg:
        raise ValueError(f"class must look like kind:param, got {text!r}")
    kind = kind.lower()
    if kind == "hfree":
        if load_pattern is None:
            raise ValueError("hfree class requires a pattern loader")
        return ExplicitH(load_pattern(arg), label=arg)
    try:
        t = int(arg)
    except ValueError:
        raise ValueError(f"class parameter must be an integer, got {arg!r}") from None
    return GraphClass(kind, t)
