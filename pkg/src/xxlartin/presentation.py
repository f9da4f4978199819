"""Defining graphs of Artin groups: parsing, classification, presentations."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .words import Word, alternating

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_RESERVED = {"vertex"}


class GraphParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.message = message


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    label: int

    @property
    def ends(self) -> frozenset[str]:
        return frozenset((self.u, self.v))

    def other(self, s: str) -> str:
        if s == self.u:
            return self.v
        if s == self.v:
            return self.u
        raise KeyError(s)

    def __str__(self) -> str:
        return f"{self.u}{self.v}"


@dataclass(frozen=True)
class LabeledGraph:
    """A finite simple graph with integer edge labels >= 2.

    ``vertices`` keeps declaration order; each edge is stored with its ends
    in that order, and edges keep their own declaration order. Both orders
    are used for deterministic choices downstream.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        for v in self.vertices:
            if not v:
                raise ValueError("empty vertex name")
        index = {v: i for i, v in enumerate(self.vertices)}
        seen = set()
        normalized = []
        for e in self.edges:
            if e.u == e.v:
                raise ValueError(f"loop edge at {e.u}")
            if e.u not in index or e.v not in index:
                raise ValueError(f"edge {e.u}-{e.v} uses an undeclared vertex")
            if e.label < 2:
                raise ValueError(f"edge {e.u}-{e.v} has label {e.label} < 2")
            if e.ends in seen:
                raise ValueError(f"duplicate edge {e.u}-{e.v}")
            seen.add(e.ends)
            if index[e.u] > index[e.v]:
                e = Edge(e.v, e.u, e.label)
            normalized.append(e)
        object.__setattr__(self, "edges", tuple(normalized))
        object.__setattr__(self, "_index", index)

    @property
    def rank(self) -> int:
        return len(self.vertices)

    def order(self, v: str) -> int:
        return self._index[v]

    def edge(self, s: str, t: str) -> Edge | None:
        key = frozenset((s, t))
        for e in self.edges:
            if e.ends == key:
                return e
        return None

    def incident(self, s: str) -> list[Edge]:
        return [e for e in self.edges if s in e.ends]

    def labels(self) -> list[int]:
        return [e.label for e in self.edges]


def parse_graph(text: str) -> LabeledGraph:
    """Parse the edge-list format.

    One edge per line as ``<name> <name> <label>``; ``vertex <name>``
    declares an isolated vertex; ``#`` starts a comment. Vertex order is the
    order of first appearance.
    """
    vertices: list[str] = []
    known: set[str] = set()
    edges: list[Edge] = []
    seen: dict[frozenset, int] = {}

    def add_vertex(name: str, lineno: int):
        if not _NAME.match(name) or name in _RESERVED:
            raise GraphParseError(lineno, f"invalid vertex name {name!r}")
        if name not in known:
            known.add(name)
            vertices.append(name)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertex":
            if len(parts) != 2:
                raise GraphParseError(lineno, "expected 'vertex <name>'")
            add_vertex(parts[1], lineno)
            continue
        if len(parts) != 3:
            raise GraphParseError(lineno, f"expected '<name> <name> <label>', got {line!r}")
        s, t, label_text = parts
        try:
            label = int(label_text)
        except ValueError:
            raise GraphParseError(lineno, f"label {label_text!r} is not an integer") from None
        if s == t:
            raise GraphParseError(lineno, f"loop edge at {s}")
        if label < 2:
            raise GraphParseError(lineno, f"label {label} < 2")
        key = frozenset((s, t))
        if key in seen:
            raise GraphParseError(lineno, f"duplicate edge {s}-{t} (first on line {seen[key]})")
        add_vertex(s, lineno)
        add_vertex(t, lineno)
        seen[key] = lineno
        edges.append(Edge(s, t, label))
    return LabeledGraph(tuple(vertices), tuple(edges))


def serialize_graph(g: LabeledGraph) -> str:
    lines = [f"vertex {v}" for v in g.vertices]
    lines += [f"{e.u} {e.v} {e.label}" for e in g.edges]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ArtinType:
    kind: str  # "XXL", "extra-large", "large", "right-angled", "none"
    rank: int
    edgeless: bool = False

    @property
    def is_xxl(self) -> bool:
        return self.kind == "XXL"

    @property
    def is_extra_large(self) -> bool:
        return self.kind in ("XXL", "extra-large")

    @property
    def is_large(self) -> bool:
        return self.kind in ("XXL", "extra-large", "large")


def classify(g: LabeledGraph) -> ArtinType:
    labels = g.labels()
    if not labels:
        return ArtinType("XXL", g.rank, edgeless=True)
    low = min(labels)
    if low >= 5:
        kind = "XXL"
    elif low >= 4:
        kind = "extra-large"
    elif low >= 3:
        kind = "large"
    elif all(m == 2 for m in labels):
        kind = "right-angled"
    else:
        kind = "none"
    return ArtinType(kind, g.rank)


def build_word(s: str, t: str, m: int) -> Word:
    if m < 2:
        raise ValueError(f"relation length must be >= 2, got {m}")
    if s == t:
        raise ValueError("generators must differ")
    return alternating(s, t, m)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relations: tuple[tuple[Word, Word], ...]

    def __str__(self) -> str:
        rels = ", ".join(f"{l.compact()} = {r.compact()}" for l, r in self.relations)
        return f"< {' '.join(self.generators)} | {rels} >"


def artin_presentation(g: LabeledGraph) -> Presentation:
    rels = tuple((build_word(e.u, e.v, e.label), build_word(e.v, e.u, e.label)) for e in g.edges)
    return Presentation(g.vertices, rels)
