"""Finite balls in the tree of polygons T_m.

T_m is built from the Bass-Serre tree of the central quotient G of I2(m):

* odd m, G = <t> * <u> = Z/m * Z/2: polygons are cosets g<t>, vertices are
  cosets g<u>; vertex g<u> lies on polygons g<t> and gu<t>.
* even m = 2p, G = <a> * <t> = Z * Z/p: polygons are cosets g<t>, vertices
  are elements g (edges of the oriented Bass-Serre tree); g lies on g<t>
  as an outgoing edge and on g a^-1<t> as an incoming edge.

In both cases t rotates the base polygon P = <t> by 4pi/m. Position j of a
polygon h<t> (h without trailing t-syllable) holds h t^k <u> with 2k = j
mod m (odd) or h t^k for j = 2k and h t^k a for j = 2k + 1 (even). Vertex
keys are the syllable tuples of canonical coset representatives, and the
base vertex e has key ().
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from ..dihedral import DihedralParams, NormalForm, act_on_cover
from ..words import Word

MAX_RADIUS = 4

VertexKey = tuple


def _nf(params: DihedralParams, syllables) -> NormalForm:
    return NormalForm(params.m, tuple(syllables), 0)


def _gen(params: DihedralParams, sym: str, k: int = 1) -> NormalForm:
    return _nf(params, ()) * _nf(params, ((sym, k),)) if k else _nf(params, ())


def _strip(syllables: tuple, sym: str) -> tuple:
    if syllables and syllables[-1][0] == sym:
        return syllables[:-1]
    return syllables


def vertex_key(params: DihedralParams, g: NormalForm) -> VertexKey:
    if params.parity == "odd":
        return _strip(g.syllables, "u")
    return g.syllables


def polygon_key(params: DihedralParams, g: NormalForm) -> tuple:
    return _strip(g.syllables, "t")


def polygon_vertices(params: DihedralParams, poly: tuple) -> tuple[VertexKey, ...]:
    """Vertex keys of polygon ``poly`` by position 0..m-1."""
    m, p = params.m, params.p
    h = _nf(params, poly)
    out = []
    for j in range(m):
        if params.parity == "odd":
            k = (j * (p + 1)) % m  # 2k = j mod m
            g = h * _gen(params, "t", k)
        else:
            g = h * _gen(params, "t", j // 2)
            if j % 2:
                g = g * _gen(params, "a")
        out.append(vertex_key(params, g))
    return tuple(out)


def vertex_polygons(params: DihedralParams, v: VertexKey) -> tuple[tuple, tuple]:
    g = _nf(params, v)
    if params.parity == "odd":
        other = g * _gen(params, "u")
    else:
        other = g * _gen(params, "a", -1)
    return polygon_key(params, g), polygon_key(params, other)


def vertex_level(params: DihedralParams, v: VertexKey) -> int:
    """Exponent sum mod m of any g in I2(m) with g.e = v.

    Every vertex stabiliser has exponent sums exactly mZ, so (v, k alpha)
    and (v', k' alpha) lie in one I2(m)-orbit iff
    level(v) - k = level(v') - k' mod m.
    """
    w = params.lift_weights
    return sum(w[s] * k for s, k in v) % params.m


def vertex_label(v: VertexKey) -> str:
    if not v:
        return "e"
    return "".join(s if k == 1 else f"{s}{k}" for s, k in v)


@dataclass(frozen=True)
class Polygon:
    key: tuple
    vertices: tuple[VertexKey, ...]
    depth: int

    def position(self, v: VertexKey) -> int:
        return self.vertices.index(v)


@dataclass
class TreeOfPolygons:
    m: int
    radius: int
    polygons: list[Polygon]
    incidences: dict[VertexKey, list[tuple[int, int]]]
    base_vertex: VertexKey = ()
    _by_key: dict = field(default_factory=dict, repr=False)

    @property
    def params(self) -> DihedralParams:
        return DihedralParams(self.m)

    @property
    def parity(self) -> str:
        return self.params.parity

    @property
    def base_polygon(self) -> Polygon:
        return self.polygons[0]

    @property
    def other_base_polygon(self) -> Polygon:
        """The polygon P' sharing the base vertex with P."""
        for idx, _ in self.incidences[self.base_vertex]:
            if idx != 0:
                return self.polygons[idx]
        raise ValueError("radius 0 ball has no second polygon at e")

    def polygon_index(self, key: tuple) -> int | None:
        return self._by_key.get(key)

    def vertices(self) -> list[VertexKey]:
        return list(self.incidences)

    def is_interior(self, v: VertexKey) -> bool:
        return len(self.incidences.get(v, ())) == 2

    def common_polygon(self, v: VertexKey, w: VertexKey) -> tuple[int, int, int] | None:
        """(polygon index, position of v, position of w) if they share one."""
        for idx, pv in self.incidences.get(v, ()):
            for jdx, pw in self.incidences.get(w, ()):
                if idx == jdx:
                    return idx, pv, pw
        return None

    def act(self, g: NormalForm | Word, v: VertexKey) -> VertexKey:
        """Image of vertex ``v`` under g (a quotient normal form or an {a,b}-word)."""
        params = self.params
        if isinstance(g, Word):
            g = act_on_cover(g, params).quotient_image
        return vertex_key(params, g * _nf(params, v))

    def adjacency(self) -> list[tuple[int, int]]:
        pairs = []
        for inc in self.incidences.values():
            if len(inc) == 2:
                pairs.append(tuple(sorted((inc[0][0], inc[1][0]))))
        return sorted(pairs)

    def is_tree(self) -> bool:
        n = len(self.polygons)
        pairs = self.adjacency()
        if len(pairs) != n - 1:
            return False
        nbrs = {i: [] for i in range(n)}
        for i, j in pairs:
            nbrs[i].append(j)
            nbrs[j].append(i)
        seen = {0}
        todo = [0]
        while todo:
            i = todo.pop()
            for j in nbrs[i]:
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        return len(seen) == n

    def to_text(self) -> str:
        """Polygon list with cyclic vertex order, then vertex incidences."""
        lines = [f"# tree of polygons T_{self.m}, radius {self.radius}",
                 f"polygons {len(self.polygons)}", f"vertices {len(self.incidences)}"]
        for i, poly in enumerate(self.polygons):
            verts = " ".join(vertex_label(v) for v in poly.vertices)
            lines.append(f"polygon {i} depth {poly.depth} : {verts}")
        for v, inc in self.incidences.items():
            where = " ".join(f"{i}@{pos}" for i, pos in inc)
            lines.append(f"vertex {vertex_label(v)} : {where}")
        return "\n".join(lines) + "\n"


def build_tree_ball(m: int, parity: str | None = None, radius: int = 2) -> TreeOfPolygons:
    """All polygons within polygon-tree distance ``radius`` of P."""
    params = DihedralParams(m)
    if parity is not None and parity != params.parity:
        raise ValueError(f"m={m} is {params.parity}, not {parity}")
    if radius < 0 or radius > MAX_RADIUS:
        raise ValueError(f"radius must be in [0, {MAX_RADIUS}] (memory budget), got {radius}")

    polygons: list[Polygon] = []
    by_key: dict[tuple, int] = {}
    incidences: dict[VertexKey, list[tuple[int, int]]] = {}

    def add(key: tuple, depth: int) -> int:
        poly = Polygon(key, polygon_vertices(params, key), depth)
        idx = len(polygons)
        polygons.append(poly)
        by_key[key] = idx
        for pos, v in enumerate(poly.vertices):
            incidences.setdefault(v, []).append((idx, pos))
        return idx

    add((), 0)
    queue = deque([0])
    while queue:
        idx = queue.popleft()
        poly = polygons[idx]
        if poly.depth >= radius:
            continue
        for v in poly.vertices:
            for key in vertex_polygons(params, v):
                if key not in by_key:
                    queue.append(add(key, poly.depth + 1))

    return TreeOfPolygons(m, radius, polygons, incidences, (), by_key)


@dataclass(frozen=True)
class MetricGraph:
    """Link of a vertex of T_m: one arc per incident polygon.

    Nodes are side-directions ``(polygon index, neighbouring vertex)``; each
    arc joins the two side-directions of one polygon and has length
    (m-2)pi/m, stored as a multiple of pi.
    """

    vertex: VertexKey
    nodes: tuple[tuple[int, VertexKey], ...]
    arcs: tuple[tuple[tuple[int, VertexKey], tuple[int, VertexKey], Fraction], ...]

    def distance(self, x: tuple[int, VertexKey], y: tuple[int, VertexKey]) -> Fraction | None:
        """Link distance as a multiple of pi; ``None`` means infinite."""
        if x == y:
            return Fraction(0)
        for u, v, length in self.arcs:
            if {u, v} == {x, y}:
                return length
        return None


def vertex_link(ball: TreeOfPolygons, v: VertexKey) -> MetricGraph:
    if not ball.is_interior(v):
        raise ValueError(f"vertex {vertex_label(v)} is on the boundary of the ball")
    m = ball.m
    nodes = []
    arcs = []
    for idx, pos in ball.incidences[v]:
        poly = ball.polygons[idx]
        right = (idx, poly.vertices[(pos + 1) % m])
        left = (idx, poly.vertices[(pos - 1) % m])
        nodes += [right, left]
        arcs.append((right, left, Fraction(m - 2, m)))
    return MetricGraph(v, tuple(nodes), tuple(arcs))


def horizontal_angle(ball: TreeOfPolygons, v: VertexKey, w1: VertexKey, w2: VertexKey) -> Fraction | None:
    """Angle at v between the segments toward w1 and w2, as a multiple of pi.

    Inside one polygon this is the inscribed angle pi * (steps between w1
    and w2 on the arc avoiding v) / m. Directions in different polygons are
    at infinite distance in the link (``None``).
    """
    c1 = ball.common_polygon(v, w1)
    c2 = ball.common_polygon(v, w2)
    if c1 is None or c2 is None:
        raise ValueError("target vertices must share a polygon with v")
    if c1[0] != c2[0]:
        return None
    m = ball.m
    d1 = (c1[2] - c1[1]) % m
    d2 = (c2[2] - c2[1]) % m
    return Fraction(abs(d1 - d2), m)
