"""The product Y_m = T_m x R, its quotient X_m, and the angle table at x0."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from ..dihedral import DihedralParams, act_on_cover, is_trivial
from ..words import Word
from .angles import (
    DEFAULT_ALPHA,
    DEFAULT_PRECISION,
    PI,
    Alpha,
    CertifiedAngle,
    RationalAngle,
    pi_frac,
    product_angle,
)
from .treeball import (
    TreeOfPolygons,
    VertexKey,
    _gen,
    _nf,
    build_tree_ball,
    horizontal_angle,
    vertex_key,
    vertex_label,
    vertex_level,
)


class CertificationError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def cached_ball(m: int, radius: int) -> TreeOfPolygons:
    return build_tree_ball(m, radius=radius)


def _as_alpha(alpha) -> Alpha:
    if isinstance(alpha, Alpha):
        return alpha
    return Alpha(Fraction(alpha) if alpha is not None else DEFAULT_ALPHA)


# -- directions at the base vertex ---------------------------------------------

GENERATOR_DIRECTIONS = ("a+", "a-", "b+", "b-")


@dataclass(frozen=True)
class Direction:
    """A direction at (e, 0): toward vertex ``target`` of T_m with slope sign."""

    name: str
    target: VertexKey
    slope: int


def generator_directions(ball: TreeOfPolygons) -> dict[str, Direction]:
    """s+ points from x0 toward s.x0 and s- toward s^-1.x0."""
    out = {}
    for s in "ab":
        for sign, tag in ((1, "+"), (-1, "-")):
            target = ball.act(Word(((s, sign),)), ball.base_vertex)
            out[s + tag] = Direction(s + tag, target, sign)
    return out


def direction_angle(ball: TreeOfPolygons, d1: Direction, d2: Direction, alpha: Alpha,
                    precision: int = DEFAULT_PRECISION) -> CertifiedAngle:
    h = horizontal_angle(ball, ball.base_vertex, d1.target, d2.target)
    return product_angle(h, d1.slope, d2.slope, alpha, precision)


# -- angle table ------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    claim: str
    angle: str
    bound: RationalAngle
    relation: str  # ">" or ">="
    holds: bool


@dataclass(frozen=True)
class AngleTable:
    m: int
    alpha: Fraction
    horizontal: dict[str, Fraction | None]
    angles: dict[str, CertifiedAngle]
    verdicts: tuple[Verdict, ...]

    @property
    def certified(self) -> bool:
        return all(v.holds for v in self.verdicts)

    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.holds]


def _safe_compare(angle: CertifiedAngle, bound: RationalAngle, strict: bool) -> bool:
    try:
        return angle.exceeds(bound) if strict else angle.at_least(bound)
    except ArithmeticError:
        return False


def base_angle_table(m: int, alpha=None, precision: int = DEFAULT_PRECISION,
                        strict: bool = True) -> AngleTable:
    """Certified angles at x0 between the directions a+-, b+- in X_m.

    With ``strict`` a failed bound raises ``CertificationError``; otherwise
    the table is returned with the failing verdicts marked.
    """
    alpha = _as_alpha(alpha)
    ball = cached_ball(m, 1)
    dirs = generator_directions(ball)
    pairs = {
        "a+b+": ("a+", "b+"), "a-b-": ("a-", "b-"),
        "a+b-": ("a+", "b-"), "a-b+": ("a-", "b+"),
        "a+a-": ("a+", "a-"), "b+b-": ("b+", "b-"),
    }
    horizontal = {}
    angles = {}
    for key, (x, y) in pairs.items():
        horizontal[key] = horizontal_angle(ball, ball.base_vertex, dirs[x].target, dirs[y].target)
        angles[key] = direction_angle(ball, dirs[x], dirs[y], alpha, precision)

    checks = [
        ("a+b+", pi_frac(4, 5), True), ("a-b-", pi_frac(4, 5), True),
        ("a+b-", pi_frac(3, 5), True), ("a-b+", pi_frac(3, 5), True),
    ]
    if m >= 6:
        checks += [("a+b-", pi_frac(2, 3), True), ("a-b+", pi_frac(2, 3), True)]
    interior = pi_frac(m - 2, m)
    if interior not in (pi_frac(3, 5), pi_frac(2, 3)):
        checks += [("a+b-", interior, True), ("a-b+", interior, True)]
    checks += [("a+a-", PI, False), ("b+b-", PI, False)]

    verdicts = []
    for key, bound, is_strict in checks:
        rel = ">" if is_strict else ">="
        verdicts.append(Verdict(f"∠({key[:2]},{key[2:]}) {rel} {bound}", key, bound, rel,
                                _safe_compare(angles[key], bound, is_strict)))
    table = AngleTable(m, alpha.value, horizontal, angles, tuple(verdicts))
    if strict and not table.certified:
        failed = ", ".join(v.claim for v in table.failures())
        raise CertificationError(f"m={m}, alpha={alpha.value}: cannot certify {failed}")
    return table


# -- quotient complex ---------------------------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


@dataclass(frozen=True)
class CellPath:
    """A loop in X_m given by the 2-cell orbit it runs through.

    ``side_orbit`` indexes the <t>-orbit of sides of P, ``level_class`` the
    orbit of the R-interval; the loop starts and ends at x0.
    """

    name: str
    side: tuple[str, str]
    side_orbit: int
    level_class: int

    def key(self) -> tuple[int, int]:
        return (self.side_orbit, self.level_class)


@dataclass(frozen=True)
class QuotientComplex:
    m: int
    parity: str
    alpha: Fraction
    vertex_orbits: int
    cell_counts: tuple[int, int, int, int]
    loops: tuple[CellPath, CellPath]
    free_action_checks: int
    stabilizer_violations: tuple[str, ...] = field(default=())

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** i * n for i, n in enumerate(self.cell_counts))

    def loops_meet_only_at_base(self) -> bool:
        return self.loops[0].key() != self.loops[1].key()


def _p_side_orbits(ball: TreeOfPolygons) -> list[int]:
    """Orbit index of each side (j, j+1) of P under t; t shifts positions by 2."""
    m = ball.m
    orbit = [-1] * m
    n = 0
    for j in range(m):
        if orbit[j] < 0:
            k = j
            while orbit[k] < 0:
                orbit[k] = n
                k = (k + 2) % m
            n += 1
    return orbit


def _rotation_shift(ball: TreeOfPolygons, g) -> int:
    """Position shift of an element preserving P, read off at P(0)."""
    P = ball.base_polygon
    image = ball.act(g, P.vertices[0])
    return P.position(image)


def _side_cell(ball: TreeOfPolygons, v: VertexKey, w: VertexKey, level: int) -> tuple[int, int]:
    """Orbit key of the 2-cell [v, w] x [level, level + 1] of Y_m."""
    params = ball.params
    idx, pv, pw = ball.common_polygon(v, w)
    m = ball.m
    if (pw - pv) % m == 1:
        i = pv
    elif (pv - pw) % m == 1:
        i = pw
    else:
        raise ValueError("vertices are not joined by a side")
    poly = ball.polygons[idx]
    orbits = _p_side_orbits(ball)
    i0 = orbits.index(orbits[i])  # smallest representative in the orbit
    c = next(c for c in range(m) if (i0 + 2 * c) % m == i)
    weight = params.lift_weights
    exp = sum(weight[s] * k for s, k in poly.key) + 2 * c
    return orbits[i], (level - exp) % params.center_weight


def quotient_complex(m: int, parity: str | None = None, alpha=None,
                     ball: TreeOfPolygons | None = None, sample_length: int = 6) -> QuotientComplex:
    """Orbit data of the free I2(m)-action on Y_m = T_m x R.

    Vertex orbits are found by union-find over ball vertices times levels
    -m..m, joining (v, k) with (s v, k +- 1) for the generators. The result
    is cross-checked against the level invariant. Cell counts follow from the
    stabilisers in I2(m) of the T_m cells: a vertex stabiliser and an edge
    stabiliser have exponent sums mZ and (centre weight)Z, the polygon
    stabiliser <t> has 2Z; each contributes that many R-cells per T-orbit.
    """
    params = DihedralParams(m)
    if parity is not None and parity != params.parity:
        raise ValueError(f"m={m} is {params.parity}, not {parity}")
    alpha = _as_alpha(alpha)
    if ball is None:
        ball = cached_ball(m, 2)
    if ball.radius < 1:
        raise ValueError("quotient_complex needs a ball of radius >= 1")

    core = list(ball.base_polygon.vertices) + [
        v for v in ball.other_base_polygon.vertices if v not in ball.base_polygon.vertices]
    levels = range(-m, m + 1)
    uf = _UnionFind()
    gens = [(Word(((s, e),)), e) for s in "ab" for e in (1, -1)]
    images = {}
    for v in ball.vertices():
        images[v] = [(ball.act(w, v), e) for w, e in gens]
    for v in ball.vertices():
        for k in levels:
            uf.find((v, k))
            for w, e in images[v]:
                if w in ball.incidences and (k + e) in levels:
                    uf.union((v, k), (w, k + e))

    classes = {}
    for v in core:
        for k in range(m):
            root = uf.find((v, k))
            inv = (vertex_level(params, v) - k) % m
            if classes.setdefault(root, inv) != inv:
                raise ValueError("orbit computation merged points with different invariants")
    found = len(classes)
    if found != len(set(classes.values())):
        raise ValueError(f"radius {ball.radius} too small to connect orbits (found {found} classes)")

    # free action: words of length <= sample_length fixing a point of P x {0}
    violations = []
    checks = 0
    for word in _reduced_ab_words(sample_length):
        rec = act_on_cover(word, params)
        if rec.translation != 0:
            continue
        for v in ball.base_polygon.vertices:
            checks += 1
            if vertex_key(params, rec.quotient_image * _nf(params, v)) == v and not is_trivial(word, params):
                violations.append(f"{word} fixes ({vertex_label(v)}, 0)")

    # cells: one T-orbit of vertices and polygons, side orbits from the t-rotation
    side_orbits = len(set(_p_side_orbits(ball)))
    sv, se, sf = m, params.center_weight, 2
    v0 = sv
    e1 = side_orbits * se + sv
    f2 = sf + side_orbits * se
    c3 = sf
    loops = []
    e = ball.base_vertex
    for s in "ab":
        target = ball.act(Word(((s, 1),)), e)
        orb, lvl = _side_cell(ball, e, target, 0)
        loops.append(CellPath(f"X^{s}", (vertex_label(e), vertex_label(target)), orb, lvl))
    return QuotientComplex(m, params.parity, alpha.value, found, (v0, e1, f2, c3),
                           tuple(loops), checks, tuple(violations))


def _reduced_ab_words(max_len: int) -> list[Word]:
    letters = [("a", 1), ("a", -1), ("b", 1), ("b", -1)]
    out = [Word()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == (x[0], -x[1]):
                    continue
                nxt.append(w + (x,))
        out.extend(Word(w) for w in nxt)
        frontier = nxt
    return out


# -- axes and rotations ---------------------------------------------------------------


@dataclass(frozen=True)
class AxesWitness:
    m: int
    a_side: tuple[str, str]
    b_side: tuple[str, str]
    consecutive: bool
    a_path: tuple[str, ...]
    b_path: tuple[str, ...]
    t_rotation: RationalAngle
    tp_rotation: RationalAngle


def _signed_rotation(shift: int, m: int) -> RationalAngle:
    """Rotation by ``shift`` positions (2pi/m each), normalised into (-pi, pi]."""
    coef = Fraction(2 * shift, m) % 2
    if coef > 1:
        coef -= 2
    return RationalAngle(coef)


def _axis(ball: TreeOfPolygons, s: str) -> list[VertexKey]:
    """Orbit of e under <s>, kept while it stays in the ball."""
    e = ball.base_vertex
    fwd, back = [e], []
    for sign, out in ((1, fwd), (-1, back)):
        g = Word(((s, sign),))
        v = e
        while True:
            v = ball.act(g, v)
            if v not in ball.incidences or len(out) > 2 * ball.radius + 2:
                break
            out.append(v)
    return list(reversed(back)) + fwd


def verify_axes(m: int, parity: str | None = None, ball: TreeOfPolygons | None = None) -> AxesWitness:
    """Axes of a and b through e, and the sides of P they cross.

    Each axis is the orbit of e, consecutive orbit points being joined by a
    side; at every interior axis vertex the incoming and outgoing sides lie
    in different polygons, so the path is a local geodesic.
    """
    params = DihedralParams(m)
    if parity is not None and parity != params.parity:
        raise ValueError(f"m={m} is {params.parity}, not {parity}")
    if ball is None:
        ball = cached_ball(m, 2)
    if ball.radius < 2:
        raise ValueError("axes need a ball of radius >= 2")
    paths = {}
    for s in "ab":
        path = _axis(ball, s)
        if len(path) < 5:
            raise ValueError(f"axis of {s} not resolvable within radius {ball.radius}")
        for x, y in zip(path, path[1:]):
            c = ball.common_polygon(x, y)
            if c is None or (c[2] - c[1]) % m not in (1, m - 1):
                raise ValueError(f"axis of {s}: {vertex_label(x)} and {vertex_label(y)} not joined by a side")
        for x, y, z in zip(path, path[1:], path[2:]):
            if horizontal_angle(ball, y, x, z) is not None:
                raise ValueError(f"axis of {s} bends at {vertex_label(y)}")
        paths[s] = path
    e = ball.base_vertex
    P = ball.base_polygon

    def side_in_p(path):
        i = path.index(e)
        for nb in (path[i - 1], path[i + 1]):
            if nb in P.vertices:
                return nb
        raise ValueError("axis misses P")

    na, nb = side_in_p(paths["a"]), side_in_p(paths["b"])
    pa, pb = P.position(na), P.position(nb)
    consecutive = na != nb and {pa, pb} == {1, m - 1}
    t_shift = _rotation_shift(ball, _gen(params, "t"))
    tp_shift = _rotation_shift(ball, _gen(params, "t", params.p))
    return AxesWitness(
        m, (vertex_label(e), vertex_label(na)), (vertex_label(nb), vertex_label(e)), consecutive,
        tuple(vertex_label(v) for v in paths["a"]), tuple(vertex_label(v) for v in paths["b"]),
        _signed_rotation(t_shift, m), _signed_rotation(tp_shift, m),
    )


def fixed_vertex_of_u(m: int, ball: TreeOfPolygons | None = None) -> VertexKey:
    """The vertex of T_m fixed by u = w_m(a, b); only e in the ball."""
    params = DihedralParams(m)
    if params.parity != "odd":
        raise ValueError("u is defined for odd m only")
    if ball is None:
        ball = cached_ball(m, 2)
    if ball.radius < 1:
        raise ValueError("need radius >= 1")
    u = _gen(params, "u")
    fixed = [v for v in ball.vertices() if ball.act(u, v) == v]
    if fixed != [ball.base_vertex]:
        raise ValueError(f"u fixes {[vertex_label(v) for v in fixed]}, expected only e")
    return fixed[0]


@dataclass(frozen=True)
class OrientationOrbits:
    m: int
    orbits: tuple[tuple[int, ...], ...]  # positions on P
    orientations: tuple[str, ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(o) for o in self.orbits)


def even_orientation_orbits(m: int, ball: TreeOfPolygons | None = None) -> OrientationOrbits:
    """Orbits of <t> on the vertices of P for even m.

    Even positions are edges leaving the base vertex of the Bass-Serre tree
    (elements t^k), odd positions are edges entering it (t^k a).
    """
    params = DihedralParams(m)
    if params.parity != "even":
        raise ValueError("orientation orbits are defined for even m")
    if ball is None:
        ball = cached_ball(m, 1)
    P = ball.base_polygon
    t = _gen(params, "t")
    seen: set[int] = set()
    orbits = []
    for j in range(m):
        if j in seen:
            continue
        orbit = []
        v = P.vertices[j]
        while P.position(v) not in seen:
            seen.add(P.position(v))
            orbit.append(P.position(v))
            v = ball.act(t, v)
        orbits.append(tuple(sorted(orbit)))
    names = tuple("outgoing" if o[0] % 2 == 0 else "incoming" for o in orbits)
    return OrientationOrbits(m, tuple(orbits), names)
