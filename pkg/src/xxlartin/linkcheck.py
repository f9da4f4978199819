"""Link condition for the glued complex X_A, via the piece graph at x0.

The link of x0 is modelled by a weighted graph on the direction nodes s+ and
s-. Each piece X_st (an edge of the defining graph) contributes six edges,
whose weights are lower bounds for the link distances inside that piece.
A closed locally geodesic loop that leaves a piece must do so through a
generator direction, so loops through several pieces are cycles in this
graph whose consecutive segments lie in distinct pieces. Loops inside one
or two pieces are covered by the local CAT(0) property of the pieces and
the convexity of their union, and are not searched.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry.angles import DEFAULT_PRECISION, PI, TWO_PI, Alpha, RationalAngle, pi_frac, pi_string
from .geometry.quotient import base_angle_table
from .presentation import LabeledGraph, classify

PAPER = "paper"
COMPUTED = "computed"
MODES = (PAPER, COMPUTED)

CERTIFIED = "certified"
REFUTED = "refuted"
NOT_APPLICABLE = "not-applicable"

# segment count above which every admissible cycle is dominated
DOMINATION_SEGMENTS = 4
SEGMENT_FLOOR = pi_frac(3, 5, strict=True)


class NotApplicable(ValueError):
    """The input is outside the scope of the certificate (exit status 2)."""


@dataclass(frozen=True)
class PieceEdge:
    u: str
    v: str
    piece: int
    weight: RationalAngle
    provenance: str


@dataclass(frozen=True)
class PieceGraph:
    graph: LabeledGraph
    nodes: tuple[str, ...]
    pieces: tuple[tuple[str, str], ...]
    edges: tuple[PieceEdge, ...]
    mode: str = PAPER
    alpha: Fraction | None = None

    def node_index(self, n: str) -> int:
        return self.nodes.index(n)

    def piece_name(self, i: int) -> str:
        s, t = self.pieces[i]
        return f"X_{s}{t}"

    def adjacency(self) -> dict[str, list[tuple[str, int, RationalAngle, int]]]:
        """node -> [(neighbour, piece, weight, edge index)], in a fixed order."""
        adj: dict[str, list] = {n: [] for n in self.nodes}
        for i, e in enumerate(self.edges):
            adj[e.u].append((e.v, e.piece, e.weight, i))
            adj[e.v].append((e.u, e.piece, e.weight, i))
        order = {n: k for k, n in enumerate(self.nodes)}
        for n in adj:
            adj[n].sort(key=lambda x: (x[2].key(), x[1], order[x[0]]))
        return adj

    def with_extra(self, nodes: tuple[str, ...], edges: tuple[PieceEdge, ...]) -> "PieceGraph":
        return PieceGraph(self.graph, self.nodes + nodes, self.pieces, self.edges + edges,
                          self.mode, self.alpha)


def direction_nodes(s: str) -> tuple[str, str]:
    return f"{s}+", f"{s}-"


def piece_weights(label: int, mode: str = PAPER, alpha=None,
                  precision: int = DEFAULT_PRECISION) -> dict[str, tuple[RationalAngle, str]]:
    """Weights of the three edge kinds of one piece.

    Keys: "same" (s+t+, s-t-), "opposite" (s+t-, s-t+) and "loop" (s+s-).
    """
    if label < 5:
        raise NotApplicable(f"label {label} < 5")
    if mode == PAPER:
        opposite = pi_frac(3, 5, True) if label == 5 else pi_frac(2, 3, True)
        return {
            "same": (pi_frac(4, 5, True), "same signs: π - 2·arctan α > 4π/5"),
            "opposite": (opposite, f"opposite signs: > {pi_string(opposite.coef)}"),
            "loop": (PI, "generator loop is a local geodesic: ≥ π"),
        }
    if mode != COMPUTED:
        raise ValueError(f"unknown mode {mode!r}")
    if alpha is None:
        raise ValueError("computed mode needs alpha")
    table = base_angle_table(label, alpha, precision)
    same = table.angles["a+b+"].lower_bound()
    opposite = table.angles["a+b-"].lower_bound()
    return {
        "same": (same, f"certified lower bound of {table.angles['a+b+'].provenance}"),
        "opposite": (opposite, f"certified lower bound of {table.angles['a+b-'].provenance}"),
        "loop": (PI, "generator loop is a local geodesic: ≥ π"),
    }


def piece_graph(g: LabeledGraph, mode: str = PAPER, alpha=None,
                precision: int = DEFAULT_PRECISION) -> PieceGraph:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    for e in g.edges:
        if e.label < 5:
            raise NotApplicable(f"label {e.label} < 5 on edge {e.u}{e.v}")
    if mode == COMPUTED:
        alpha = alpha if isinstance(alpha, Alpha) else Alpha(Fraction(alpha), precision)
    nodes = tuple(n for s in g.vertices for n in direction_nodes(s))
    pieces = tuple((e.u, e.v) for e in g.edges)
    cache: dict[int, dict] = {}
    edges = []
    for i, e in enumerate(g.edges):
        if e.label not in cache:
            cache[e.label] = piece_weights(e.label, mode, alpha, precision)
        w = cache[e.label]
        sp, sm = direction_nodes(e.u)
        tp, tm = direction_nodes(e.v)
        for u, v, kind in ((sp, tp, "same"), (sm, tm, "same"), (sp, tm, "opposite"),
                           (sm, tp, "opposite"), (sp, sm, "loop"), (tp, tm, "loop")):
            edges.append(PieceEdge(u, v, i, w[kind][0], w[kind][1]))
    a = alpha.value if isinstance(alpha, Alpha) else None
    return PieceGraph(g, nodes, pieces, tuple(edges), mode, a)


# -- cycles -------------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    node: str
    piece: str
    weight: RationalAngle
    to: str
    provenance: str = ""


@dataclass(frozen=True)
class Certificate:
    verdict: str
    total: RationalAngle | None
    cycle: tuple[Step, ...] = ()
    case_tags: tuple[str, ...] = ()
    bound: RationalAngle = TWO_PI
    notes: tuple[str, ...] = field(default=())

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED


def _admissible_close(first: int, last: int, used: frozenset) -> bool:
    return last != first and len(used) >= 3


def _cap(used: frozenset, piece: int) -> frozenset:
    # three distinct pieces is all the search needs to know
    if len(used) >= 3:
        return used
    return used | {piece}


def shortest_cycle_weight(pg: PieceGraph) -> RationalAngle | None:
    """Minimum weight of an admissible cycle through >= 3 pieces.

    Dijkstra from each start node over states (node, first piece, last
    piece, pieces used so far capped at three); the next segment must lie
    in a piece different from the last one, and the closing segment in a
    piece different from the first. Sums are ordered by (value, strict), so
    at equal value the non-strict sum is the smaller one.
    """
    adj = pg.adjacency()
    best: RationalAngle | None = None
    counter = itertools.count()
    for start in pg.nodes:
        heap = []
        dist: dict = {}
        for v, piece, w, _ in adj[start]:
            state = (v, piece, piece, frozenset({piece}))
            if state not in dist or w < dist[state]:
                dist[state] = w
                heapq.heappush(heap, (w.key(), next(counter), state, w))
        while heap:
            _, _, state, d = heapq.heappop(heap)
            if dist.get(state) != d:
                continue
            if best is not None and best < d:
                break
            node, first, last, used = state
            if node == start and _admissible_close(first, last, used):
                if best is None or d < best:
                    best = d
                continue
            for v, piece, w, _ in adj[node]:
                if piece == last:
                    continue
                nstate = (v, first, piece, _cap(used, piece))
                nd = d + w
                if nstate not in dist or nd < dist[nstate]:
                    dist[nstate] = nd
                    heapq.heappush(heap, (nd.key(), next(counter), nstate, nd))
    return best


def _witness(pg: PieceGraph, target: RationalAngle) -> tuple[Step, ...]:
    """Lexicographically first cycle of weight ``target``.

    Cycles are compared as sequences of (start node order, weight, piece
    order) per segment; the search starts from nodes in declaration order
    and tries segments in that order, so the first hit is the smallest.
    """
    adj = pg.adjacency()
    floor = min((e.weight for e in pg.edges), key=lambda w: w.key())

    def dfs(start, node, first, last, used, total, path):
        if path and node == start and _admissible_close(first, last, used) and total.key() == target.key():
            return path
        for v, piece, w, idx in adj[node]:
            if path and piece == last:
                continue
            nt = total + w
            if target < nt:
                continue
            # any continuation adds at least one more segment unless we close now
            if not (v == start and nt.key() == target.key()) and target.coef < (nt + floor).coef:
                continue
            e = pg.edges[idx]
            step = Step(node, pg.piece_name(piece), w, v, e.provenance)
            found = dfs(start, v, piece if not path else first, piece, used | {piece}, nt, path + (step,))
            if found:
                return found
        return None

    for start in pg.nodes:
        found = dfs(start, start, None, None, frozenset(), RationalAngle(0), ())
        if found:
            return found
    raise AssertionError("minimum weight found by search but no witness cycle")


def systole_certificate(pg: PieceGraph) -> Certificate:
    g = pg.graph
    if not g.edges:
        return Certificate(CERTIFIED, None, (), ("wedge of circles",),
                           notes=("no pieces: X_A is a wedge of circles, a graph",))
    tags = ["one- and two-piece loops: covered by the pieces and their convex unions"]
    best = shortest_cycle_weight(pg)
    if best is None:
        tags.insert(0, "single piece only" if len(pg.pieces) == 1 else "no loop through three pieces")
        return Certificate(CERTIFIED, None, (), tuple(tags))
    cycle = _witness(pg, best)
    total = RationalAngle(0)
    for step in cycle:
        total = total + step.weight
    assert total.key() == best.key()
    n = len(cycle)
    tags.append(f"{n}-segment minimum" if n < DOMINATION_SEGMENTS else f"{n}-segment minimum (dominated)")
    verdict = CERTIFIED if total.at_least(TWO_PI) else REFUTED
    return Certificate(verdict, total, cycle, tuple(tags))


# -- oracle ----------------------------------------------------------------------------


def brute_force_minimum(pg: PieceGraph, max_segments: int = 8) -> RationalAngle | None:
    """Minimum over every admissible cycle with at most ``max_segments`` segments.

    Closed walks are enumerated depth by depth; a partial walk is dropped
    once it plus the lightest edge for each missing segment is no lighter
    than the best cycle found so far. Kept independent of the line-graph
    search above.
    """
    adj = {n: [] for n in pg.nodes}
    for e in pg.edges:
        adj[e.u].append((e.v, e.piece, e.weight))
        adj[e.v].append((e.u, e.piece, e.weight))
    if not pg.edges:
        return None
    floor = min((e.weight for e in pg.edges), key=lambda w: w.key())
    best = None

    def walk(start, node, pieces, total, depth):
        nonlocal best
        if best is not None and not total + floor * (depth - len(pieces)) < best:
            return
        if len(pieces) == depth:
            if node == start and pieces[0] != pieces[-1] and len(set(pieces)) >= 3:
                best = total
            return
        for v, piece, w in adj[node]:
            if pieces and piece == pieces[-1]:
                continue
            walk(start, v, pieces + (piece,), total + w, depth)

    for depth in range(3, max_segments + 1):
        if best is not None and not floor * depth < best:
            break
        for start in pg.nodes:
            walk(start, start, (), RationalAngle(0), depth)
    return best


def domination_bound(pg: PieceGraph | None = None) -> RationalAngle:
    """Lower bound for any admissible cycle of DOMINATION_SEGMENTS segments.

    Without a graph this uses the symbolic floor 3π/5 (strict) valid for every
    XXL piece in either mode; with a graph it uses the smallest edge weight.
    """
    floor = SEGMENT_FLOOR if pg is None else min((e.weight for e in pg.edges), key=lambda w: w.key())
    return floor * DOMINATION_SEGMENTS


# -- gluing ------------------------------------------------------------------------------


@dataclass(frozen=True)
class GluingReport:
    pieces: tuple[tuple[str, str, int], ...]
    identifications: dict[str, tuple[str, ...]]
    vertex_classes: int
    wedge_of_circles: bool

    @property
    def piece_count(self) -> int:
        return len(self.pieces)


def check_gluing(g: LabeledGraph) -> GluingReport:
    """Which pieces each generator circle X_s is glued into.

    Every piece X_st is a copy of X_m with m vertex orbits, all sharing the
    base vertex, so X_A has 1 + sum(m - 1) vertices.
    """
    for e in g.edges:
        if e.label < 5:
            raise NotApplicable(f"label {e.label} < 5 on edge {e.u}{e.v}")
    ident = {s: tuple(f"X_{e.u}{e.v}" for e in g.edges if s in e.ends) for s in g.vertices}
    verts = 1 + sum(e.label - 1 for e in g.edges)
    return GluingReport(tuple((e.u, e.v, e.label) for e in g.edges), ident, verts, not g.edges)


def require_xxl(g: LabeledGraph) -> None:
    kind = classify(g)
    if not kind.is_xxl:
        low = min(g.labels())
        raise NotApplicable(f"not XXL: label {low} < 5")
