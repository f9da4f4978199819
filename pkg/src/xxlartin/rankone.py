"""A loop through x0 whose angles at x0 exceed pi at both passings.

Inside the piece X_ab (label m) the loop l_ab runs from x' in P' to e and on
to x in P, horizontally; x and x' lie in one orbit, so l_ab closes up in
X_m. Concatenating with the generator circle X_c of a third generator gives
the loop l = l_ab . X_c. Its two passings through x0 meet X_c in the
directions c- (after l+) and c+ (before l-); any path in the link from l+
to c- leaves X_ab through one of a+-, b+-, which bounds its length below by
a two-term sum for each of those four separators.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field

from .geometry.angles import DEFAULT_PRECISION, PI, Alpha, CertifiedAngle, RationalAngle, pi_frac
from .geometry.quotient import Direction, _as_alpha, cached_ball, direction_angle, generator_directions
from .geometry.treeball import vertex_label, vertex_level
from .linkcheck import (
    CERTIFIED,
    COMPUTED,
    MODES,
    NOT_APPLICABLE,
    PAPER,
    REFUTED,
    NotApplicable,
    PieceEdge,
    PieceGraph,
    piece_graph,
    require_xxl,
)
from .presentation import LabeledGraph

L_PLUS, L_MINUS = "ℓ+", "ℓ-"
SEPARATORS = ("a+", "a-", "b+", "b-")

# pairs (separator, loop direction) sharing one bound
_GROUPS = {
    "near": (("a+", L_PLUS), ("a-", L_MINUS)),
    "far": (("b-", L_PLUS), ("b+", L_MINUS)),
    "cross": (("a-", L_PLUS), ("a+", L_MINUS), ("b+", L_PLUS), ("b-", L_MINUS)),
}


def paper_loop_bounds(m: int) -> dict[str, RationalAngle]:
    """Strict lower bounds for the three groups of angles."""
    if m % 2:
        return {"near": pi_frac(2, 5, True), "far": pi_frac(1, 5, True), "cross": pi_frac(4, 5, True)}
    return {"near": pi_frac(1, 3, True), "far": pi_frac(1, 3, True), "cross": pi_frac(4, 5, True)}


@dataclass(frozen=True)
class LoopVerdict:
    separator: str
    loop: str
    bound: RationalAngle
    holds: bool


@dataclass(frozen=True)
class LoopAngleTable:
    m: int
    parity: str
    mode: str
    x: str
    x_prime: str
    bounds: dict[tuple[str, str], RationalAngle]
    computed: dict[tuple[str, str], CertifiedAngle] = field(default_factory=dict)
    verdicts: tuple[LoopVerdict, ...] = ()
    meets_axes_only_at_base: bool = True

    def angle(self, separator: str, loop: str) -> RationalAngle:
        return self.bounds[(separator, loop)]

    @property
    def consistent(self) -> bool:
        """Every computed angle satisfies its tabulated bound."""
        return all(v.holds for v in self.verdicts)


def _loop_vertices(m: int):
    """x = P(j) and its orbit partner x' on P', j = p + 1 (odd) or p (even)."""
    ball = cached_ball(m, 1)
    params = ball.params
    P, Q = ball.base_polygon, ball.other_base_polygon
    j = params.p + 1 if params.parity == "odd" else params.p
    x = P.vertices[j]
    level = vertex_level(params, x)
    partners = [v for v in Q.vertices if v != ball.base_vertex and vertex_level(params, v) == level]
    assert len(partners) == 1
    return ball, x, partners[0], level


def rank1_loop_table(m: int, parity: str | None = None, alpha=None, mode: str = PAPER,
                     precision: int = DEFAULT_PRECISION) -> LoopAngleTable:
    want = "odd" if m % 2 else "even"
    if parity is not None and parity != want:
        raise ValueError(f"m={m} does not fit the {parity} branch")
    if m < 5:
        raise ValueError(f"m must be >= 5, got {m}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    paper = paper_loop_bounds(m)
    bounds = {pair: paper[g] for g, pairs in _GROUPS.items() for pair in pairs}
    ball, x, xp, level = _loop_vertices(m)
    # the diagonal segments of l_ab lie in open 2-cells, away from the axes,
    # and x is off the orbit of x0 since its level is nonzero
    only_base = level != 0
    if mode == PAPER:
        return LoopAngleTable(m, want, mode, vertex_label(x), vertex_label(xp), bounds,
                              meets_axes_only_at_base=only_base)

    alpha = _as_alpha(alpha)
    dirs = generator_directions(ball)
    loop_dirs = {L_PLUS: Direction(L_PLUS, x, 0), L_MINUS: Direction(L_MINUS, xp, 0)}
    computed = {}
    verdicts = []
    lower = {}
    for (s, l), bound in bounds.items():
        ang = direction_angle(ball, dirs[s], loop_dirs[l], alpha, precision)
        computed[(s, l)] = ang
        try:
            holds = ang.exceeds(bound)
        except ArithmeticError:
            holds = False
        verdicts.append(LoopVerdict(s, l, bound, holds))
        lower[(s, l)] = ang.lower_bound()
    return LoopAngleTable(m, want, mode, vertex_label(x), vertex_label(xp), lower, computed,
                          tuple(verdicts), only_base)


# -- witness ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankOneWitness:
    kind: str  # "odd", "even" or "free-group"
    edge: tuple[str, str] | None
    label: int | None
    third: str | None

    def describe(self) -> str:
        if self.kind == "free-group":
            return f"free group: generator loop X_{self.third}"
        a, b = self.edge
        return f"l = l_{a}{b} . X_{self.third} in X_{a}{b} (m={self.label}, {self.kind} branch)"


def choose_rank1_witness(g: LabeledGraph, edge: tuple[str, str] | None = None,
                         third: str | None = None) -> RankOneWitness:
    require_xxl(g)
    if g.rank < 3 and not g.edges:
        raise NotApplicable(f"rank {g.rank} < 3: the rank-one loop needs at least three generators")
    if not g.edges:
        gen = third if third is not None else g.vertices[0]
        if gen not in g.vertices:
            raise ValueError(f"unknown generator {gen!r}")
        return RankOneWitness("free-group", None, None, gen)
    if g.rank <= 2:
        raise NotApplicable("rank 2 with an edge: A is a dihedral Artin group, virtually a "
                            "direct product with Z, so it has no rank-one witness")
    if edge is not None:
        e = g.edge(*edge)
        if e is None:
            raise ValueError(f"no edge {edge[0]}{edge[1]} in the graph")
        # keep the orientation the caller asked for
        a, b = edge
    else:
        odd = [e for e in g.edges if e.label % 2]
        e = (odd or list(g.edges))[0]
        a, b = e.u, e.v
    if third is None:
        third = next(v for v in g.vertices if v not in (a, b))
    elif third not in g.vertices or third in (a, b):
        raise ValueError(f"third generator {third!r} must be a vertex outside {{{a}, {b}}}")
    return RankOneWitness("odd" if e.label % 2 else "even", (a, b), e.label, third)


# -- certification ----------------------------------------------------------------------


@dataclass(frozen=True)
class SeparatorSum:
    side: str  # "ℓ+ -> c-" or "ℓ- -> c+"
    separator: str  # a+, a-, b+, b- (roles in the chosen piece)
    node: str  # the actual generator direction
    angle: RationalAngle
    distance: RationalAngle | None  # None: unreachable
    total: RationalAngle | None

    def exceeds_pi(self) -> bool:
        return self.total is None or self.total.exceeds(PI)


@dataclass(frozen=True)
class RankOneCertificate:
    verdict: str
    witness: RankOneWitness
    mode: str
    distances: dict[str, RationalAngle | None]
    paths: dict[str, tuple[str, ...]]
    sums: tuple[SeparatorSum, ...]
    table: LoopAngleTable | None
    notes: tuple[str, ...] = ()
    case_tags: tuple[str, ...] = ()

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED


def _constrained_distances(pg: PieceGraph, source: str, last_piece: int | None):
    """Shortest paths from ``source`` where consecutive segments change piece.

    Returns node -> (distance, path); ties go to the non-strict sum, then to
    the path found first in the fixed adjacency order.
    """
    adj = pg.adjacency()
    counter = itertools.count()
    start = (source, last_piece)
    dist = {start: RationalAngle(0)}
    prev: dict = {start: None}
    heap = [(RationalAngle(0).key(), next(counter), start)]
    done = set()
    best: dict[str, tuple[RationalAngle, tuple]] = {}
    while heap:
        _, _, state = heapq.heappop(heap)
        if state in done:
            continue
        done.add(state)
        node, last = state
        d = dist[state]
        if node not in best:
            path = []
            s = state
            while s is not None:
                path.append(s[0])
                s = prev[s]
            best[node] = (d, tuple(reversed(path)))
        for v, piece, w, _ in adj[node]:
            if piece == last:
                continue
            ns = (v, piece)
            nd = d + w
            if ns not in dist or nd < dist[ns]:
                dist[ns] = nd
                prev[ns] = state
                heapq.heappush(heap, (nd.key(), next(counter), ns))
    return best


def _exceeds_pi(d: RationalAngle | None) -> bool:
    return d is None or d.exceeds(PI)


def certify_rank1(g: LabeledGraph, w: RankOneWitness, mode: str = PAPER, alpha=None,
                  precision: int = DEFAULT_PRECISION) -> RankOneCertificate:
    require_xxl(g)
    if w.kind == "free-group":
        if g.edges:
            raise ValueError("free-group witness needs an edgeless graph")
        return RankOneCertificate(CERTIFIED, w, mode, {}, {}, (), None,
                                  ("X_A is a wedge of circles; its universal cover is a tree",),
                                  ("wedge of circles",))
    a, b = w.edge
    e = g.edge(a, b)
    c = w.third
    if e is None or e.label != w.label or c not in g.vertices or c in (a, b):
        raise ValueError("witness does not match the graph")
    if g.rank <= 2:
        raise NotApplicable("rank 2: dihedral case has no rank-one witness")
    if mode == COMPUTED:
        alpha = alpha if isinstance(alpha, Alpha) else _as_alpha(alpha)
    pg = piece_graph(g, mode, alpha, precision)
    piece = next(i for i, pc in enumerate(pg.pieces) if set(pc) == {a, b})
    table = rank1_loop_table(w.label, None, alpha, mode, precision)
    role = {"a+": f"{a}+", "a-": f"{a}-", "b+": f"{b}+", "b-": f"{b}-"}
    extra = [PieceEdge(L_PLUS, L_MINUS, piece, PI, "l is horizontal through e: directions at distance π")]
    for (s, l), bound in table.bounds.items():
        extra.append(PieceEdge(role[s], l, piece, bound, f"loop table: ∠({s},{l})"))
    # order the loop edges deterministically: by separator role, then loop side
    extra[1:] = sorted(extra[1:], key=lambda pe: (SEPARATORS.index(_role_of(pe.u, role)), pe.v))
    ext = pg.with_extra((L_PLUS, L_MINUS), tuple(extra))

    targets = {L_PLUS: f"{c}-", L_MINUS: f"{c}+"}
    distances = {}
    paths = {}
    sums = []
    notes = []
    for s in (a, b):
        if g.edge(s, c) is None:
            notes.append(f"no edge {s}{c}: routes from {s}± to {c} must cross further pieces")
    for loop, target in targets.items():
        side = f"{loop} -> {target}"
        best = _constrained_distances(ext, loop, None)
        d, path = best.get(target, (None, ()))
        distances[side] = d
        paths[side] = path
        via = []
        for sep in SEPARATORS:
            node = role[sep]
            angle = table.bounds[(sep, loop)]
            from_sep = _constrained_distances(ext, node, piece).get(target)
            dist = from_sep[0] if from_sep else None
            total = angle + dist if dist is not None else None
            if dist is None:
                notes.append(f"{side}: no admissible route from {node} to {target} (cost ∞)")
            sums.append(SeparatorSum(side, sep, node, angle, dist, total))
            via.append(total)
        finite = [t for t in via if t is not None]
        expect = min(finite, key=lambda t: t.key()) if finite else None
        if (expect is None) != (d is None) or (d is not None and d.key() != expect.key()):
            raise AssertionError(f"{side}: path search and separator sums disagree")
    ok = all(_exceeds_pi(d) for d in distances.values())
    tags = [f"{w.kind} branch", f"separator nodes {', '.join(role[s] for s in SEPARATORS)}"]
    if mode == COMPUTED and not table.consistent:
        bad = ", ".join(f"∠({v.separator},{v.loop})" for v in table.verdicts if not v.holds)
        notes.append(f"computed loop angles below the tabulated bounds: {bad}")
    return RankOneCertificate(CERTIFIED if ok else REFUTED, w, mode, distances, paths, tuple(sums),
                              table, tuple(notes), tuple(tags))


def _role_of(node: str, role: dict[str, str]) -> str:
    for k, v in role.items():
        if v == node:
            return k
    raise KeyError(node)


def not_applicable_reason(g: LabeledGraph) -> str | None:
    try:
        choose_rank1_witness(g)
    except NotApplicable as exc:
        return str(exc)
    return None


__all__ = [
    "L_MINUS", "L_PLUS", "LoopAngleTable", "NOT_APPLICABLE", "RankOneCertificate", "RankOneWitness",
    "SeparatorSum", "certify_rank1", "choose_rank1_witness", "paper_loop_bounds", "rank1_loop_table",
]
