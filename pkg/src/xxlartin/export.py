"""Diagram export: DOT text and matplotlib figures.

Layouts are schematic and deterministic. T_m does not embed isometrically in
the plane, so the tree ball uses a radial layout with P at the centre and
each further polygon shrunk and pushed outward from its attaching vertex.
"""

from __future__ import annotations

import io
import math
from pathlib import Path

from .geometry.angles import pi_string
from .geometry.treeball import MetricGraph, TreeOfPolygons, vertex_label
from .linkcheck import Certificate, PieceGraph

SVG_SALT = "xxlartin"
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


# -- DOT --------------------------------------------------------------------------------


def tree_ball_dot(ball: TreeOfPolygons) -> str:
    lines = [f"graph T{ball.m}_r{ball.radius} {{", "  node [shape=point];"]
    for i, poly in enumerate(ball.polygons):
        lines.append(f"  subgraph cluster_{i} {{ label={_q(f'polygon {i}')};")
        m = len(poly.vertices)
        for j in range(m):
            u, v = poly.vertices[j], poly.vertices[(j + 1) % m]
            lines.append(f"    {_q(vertex_label(u))} -- {_q(vertex_label(v))};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def piece_graph_dot(pg: PieceGraph, cert: Certificate | None = None) -> str:
    on_cycle = set()
    if cert is not None:
        on_cycle = {(s.node, s.to, s.piece) for s in cert.cycle} | {(s.to, s.node, s.piece) for s in cert.cycle}
    lines = ["graph piece_graph {", "  node [shape=circle];"]
    for n in pg.nodes:
        lines.append(f"  {_q(n)};")
    for e in pg.edges:
        piece = pg.piece_name(e.piece)
        attrs = [f"label={_q(str(e.weight))}", f"piece={_q(piece)}"]
        if (e.u, e.v, piece) in on_cycle:
            attrs.append("penwidth=3")
        lines.append(f"  {_q(e.u)} -- {_q(e.v)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def link_dot(link: MetricGraph) -> str:
    def name(node):
        return f"P{node[0]}->{vertex_label(node[1])}"

    lines = [f"graph link_{vertex_label(link.vertex)} {{"]
    for n in link.nodes:
        lines.append(f"  {_q(name(n))};")
    for u, v, length in link.arcs:
        lines.append(f"  {_q(name(u))} -- {_q(name(v))} [label={_q(pi_string(length))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- figures ----------------------------------------------------------------------------


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = SVG_SALT
    plt.rcParams["svg.fonttype"] = "none"
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.set_aspect("equal")
    ax.axis("off")
    return plt, fig, ax


def _render(plt, fig, fmt: str) -> bytes:
    buf = io.BytesIO()
    if fmt == "svg":
        fig.savefig(buf, format="svg", metadata={"Date": None})
    elif fmt == "png":
        fig.savefig(buf, format="png", metadata={"Software": None}, dpi=100)
    else:
        raise ValueError(f"unsupported figure format {fmt!r}")
    plt.close(fig)
    return buf.getvalue()


def tree_ball_layout(ball: TreeOfPolygons) -> dict[int, list[tuple[float, float]]]:
    """Plane coordinates of each polygon's vertices (schematic)."""
    m = ball.m
    coords: dict[int, list[tuple[float, float]]] = {}
    centres: dict[int, tuple[float, float]] = {}
    coords[0] = [(math.cos(2 * math.pi * j / m), math.sin(2 * math.pi * j / m)) for j in range(m)]
    centres[0] = (0.0, 0.0)
    placed = {v: coords[0][j] for j, v in enumerate(ball.polygons[0].vertices)}
    parent_of = {}
    for v, inc in ball.incidences.items():
        if len(inc) == 2:
            (i, _), (k, _) = inc
            a, b = sorted((i, k), key=lambda x: ball.polygons[x].depth)
            parent_of[b] = (a, v)
    for idx in sorted(range(1, len(ball.polygons)), key=lambda i: (ball.polygons[i].depth, i)):
        poly = ball.polygons[idx]
        parent, v = parent_of[idx]
        px, py = placed[v]
        cx, cy = centres[parent]
        dx, dy = px - cx, py - cy
        norm = math.hypot(dx, dy) or 1.0
        r = 0.42 ** poly.depth
        centre = (px + dx / norm * r, py + dy / norm * r)
        centres[idx] = centre
        start = math.atan2(py - centre[1], px - centre[0])
        pos = poly.position(v)
        pts = []
        for j in range(m):
            ang = start + 2 * math.pi * (j - pos) / m
            pts.append((centre[0] + r * math.cos(ang), centre[1] + r * math.sin(ang)))
        coords[idx] = pts
        for j, w in enumerate(poly.vertices):
            placed.setdefault(w, pts[j])
    return coords


def tree_ball_figure(ball: TreeOfPolygons, fmt: str = "svg") -> bytes:
    plt, fig, ax = _figure()
    coords = tree_ball_layout(ball)
    for idx, pts in coords.items():
        depth = ball.polygons[idx].depth
        xs = [p[0] for p in pts] + [pts[0][0]]
        ys = [p[1] for p in pts] + [pts[0][1]]
        ax.fill(xs, ys, color=_PALETTE[depth % len(_PALETTE)], alpha=0.18, linewidth=0)
        ax.plot(xs, ys, color=_PALETTE[depth % len(_PALETTE)], linewidth=1.2 if depth == 0 else 0.8)
    base = coords[0][0]
    ax.plot([base[0]], [base[1]], marker="o", color="black", markersize=5)
    ax.annotate("e", base, textcoords="offset points", xytext=(6, 4))
    ax.set_title(f"T_{ball.m}, radius {ball.radius}: {len(ball.polygons)} polygons (schematic)")
    return _render(plt, fig, fmt)


def _circle_positions(nodes) -> dict[str, tuple[float, float]]:
    n = len(nodes)
    return {v: (math.cos(math.pi / 2 - 2 * math.pi * k / n), math.sin(math.pi / 2 - 2 * math.pi * k / n))
            for k, v in enumerate(nodes)}


def piece_graph_figure(pg: PieceGraph, cert: Certificate | None = None, fmt: str = "svg",
                       highlight: tuple[str, ...] = ()) -> bytes:
    """Nodes on a circle, one colour per piece; the witness cycle or path drawn thick."""
    plt, fig, ax = _figure()
    pos = _circle_positions(pg.nodes)
    thick = set()
    if cert is not None:
        thick |= {frozenset((s.node, s.to)) for s in cert.cycle}
    thick |= {frozenset(p) for p in zip(highlight, highlight[1:])}
    for e in pg.edges:
        (x1, y1), (x2, y2) = pos[e.u], pos[e.v]
        colour = _PALETTE[e.piece % len(_PALETTE)]
        width = 3.0 if frozenset((e.u, e.v)) in thick else 0.8
        ax.plot([x1, x2], [y1, y2], color=colour, linewidth=width, alpha=0.9)
        ax.text((x1 + x2) / 2, (y1 + y2) / 2, pi_string(e.weight.coef), fontsize=6, color=colour,
                ha="center", va="center")
    for n, (x, y) in pos.items():
        ax.plot([x], [y], marker="o", markersize=14, color="white", markeredgecolor="black")
        ax.text(x, y, n, ha="center", va="center", fontsize=8)
    title = "piece graph"
    if cert is not None and cert.total is not None:
        title += f": minimal cycle {cert.total}"
    ax.set_title(title)
    ax.set_xlim(-1.3, 1.3)
    ax.set_ylim(-1.3, 1.3)
    return _render(plt, fig, fmt)


def link_figure(link: MetricGraph, fmt: str = "svg") -> bytes:
    """The link of a vertex: one arc per incident polygon."""
    plt, fig, ax = _figure()
    n_arcs = len(link.arcs)
    for k, (u, v, length) in enumerate(link.arcs):
        y = 1.0 - 2.0 * k / max(n_arcs - 1, 1) if n_arcs > 1 else 0.0
        xs = [-1 + 2 * t / 40 for t in range(41)]
        ys = [y + 0.3 * math.sin(math.pi * t / 40) for t in range(41)]
        ax.plot(xs, ys, color=_PALETTE[k % len(_PALETTE)], linewidth=1.5)
        ax.text(0, y + 0.38, pi_string(length), ha="center")
        for x, node in ((-1, u), (1, v)):
            ax.plot([x], [y], marker="o", color="black")
            ax.text(x, y - 0.15, f"P{node[0]}→{vertex_label(node[1])}", ha="center", fontsize=8)
    ax.set_title(f"link of {vertex_label(link.vertex)}: pairs in different polygons at distance ∞")
    ax.set_xlim(-1.5, 1.5)
    ax.set_ylim(-1.6, 1.6)
    return _render(plt, fig, fmt)


def write_bytes(path: Path, data: bytes) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    return path
