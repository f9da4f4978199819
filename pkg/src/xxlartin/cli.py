"""Command-line interface.

Exit status: 0 certified, 1 refuted, 2 not applicable, 3 input error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .dihedral import (
    DihedralParams,
    act_on_cover,
    center_generator,
    is_trivial,
    relator,
    substitution_table,
)
from .export import (
    link_dot,
    link_figure,
    piece_graph_dot,
    piece_graph_figure,
    tree_ball_dot,
    tree_ball_figure,
    write_bytes,
)
from .geometry.angles import MAX_PRECISION, Alpha, PrecisionExhausted
from .geometry.quotient import (
    CertificationError,
    even_orientation_orbits,
    fixed_vertex_of_u,
    base_angle_table,
    quotient_complex,
    verify_axes,
)
from .geometry.treeball import MAX_RADIUS, build_tree_ball, vertex_label, vertex_link
from .linkcheck import (
    CERTIFIED,
    NOT_APPLICABLE,
    REFUTED,
    NotApplicable,
    check_gluing,
    piece_graph,
    require_xxl,
    systole_certificate,
)
from .presentation import GraphParseError, LabeledGraph, classify, parse_graph
from .rankone import L_MINUS, L_PLUS, certify_rank1, choose_rank1_witness, rank1_loop_table
from .report import (
    EXIT_CODES,
    EXIT_INPUT_ERROR,
    RunConfig,
    angle_table_json,
    axes_json,
    certificate_json,
    classification_json,
    digest,
    document,
    gluing_json,
    loop_table_json,
    piece_graph_json,
    quotient_json,
    rank1_json,
    to_human,
    to_json,
)
from .words import parse_compact


class InputError(ValueError):
    pass


def _alpha_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"alpha must be a rational like 1/10, got {text!r}") from None


def _edge_arg(text: str) -> tuple[str, str]:
    parts = text.split(",")
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError(f"edge must look like a,b, got {text!r}")
    return parts[0], parts[1]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=_alpha_arg, default=Fraction(1, 10),
                        help="vertical translation length, 0 < alpha < tan(pi/10) (default 1/10)")
    common.add_argument("--precision", type=int, default=128, help="interval precision in bits (max 1024)")
    common.add_argument("--mode", choices=("paper", "computed"), default="paper",
                        help="piece weights: tabulated bounds or certified geometry")
    common.add_argument("--radius", type=int, default=2, help=f"tree ball radius (max {MAX_RADIUS})")
    common.add_argument("--format", dest="fmt", choices=("human", "report", "dot", "svg"), default="human",
                        help="human text or the JSON report; dot/svg for export")
    common.add_argument("--figure-dir", type=Path, default=None,
                        help="also write figures (SVG) for the command into this directory")
    common.add_argument("-o", "--output", type=Path, default=None, help="write output to a file")

    parser = argparse.ArgumentParser(prog="xxlartin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"xxlartin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="certify the link condition of X_A")
    p.add_argument("graph", type=Path)

    p = sub.add_parser("rank1", parents=[common], help="certify the rank-one loop")
    p.add_argument("graph", type=Path)
    p.add_argument("--edge", type=_edge_arg, default=None, help="piece for the loop, e.g. a,b")
    p.add_argument("--third", default=None, help="third generator c")

    p = sub.add_parser("dihedral", parents=[common], help="the dihedral model X_m")
    p.add_argument("-m", type=int, required=True)

    p = sub.add_parser("word", parents=[common], help="evaluate a word in I2(m)")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("word", help="word in a, b, e.g. '(ab)^5 a (ab)^-5 a^-1' or 'abAB'")

    p = sub.add_parser("export", parents=[common], help="export a diagram as DOT or SVG")
    p.add_argument("what", choices=("tree-ball", "piece-graph", "link"))
    p.add_argument("graph", type=Path, nargs="?", default=None, help="graph file (piece-graph)")
    p.add_argument("-m", type=int, default=None, help="label m (tree-ball, link)")
    return parser


def _config(args) -> RunConfig:
    if not 1 <= args.precision <= MAX_PRECISION:
        raise InputError(f"precision must be in [1, {MAX_PRECISION}]")
    if not 0 <= args.radius <= MAX_RADIUS:
        raise InputError(f"radius must be in [0, {MAX_RADIUS}]")
    try:
        Alpha(args.alpha, args.precision)
    except (ValueError, PrecisionExhausted) as exc:
        raise InputError(str(exc)) from None
    return RunConfig(args.alpha, args.precision, args.mode, args.radius, args.fmt)


def _read_graph(path: Path) -> tuple[LabeledGraph, dict]:
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        g = parse_graph(data.decode("utf-8"))
    except UnicodeDecodeError:
        raise InputError(f"{path.name}: not UTF-8 text") from None
    except (GraphParseError, ValueError) as exc:
        raise InputError(f"{path.name}: {exc}") from None
    if not g.vertices:
        raise InputError(f"{path.name}: empty graph")
    return g, {"file": path.name, "digest": digest(data)}


def _figures(args, sections: dict, name: str, render) -> None:
    """Write SVG figures next to the report when --figure-dir is given."""
    if args.figure_dir is None:
        return
    names = []
    for suffix, data in render().items():
        names.append(write_bytes(args.figure_dir / f"{name}{suffix}.svg", data).name)
    sections["figures"] = names


def cmd_check(args, config: RunConfig) -> dict:
    g, inputs = _read_graph(args.graph)
    kind = classify(g)
    sections = {"classification": classification_json(kind)}
    try:
        require_xxl(g)
    except NotApplicable as exc:
        sections["reason"] = str(exc)
        return document("check", config, NOT_APPLICABLE, sections, inputs)
    sections["gluing"] = gluing_json(check_gluing(g))
    alpha = Alpha(config.alpha, config.precision)
    if config.mode == "computed":
        tables = {}
        for m in sorted(set(g.labels())):
            try:
                tables[str(m)] = angle_table_json(base_angle_table(m, alpha, config.precision))
            except CertificationError as exc:
                sections["angle_tables"] = tables
                sections["reason"] = str(exc)
                return document("check", config, REFUTED, sections, inputs)
        sections["angle_tables"] = tables
    pg = piece_graph(g, config.mode, alpha, config.precision)
    cert = systole_certificate(pg)
    sections["piece_graph"] = piece_graph_json(pg)
    sections["link_certificate"] = certificate_json(cert)
    stem = args.graph.stem
    if g.edges:
        _figures(args, sections, f"{stem}-check", lambda: {"": piece_graph_figure(pg, cert)})
    return document("check", config, cert.verdict, sections, inputs)


def cmd_rank1(args, config: RunConfig) -> dict:
    g, inputs = _read_graph(args.graph)
    sections = {"classification": classification_json(classify(g))}
    try:
        w = choose_rank1_witness(g, args.edge, args.third)
    except NotApplicable as exc:
        sections["reason"] = str(exc)
        return document("rank1", config, NOT_APPLICABLE, sections, inputs)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    alpha = Alpha(config.alpha, config.precision)
    cert = certify_rank1(g, w, config.mode, alpha, config.precision)
    sections["rank1_certificate"] = rank1_json(cert)
    if w.kind != "free-group":
        pg = _with_loop(piece_graph(g, config.mode, alpha, config.precision), cert)
        _figures(args, sections, f"{args.graph.stem}-rank1", lambda: {
            "-plus" if side.startswith(L_PLUS) else "-minus": piece_graph_figure(pg, None, highlight=path)
            for side, path in cert.paths.items()})
    return document("rank1", config, cert.verdict, sections, inputs)


def _with_loop(pg, cert):
    from .linkcheck import PieceEdge

    a, b = cert.witness.edge
    piece = next(i for i, pc in enumerate(pg.pieces) if set(pc) == {a, b})
    role = {"a": a, "b": b}
    extra = []
    for (s, loop), bound in cert.table.bounds.items():
        extra.append(PieceEdge(f"{role[s[0]]}{s[1]}", loop, piece, bound, ""))
    return pg.with_extra((L_PLUS, L_MINUS), tuple(extra))


def _params(m: int) -> DihedralParams:
    try:
        return DihedralParams(m)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_dihedral(args, config: RunConfig) -> dict:
    params = _params(args.m)
    if config.radius < 2:
        raise InputError("dihedral needs --radius >= 2 to resolve the axes")
    m = params.m
    table = substitution_table(params)
    ball = build_tree_ball(m, radius=config.radius)
    alpha = Alpha(config.alpha, config.precision)
    sections = {
        "presentation": {
            "parity": params.parity,
            "p": params.p,
            "quotient_generators": list(params.quotient_alphabet),
            "substitution": {k: str(v) for k, v in table.to_quotient.items()},
            "inverse_substitution": {k: str(v) for k, v in table.to_ab.items()},
            "relator": str(relator(params)),
            "center": str(center_generator(params)),
        },
        "tree_ball": {"radius": ball.radius, "polygons": len(ball.polygons),
                      "vertices": len(ball.incidences), "is_tree": ball.is_tree()},
        "quotient": quotient_json(quotient_complex(m, None, alpha, ball)),
        "axes": axes_json(verify_axes(m, None, ball)),
    }
    if params.parity == "odd":
        sections["fixed_vertex_of_u"] = vertex_label(fixed_vertex_of_u(m, ball))
    else:
        orbits = even_orientation_orbits(m, ball)
        sections["orientation_orbits"] = {"orbits": [list(o) for o in orbits.orbits],
                                          "sizes": list(orbits.sizes),
                                          "orientations": list(orbits.orientations)}
    angles = base_angle_table(m, alpha, config.precision, strict=False)
    sections["angle_table"] = angle_table_json(angles)
    loop = rank1_loop_table(m, None, alpha, config.mode, config.precision)
    sections["loop_table"] = loop_table_json(loop)
    _figures(args, sections, f"dihedral-m{m}", lambda: {"-tree": tree_ball_figure(ball)})
    ok = angles.certified and sections["quotient"]["vertex_orbits"] == m and sections["axes"]["consecutive"]
    return document("dihedral", config, CERTIFIED if ok else REFUTED, sections, {"m": m})


def cmd_word(args, config: RunConfig) -> dict:
    params = _params(args.m)
    try:
        word = parse_compact(args.word)
    except ValueError as exc:
        raise InputError(f"cannot parse word: {exc}") from None
    rec = act_on_cover(word, params)
    nf = rec.quotient_image
    trivial = is_trivial(word, params)
    sections = {
        "word": str(word),
        "length": len(word),
        "quotient_normal_form": " ".join(s if k == 1 else f"{s}^{k}" for s, k in nf.syllables) or "1",
        "central_power": nf.central_power,
        "translation": rec.translation,
        "trivial": trivial,
    }
    # evaluation always succeeds; the verdict field is informational
    return document("word", config, "trivial" if trivial else "nontrivial", sections,
                    {"m": params.m, "word": args.word})


def cmd_export(args, config: RunConfig) -> tuple[bytes, str]:
    fmt = config.fmt if config.fmt in ("dot", "svg") else "dot"
    if args.what in ("tree-ball", "link"):
        if args.m is None:
            raise InputError(f"export {args.what} needs -m")
        params = _params(args.m)
        radius = config.radius if args.what == "tree-ball" else max(config.radius, 1)
        ball = build_tree_ball(params.m, radius=radius)
        if args.what == "tree-ball":
            return (tree_ball_dot(ball).encode() if fmt == "dot" else tree_ball_figure(ball)), fmt
        link = vertex_link(ball, ball.base_vertex)
        return (link_dot(link).encode() if fmt == "dot" else link_figure(link)), fmt
    if args.graph is None:
        raise InputError("export piece-graph needs a graph file")
    g, _ = _read_graph(args.graph)
    try:
        pg = piece_graph(g, config.mode, Alpha(config.alpha, config.precision), config.precision)
    except NotApplicable as exc:
        raise _NotApplicableExit(str(exc)) from None
    cert = systole_certificate(pg)
    return (piece_graph_dot(pg, cert).encode() if fmt == "dot" else piece_graph_figure(pg, cert)), fmt


class _NotApplicableExit(Exception):
    pass


COMMANDS = {"check": cmd_check, "rank1": cmd_rank1, "dihedral": cmd_dihedral, "word": cmd_word}


def _emit(data: bytes, output: Path | None) -> None:
    if output is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        write_bytes(output, data)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT_ERROR if exc.code else 0
    try:
        config = _config(args)
        if args.command == "export":
            data, _ = cmd_export(args, config)
            _emit(data, args.output)
            return 0
        if config.fmt in ("dot", "svg"):
            raise InputError(f"--format {config.fmt} is only for export; use --figure-dir for figures")
        doc = COMMANDS[args.command](args, config)
    except InputError as exc:
        print(f"xxlartin: error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except _NotApplicableExit as exc:
        print(f"xxlartin: not applicable: {exc}", file=sys.stderr)
        return EXIT_CODES[NOT_APPLICABLE]
    text = to_json(doc) if config.fmt == "report" else to_human(doc)
    _emit(text.encode("utf-8"), args.output)
    if doc["verdict"] == NOT_APPLICABLE and config.fmt != "report":
        print(f"xxlartin: not applicable: {doc['sections'].get('reason', '')}", file=sys.stderr)
    return doc["exit_status"]


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
