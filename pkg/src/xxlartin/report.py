"""Structured reports: one JSON document per command, plus a text rendering.

Exact values are carried as fraction-of-pi strings with a strictness flag;
decimals sit next to them for reading only. Output is deterministic: keys
are sorted, there are no timestamps, and input files are identified by a
SHA-256 digest of their bytes.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from . import __version__
from .geometry.angles import DEFAULT_ALPHA, DEFAULT_PRECISION, CertifiedAngle, RationalAngle, mpf_str, pi_string
from .geometry.quotient import AngleTable, AxesWitness, QuotientComplex
from .linkcheck import CERTIFIED, NOT_APPLICABLE, REFUTED, Certificate, GluingReport, PieceGraph
from .presentation import ArtinType
from .rankone import LoopAngleTable, RankOneCertificate, RankOneWitness

SCHEMA = "xxlartin-report/1"

EXIT_CODES = {CERTIFIED: 0, REFUTED: 1, NOT_APPLICABLE: 2}
EXIT_INPUT_ERROR = 3


@dataclass(frozen=True)
class RunConfig:
    alpha: Fraction = DEFAULT_ALPHA
    precision: int = DEFAULT_PRECISION
    mode: str = "paper"
    radius: int = 2
    fmt: str = "human"

    def to_json(self) -> dict:
        return {"alpha": str(self.alpha), "precision": self.precision, "mode": self.mode,
                "radius": self.radius}


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


# -- values -------------------------------------------------------------------------


def angle_json(a: RationalAngle | None) -> dict:
    if a is None:
        return {"infinite": True, "text": "∞"}
    return {
        "pi_fraction": pi_string(a.coef),
        "strict": a.strict,
        "decimal": float(a.coef) * math.pi,
        "text": str(a),
    }


def horizontal_json(h: Fraction | None) -> dict:
    return angle_json(None if h is None else RationalAngle(h))


def certified_json(c: CertifiedAngle) -> dict:
    return {
        "provenance": c.provenance,
        "lo": mpf_str(c.lo, 25),
        "hi": mpf_str(c.hi, 25),
        "decimal": c.midpoint(),
        "width": float(c.width),
        "exact": None if c.exact is None else angle_json(c.exact),
    }


# -- sections -------------------------------------------------------------------------


def classification_json(t: ArtinType) -> dict:
    return {"kind": t.kind, "rank": t.rank, "edgeless": t.edgeless}


def gluing_json(r: GluingReport) -> dict:
    return {
        "pieces": [{"piece": f"X_{u}{v}", "label": m} for u, v, m in r.pieces],
        "identifications": {s: list(p) for s, p in r.identifications.items()},
        "vertex_classes": r.vertex_classes,
        "wedge_of_circles": r.wedge_of_circles,
    }


def angle_table_json(t: AngleTable) -> dict:
    return {
        "m": t.m,
        "alpha": str(t.alpha),
        "angles": {k: dict(certified_json(v), horizontal=horizontal_json(t.horizontal[k]))
                   for k, v in t.angles.items()},
        "verdicts": [{"claim": v.claim, "bound": angle_json(v.bound), "holds": v.holds} for v in t.verdicts],
        "certified": t.certified,
    }


def piece_graph_json(pg: PieceGraph) -> dict:
    return {
        "mode": pg.mode,
        "nodes": list(pg.nodes),
        "pieces": [pg.piece_name(i) for i in range(len(pg.pieces))],
        "edges": [{"u": e.u, "v": e.v, "piece": pg.piece_name(e.piece), "weight": angle_json(e.weight),
                   "provenance": e.provenance} for e in pg.edges],
    }


def certificate_json(c: Certificate) -> dict:
    return {
        "verdict": c.verdict,
        "bound": angle_json(c.bound),
        "total": None if c.total is None else angle_json(c.total),
        "cycle": [{"from": s.node, "to": s.to, "piece": s.piece, "weight": angle_json(s.weight),
                   "provenance": s.provenance} for s in c.cycle],
        "case_tags": list(c.case_tags),
        "notes": list(c.notes),
    }


def witness_json(w: RankOneWitness) -> dict:
    return {"kind": w.kind, "edge": None if w.edge is None else list(w.edge), "label": w.label,
            "third": w.third, "description": w.describe()}


def loop_table_json(t: LoopAngleTable) -> dict:
    out = {
        "m": t.m,
        "parity": t.parity,
        "mode": t.mode,
        "x": t.x,
        "x_prime": t.x_prime,
        "bounds": [{"separator": s, "loop": l, "angle": angle_json(a)} for (s, l), a in t.bounds.items()],
        "meets_axes_only_at_base": t.meets_axes_only_at_base,
    }
    if t.computed:
        out["computed"] = [{"separator": s, "loop": l, **certified_json(c)} for (s, l), c in t.computed.items()]
        out["verdicts"] = [{"separator": v.separator, "loop": v.loop, "bound": angle_json(v.bound),
                            "holds": v.holds} for v in t.verdicts]
        out["consistent"] = t.consistent
    return out


def rank1_json(c: RankOneCertificate) -> dict:
    return {
        "verdict": c.verdict,
        "mode": c.mode,
        "witness": witness_json(c.witness),
        "distances": {k: angle_json(v) for k, v in c.distances.items()},
        "paths": {k: list(v) for k, v in c.paths.items()},
        "separator_sums": [
            {"side": s.side, "separator": s.separator, "node": s.node, "angle": angle_json(s.angle),
             "distance": angle_json(s.distance), "total": angle_json(s.total), "exceeds_pi": s.exceeds_pi()}
            for s in c.sums
        ],
        "loop_table": None if c.table is None else loop_table_json(c.table),
        "notes": list(c.notes),
        "case_tags": list(c.case_tags),
    }


def quotient_json(q: QuotientComplex) -> dict:
    return {
        "vertex_orbits": q.vertex_orbits,
        "cell_counts": list(q.cell_counts),
        "euler_characteristic": q.euler_characteristic,
        "loops": [{"name": p.name, "side": list(p.side), "side_orbit": p.side_orbit,
                   "level_class": p.level_class} for p in q.loops],
        "loops_meet_only_at_base": q.loops_meet_only_at_base(),
        "free_action_checks": q.free_action_checks,
        "stabilizer_violations": list(q.stabilizer_violations),
    }


def axes_json(w: AxesWitness) -> dict:
    return {
        "a_side": list(w.a_side),
        "b_side": list(w.b_side),
        "consecutive": w.consecutive,
        "a_axis": list(w.a_path),
        "b_axis": list(w.b_path),
        "t_rotation": angle_json(w.t_rotation),
        "t_p_rotation": angle_json(w.tp_rotation),
    }


# -- documents -------------------------------------------------------------------------


def document(command: str, config: RunConfig, verdict: str, sections: dict, inputs: dict | None = None) -> dict:
    return {
        "schema": SCHEMA,
        "tool": {"name": "xxlartin", "version": __version__},
        "command": command,
        "config": config.to_json(),
        "input": inputs or {},
        "verdict": verdict,
        "exit_status": EXIT_CODES.get(verdict, 0),
        "sections": sections,
    }


def to_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _is_angle(v: Any) -> bool:
    return isinstance(v, dict) and "text" in v and ("pi_fraction" in v or v.get("infinite"))


def to_human(doc: dict) -> str:
    """Indented text view of a report; exact angles print as their text."""
    lines = [f"{doc['command']}: {doc['verdict']}"]

    def emit(value: Any, indent: int, key: str | None):
        pad = "  " * indent
        head = f"{pad}{key}: " if key is not None else f"{pad}- "
        if _is_angle(value):
            lines.append(head + value["text"])
        elif isinstance(value, dict):
            lines.append(head.rstrip() if key is not None else f"{pad}-")
            for k in value:
                emit(value[k], indent + 1, k)
        elif isinstance(value, list):
            if not value:
                lines.append(head + "[]")
            elif all(not isinstance(v, (dict, list)) for v in value):
                lines.append(head + ", ".join(str(v) for v in value))
            else:
                lines.append(head.rstrip())
                for v in value:
                    emit(v, indent + 1, None)
        else:
            lines.append(head + ("-" if value is None else str(value)))

    for key in ("input", "sections"):
        if doc.get(key):
            emit(doc[key], 0, key)
    return "\n".join(lines) + "\n"
