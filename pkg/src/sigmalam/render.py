"""Deterministic SVG drawings of laminations in the unit disk."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .chords import Leaf
from .gaps import Arc, FaceSet, classify

SIZE = 512
CENTER = SIZE / 2
RADIUS = 240.0

KIND_FILL = {
    "FatouParattracting": "#f2c14e",
    "FatouSiegel": "#5fad56",
    "FinitePolygon": "#9ecae1",
    "WanderingPolygon": "#d17a9b",
    "AllCritical": "#bbbbbb",
    "Undetermined": "#ffffff",
}
POLYGON_FILL = "#c6dbef"
LEAF_STROKE = "#1f3b73"
GENERATOR_STROKE = "#c0392b"


@dataclass(frozen=True)
class RenderOptions:
    arcs: bool = False
    tint: bool = False
    horizon: int = 64


def _pt(t: Fraction) -> tuple[float, float]:
    a = 2 * math.pi * float(t)
    return CENTER + RADIUS * math.cos(a), CENTER - RADIUS * math.sin(a)


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _xy(t: Fraction) -> str:
    x, y = _pt(t)
    return f"{_fmt(x)} {_fmt(y)}"


def _chord_to(e_from: Fraction, e_to: Fraction, arcs: bool) -> str:
    """Path segment from ``e_from`` to ``e_to`` along a leaf."""
    if not arcs:
        return f"L {_xy(e_to)}"
    gap = float((e_to - e_from) % 1)
    half = math.pi * min(gap, 1 - gap)
    if abs(half - math.pi / 2) < 1e-9:
        return f"L {_xy(e_to)}"
    # circle orthogonal to the boundary through both endpoints
    r = RADIUS * math.tan(half)
    # the arc bows inward, turning clockwise on screen for a short ccw step
    sweep = 0 if gap > 0.5 else 1
    return f"A {_fmt(r)} {_fmt(r)} 0 0 {sweep} {_xy(e_to)}"


def _arc_to(a: Arc) -> str:
    large = 1 if a.length() > Fraction(1, 2) else 0
    # counterclockwise in angle is clockwise on screen since y points down
    return f"A {_fmt(RADIUS)} {_fmt(RADIUS)} 0 {large} 0 {_xy(a.end)}"


def _leaf_path(e: Leaf, arcs: bool) -> str:
    return f"M {_xy(e.a)} {_chord_to(e.a, e.b, arcs)}"


def _face_path(f, arcs: bool) -> Optional[str]:
    if not f.boundary:
        return None
    parts = []
    cur: Optional[Fraction] = None
    for piece in f.boundary:
        if isinstance(piece, Arc):
            start, end = piece.start, piece.end
            seg = _arc_to(piece)
        else:
            # leaves are traversed from the current point to the other end
            start = piece.a if cur in (None, piece.a) else piece.b
            end = piece.b if start == piece.a else piece.a
            seg = _chord_to(start, end, arcs)
        if cur is None:
            parts.append(f"M {_xy(start)}")
        parts.append(seg)
        cur = end
    parts.append("Z")
    return " ".join(parts)


def render(lam, options: RenderOptions = RenderOptions()) -> str:
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<circle class="boundary" cx="{_fmt(CENTER)}" cy="{_fmt(CENTER)}" '
        f'r="{_fmt(RADIUS)}" fill="none" stroke="#000000" stroke-width="1.5"/>',
    ]
    if options.tint and lam.classes:
        fs = FaceSet(lam)
        for f in fs:
            path = _face_path(f, options.arcs)
            if path is None:
                continue
            kind = classify(lam, f, options.horizon, fs).kind
            out.append(f'<path class="face" data-kind="{kind}" d="{path}" '
                       f'fill="{KIND_FILL[kind]}" stroke="none"/>')
    for c, lv in sorted(zip(lam.classes, lam.levels)):
        if len(c) < 3:
            continue
        d = f"M {_xy(c[0])} " + " ".join(
            _chord_to(c[i], c[(i + 1) % len(c)], options.arcs) for i in range(len(c))) + " Z"
        out.append(f'<path class="polygon" d="{d}" fill="{POLYGON_FILL}" stroke="none"/>')
    gen_leaves = {e for e, idx in lam.leaves().items() if any(lam.levels[i] == 0 for i in idx)}
    for e in sorted(lam.leaves()):
        stroke = GENERATOR_STROKE if e in gen_leaves else LEAF_STROKE
        cls = "leaf generator" if e in gen_leaves else "leaf"
        out.append(f'<path class="{cls}" d="{_leaf_path(e, options.arcs)}" fill="none" '
                   f'stroke="{stroke}" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
