"""Deterministic SVG drawings of fans and polygons.

Coordinates are exact rationals until the last step and are printed with a
fixed two-decimal format, so identical input gives identical bytes.
"""
from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from ..fanpoly import convex_hull

UNIT = 20  # svg units per lattice unit
MARGIN = 40


def _num(q) -> str:
    q = Fraction(q)
    s = f"{round(q * 100) / 100:.2f}" if q.denominator != 1 else str(q.numerator)
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def lattice_label(p) -> str:
    """``(a,b)`` with ASCII minus; rationals print as p/q."""
    return "(" + ",".join(str(Fraction(c)) for c in p) + ")"


def _xy(p):
    return Fraction(p[0]) * UNIT, -Fraction(p[1]) * UNIT


def _label_attrs(p):
    x, y = Fraction(p[0]), Fraction(p[1])
    anchor = "start" if x > 0 else ("end" if x < 0 else "middle")
    dx = 5 if x > 0 else (-5 if x < 0 else 0)
    dy = -6 if y > 0 else (14 if y < 0 else 4)
    return anchor, dx, dy


def render(rays=(), polygon=(), labels=None, title: str | None = None) -> str:
    """Axes, rays from the origin, the polygon outline and point labels.

    ``labels`` maps points (as tuples) to text; by default every ray end and
    polygon vertex is labelled with its coordinates.
    """
    rays = [tuple(Fraction(c) for c in r) for r in rays]
    polygon = [tuple(Fraction(c) for c in v) for v in polygon]
    pts = rays + polygon
    extent = max([abs(c) for p in pts for c in p] + [Fraction(1)])
    half = extent * UNIT + MARGIN
    size = 2 * half
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(size)}" height="{_num(size)}" '
        f'viewBox="{_num(-half)} {_num(-half)} {_num(size)} {_num(size)}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append('<g stroke="#888" stroke-width="0.5">')
    out.append(f'<line x1="{_num(-half)}" y1="0" x2="{_num(half)}" y2="0"/>')
    out.append(f'<line x1="0" y1="{_num(-half)}" x2="0" y2="{_num(half)}"/>')
    out.append("</g>")
    if rays:
        out.append('<g stroke="#000" stroke-width="1">')
        for r in rays:
            x, y = _xy(r)
            out.append(f'<line x1="0" y1="0" x2="{_num(x)}" y2="{_num(y)}"/>')
        out.append("</g>")
    if len(polygon) >= 2:
        coords = " ".join(f"{_num(x)},{_num(y)}" for x, y in map(_xy, polygon))
        out.append(f'<polygon points="{coords}" fill="none" stroke="#000" stroke-width="1.5"/>')
    seen = []
    for p in pts:
        if p not in seen:
            seen.append(p)
    out.append('<g font-family="serif" font-size="10">')
    for p in seen:
        x, y = _xy(p)
        out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="2"/>')
        text = (labels or {}).get(p, lattice_label(p))
        anchor, dx, dy = _label_attrs(p)
        out.append(f'<text x="{_num(x + dx)}" y="{_num(y + dy)}" text-anchor="{anchor}">{escape(text)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_fan(rays, title=None) -> str:
    """Rays plus the outline through the marked points (when they are in convex position)."""
    hull = convex_hull(rays)
    polygon = hull if len(hull) == len(set(map(tuple, rays))) and len(hull) >= 3 else ()
    return render(rays=rays, polygon=polygon, title=title)


def render_polygon(vertices, labels=None, title=None) -> str:
    lab = None
    if labels is not None:
        lab = {tuple(Fraction(c) for c in v): t for v, t in zip(vertices, labels)}
    return render(polygon=vertices, labels=lab, title=title)
