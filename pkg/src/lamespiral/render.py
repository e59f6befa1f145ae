"""Standalone SVG figures of the spiral, the Lame relation and the policle construction.

Curves are written in curve coordinates: the viewBox is ``[-1.5, 1.5]^2`` and a
single ``scale(1,-1)`` group puts the y axis upward, so coordinates in the
file can be compared directly with the geometry.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from typing import Iterable, Sequence

from lamespiral.curves import (
    CurveFamily,
    as_family,
    lame_polar_radius,
    policle_radius,
    spiral_radius,
)
from lamespiral.dynamics import UNIFORM_START, half_leaf_sequence
from lamespiral.relations import sector_to_arc

SVG_NS = "http://www.w3.org/2000/svg"
VIEW_HALF = 1.5
MIN_POINTS = 256

Point = tuple[float, float]


def _fmt(v: float) -> str:
    return format(v, ".17g")


def _points_attr(points: Iterable[Point]) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)


def _polar(r: float, theta: float) -> Point:
    return r * math.cos(theta), r * math.sin(theta)


def spiral_outline(fam: CurveFamily | float, per_half_leaf: int | None = None) -> list[Point]:
    """Closed outline of the whole spiral, traced as one continuous path from ``(1, 0)``."""
    fam = as_family(fam)
    n = fam.require_integer("the full spiral outline")
    m = per_half_leaf or max(64, math.ceil(MIN_POINTS / (2 * n)))
    edge = math.pi / (2 * n)
    pts: list[Point] = []
    for leaf in half_leaf_sequence(n, UNIFORM_START, 2 * n):
        ks = range(m + 1) if not leaf.outward else range(m, -1, -1)
        for k in ks:
            if pts and k == (0 if not leaf.outward else m):
                continue  # shared with the previous half-leaf
            # clustered toward the origin, where r changes fastest
            phi = edge * math.sin(0.5 * math.pi * k / m)
            r = 0.0 if k == m else math.cos(n * phi) ** (1.0 / n)
            pts.append(_polar(r, leaf.angle(n, phi)))
    return pts


def closed_polar_curve(radius, count: int = 720) -> list[Point]:
    pts = [_polar(radius(2 * math.pi * k / count), 2 * math.pi * k / count) for k in range(count)]
    pts.append(pts[0])
    return pts


def leaf_arc(fam: CurveFamily, theta1: float, theta2: float, count: int = MIN_POINTS) -> list[Point]:
    """Principal-leaf points for ``theta`` from ``theta1`` to ``theta2``."""
    pts = []
    for k in range(count + 1):
        theta = theta1 + (theta2 - theta1) * k / count
        pts.append(_polar(spiral_radius(fam, theta), theta))
    return pts


def sector_polygon(radius, theta1: float, theta2: float, count: int = MIN_POINTS) -> list[Point]:
    pts = [(0.0, 0.0)]
    for k in range(count + 1):
        theta = theta1 + (theta2 - theta1) * k / count
        pts.append(_polar(radius(theta), theta))
    pts.append((0.0, 0.0))
    return pts


class _Canvas:
    def __init__(self, title: str, size: int = 600) -> None:
        ET.register_namespace("", SVG_NS)
        self.root = ET.Element(
            f"{{{SVG_NS}}}svg",
            {
                "version": "1.1",
                "width": str(size),
                "height": str(size),
                "viewBox": " ".join(_fmt(v) for v in (-VIEW_HALF, -VIEW_HALF, 2 * VIEW_HALF, 2 * VIEW_HALF)),
            },
        )
        ET.SubElement(self.root, f"{{{SVG_NS}}}title").text = title
        ET.SubElement(
            self.root,
            f"{{{SVG_NS}}}rect",
            {
                "x": str(-VIEW_HALF),
                "y": str(-VIEW_HALF),
                "width": str(2 * VIEW_HALF),
                "height": str(2 * VIEW_HALF),
                "fill": "white",
            },
        )
        self.plot = ET.SubElement(self.root, f"{{{SVG_NS}}}g", {"transform": "scale(1,-1)"})
        self._axes()

    def _axes(self) -> None:
        for x1, y1, x2, y2 in ((-VIEW_HALF, 0, VIEW_HALF, 0), (0, -VIEW_HALF, 0, VIEW_HALF)):
            ET.SubElement(
                self.plot,
                f"{{{SVG_NS}}}line",
                {
                    "x1": str(x1),
                    "y1": str(y1),
                    "x2": str(x2),
                    "y2": str(y2),
                    "stroke": "#bbbbbb",
                    "stroke-width": "0.004",
                },
            )

    def polyline(self, ident: str, points: Sequence[Point], stroke: str, width: float = 0.01) -> None:
        ET.SubElement(
            self.plot,
            f"{{{SVG_NS}}}polyline",
            {
                "id": ident,
                "points": _points_attr(points),
                "fill": "none",
                "stroke": stroke,
                "stroke-width": str(width),
                "stroke-linejoin": "round",
            },
        )

    def polygon(self, ident: str, points: Sequence[Point], fill: str) -> None:
        ET.SubElement(
            self.plot,
            f"{{{SVG_NS}}}polygon",
            {"id": ident, "points": _points_attr(points), "fill": fill, "stroke": "none"},
        )

    def marker(self, ident: str, point: Point, label: str) -> None:
        x, y = point
        ET.SubElement(
            self.plot,
            f"{{{SVG_NS}}}circle",
            {"id": ident, "cx": _fmt(x), "cy": _fmt(y), "r": "0.025", "fill": "black"},
        )
        # labels live outside the flipped group so the glyphs stay upright
        text = ET.SubElement(
            self.root,
            f"{{{SVG_NS}}}text",
            {"x": _fmt(x + 0.04), "y": _fmt(-y - 0.04), "font-size": "0.09"},
        )
        text.text = label

    def tostring(self) -> str:
        body = ET.tostring(self.root, encoding="unicode")
        return '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>\n' + body + "\n"


def render_spiral(fam: CurveFamily | float) -> str:
    fam = as_family(fam)
    canvas = _Canvas(f"Sinusoidal spiral r^{fam.n:g} = cos({fam.n:g} theta)")
    canvas.polyline("spiral", spiral_outline(fam), "#1f4e9c")
    return canvas.tostring()


def render_relation(fam: CurveFamily | float, alpha: float) -> str:
    """Lame curve with the sector ``[0, alpha]`` and the matching spiral arc ``[beta, pi/(2n)]``."""
    fam = as_family(fam)
    triple = sector_to_arc(fam, alpha)
    canvas = _Canvas(f"Lame curve x^{2 * fam.n:g} + y^{2 * fam.n:g} = 1 and spiral r^{fam.n:g}")
    lame = lambda th: lame_polar_radius(fam, th)  # noqa: E731
    canvas.polygon("sector", sector_polygon(lame, 0.0, alpha), "#f2c36b")
    canvas.polyline("lame", closed_polar_curve(lame), "#7a3b00")
    if fam.integer_n:
        canvas.polyline("spiral", spiral_outline(fam), "#9bb3dd", 0.006)
    else:
        canvas.polyline("spiral", leaf_arc(fam, -fam.leaf_half_width, fam.leaf_half_width), "#9bb3dd", 0.006)
    canvas.polyline("arc", leaf_arc(fam, triple.beta, fam.leaf_half_width), "#c0162c", 0.02)
    canvas.marker("R", _polar(triple.r_param, triple.beta), "R")
    return canvas.tostring()


def render_policle(fam: CurveFamily | float, alpha: float) -> str:
    """Policle, spiral overlay and the points ``B``, ``B'``, ``C`` and ``P`` of the construction."""
    fam = as_family(fam)
    n = fam.n
    b_r = spiral_radius(fam, alpha)
    c_r = max(math.cos(n * alpha), 0.0)  # |OC| = |OB|**n
    c_theta = math.acos(min(c_r**n, 1.0)) / n
    pol = lambda th: policle_radius(fam, th)  # noqa: E731
    canvas = _Canvas(f"Policle and sinusoidal spiral, n = {n:g}")
    canvas.polygon("sector", sector_polygon(pol, 0.0, alpha), "#f2c36b")
    canvas.polyline("policle", closed_polar_curve(pol), "#2d6a2d")
    if fam.integer_n:
        canvas.polyline("spiral", spiral_outline(fam), "#9bb3dd", 0.006)
    else:
        canvas.polyline("spiral", leaf_arc(fam, -fam.leaf_half_width, fam.leaf_half_width), "#9bb3dd", 0.006)
    canvas.polyline("arc", leaf_arc(fam, c_theta, 0.0), "#c0162c", 0.02)
    canvas.marker("B", _polar(b_r, alpha), "B")
    canvas.marker("Bprime", _polar(pol(alpha), alpha), "B'")
    canvas.marker("C", _polar(c_r, c_theta), "C")
    canvas.marker("P", (1.0, 0.0), "P")
    return canvas.tostring()
