"""Static SVG rendering: planar curve with crossings and witness loop on
top, unrolled cylinder strip below."""

import math
import xml.etree.ElementTree as ET

import numpy as np

from .curves import TWO_PI, ArcCurve

PANEL_W = 640.0
PANEL_H = 260.0
MARGIN = 40.0
GAP = 30.0

CURVE_STYLE = "fill:none;stroke:#1f4e8c;stroke-width:1.5"
WITNESS_STYLE = "fill:none;stroke:#c43b3b;stroke-width:2.5"
MARKER_STYLE = "fill:#c43b3b;stroke:#5e1010;stroke-width:0.8"
AXIS_STYLE = "stroke:#999999;stroke-width:0.7"
TEXT_STYLE = "font-family:sans-serif;font-size:11px;fill:#333333"


class _Frame:
    """Maps data coordinates into one SVG panel rectangle."""

    def __init__(self, x0, x1, y0, y1, top):
        pad_y = 0.05 * (y1 - y0 or 1.0)
        self.x0, self.x1 = x0, x1
        self.y0, self.y1 = y0 - pad_y, y1 + pad_y
        self.top = top

    def map(self, x, y):
        fx = (x - self.x0) / (self.x1 - self.x0)
        fy = (y - self.y0) / (self.y1 - self.y0)
        return (MARGIN + fx * PANEL_W,
                self.top + PANEL_H - fy * PANEL_H)

    def polyline(self, parent, xs, ys, style):
        pts = " ".join(f"{px:.2f},{py:.2f}"
                       for px, py in (self.map(x, y)
                                      for x, y in zip(xs, ys)))
        ET.SubElement(parent, "polyline", points=pts, style=style)


def _planar_samples(curve: ArcCurve, s_lo, s_hi, n=1024):
    s = np.linspace(s_lo, s_hi, n)
    u, v = curve.point(s)
    return np.asarray(u), np.asarray(v)


def render_svg(curve: ArcCurve, crossings, witness=None) -> str:
    """Two-panel SVG: the planar curve over x in [-pi, 3*pi] with one
    marker per crossing and the witness loop highlighted, and the cylinder
    strip [0, 2*pi) x v with winding annotations."""
    ell = curve.ell
    width = PANEL_W + 2 * MARGIN
    height = 2 * (PANEL_H + MARGIN) + GAP
    root = ET.Element("svg", xmlns="http://www.w3.org/2000/svg",
                      width=f"{width:.0f}", height=f"{height:.0f}",
                      viewBox=f"0 0 {width:.0f} {height:.0f}")

    # ---- planar panel: x in [-pi, 3*pi] --------------------------------
    # two periods of arc length centred so the image covers the window
    u, v = _planar_samples(curve, -ell, 2 * ell, 3072)
    vmin, vmax = float(np.min(v)), float(np.max(v))
    top1 = MARGIN
    f1 = _Frame(-math.pi, 3 * math.pi, vmin, vmax, top1)
    keep = (u >= -math.pi - 0.5) & (u <= 3 * math.pi + 0.5)
    # split into contiguous runs so the clipped polyline does not jump
    idx = np.nonzero(keep)[0]
    if idx.size:
        breaks = np.nonzero(np.diff(idx) > 1)[0]
        for chunk in np.split(idx, breaks + 1):
            if chunk.size >= 2:
                f1.polyline(root, u[chunk], v[chunk], CURVE_STYLE)
    for gx in (-math.pi, 0.0, math.pi, 2 * math.pi, 3 * math.pi):
        p0 = f1.map(gx, f1.y0)
        p1 = f1.map(gx, f1.y1)
        ET.SubElement(root, "line", x1=f"{p0[0]:.2f}", y1=f"{p0[1]:.2f}",
                      x2=f"{p1[0]:.2f}", y2=f"{p1[1]:.2f}", style=AXIS_STYLE)

    if witness is not None:
        wu, wv = _planar_samples(curve, witness.a, witness.b, 512)
        shift = 0.0
        lo, hi = float(np.min(wu)), float(np.max(wu))
        while lo + shift < -math.pi:
            shift += TWO_PI
        while hi + shift > 3 * math.pi:
            shift -= TWO_PI
        f1.polyline(root, wu + shift, wv, WITNESS_STYLE)

    # exactly one marker element per reported crossing
    for c in crossings:
        cu, cv = curve.point(c.s1)
        cu = float(cu)
        while cu < -math.pi:
            cu += TWO_PI
        while cu > 3 * math.pi:
            cu -= TWO_PI
        px, py = f1.map(cu, float(cv))
        ET.SubElement(root, "circle", cx=f"{px:.2f}", cy=f"{py:.2f}",
                      r="4", style=MARKER_STYLE,
                      **{"class": "crossing-marker"})

    # ---- cylinder panel: phi in [0, 2*pi) ------------------------------
    top2 = MARGIN + PANEL_H + GAP
    phi = np.mod(curve.u, TWO_PI)
    f2 = _Frame(0.0, TWO_PI, float(np.min(curve.v)), float(np.max(curve.v)),
                top2)
    jumps = np.nonzero(np.abs(np.diff(phi)) > math.pi)[0]
    for chunk in np.split(np.arange(curve.n_samples), jumps + 1):
        if chunk.size >= 2:
            f2.polyline(root, phi[chunk], curve.v[chunk], CURVE_STYLE)
    for c in crossings:
        px, py = f2.map(c.point.phi % TWO_PI, c.point.v)
        label = ET.SubElement(root, "text", x=f"{px + 6:.2f}",
                              y=f"{py - 6:.2f}", style=TEXT_STYLE)
        label.text = f"k={c.winding}"

    cap = ET.SubElement(root, "text", x=f"{MARGIN:.0f}", y="20",
                        style=TEXT_STYLE)
    cap.text = (f"{curve.spec.label or 'curve'}: ell={curve.ell:.6f}, "
                f"{len(crossings)} crossing(s)")
    return ET.tostring(root, encoding="unicode")


def write_svg(path, curve, crossings, witness=None):
    with open(path, "w") as fh:
        fh.write(render_svg(curve, crossings, witness))
        fh.write("\n")
