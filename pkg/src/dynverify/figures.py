"""Deterministic SVG emission for the seven bundled figures.

fig2-1 draws the annulus construction: both boundary circles, the two test
ellipses, the sheared image of the base ellipse, and its quarter turn --
exactly six named paths.  fig4-1 .. fig4-6 draw the upper-half-plane phase
portraits of the two quadratic families at mu = 0.5, 1, 2 with flow arrows
computed from the vector field.  All sampling is fixed, so repeated emission
is byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .annulus import ShearParams, shear
from .errors import ConfigurationError
from .planar import Family, PlanarSystem, _field_raw, curve_rhs, crossing_ordinate, InvariantCurve
from .frames import TWO_PI

CANVAS = 800.0

# Figure parameter defaults; FIGURE_CAPTION_PARAMS below restates the caption
# table and the two are cross-checked at import time.
FIGURE_DEFAULTS = {
    "fig2-1": {"eps1": 0.05, "eps2": 0.4},
    "fig4-1": {"family": "f1", "mu": 0.5},
    "fig4-2": {"family": "f1", "mu": 1.0},
    "fig4-3": {"family": "f1", "mu": 2.0},
    "fig4-4": {"family": "f2", "mu": 0.5},
    "fig4-5": {"family": "f2", "mu": 1.0},
    "fig4-6": {"family": "f2", "mu": 2.0},
}

FIGURE_CAPTION_PARAMS = {
    "fig2-1": {"eps1": 0.05, "eps2": 0.4},
    "fig4-1": {"family": "f1", "mu": 0.5},
    "fig4-2": {"family": "f1", "mu": 1.0},
    "fig4-3": {"family": "f1", "mu": 2.0},
    "fig4-4": {"family": "f2", "mu": 0.5},
    "fig4-5": {"family": "f2", "mu": 1.0},
    "fig4-6": {"family": "f2", "mu": 2.0},
}

FIGURE_IDS = tuple(sorted(FIGURE_DEFAULTS))

# Level parameters drawn per portrait figure.
PORTRAIT_LEVELS = {
    "fig4-1": (-8.0, -2.0, -0.5, -0.125, 0.0, 0.5, 2.0),
    "fig4-2": (-2.0, -1.0, 0.0, 1.0, 2.0),
    "fig4-3": (0.5, 1.0, 2.0, 3.0, 4.0),
    "fig4-4": (0.5, 1.0, 2.0, 8.0),
    "fig4-5": (-2.0, -1.0, 0.0, 1.0, 2.0),
    "fig4-6": (-3.0, -2.0, -1.0, 0.0, 1.0, 2.0),
}


def _check_caption_table():
    if FIGURE_DEFAULTS != FIGURE_CAPTION_PARAMS:
        raise AssertionError("figure parameter defaults disagree with the caption table")


_check_caption_table()


@dataclass(frozen=True)
class FigureSpec:
    """A figure identifier plus its (caption-default) parameters."""

    id: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.id not in FIGURE_DEFAULTS:
            raise ConfigurationError(f"unknown figure id {self.id!r}; known: {', '.join(FIGURE_IDS)}")
        merged = dict(FIGURE_DEFAULTS[self.id])
        merged.update(self.params)
        object.__setattr__(self, "params", merged)


def _fmt(v: float) -> str:
    return f"{v:.3f}"


class _Svg:
    """Tiny deterministic SVG assembler with a data-to-pixel transform."""

    def __init__(self, x_range, y_range, scale):
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range
        self.scale = scale
        self.ox = 0.5 * (CANVAS - scale * (self.x1 - self.x0))
        self.oy = 0.5 * (CANVAS - scale * (self.y1 - self.y0))
        self.parts: list[str] = []

    def to_px(self, x, y):
        px = self.ox + (np.asarray(x, dtype=float) - self.x0) * self.scale
        py = CANVAS - self.oy - (np.asarray(y, dtype=float) - self.y0) * self.scale
        return px, py

    def path(self, pts: np.ndarray, path_id: str, color: str, width: float = 1.5, close: bool = False, dash: str = ""):
        px, py = self.to_px(pts[:, 0], pts[:, 1])
        d = "M " + " L ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(px, py))
        if close:
            d += " Z"
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<path id="{path_id}" d="{d}" fill="none" stroke="{color}" stroke-width="{width}"{dash_attr}/>'
        )

    def line(self, x1, y1, x2, y2, color: str = "#888888", width: float = 1.0, dash: str = ""):
        (a1, b1), (a2, b2) = zip(*[self.to_px(x1, y1), self.to_px(x2, y2)])
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{_fmt(float(a1))}" y1="{_fmt(float(b1))}" x2="{_fmt(float(a2))}" y2="{_fmt(float(b2))}" '
            f'stroke="{color}" stroke-width="{width}"{dash_attr}/>'
        )

    def arrow(self, x, y, dx, dy, color: str, size: float = 8.0):
        """Triangle at (x, y) pointing along (dx, dy) in data coordinates."""
        norm = math.hypot(dx, dy)
        if norm == 0.0:
            return
        ux, uy = dx / norm, dy / norm
        px, py = self.to_px(x, y)
        px, py = float(px), float(py)
        # pixel direction: y axis flips
        vx, vy = ux, -uy
        nx, ny = -vy, vx
        tip = (px + vx * size, py + vy * size)
        left = (px - vx * size * 0.5 + nx * size * 0.45, py - vy * size * 0.5 + ny * size * 0.45)
        right = (px - vx * size * 0.5 - nx * size * 0.45, py - vy * size * 0.5 - ny * size * 0.45)
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (tip, left, right))
        self.parts.append(f'<polygon points="{pts}" fill="{color}"/>')

    def text(self, x, y, s: str, color: str = "#333333", size: int = 14, dx: float = 0.0, dy: float = 0.0):
        px, py = self.to_px(x, y)
        self.parts.append(
            f'<text x="{_fmt(float(px) + dx)}" y="{_fmt(float(py) + dy)}" font-size="{size}" '
            f'font-family="sans-serif" fill="{color}">{s}</text>'
        )

    def dot(self, x, y, r: float = 4.0, color: str = "#000000"):
        px, py = self.to_px(x, y)
        self.parts.append(f'<circle cx="{_fmt(float(px))}" cy="{_fmt(float(py))}" r="{r}" fill="{color}"/>')

    def render(self) -> str:
        body = "\n".join(self.parts)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(CANVAS)}" height="{int(CANVAS)}" '
            f'viewBox="0 0 {int(CANVAS)} {int(CANVAS)}">\n'
            f'<rect width="{int(CANVAS)}" height="{int(CANVAS)}" fill="#ffffff"/>\n'
            f"{body}\n</svg>\n"
        )


def _annulus_figure(params: dict) -> str:
    sp = ShearParams(params["eps1"], params["eps2"])
    g = shear(sp)
    svg = _Svg((-5.5, 5.5), (-5.5, 5.5), CANVAS / 11.0)

    # axes
    svg.line(-5.5, 0.0, 5.5, 0.0, color="#bbbbbb")
    svg.line(0.0, -5.5, 0.0, 5.5, color="#bbbbbb")

    t = np.arange(1024) * (TWO_PI / 1024)
    circle = np.column_stack([np.cos(t), np.sin(t)])
    svg.path(circle, "boundary-inner", "#555555", width=1.2, close=True)
    svg.path(5.0 * circle, "boundary-outer", "#555555", width=1.2, close=True)

    base = np.column_stack([2.0 * np.cos(t), 4.0 * np.sin(t)])
    rotated = np.column_stack([-base[:, 1], base[:, 0]])
    sx, sy = g.apply_xy(base[:, 0], base[:, 1])
    sheared = np.column_stack([sx, sy])
    sheared_rot = np.column_stack([-sheared[:, 1], sheared[:, 0]])

    svg.path(base, "base-ellipse", "#1f77b4", close=True)
    svg.path(rotated, "rotated-ellipse", "#2ca02c", close=True)
    svg.path(sheared, "sheared-image", "#d62728", close=True)
    svg.path(sheared_rot, "rotated-sheared-image", "#9467bd", close=True)

    svg.text(0.15, 4.1, "base ellipse", color="#1f77b4")
    svg.text(4.05, 0.6, "rotated ellipse", color="#2ca02c")
    svg.text(0.15, 3.2, "sheared image", color="#d62728")
    svg.text(-3.4, -0.75, "its quarter turn", color="#9467bd")
    return svg.render()


def _portrait_pieces(family: Family, mu: float, a: float, y_max: float, x_max: float):
    """Polyline pieces (in data coordinates) of one level set."""
    pieces = []

    def clip(xs, ys):
        keep = np.abs(xs) <= x_max * 1.05
        return np.column_stack([xs[keep], ys[keep]])

    curve = InvariantCurve(family, mu, a)
    is_loop = (family is Family.F1) and (abs(mu - 1.0) <= 1e-12 or a < 0.0 or mu > 1.0)
    crosses = (family is Family.F2) and (abs(mu - 1.0) <= 1e-12 or a < 0.0 or mu < 1.0)
    if is_loop:
        y_top = crossing_ordinate(curve)
        y = np.linspace(0.0, y_top, 600)
        rhs = np.maximum(curve_rhs(family, mu, a, y), 0.0)
        x = np.sqrt(rhs)
        loop = np.concatenate([np.column_stack([x, y]), np.column_stack([-x[::-1], y[::-1]])])
        pieces.append(("loop", loop, y_top))
    elif crosses:
        y_cross = crossing_ordinate(curve)
        if y_cross < y_max:
            y = np.linspace(y_cross, y_max, 400)
            rhs = np.maximum(curve_rhs(family, mu, a, y), 0.0)
            x = np.sqrt(rhs)
            arc = np.concatenate([np.column_stack([-x[::-1], y[::-1]]), np.column_stack([x, y])])
            pieces.append(("through", clip(arc[:, 0], arc[:, 1]), y_cross))
    else:
        y = np.linspace(0.0, y_max, 400)
        rhs = np.maximum(curve_rhs(family, mu, a, y), 0.0)
        x = np.sqrt(rhs)
        pieces.append(("branch-neg", clip(-x, y), None))
        pieces.append(("branch-pos", clip(x, y), None))
    return pieces


_PORTRAIT_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b")


def _portrait_figure(fig_id: str, params: dict) -> str:
    family = Family(params["family"])
    mu = float(params["mu"])
    sys = PlanarSystem(family, mu)
    x_max, y_max = 4.0, 4.0
    svg = _Svg((-x_max, x_max), (0.0, y_max), CANVAS / (2.0 * x_max))

    # half-plane boundary and vertical axis
    svg.line(-x_max, 0.0, x_max, 0.0, color="#444444", width=1.4)
    svg.line(0.0, 0.0, 0.0, y_max, color="#bbbbbb", dash="4,4")
    for xt in range(-int(x_max), int(x_max) + 1):
        svg.line(xt, 0.0, xt, -0.06, color="#444444")
    svg.text(x_max - 0.35, 0.0, "x", dy=20.0)
    svg.text(0.0, y_max - 0.12, "y", dx=8.0)

    for idx, a in enumerate(PORTRAIT_LEVELS[fig_id]):
        color = _PORTRAIT_COLORS[idx % len(_PORTRAIT_COLORS)]
        for kind, pts, y_ref in _portrait_pieces(family, mu, a, y_max, x_max):
            if pts.shape[0] < 2:
                continue
            svg.path(pts, f"level-a-{a:g}-{kind}", color, width=1.4)
            for frac in (0.3, 0.75):
                i = int(frac * (pts.shape[0] - 1))
                x, y = pts[i]
                fx, fy = _field_raw(sys, x, y)
                svg.arrow(x, y, float(fx), float(fy), color)
            if y_ref is not None and y_ref <= y_max:
                svg.text(0.0, y_ref, f"a={a:g}", color=color, dx=6.0, dy=-4.0)
            elif y_ref is None and pts.shape[0] > 10:
                x, y = pts[-5]
                if abs(x) < x_max and y < y_max:
                    svg.text(x, y, f"a={a:g}", color=color, dx=6.0)

    # boundary rays flow outward from the origin: x' = x^2 on y = 0
    for x_arrow in (-2.0, 2.0):
        fx, fy = _field_raw(sys, x_arrow, 0.0)
        svg.arrow(x_arrow, 0.0, float(fx), float(fy), "#444444")
    svg.dot(0.0, 0.0, r=4.5)
    svg.text(-x_max + 0.1, y_max - 0.12, f"family {family.value}, mu={mu:g}")
    return svg.render()


def emit_figure(spec: FigureSpec, path) -> Path:
    """Write one figure as a standalone SVG; deterministic byte-for-byte."""
    if spec.id == "fig2-1":
        content = _annulus_figure(spec.params)
    else:
        content = _portrait_figure(spec.id, spec.params)
    path = Path(path)
    try:
        path.write_text(content, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write figure to {path}: {exc}") from exc
    return path


def emit_all_figures(out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return [emit_figure(FigureSpec(fig_id), out_dir / f"{fig_id}.svg") for fig_id in FIGURE_IDS]
