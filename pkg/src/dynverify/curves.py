"""Closed curves in the annulus: sampling, containment, and separation.

A curve is stored as a cyclic polyline together with the parameter values that
produced the samples.  Curves built from a generator callable can be refined
adaptively: segments whose chord exceeds the requested bound are bisected in
parameter space until the polyline resolves the curve.  The maximum chord
length is the curve's refinement bound and is the error scale quoted by every
containment and separation result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError, IndeterminateError, NumericalError
from .frames import INNER_RADIUS_SQ, MEMBERSHIP_TOL, OUTER_RADIUS_SQ, TWO_PI

# Default chord bound: 1e-3 of the annulus diameter (outer diameter 10).
DEFAULT_CHORD_BOUND = 0.01
_WINDING_TOL = 1e-6
_MAX_REFINE_ROUNDS = 60
_CHUNK = 262144  # pairwise work is chunked to keep temporaries small


def _as_points(samples) -> np.ndarray:
    pts = np.asarray(samples, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise DomainError("a closed curve needs an (N, 2) array with N >= 3")
    return pts


def _winding_number(pts: np.ndarray) -> float:
    ang = np.arctan2(pts[:, 1], pts[:, 0])
    d = np.diff(np.append(ang, ang[0]))
    d = np.mod(d + math.pi, TWO_PI) - math.pi
    return float(d.sum() / TWO_PI)


@dataclass(frozen=True)
class ClosedCurve:
    """Cyclic polyline homotopic to the core circle of the annulus.

    ``samples[i]`` corresponds to ``params[i]``; the segment from the last
    sample back to the first closes the loop.  ``generator`` maps an array of
    parameters in [0, 2*pi) to an (N, 2) array of points and enables
    refinement beyond the stored sampling.
    """

    samples: np.ndarray
    params: np.ndarray
    generator: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self):
        pts = _as_points(self.samples)
        par = np.asarray(self.params, dtype=float)
        if par.shape != (pts.shape[0],):
            raise DomainError("params must match samples")
        if np.any(np.diff(par) <= 0.0) or par[0] < 0.0 or par[-1] >= TWO_PI:
            raise DomainError("params must be strictly increasing in [0, 2*pi)")
        r2 = np.einsum("ij,ij->i", pts, pts)
        if np.any(r2 < INNER_RADIUS_SQ - MEMBERSHIP_TOL) or np.any(r2 > OUTER_RADIUS_SQ + MEMBERSHIP_TOL):
            raise DomainError("curve leaves the annulus")
        if abs(_winding_number(pts) - 1.0) > _WINDING_TOL:
            raise DomainError("curve does not wind once about the origin")
        object.__setattr__(self, "samples", pts)
        object.__setattr__(self, "params", par)

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def chords(self) -> np.ndarray:
        nxt = np.roll(self.samples, -1, axis=0)
        return np.hypot(nxt[:, 0] - self.samples[:, 0], nxt[:, 1] - self.samples[:, 1])

    @property
    def max_chord(self) -> float:
        """Refinement bound currently satisfied by this polyline."""
        return float(self.chords.max())

    def segments(self):
        return self.samples, np.roll(self.samples, -1, axis=0)

    def refined(self, chord_bound: float) -> "ClosedCurve":
        """Return a copy refined until every chord is at most ``chord_bound``."""
        if self.generator is None:
            raise NumericalError("cannot refine a curve without a generator")
        params = refine_params(self.generator, self.params, chord_bound)
        return ClosedCurve(self.generator(params), params, generator=self.generator)


def refine_params(generator, params: np.ndarray, chord_bound: float) -> np.ndarray:
    """Bisect parameter intervals until all chords are below the bound."""
    if chord_bound <= 0.0:
        raise DomainError("chord_bound must be positive")
    params = np.asarray(params, dtype=float)
    pts = np.asarray(generator(params), dtype=float)
    for _ in range(_MAX_REFINE_ROUNDS):
        nxt_pts = np.roll(pts, -1, axis=0)
        chords = np.hypot(nxt_pts[:, 0] - pts[:, 0], nxt_pts[:, 1] - pts[:, 1])
        bad = np.nonzero(chords > chord_bound)[0]
        if bad.size == 0:
            return params
        nxt_par = np.roll(params, -1)
        nxt_par[-1] += TWO_PI  # wrap the closing interval
        mids = np.mod(0.5 * (params[bad] + nxt_par[bad]), TWO_PI)
        params = np.sort(np.concatenate([params, mids]))
        pts = np.asarray(generator(params), dtype=float)
    raise NumericalError(f"refinement did not reach chord bound {chord_bound}")


def curve_from_generator(generator, n: int = 512, chord_bound: float = DEFAULT_CHORD_BOUND) -> ClosedCurve:
    """Sample ``generator`` uniformly and refine to the chord bound."""
    if n < 8:
        raise DomainError("need at least 8 initial samples")
    params = np.arange(n, dtype=float) * (TWO_PI / n)
    params = refine_params(generator, params, chord_bound)
    return ClosedCurve(generator(params), params, generator=generator)


def ellipse_curve(ax: float, ay: float, n: int = 512, chord_bound: float = DEFAULT_CHORD_BOUND) -> ClosedCurve:
    """The ellipse x^2/ax^2 + y^2/ay^2 = 1 as a closed curve."""

    def gen(t):
        return np.column_stack([ax * np.cos(t), ay * np.sin(t)])

    return curve_from_generator(gen, n=n, chord_bound=chord_bound)


def circle_curve(radius: float, n: int = 512, chord_bound: float = DEFAULT_CHORD_BOUND) -> ClosedCurve:
    return ellipse_curve(radius, radius, n=n, chord_bound=chord_bound)


def _point_segment_distance(px, py, ax, ay, bx, by):
    """Distance from points to segments, all arrays broadcast together."""
    dx = bx - ax
    dy = by - ay
    den = dx * dx + dy * dy
    t = ((px - ax) * dx + (py - ay) * dy) / np.where(den > 0.0, den, 1.0)
    t = np.clip(np.where(den > 0.0, t, 0.0), 0.0, 1.0)
    cx = ax + t * dx
    cy = ay + t * dy
    return np.hypot(px - cx, py - cy)


def points_to_curve_distance(points: np.ndarray, curve: ClosedCurve) -> np.ndarray:
    """Distance from each query point to the curve's polyline."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    a, b = curve.segments()
    out = np.full(pts.shape[0], np.inf)
    step = max(1, _CHUNK // max(1, len(curve)))
    for i in range(0, pts.shape[0], step):
        chunk = pts[i : i + step]
        d = _point_segment_distance(
            chunk[:, None, 0], chunk[:, None, 1], a[None, :, 0], a[None, :, 1], b[None, :, 0], b[None, :, 1]
        )
        out[i : i + step] = d.min(axis=1)
    return out


def points_inside(points: np.ndarray, curve: ClosedCurve, guard: bool = True) -> np.ndarray:
    """Even-odd containment test for an array of points.

    Because the curve winds once about the origin, its Jordan interior is the
    component of the complement containing the inner boundary circle.  Points
    closer to the polyline than its refinement bound are rejected when
    ``guard`` is set, since parity is unreliable there.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if guard:
        near = points_to_curve_distance(pts, curve) <= curve.max_chord
        if np.any(near):
            raise IndeterminateError(
                f"{int(near.sum())} query point(s) within the refinement bound of the curve; refine first"
            )
    a, b = curve.segments()
    inside = np.zeros(pts.shape[0], dtype=bool)
    step = max(1, _CHUNK // max(1, len(curve)))
    for i in range(0, pts.shape[0], step):
        px = pts[i : i + step, 0][:, None]
        py = pts[i : i + step, 1][:, None]
        ay = a[None, :, 1]
        by = b[None, :, 1]
        straddles = (ay > py) != (by > py)
        # x-coordinate where the segment crosses the horizontal through py
        with np.errstate(divide="ignore", invalid="ignore"):
            x_cross = a[None, :, 0] + (py - ay) * (b[None, :, 0] - a[None, :, 0]) / (by - ay)
        hits = straddles & (x_cross > px)
        inside[i : i + step] = (hits.sum(axis=1) % 2).astype(bool)
    return inside


def inside_curve(pt, curve: ClosedCurve) -> bool:
    """True iff the point lies on the inner-boundary side of the curve."""
    x, y = (pt.x, pt.y) if hasattr(pt, "x") else (float(pt[0]), float(pt[1]))
    return bool(points_inside(np.array([[x, y]]), curve)[0])


def _segment_pair_distance(p1, p2, q1, q2) -> np.ndarray:
    """Exact distance between segment pairs; zero for crossing pairs."""
    r = p2 - p1
    s = q2 - q1
    d1 = r[:, 0] * (q1[:, 1] - p1[:, 1]) - r[:, 1] * (q1[:, 0] - p1[:, 0])
    d2 = r[:, 0] * (q2[:, 1] - p1[:, 1]) - r[:, 1] * (q2[:, 0] - p1[:, 0])
    d3 = s[:, 0] * (p1[:, 1] - q1[:, 1]) - s[:, 1] * (p1[:, 0] - q1[:, 0])
    d4 = s[:, 0] * (p2[:, 1] - q1[:, 1]) - s[:, 1] * (p2[:, 0] - q1[:, 0])
    crossing = (d1 * d2 < 0.0) & (d3 * d4 < 0.0)
    d = _point_segment_distance(p1[:, 0], p1[:, 1], q1[:, 0], q1[:, 1], q2[:, 0], q2[:, 1])
    d = np.minimum(d, _point_segment_distance(p2[:, 0], p2[:, 1], q1[:, 0], q1[:, 1], q2[:, 0], q2[:, 1]))
    d = np.minimum(d, _point_segment_distance(q1[:, 0], q1[:, 1], p1[:, 0], p1[:, 1], p2[:, 0], p2[:, 1]))
    d = np.minimum(d, _point_segment_distance(q2[:, 0], q2[:, 1], p1[:, 0], p1[:, 1], p2[:, 0], p2[:, 1]))
    return np.where(crossing, 0.0, d)


def min_separation(a: ClosedCurve, b: ClosedCurve) -> float:
    """Minimum distance between two polylines over all segment pairs.

    A KD-tree on the sample points narrows the search: the optimal segment
    pair has endpoint samples within d0 + (ha + hb)/2 of each other, where d0
    is the minimum sample-to-sample distance and ha, hb are the refinement
    bounds.  Exact segment-segment distances are evaluated on the candidates
    only, so the result equals the full quadratic scan.
    """
    pa = a.samples
    pb = b.samples
    tree_a = cKDTree(pa)
    tree_b = cKDTree(pb)
    d0 = float(np.min(tree_b.query(pa, k=1)[0]))
    radius = d0 + 0.5 * (a.max_chord + b.max_chord) + 1e-12
    neighbors = tree_a.query_ball_tree(tree_b, radius)

    na = len(a)
    nb = len(b)
    ii = np.fromiter(
        (i for i, js in enumerate(neighbors) for _ in js), dtype=np.int64, count=sum(len(js) for js in neighbors)
    )
    jj = np.fromiter((j for js in neighbors for j in js), dtype=np.int64, count=ii.size)
    if ii.size == 0:
        raise NumericalError("no candidate pairs found")  # unreachable: d0 pair always qualifies

    # Each close sample pair contributes the four segment pairs touching it.
    seg_i = np.concatenate([ii, ii, (ii - 1) % na, (ii - 1) % na])
    seg_j = np.concatenate([jj, (jj - 1) % nb, jj, (jj - 1) % nb])
    uniq = np.unique(seg_i * nb + seg_j)
    seg_i = uniq // nb
    seg_j = uniq % nb

    a1, a2 = a.segments()
    b1, b2 = b.segments()
    best = np.inf
    for k in range(0, seg_i.size, _CHUNK):
        si = seg_i[k : k + _CHUNK]
        sj = seg_j[k : k + _CHUNK]
        d = _segment_pair_distance(a1[si], a2[si], b1[sj], b2[sj])
        best = min(best, float(d.min()))
        if best == 0.0:
            return 0.0
    return best


def hausdorff_distance(a: ClosedCurve, b: ClosedCurve) -> float:
    """Symmetric Hausdorff distance between the two polylines' samples."""
    d_ab = float(points_to_curve_distance(a.samples, b).max())
    d_ba = float(points_to_curve_distance(b.samples, a).max())
    return max(d_ab, d_ba)
