"""Diffeomorphisms of the closed annulus and the displacement certification.

The construction composes a quarter turn with a two-parameter shear of the
annulus.  The shear moves radii along the profile polynomial
``(rho-1)(rho-3)^2(rho-5)`` and angles along ``sin(2*theta)``; within the
parameter bounds both one-dimensional maps are monotone, so the shear is a
diffeomorphism fixing the boundary circles.  Conjugating the quarter turn by
the shear yields a map that still meets every core-homotopic curve it moves,
while the composition of the two displaces an explicit pair of ellipses
strictly off themselves -- the fact certified by ``verify_counterexample``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import ClosedCurve, curve_from_generator, ellipse_curve, min_separation, points_inside, refine_params
from .errors import ConfigurationError, DomainError, NumericalError
from .frames import TWO_PI, frame_to_xy, xy_to_frame
from .report import CheckReport, make_check

EPS1_MAX = 1.0 / 16.0
EPS2_MAX = 0.5
_ROOT_TOL = 1e-12
DEFAULT_RESOLUTION = 4096
DEFAULT_CHORD_BOUND = 0.01
_MIN_CHORD_BOUND = 1e-6
_SEPARATION_FACTOR = 10.0  # separation must exceed this multiple of the chord bound

# Frame coordinates of the base ellipse's four vertices; the angular shear
# fixes these angles, the radial shear moves both radii strictly inward.
BASE_ELLIPSE_VERTICES = ((7.0 / 5.0, 0.0), (7.0 / 5.0, math.pi), (23.0 / 5.0, math.pi / 2.0), (23.0 / 5.0, 3.0 * math.pi / 2.0))


def radial_profile(rho):
    """Shear profile in the radial direction; vanishes at rho = 1, 3, 5."""
    rho = np.asarray(rho, dtype=float)
    return (rho - 1.0) * (rho - 3.0) ** 2 * (rho - 5.0)


def radial_profile_prime(rho):
    rho = np.asarray(rho, dtype=float)
    return 4.0 * (rho - 3.0) * (rho * rho - 6.0 * rho + 7.0)


def angular_profile(theta):
    """Shear profile in the angular direction."""
    return np.sin(2.0 * np.asarray(theta, dtype=float))


def angular_profile_prime(theta):
    return 2.0 * np.cos(2.0 * np.asarray(theta, dtype=float))


@dataclass(frozen=True)
class ShearParams:
    """Shear amplitudes; the bounds keep both coordinate maps monotone."""

    eps1: float
    eps2: float

    def __post_init__(self):
        if not 0.0 < self.eps1 < EPS1_MAX:
            raise ConfigurationError(f"eps1={self.eps1} outside (0, 1/16)")
        if not 0.0 < self.eps2 < EPS2_MAX:
            raise ConfigurationError(f"eps2={self.eps2} outside (0, 1/2)")


def _invert_monotone(fn, fn_prime, target, lo, hi, tol=_ROOT_TOL):
    """Invert a strictly increasing map on [lo, hi] by bisection + Newton."""
    lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    width = float(np.max(hi - lo))
    n_iter = max(1, int(math.ceil(math.log2(max(width, tol) / tol))))
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        below = fn(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    x = 0.5 * (lo + hi)
    for _ in range(2):
        d = fn_prime(x)
        x = x - (fn(x) - target) / np.where(d != 0.0, d, 1.0)
        x = np.clip(x, lo - tol, hi + tol)
    return x


class AnnulusMap:
    """Base interface: vectorized action on Cartesian coordinates."""

    def apply_xy(self, x, y):
        raise NotImplementedError

    def apply_inverse_xy(self, x, y):
        raise NotImplementedError

    def apply(self, pt):
        """Apply to a single point object with .x/.y; returns AnnulusPoint."""
        from .frames import AnnulusPoint

        x, y = self.apply_xy(np.asarray([pt.x]), np.asarray([pt.y]))
        return AnnulusPoint(float(x[0]), float(y[0]))

    def inverse(self) -> "AnnulusMap":
        return InverseMap(self)


@dataclass(frozen=True)
class QuarterTurn(AnnulusMap):
    """(x, y) -> (-y, x)."""

    def apply_xy(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return -y, x.copy()

    def apply_inverse_xy(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return y.copy(), -x


@dataclass(frozen=True)
class RadialShear(AnnulusMap):
    """rho -> rho + eps1 * profile(rho) at fixed angle."""

    params: ShearParams

    def _forward_rho(self, rho):
        return rho + self.params.eps1 * radial_profile(rho)

    def _inverse_rho(self, rho_image):
        return _invert_monotone(
            self._forward_rho,
            lambda r: 1.0 + self.params.eps1 * radial_profile_prime(r),
            rho_image,
            1.0,
            5.0,
        )

    def apply_xy(self, x, y):
        rho, theta = xy_to_frame(x, y)
        return frame_to_xy(np.clip(self._forward_rho(rho), 1.0, 5.0), theta)

    def apply_inverse_xy(self, x, y):
        rho, theta = xy_to_frame(x, y)
        return frame_to_xy(np.clip(self._inverse_rho(rho), 1.0, 5.0), theta)


@dataclass(frozen=True)
class AngularShear(AnnulusMap):
    """theta -> theta + eps2 * sin(2 theta) at fixed radius."""

    params: ShearParams

    def _forward_theta(self, theta):
        return theta + self.params.eps2 * angular_profile(theta)

    def _inverse_theta(self, theta_image):
        # The shift never exceeds eps2, so [image - eps2, image + eps2]
        # brackets the periodic preimage.
        eps2 = self.params.eps2
        return _invert_monotone(
            self._forward_theta,
            lambda t: 1.0 + eps2 * angular_profile_prime(t),
            theta_image,
            theta_image - eps2,
            theta_image + eps2,
        )

    def apply_xy(self, x, y):
        rho, theta = xy_to_frame(x, y)
        return frame_to_xy(rho, self._forward_theta(theta))

    def apply_inverse_xy(self, x, y):
        rho, theta = xy_to_frame(x, y)
        return frame_to_xy(rho, self._inverse_theta(theta))


@dataclass(frozen=True)
class Shear(AnnulusMap):
    """Radial and angular shears applied together (they commute)."""

    params: ShearParams

    def apply_xy(self, x, y):
        rho, theta = xy_to_frame(x, y)
        radial = RadialShear(self.params)
        angular = AngularShear(self.params)
        return frame_to_xy(np.clip(radial._forward_rho(rho), 1.0, 5.0), angular._forward_theta(theta))

    def apply_inverse_xy(self, x, y):
        rho, theta = xy_to_frame(x, y)
        radial = RadialShear(self.params)
        angular = AngularShear(self.params)
        return frame_to_xy(np.clip(radial._inverse_rho(rho), 1.0, 5.0), angular._inverse_theta(theta))


@dataclass(frozen=True)
class Composite(AnnulusMap):
    """Maps applied left to right: Composite((f, g)) sends x to g(f(x))."""

    maps: tuple

    def apply_xy(self, x, y):
        for m in self.maps:
            x, y = m.apply_xy(x, y)
        return x, y

    def apply_inverse_xy(self, x, y):
        for m in reversed(self.maps):
            x, y = m.apply_inverse_xy(x, y)
        return x, y


@dataclass(frozen=True)
class InverseMap(AnnulusMap):
    inner: AnnulusMap

    def apply_xy(self, x, y):
        return self.inner.apply_inverse_xy(x, y)

    def apply_inverse_xy(self, x, y):
        return self.inner.apply_xy(x, y)

    def inverse(self) -> AnnulusMap:
        return self.inner


def shear(params: ShearParams) -> Shear:
    return Shear(params)


def conjugated_turn(params: ShearParams) -> AnnulusMap:
    """The quarter turn conjugated by the shear; shares its curve-meeting property."""
    g = Shear(params)
    return Composite((InverseMap(g), QuarterTurn(), g))


def displacing_map(params: ShearParams) -> AnnulusMap:
    """Quarter turn composed after the conjugated turn; displaces both test ellipses."""
    return Composite((conjugated_turn(params), QuarterTurn()))


def apply_map(mapping: AnnulusMap, pt):
    """Apply a map to a single annulus point."""
    return mapping.apply(pt)


def apply_conjugated_turn(params: ShearParams, pt):
    """Single-point evaluation of the conjugated turn."""
    return conjugated_turn(params).apply(pt)


def push_curve(mapping: AnnulusMap, curve: ClosedCurve, chord_bound: float | None = None) -> ClosedCurve:
    """Image of a curve under a map, re-refined to the chord bound.

    The image is sampled by composing the map with the source generator, so
    refinement inserts genuinely new image points rather than chord midpoints.
    """
    if chord_bound is None:
        chord_bound = max(curve.max_chord, 1e-12)
    if curve.generator is not None:
        src = curve.generator

        def gen(t):
            pts = np.asarray(src(t), dtype=float)
            x, y = mapping.apply_xy(pts[:, 0], pts[:, 1])
            return np.column_stack([x, y])

        params = refine_params(gen, curve.params, chord_bound)
        return ClosedCurve(gen(params), params, generator=gen)
    x, y = mapping.apply_xy(curve.samples[:, 0], curve.samples[:, 1])
    return ClosedCurve(np.column_stack([x, y]), curve.params)


def base_ellipse(n: int = DEFAULT_RESOLUTION, chord_bound: float = DEFAULT_CHORD_BOUND) -> ClosedCurve:
    """The test ellipse x^2/4 + y^2/16 = 1."""
    return ellipse_curve(2.0, 4.0, n=n, chord_bound=chord_bound)


def rotated_ellipse(n: int = DEFAULT_RESOLUTION, chord_bound: float = DEFAULT_CHORD_BOUND) -> ClosedCurve:
    """The quarter-turned test ellipse x^2/16 + y^2/4 = 1, the level set {rho = 3}."""
    return ellipse_curve(4.0, 2.0, n=n, chord_bound=chord_bound)


def base_ellipse_value(x, y):
    """Level function of the base ellipse: < 1 strictly inside."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x * x / 4.0 + y * y / 16.0


def rotated_ellipse_value(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x * x / 16.0 + y * y / 4.0


def _thinned(samples: np.ndarray, cap: int = 1024) -> np.ndarray:
    if samples.shape[0] <= cap:
        return samples
    idx = np.linspace(0, samples.shape[0] - 1, cap).astype(int)
    return samples[idx]


def verify_counterexample(params: ShearParams, resolution: int = DEFAULT_RESOLUTION) -> list[CheckReport]:
    """Certify the four displacement claims behind the construction.

    Checks: (i) the sheared image of the base ellipse lies strictly inside it;
    (ii) the displacing map sends the rotated ellipse strictly inside itself;
    (iii) it sends the sheared image strictly outside itself; (iv) the four
    vertex images move strictly inward.  Separations must exceed 10x the
    refinement bound; when the margins are smaller than that (tiny shear
    amplitudes) the curves are re-refined until the certificate applies.
    """
    if resolution < 256:
        raise ConfigurationError("resolution must be at least 256")
    g = shear(params)
    rs = displacing_map(params)

    def build(bound):
        gamma = base_ellipse(n=resolution, chord_bound=bound)
        r_gamma = rotated_ellipse(n=resolution, chord_bound=bound)
        delta = push_curve(g, gamma, chord_bound=bound)
        rs_r_gamma = push_curve(rs, r_gamma, chord_bound=bound)
        rs_delta = push_curve(rs, delta, chord_bound=bound)
        return gamma, r_gamma, delta, rs_r_gamma, rs_delta

    bound = DEFAULT_CHORD_BOUND
    for _ in range(4):
        gamma, r_gamma, delta, rs_r_gamma, rs_delta = build(bound)
        actual_bound = max(c.max_chord for c in (gamma, r_gamma, delta, rs_r_gamma, rs_delta))
        sep_inside = min_separation(delta, gamma)
        sep_contract = min_separation(rs_r_gamma, r_gamma)
        sep_expand = min_separation(rs_delta, delta)
        worst = min(sep_inside, sep_contract, sep_expand)
        if worst > _SEPARATION_FACTOR * actual_bound:
            break
        needed = worst / (2.0 * _SEPARATION_FACTOR)
        if needed < _MIN_CHORD_BOUND or needed >= bound:
            break
        bound = needed
    tolerance = _SEPARATION_FACTOR * actual_bound

    reports = []
    inside_margin = float(np.min(1.0 - base_ellipse_value(delta.samples[:, 0], delta.samples[:, 1])))
    all_inside = inside_margin > 0.0
    reports.append(
        make_check(
            "annulus.shear-image-inside-base-ellipse",
            sep_inside if all_inside else -sep_inside,
            tolerance,
            params={
                "eps1": params.eps1,
                "eps2": params.eps2,
                "samples": len(delta),
                "chord_bound": actual_bound,
                "min_level_margin": inside_margin,
            },
            notes="every image sample satisfies x^2/4 + y^2/16 < 1; margin is the curve separation",
        )
    )

    contract_margin = float(np.min(1.0 - rotated_ellipse_value(rs_r_gamma.samples[:, 0], rs_r_gamma.samples[:, 1])))
    all_contract = contract_margin > 0.0
    reports.append(
        make_check(
            "annulus.composition-contracts-rotated-ellipse",
            sep_contract if all_contract else -sep_contract,
            tolerance,
            params={
                "eps1": params.eps1,
                "eps2": params.eps2,
                "samples": len(rs_r_gamma),
                "chord_bound": actual_bound,
                "min_level_margin": contract_margin,
            },
            notes="the composition maps the rotated ellipse strictly inside itself",
        )
    )

    # The image of the sheared curve must land strictly outside it.  The two
    # polylines are disjoint (separation > 0), so one parity test per thinned
    # sample decides the side for the whole curve batch.
    probe = _thinned(rs_delta.samples)
    outside = ~points_inside(probe, delta, guard=False)
    all_outside = bool(np.all(outside)) and sep_expand > 0.0
    reports.append(
        make_check(
            "annulus.composition-expands-sheared-image",
            sep_expand if all_outside else -sep_expand,
            tolerance,
            params={
                "eps1": params.eps1,
                "eps2": params.eps2,
                "samples": len(rs_delta),
                "probed_samples": int(probe.shape[0]),
                "chord_bound": actual_bound,
            },
            notes="the composition maps the sheared image strictly outside itself",
        )
    )

    rho_v = np.array([v[0] for v in BASE_ELLIPSE_VERTICES])
    theta_v = np.array([v[1] for v in BASE_ELLIPSE_VERTICES])
    vx, vy = frame_to_xy(rho_v, theta_v)
    ix, iy = g.apply_xy(vx, vy)
    vertex_margin = float(np.min(1.0 - base_ellipse_value(ix, iy)))
    reports.append(
        make_check(
            "annulus.vertex-images-move-inward",
            vertex_margin,
            0.0,
            params={
                "eps1": params.eps1,
                "eps2": params.eps2,
                "vertex_rho": list(rho_v),
                "radial_shift": list(-params.eps1 * radial_profile(rho_v)),
            },
            notes="margin is min over the four vertices of 1 - (x^2/4 + y^2/16) at the image",
        )
    )
    return reports
