"""Elliptic coordinate frame on the closed annulus 1 <= x^2 + y^2 <= 25.

The frame (rho, theta) with rho in [1, 5] covers the annulus through

    x = sx(rho) * cos(theta),   y = sy(rho) * sin(theta),

where ``sx(rho) = (7 rho - 5) / (rho + 1)`` and ``sy(rho) = (rho + 5) / (7 - rho)``
are the x- and y-semi-axes of the level ellipse {rho = const}.  Both scales are
strictly increasing and agree with rho at the two boundary circles, so every
annulus point has a unique frame representation.  The inverse transform has no
closed form and is computed by monotone root finding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError

RHO_MIN = 1.0
RHO_MAX = 5.0
INNER_RADIUS_SQ = 1.0
OUTER_RADIUS_SQ = 25.0
TWO_PI = 2.0 * math.pi

# Points are accepted as annulus members up to this slack on x^2 + y^2; map
# images land on the boundary circles only up to roundoff.
MEMBERSHIP_TOL = 1e-9


def semi_axis_x(rho):
    """x-semi-axis of the level ellipse {rho = const}."""
    rho = np.asarray(rho, dtype=float)
    return (7.0 * rho - 5.0) / (rho + 1.0)


def semi_axis_y(rho):
    """y-semi-axis of the level ellipse {rho = const}."""
    rho = np.asarray(rho, dtype=float)
    return (rho + 5.0) / (7.0 - rho)


def semi_axis_x_prime(rho):
    rho = np.asarray(rho, dtype=float)
    return 12.0 / (rho + 1.0) ** 2


def semi_axis_y_prime(rho):
    rho = np.asarray(rho, dtype=float)
    return 12.0 / (7.0 - rho) ** 2


def canonical_angle(theta):
    """Reduce an angle to [0, 2*pi)."""
    return np.mod(theta, TWO_PI)


@dataclass(frozen=True)
class FramePoint:
    """A point of the annulus in frame coordinates (rho, theta)."""

    rho: float
    theta: float

    def __post_init__(self):
        if not (RHO_MIN - 1e-12 <= self.rho <= RHO_MAX + 1e-12):
            raise DomainError(f"rho={self.rho} outside [{RHO_MIN}, {RHO_MAX}]")
        object.__setattr__(self, "rho", float(min(max(self.rho, RHO_MIN), RHO_MAX)))
        object.__setattr__(self, "theta", float(canonical_angle(self.theta)))


@dataclass(frozen=True)
class AnnulusPoint:
    """A point of the closed annulus in Cartesian coordinates."""

    x: float
    y: float

    def __post_init__(self):
        r2 = self.x * self.x + self.y * self.y
        if not (INNER_RADIUS_SQ - MEMBERSHIP_TOL <= r2 <= OUTER_RADIUS_SQ + MEMBERSHIP_TOL):
            raise DomainError(f"point ({self.x}, {self.y}) outside the annulus: x^2+y^2={r2}")

    @property
    def radius_sq(self) -> float:
        return self.x * self.x + self.y * self.y


def frame_to_xy(rho, theta):
    """Array version of the frame-to-Cartesian transform."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < RHO_MIN - 1e-12) or np.any(rho > RHO_MAX + 1e-12):
        raise DomainError("rho outside [1, 5]")
    theta = np.asarray(theta, dtype=float)
    return semi_axis_x(rho) * np.cos(theta), semi_axis_y(rho) * np.sin(theta)


def xy_to_frame(x, y, tol: float = 1e-12):
    """Array version of the Cartesian-to-frame transform.

    rho is the unique root of h(rho) = x^2/sx^2 + y^2/sy^2 - 1, which is
    strictly decreasing in rho.  Bisection on [1, 5] down to ``tol`` is
    followed by two Newton steps.
    """
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = x * x + y * y
    if np.any(r2 < INNER_RADIUS_SQ - MEMBERSHIP_TOL) or np.any(r2 > OUTER_RADIUS_SQ + MEMBERSHIP_TOL):
        raise DomainError("point outside the annulus")

    def h(rho):
        return (x / semi_axis_x(rho)) ** 2 + (y / semi_axis_y(rho)) ** 2 - 1.0

    lo = np.full_like(r2, RHO_MIN)
    hi = np.full_like(r2, RHO_MAX)
    # h(1) = r^2 - 1 >= 0 and h(5) = r^2/25 - 1 <= 0 for annulus members, so
    # the bracket is valid up to the membership slack.
    n_iter = max(1, int(math.ceil(math.log2((RHO_MAX - RHO_MIN) / tol))))
    if n_iter > 200:
        raise NumericalError("bisection tolerance too tight")
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        positive = h(mid) > 0.0
        lo = np.where(positive, mid, lo)
        hi = np.where(positive, hi, mid)
    rho = 0.5 * (lo + hi)

    for _ in range(2):
        sx = semi_axis_x(rho)
        sy = semi_axis_y(rho)
        val = (x / sx) ** 2 + (y / sy) ** 2 - 1.0
        deriv = -2.0 * (x * x) * semi_axis_x_prime(rho) / sx**3 - 2.0 * (y * y) * semi_axis_y_prime(rho) / sy**3
        step = np.where(deriv != 0.0, val / np.where(deriv != 0.0, deriv, 1.0), 0.0)
        rho = np.clip(rho - step, RHO_MIN, RHO_MAX)

    theta = np.arctan2(y / semi_axis_y(rho), x / semi_axis_x(rho))
    return rho, canonical_angle(theta)


def frame_to_cartesian(fp: FramePoint) -> AnnulusPoint:
    """Map a frame point to Cartesian coordinates."""
    x, y = frame_to_xy(fp.rho, fp.theta)
    return AnnulusPoint(float(x), float(y))


def cartesian_to_frame(p: AnnulusPoint, tol: float = 1e-12) -> FramePoint:
    """Invert the frame at a single point; round-trips within ~10*tol."""
    rho, theta = xy_to_frame(p.x, p.y, tol=tol)
    return FramePoint(float(rho), float(theta))
