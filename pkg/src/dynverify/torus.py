"""A displaceable non-Lagrangian torus in the cotangent bundle of the n-torus.

The torus is the graph p = p0 + eps * f(q1) over the angle variables, with
profile f = (sin^k q1, cos q1, 0, ..., 0) and k in {1, 3}.  The canonical
2-form restricted to the graph has the single independent entry
-eps*sin(q1) dq1^dq2, so the torus is nowhere close to Lagrangian for most
angles yet displaceable: any rotation of the angles by v with v1 not a
multiple of 2*pi moves it entirely off itself, and it clears the reference
torus {p = p0} because sin^k and cos never vanish together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError

TWO_PI = 2.0 * math.pi
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TorusSpec:
    """Embedded torus p = p0 + eps * (sin^k q1, cos q1, 0, ...)."""

    n: int
    p0: tuple
    eps: float
    k: int

    def __post_init__(self):
        if self.n < 2:
            raise ConfigurationError("torus dimension must be at least 2")
        if self.eps == 0.0:
            raise ConfigurationError("amplitude eps must be nonzero")
        if self.k not in (1, 3):
            raise ConfigurationError("profile exponent k must be 1 or 3")
        p0 = tuple(float(v) for v in np.atleast_1d(np.asarray(self.p0, dtype=float)))
        if len(p0) != self.n:
            raise DomainError(f"p0 must have length n={self.n}")
        object.__setattr__(self, "p0", p0)

    @property
    def p0_array(self) -> np.ndarray:
        return np.asarray(self.p0, dtype=float)


@dataclass(frozen=True)
class RotationSpec:
    """Angle rotation (p, q) -> (p, q + v)."""

    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(float(x) for x in np.atleast_1d(np.asarray(self.v, dtype=float))))

    @property
    def v_array(self) -> np.ndarray:
        return np.asarray(self.v, dtype=float)


@dataclass(frozen=True)
class PullbackForm:
    """Coefficients of the restricted 2-form in the dqi^dqj basis."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError("form matrix must be square")
        if not np.array_equal(m, -m.T):
            raise DomainError("form matrix must be exactly antisymmetric")
        mask = np.ones_like(m, dtype=bool)
        mask[0, 1] = mask[1, 0] = False
        if np.any(m[mask] != 0.0):
            raise DomainError("only the (1,2)/(2,1) entries may be nonzero for this family")
        object.__setattr__(self, "entries", m)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries)))


def profile(spec: TorusSpec, q1) -> np.ndarray:
    """Profile vector f(q1); broadcasts q1 over the leading axis."""
    q1 = np.asarray(q1, dtype=float)
    out = np.zeros(q1.shape + (spec.n,))
    out[..., 0] = np.sin(q1) ** spec.k
    out[..., 1] = np.cos(q1)
    return out


def profile_prime(spec: TorusSpec, q1) -> np.ndarray:
    q1 = np.asarray(q1, dtype=float)
    out = np.zeros(q1.shape + (spec.n,))
    out[..., 0] = spec.k * np.sin(q1) ** (spec.k - 1) * np.cos(q1)
    out[..., 1] = -np.sin(q1)
    return out


def embed(spec: TorusSpec, q) -> np.ndarray:
    """Momentum vector of the torus point over angles q."""
    q = np.asarray(q, dtype=float)
    if q.shape[-1] != spec.n:
        raise DomainError(f"angle vector must have length n={spec.n}")
    return spec.p0_array + spec.eps * profile(spec, q[..., 0])


def pullback_form(spec: TorusSpec, q) -> PullbackForm:
    """Restriction of the canonical 2-form to the torus at angles q."""
    q = np.asarray(q, dtype=float)
    if q.shape != (spec.n,):
        raise DomainError(f"angle vector must have length n={spec.n}")
    m = np.zeros((spec.n, spec.n))
    m[0, 1] = -spec.eps * math.sin(q[0])
    m[1, 0] = -m[0, 1]
    return PullbackForm(m)


def finite_difference_pullback(spec: TorusSpec, q, step: float = 1e-5) -> np.ndarray:
    """Pullback entries from central differences of the embedding.

    Lifting the coordinate vectors dq_i through the graph gives
    omega(e_i, e_j) = dp_j/dq_i - dp_i/dq_j; this is the independent route
    against which the closed-form entries are cross-checked.
    """
    q = np.asarray(q, dtype=float)
    jac = np.zeros((spec.n, spec.n))
    for i in range(spec.n):
        dq = np.zeros(spec.n)
        dq[i] = step
        jac[i] = (embed(spec, q + dq) - embed(spec, q - dq)) / (2.0 * step)
    return jac - jac.T


def lagrangian_defect(spec: TorusSpec, grid_n: int = 256) -> float:
    """Largest pullback entry over a q1 grid; |eps| for this family."""
    if grid_n < 8:
        raise DomainError("grid_n must be at least 8")
    q1 = np.arange(grid_n) * (TWO_PI / grid_n)
    return float(np.abs(spec.eps) * np.max(np.abs(np.sin(q1))))


def golden_section_min(fn, lo: float, hi: float, tol: float = 1e-12) -> tuple[float, float]:
    """Golden-section minimizer on [lo, hi]; returns (argmin, value)."""
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def _periodic_grid_min(fn, grid_n: int) -> tuple[float, float]:
    """Minimize a smooth 2*pi-periodic function: grid scan + golden refinement."""
    q = np.arange(grid_n) * (TWO_PI / grid_n)
    vals = fn(q)
    i = int(np.argmin(vals))
    h = TWO_PI / grid_n
    x, v = golden_section_min(lambda t: float(fn(np.asarray([t]))[0]), q[i] - h, q[i] + h)
    return x, min(v, float(vals[i]))


def displacement_margin(spec: TorusSpec, rot: RotationSpec, grid_n: int = 1024) -> float:
    """Minimum momentum gap between the torus and its rotated image.

    Positive exactly when the rotation angle v1 is not a multiple of 2*pi; the
    gap is |eps| * min_q1 ||f(q1) - f(q1 - v1)||.
    """
    if grid_n < 64:
        raise DomainError("grid_n must be at least 64")
    if len(rot.v) != spec.n:
        raise DomainError("rotation vector length must match the torus dimension")
    v1 = rot.v[0]

    def gap(q1):
        return np.linalg.norm(profile(spec, q1) - profile(spec, q1 - v1), axis=-1)

    _, val = _periodic_grid_min(gap, grid_n)
    return abs(spec.eps) * float(val)


def zero_section_margin(spec: TorusSpec, grid_n: int = 1024) -> float:
    """Minimum momentum gap between the torus and the reference torus {p = p0}."""
    if grid_n < 64:
        raise DomainError("grid_n must be at least 64")

    def norm(q1):
        return np.linalg.norm(profile(spec, q1), axis=-1)

    _, val = _periodic_grid_min(norm, grid_n)
    return abs(spec.eps) * float(val)


def rotation_tangency_residual(spec: TorusSpec, rot: RotationSpec, q1: float) -> float:
    """How far the constant rotation field is from tangency at angle q1.

    The tangent space of the graph forces the field's p-component to be
    eps*v1*f'(q1), so the residual |v1|*|eps|*||f'(q1)|| vanishes exactly at
    the tangency angles.
    """
    if len(rot.v) != spec.n:
        raise DomainError("rotation vector length must match the torus dimension")
    fp = profile_prime(spec, np.asarray(q1, dtype=float))
    return float(abs(rot.v[0]) * abs(spec.eps) * np.linalg.norm(fp, axis=-1))


def hamiltonian_tangency_residual(spec: TorusSpec, a: float, b: float, q1: float) -> float:
    """Tangency residual of the field a*d/dq1 + b*cos(q1)*d/dp1 (cubic profile only)."""
    if spec.k != 3:
        raise ConfigurationError("the explicit transverse field is defined for k = 3 only")
    fp = profile_prime(spec, float(q1))
    r1 = spec.eps * a * fp[0] - b * math.cos(q1)
    r2 = spec.eps * a * fp[1]
    return float(math.hypot(r1, r2))


def rotation_flow(rot: RotationSpec, t: float, q) -> np.ndarray:
    """Time-t flow of the constant field v*d/dq: rotation of the angles by t*v."""
    q = np.asarray(q, dtype=float)
    return np.mod(q + t * rot.v_array, TWO_PI)


def residual_minima(spec: TorusSpec, rot: RotationSpec, grid_n: int = 2048) -> list[tuple[float, float]]:
    """Local minima of the rotation tangency residual over one period.

    Returns (q1, residual) pairs refined by golden section; the near-zero ones
    locate the tangency angles.
    """
    q = np.arange(grid_n) * (TWO_PI / grid_n)
    fp = profile_prime(spec, q)
    vals = abs(rot.v[0]) * abs(spec.eps) * np.linalg.norm(fp, axis=-1)
    is_min = (vals < np.roll(vals, 1)) & (vals <= np.roll(vals, -1))
    h = TWO_PI / grid_n
    out = []
    for i in np.nonzero(is_min)[0]:
        x, v = golden_section_min(lambda t: rotation_tangency_residual(spec, rot, t), q[i] - h, q[i] + h)
        out.append((float(np.mod(x, TWO_PI)), float(v)))
    return out
