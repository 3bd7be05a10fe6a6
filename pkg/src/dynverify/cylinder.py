"""Action-form loop integrals on the cylinder (p, q mod 2*pi).

A loop is a callable mapping parameters t in [0, 2*pi] to arrays (p(t), q(t)),
where q is returned as a continuous lift: a loop winding once satisfies
q(2*pi) = q(0) + 2*pi.  The circulation of the action form p dq over such a
loop vanishes for every exact symplectomorphism of the cylinder, which is the
quantity the intersection-property argument rests on; translations in p have
circulation defect 2*pi*c.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NumericalError
from .frames import TWO_PI, canonical_angle
from dataclasses import dataclass

Loop = Callable[[np.ndarray], tuple]
CylinderMap = Callable[[np.ndarray, np.ndarray], tuple]

QUADRATURE_TOL = 1e-8
_CLOSURE_TOL = 1e-9


@dataclass(frozen=True)
class CylinderPoint:
    """A point of the cylinder with the angle stored canonically."""

    p: float
    q: float

    def __post_init__(self):
        object.__setattr__(self, "q", float(canonical_angle(self.q)))


def constant_momentum_loop(p0: float) -> Loop:
    """The loop {p = p0} traversed once."""

    def loop(t):
        t = np.asarray(t, dtype=float)
        return np.full_like(t, p0), t.copy()

    return loop


def graph_loop(fn: Callable[[np.ndarray], np.ndarray]) -> Loop:
    """The loop {p = fn(q)} traversed once; fn must be 2*pi-periodic."""

    def loop(t):
        t = np.asarray(t, dtype=float)
        return np.asarray(fn(t), dtype=float), t.copy()

    return loop


def twisted_rotation(v: Callable[[np.ndarray], np.ndarray]) -> CylinderMap:
    """The map (p, q) -> (p, q + v(p)); an exact symplectomorphism."""

    def apply(p, q):
        p = np.asarray(p, dtype=float)
        return p.copy(), q + np.asarray(v(p), dtype=float)

    return apply


def momentum_translation(c: float) -> CylinderMap:
    """The map (p, q) -> (p + c, q); symplectic but not exact for c != 0."""

    def apply(p, q):
        return np.asarray(p, dtype=float) + c, np.asarray(q, dtype=float).copy()

    return apply


def compose_maps(*maps: CylinderMap) -> CylinderMap:
    """Compose cylinder maps, applied left to right."""

    def apply(p, q):
        for m in maps:
            p, q = m(p, q)
        return p, q

    return apply


def map_loop(mapping: CylinderMap, loop: Loop) -> Loop:
    """The image loop t -> mapping(loop(t))."""

    def image(t):
        p, q = loop(np.asarray(t, dtype=float))
        return mapping(p, q)

    return image


def loop_action_integral(loop: Loop, tol: float = QUADRATURE_TOL, n0: int = 64, max_doublings: int = 18) -> float:
    """Circulation of p dq over a closed loop winding once in q.

    Trapezoidal sums over a doubling sample count until two successive values
    agree within ``tol``; for smooth loops the convergence is spectral.
    """
    if tol <= 0.0:
        raise DomainError("tol must be positive")

    def trapezoid(n):
        t = np.linspace(0.0, TWO_PI, n + 1)
        p, q = loop(t)
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        if abs(p[-1] - p[0]) > _CLOSURE_TOL:
            raise DomainError("loop is not closed in p")
        winding = (q[-1] - q[0]) / TWO_PI
        if abs(winding - 1.0) > _CLOSURE_TOL:
            raise DomainError(f"loop must wind once in q (got winding {winding})")
        dq = np.diff(q)
        return float(np.sum(0.5 * (p[:-1] + p[1:]) * dq))

    n = n0
    prev = trapezoid(n)
    for _ in range(max_doublings):
        n *= 2
        cur = trapezoid(n)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    raise NumericalError(f"loop integral did not converge to {tol} within {n} samples")


def exactness_defect(mapping: CylinderMap, loop: Loop, tol: float = QUADRATURE_TOL) -> float:
    """Circulation of the image loop minus circulation of the loop.

    Vanishes (within quadrature tolerance) for every exact symplectomorphism;
    equals 2*pi*c for the momentum translation by c.
    """
    return loop_action_integral(map_loop(mapping, loop), tol=tol) - loop_action_integral(loop, tol=tol)
