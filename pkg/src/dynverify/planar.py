"""Planar vector-field families with parameter-dependent phase portraits.

Three one-parameter families on the closed upper half-plane (the linear one on
the whole plane):

    linear:  x' = 3(x + y),   y' = -mu (4x + 3y)
    f1:      x' = x^2 - y^2,  y' = mu x y
    f2:      x' = x^2 + y^2,  y' = mu x y

The quadratic families conserve an explicit first integral on {y > 0} whose
level sets fall into finitely many phase-curve classes; the class inventory
changes as mu crosses 1, which is what the portrait signature certifies.
Both quadratic families are reversible under (x, y) -> (-x, y), are invariant
under homotheties, and induce x' = x^2 on the boundary line {y = 0}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ConfigurationError, DomainError, NumericalError, VerificationError

NEAR_EQUILIBRIUM_RADIUS = 1e-6
ESCAPE_RADIUS = 1e3
_BOUNDARY_CLASS_MU_TOL = 1e-12
_Y_FLOOR = 1e-8
PROBE_LEVELS = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)


class Family(str, Enum):
    LINEAR = "linear"
    F1 = "f1"
    F2 = "f2"


class EquilibriumType(Enum):
    UNSTABLE_NODE = "unstable node"
    UNSTABLE_DEGENERATE_NODE = "unstable degenerate node"
    UNSTABLE_FOCUS = "unstable focus"
    CENTER = "center"
    STABLE_FOCUS = "stable focus"
    STABLE_DEGENERATE_NODE = "stable degenerate node"
    STABLE_NODE = "stable node"


class PhaseCurveClass(Enum):
    HOMOCLINIC = "homoclinic"
    INFINITY_TO_INFINITY = "infinity to infinity"
    FORWARD_ASYMPTOTIC_TO_O = "forward asymptotic to O"
    BACKWARD_ASYMPTOTIC_TO_O = "backward asymptotic to O"
    BOUNDARY_RAY = "boundary ray"
    EQUILIBRIUM = "equilibrium"


class TerminalReason(Enum):
    REACHED_TIME = "reached time"
    NEAR_EQUILIBRIUM = "near equilibrium"
    ESCAPED = "escaped"
    BOUNDARY_HIT = "boundary hit"


@dataclass(frozen=True)
class PlanarSystem:
    family: Family
    mu: float
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not self.mu > 0.0:
            raise ConfigurationError("mu must be positive")


def _field_raw(sys: PlanarSystem, x, y):
    """Field components without domain checks (used by the integrator)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if sys.family is Family.LINEAR:
        fx = 3.0 * (x + y)
        fy = -sys.mu * (4.0 * x + 3.0 * y)
    elif sys.family is Family.F1:
        fx = x * x - y * y
        fy = sys.mu * x * y
    else:
        fx = x * x + y * y
        fy = sys.mu * x * y
    if sys.normalized:
        scale = 1.0 + x * x + y * y
        fx = fx / scale
        fy = fy / scale
    return fx, fy


def eval_field(sys: PlanarSystem, x, y):
    """Evaluate the right-hand side; the quadratic families require y >= 0."""
    if sys.family is not Family.LINEAR and np.any(np.asarray(y, dtype=float) < 0.0):
        raise DomainError("the quadratic families are defined on y >= 0")
    return _field_raw(sys, x, y)


def linear_discriminant(mu: float) -> float:
    return 3.0 * (3.0 * mu - 1.0) * (mu - 3.0)


def classify_linear(mu: float) -> tuple[EquilibriumType, tuple[complex, complex]]:
    """Equilibrium type of the linear family and its eigenvalue pair."""
    if not mu > 0.0:
        raise DomainError("mu must be positive")

    def at_boundary(b):
        return abs(mu - b) <= 1e-12 * b

    disc = linear_discriminant(mu)
    half_trace = 1.5 * (1.0 - mu)
    if disc >= 0.0:
        root = math.sqrt(disc)
        eig = (complex(half_trace + root / 2.0), complex(half_trace - root / 2.0))
    else:
        root = math.sqrt(-disc)
        eig = (complex(half_trace, root / 2.0), complex(half_trace, -root / 2.0))

    if at_boundary(1.0 / 3.0):
        return EquilibriumType.UNSTABLE_DEGENERATE_NODE, (complex(1.0), complex(1.0))
    if at_boundary(1.0):
        return EquilibriumType.CENTER, (complex(0.0, math.sqrt(3.0)), complex(0.0, -math.sqrt(3.0)))
    if at_boundary(3.0):
        return EquilibriumType.STABLE_DEGENERATE_NODE, (complex(-3.0), complex(-3.0))
    if mu < 1.0 / 3.0:
        return EquilibriumType.UNSTABLE_NODE, eig
    if mu < 1.0:
        return EquilibriumType.UNSTABLE_FOCUS, eig
    if mu < 3.0:
        return EquilibriumType.STABLE_FOCUS, eig
    return EquilibriumType.STABLE_NODE, eig


def _is_mu_one(mu: float) -> bool:
    return abs(mu - 1.0) <= _BOUNDARY_CLASS_MU_TOL


def first_integral(family, mu: float, x, y):
    """Conserved quantity of the quadratic families on {y > 0}.

    f1, mu != 1:  (x^2 - y^2/(1-mu)) * y^(-2/mu)
    f1, mu == 1:  x^2/y^2 + 2 ln y
    f2, mu != 1:  (x^2 - y^2/(mu-1)) * y^(-2/mu)
    f2, mu == 1:  x^2/y^2 - 2 ln y
    """
    family = Family(family)
    if family is Family.LINEAR:
        raise DomainError("the linear family has no first integral here")
    if not mu > 0.0:
        raise DomainError("mu must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0.0):
        raise DomainError("the first integral is defined for y > 0")
    if _is_mu_one(mu):
        log_part = 2.0 * np.log(y)
        return x * x / (y * y) + (log_part if family is Family.F1 else -log_part)
    denom = (1.0 - mu) if family is Family.F1 else (mu - 1.0)
    return (x * x - y * y / denom) * y ** (-2.0 / mu)


def curve_rhs(family, mu: float, a: float, y):
    """x^2 as a function of y on the invariant level set with parameter a."""
    family = Family(family)
    y = np.asarray(y, dtype=float)
    if np.any(y < 0.0):
        raise DomainError("curves live in y >= 0")
    if _is_mu_one(mu):
        # convention: y^2 ln y -> 0 as y -> 0
        with np.errstate(divide="ignore", invalid="ignore"):
            log_term = np.where(y > 0.0, np.log(np.where(y > 0.0, y, 1.0)), 0.0)
        sign = -2.0 if family is Family.F1 else 2.0
        return y * y * (a + sign * log_term)
    denom = (1.0 - mu) if family is Family.F1 else (mu - 1.0)
    return a * y ** (2.0 / mu) + y * y / denom


@dataclass(frozen=True)
class InvariantCurve:
    """A level set of the first integral; admissibility depends on family and mu."""

    family: Family
    mu: float
    a: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.family is Family.LINEAR:
            raise DomainError("invariant curves are defined for the quadratic families")
        if not self.mu > 0.0:
            raise ConfigurationError("mu must be positive")
        if self.family is Family.F1 and self.mu > 1.0 and not _is_mu_one(self.mu) and self.a <= 0.0:
            raise DomainError("family f1 with mu > 1 requires a > 0")
        if self.family is Family.F2 and self.mu < 1.0 and not _is_mu_one(self.mu) and self.a <= 0.0:
            raise DomainError("family f2 with mu < 1 requires a > 0")

    def rhs(self, y):
        return curve_rhs(self.family, self.mu, self.a, y)


@dataclass(frozen=True)
class CurveSample:
    branch: int  # -1 for x < 0, +1 for x >= 0
    x: float
    y: float


def sample_curve(curve: InvariantCurve, y_grid) -> list[CurveSample]:
    """Points of both branches x = +-sqrt(rhs(y)) where the rhs is nonnegative.

    Positive ordinates below 1e-8 are floored away to avoid overflow in
    y^(2/mu); y = 0 itself is kept and contributes the origin when the level
    set reaches it.
    """
    y = np.asarray(y_grid, dtype=float)
    if np.any(y < 0.0):
        raise DomainError("y grid must be nonnegative")
    y = y[(y == 0.0) | (y >= _Y_FLOOR)]
    vals = curve.rhs(y)
    out: list[CurveSample] = []
    for branch in (-1, 1):
        for yi, vi in zip(y, vals):
            if vi < 0.0:
                continue
            x = branch * math.sqrt(vi)
            if branch == 1 or x != 0.0:
                out.append(CurveSample(branch, float(x), float(yi)))
    return out


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    terminal: TerminalReason

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        s = np.asarray(self.states, dtype=float)
        if t.ndim != 1 or s.shape != (t.shape[0], 2):
            raise DomainError("trajectory needs matching times and (x, y) states")
        if t.shape[0] > 1 and np.any(np.diff(t) <= 0.0):
            raise DomainError("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", s)

    @property
    def end(self) -> tuple[float, float]:
        return float(self.states[-1, 0]), float(self.states[-1, 1])


def integrate(
    sys: PlanarSystem,
    x0: float,
    y0: float,
    tmax: float,
    tol: float = 1e-9,
    direction: int = 1,
) -> Trajectory:
    """Adaptive embedded 4(5) Runge-Kutta flow of the field.

    Stops early near the origin (radius 1e-6), at escape (radius 1e3), or if
    the numerics cross the boundary line below -tol (which the exact dynamics
    never does).  ``direction=-1`` integrates the time-reversed field.
    """
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    if tmax <= 0.0:
        raise DomainError("tmax must be positive")
    if sys.family is not Family.LINEAR and y0 < 0.0:
        raise DomainError("start point must satisfy y >= 0")
    r0 = math.hypot(x0, y0)
    if 0.0 < r0 < NEAR_EQUILIBRIUM_RADIUS:
        return Trajectory(np.array([0.0]), np.array([[x0, y0]]), TerminalReason.NEAR_EQUILIBRIUM)

    sign = 1.0 if direction >= 0 else -1.0

    def rhs(_t, state):
        fx, fy = _field_raw(sys, state[0], state[1])
        return [sign * float(fx), sign * float(fy)]

    def near_equilibrium(_t, state):
        return math.hypot(state[0], state[1]) - NEAR_EQUILIBRIUM_RADIUS

    def escaped(_t, state):
        return math.hypot(state[0], state[1]) - ESCAPE_RADIUS

    def boundary(_t, state):
        return state[1] + tol

    near_equilibrium.terminal = True
    near_equilibrium.direction = -1
    escaped.terminal = True
    escaped.direction = 1
    boundary.terminal = True
    boundary.direction = -1
    events = [near_equilibrium, escaped]
    if sys.family is not Family.LINEAR:
        events.append(boundary)

    sol = solve_ivp(rhs, (0.0, tmax), [x0, y0], method="RK45", rtol=tol, atol=tol, events=events)
    if sol.status == -1:
        raise NumericalError(f"integration failed: {sol.message}")

    terminal = TerminalReason.REACHED_TIME
    if sol.status == 1:
        if sol.t_events[0].size:
            terminal = TerminalReason.NEAR_EQUILIBRIUM
        elif sol.t_events[1].size:
            terminal = TerminalReason.ESCAPED
        else:
            terminal = TerminalReason.BOUNDARY_HIT

    states = sol.y.T.copy()
    if sys.family is not Family.LINEAR:
        # roundoff can leave y at -1e-17 on the invariant boundary line
        tiny = (states[:, 1] < 0.0) & (states[:, 1] >= -tol)
        states[tiny, 1] = 0.0
    return Trajectory(sol.t.copy(), states, terminal)


def crossing_ordinate(curve: InvariantCurve) -> float:
    """Positive ordinate where the level set meets the axis {x = 0}."""
    mu, a = curve.mu, curve.a
    if _is_mu_one(mu):
        return math.exp(a / 2.0) if curve.family is Family.F1 else math.exp(-a / 2.0)
    if curve.family is Family.F1:
        base = a * (mu - 1.0)
    else:
        base = a * (1.0 - mu)
    if base <= 0.0:
        raise DomainError("this level set does not cross the open axis {x = 0, y > 0}")
    return float(base ** (mu / (2.0 * mu - 2.0)))


@dataclass(frozen=True)
class CurveClassification:
    classes: tuple
    crossing_ordinates: tuple
    straight_ray: bool = False


def _expected_terminals(cls: PhaseCurveClass) -> tuple[TerminalReason, TerminalReason]:
    """(forward, backward) terminal behavior implied by a curve class."""
    if cls is PhaseCurveClass.HOMOCLINIC:
        return TerminalReason.NEAR_EQUILIBRIUM, TerminalReason.NEAR_EQUILIBRIUM
    if cls is PhaseCurveClass.INFINITY_TO_INFINITY:
        return TerminalReason.ESCAPED, TerminalReason.ESCAPED
    if cls is PhaseCurveClass.FORWARD_ASYMPTOTIC_TO_O:
        return TerminalReason.NEAR_EQUILIBRIUM, TerminalReason.ESCAPED
    if cls is PhaseCurveClass.BACKWARD_ASYMPTOTIC_TO_O:
        return TerminalReason.ESCAPED, TerminalReason.NEAR_EQUILIBRIUM
    raise DomainError(f"no integration oracle for class {cls}")


def _corroborate(curve: InvariantCurve, cls: PhaseCurveClass, seed: tuple[float, float]) -> None:
    sys = PlanarSystem(curve.family, curve.mu)
    expected_fwd, expected_bwd = _expected_terminals(cls)
    fwd = integrate(sys, seed[0], seed[1], tmax=1e7, tol=1e-9)
    bwd = integrate(sys, seed[0], seed[1], tmax=1e7, tol=1e-9, direction=-1)
    if fwd.terminal is not expected_fwd or bwd.terminal is not expected_bwd:
        raise VerificationError(
            f"integration from {seed} of {curve} observed ({fwd.terminal}, {bwd.terminal}), "
            f"expected ({expected_fwd}, {expected_bwd}) for class {cls}"
        )


def classify_curve(curve: InvariantCurve, corroborate: bool = True) -> CurveClassification:
    """Phase-curve class of a level set, cross-validated by integration.

    The class table is analytic; when ``corroborate`` is set, a trajectory
    started on the curve must reproduce the implied terminal behavior in both
    time directions, and any discrepancy raises instead of being patched over.
    """
    fam, mu, a = curve.family, curve.mu, curve.a
    mu_one = _is_mu_one(mu)

    if fam is Family.F1:
        if mu_one or a < 0.0 or mu > 1.0:
            # closed loop through the origin
            y_top = crossing_ordinate(curve)
            result = CurveClassification((PhaseCurveClass.HOMOCLINIC,), (0.0, y_top))
            seed = (0.0, y_top)
            if corroborate:
                _corroborate(curve, PhaseCurveClass.HOMOCLINIC, seed)
            return result
        # mu < 1, a >= 0: two asymptotic branches
        result = CurveClassification(
            (PhaseCurveClass.FORWARD_ASYMPTOTIC_TO_O, PhaseCurveClass.BACKWARD_ASYMPTOTIC_TO_O),
            (),
            straight_ray=(a == 0.0),
        )
        if corroborate:
            x1 = math.sqrt(curve.rhs(np.asarray(1.0)))
            _corroborate(curve, PhaseCurveClass.FORWARD_ASYMPTOTIC_TO_O, (-x1, 1.0))
            _corroborate(curve, PhaseCurveClass.BACKWARD_ASYMPTOTIC_TO_O, (x1, 1.0))
        return result

    # family f2
    if mu_one or a < 0.0 or mu < 1.0:
        y_cross = crossing_ordinate(curve)
        result = CurveClassification((PhaseCurveClass.INFINITY_TO_INFINITY,), (y_cross,))
        if corroborate:
            _corroborate(curve, PhaseCurveClass.INFINITY_TO_INFINITY, (0.0, y_cross))
        return result
    result = CurveClassification(
        (PhaseCurveClass.FORWARD_ASYMPTOTIC_TO_O, PhaseCurveClass.BACKWARD_ASYMPTOTIC_TO_O),
        (),
        straight_ray=(a == 0.0),
    )
    if corroborate:
        x1 = math.sqrt(curve.rhs(np.asarray(1.0)))
        _corroborate(curve, PhaseCurveClass.FORWARD_ASYMPTOTIC_TO_O, (-x1, 1.0))
        _corroborate(curve, PhaseCurveClass.BACKWARD_ASYMPTOTIC_TO_O, (x1, 1.0))
    return result


def reversibility_residual(sys: PlanarSystem, grid_n: int = 64) -> float:
    """Failure of reversibility under (x, y) -> (-x, y) on a deterministic grid.

    Zero for the quadratic families (first component even in x, second odd);
    positive for the linear family, which is not reversible this way.
    """
    xs = np.linspace(-3.0, 3.0, grid_n)
    ys = np.linspace(0.0, 3.0, grid_n)
    gx, gy = np.meshgrid(xs, ys)
    fx, fy = _field_raw(sys, gx, gy)
    rx, ry = _field_raw(sys, -gx, gy)
    return float(np.max(np.hypot(rx - fx, ry + fy)))


def homothety_scale(family, mu: float, k: float) -> float:
    """Multiplier kappa with H(kx, ky) = kappa * H(x, y) for mu != 1."""
    if k <= 0.0:
        raise DomainError("homothety ratio must be positive")
    return float(k ** ((2.0 * mu - 2.0) / mu))


def homothety_check(family, mu: float, k: float, x: float, y: float) -> tuple[float, float]:
    """(value at the scaled point, value predicted from the fixed point)."""
    family = Family(family)
    if k <= 0.0:
        raise DomainError("homothety ratio must be positive")
    base = float(np.asarray(first_integral(family, mu, x, y)))
    actual = float(np.asarray(first_integral(family, mu, k * x, k * y)))
    if _is_mu_one(mu):
        shift = 2.0 * math.log(k)
        predicted = base + shift if family is Family.F1 else base - shift
    else:
        predicted = homothety_scale(family, mu, k) * base
    return actual, predicted


def admissible_probe_levels(family, mu: float, levels=PROBE_LEVELS) -> list[float]:
    """Curve parameters from the fixed probe set that are admissible here."""
    family = Family(family)
    out = []
    for a in levels:
        if family is Family.F1 and mu > 1.0 and not _is_mu_one(mu) and a <= 0.0:
            continue
        if family is Family.F2 and mu < 1.0 and not _is_mu_one(mu) and a <= 0.0:
            continue
        out.append(a)
    return out


@dataclass(frozen=True)
class PortraitSignature:
    """Topological fingerprint of the portrait over the probe levels."""

    family: Family
    mu: float
    has_homoclinic: bool
    has_origin_to_infinity: bool
    has_asymptotic_to_o: bool
    probes: tuple


def portrait_signature(sys: PlanarSystem, probe_n: int = len(PROBE_LEVELS), corroborate: bool = False) -> PortraitSignature:
    """Classify the probe levels and reduce to the distinguishing booleans.

    A branch that is forward or backward asymptotic to the origin joins the
    origin with infinity, so the two non-homoclinic booleans coincide on this
    class inventory; both are reported because the two families are told apart
    by differently phrased criteria.
    """
    if probe_n < 1:
        raise DomainError("probe_n must be positive")
    levels = admissible_probe_levels(sys.family, sys.mu)[:probe_n]
    probes = []
    classes_seen = set()
    for a in levels:
        curve = InvariantCurve(sys.family, sys.mu, a)
        cls = classify_curve(curve, corroborate=corroborate)
        classes_seen.update(cls.classes)
        probes.append((a, tuple(c.value for c in cls.classes)))
    branch = {PhaseCurveClass.FORWARD_ASYMPTOTIC_TO_O, PhaseCurveClass.BACKWARD_ASYMPTOTIC_TO_O}
    return PortraitSignature(
        family=sys.family,
        mu=sys.mu,
        has_homoclinic=PhaseCurveClass.HOMOCLINIC in classes_seen,
        has_origin_to_infinity=bool(branch & classes_seen),
        has_asymptotic_to_o=bool(branch & classes_seen),
        probes=tuple(probes),
    )


def write_curve_csv(curves: list[InvariantCurve], y_grid, path) -> None:
    """Export curve samples as CSV with header family,mu,a,branch,x,y."""
    import csv

    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["family", "mu", "a", "branch", "x", "y"])
        for curve in curves:
            for s in sample_curve(curve, y_grid):
                writer.writerow([curve.family.value, repr(curve.mu), repr(curve.a), s.branch, repr(s.x), repr(s.y)])
