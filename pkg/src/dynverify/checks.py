"""Verification suites: each returns a list of CheckReport.

The suites bundle the library operations into the named claims the package
certifies.  Margins follow the report conventions: distance-style checks
report the measured distance against a floor, residual-style checks report
``bound - residual`` against zero with the raw numbers in ``params``.
"""

from __future__ import annotations

import filecmp
import math
import tempfile
from pathlib import Path

import numpy as np

from . import annulus, planar, torus
from .figures import FIGURE_IDS, FigureSpec, emit_all_figures, emit_figure
from .planar import Family, PhaseCurveClass, PlanarSystem, InvariantCurve
from .report import CheckReport, make_check

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------- annulus ---


def annulus_suite(eps1: float = 0.05, eps2: float = 0.4, samples: int = annulus.DEFAULT_RESOLUTION) -> list[CheckReport]:
    return annulus.verify_counterexample(annulus.ShearParams(eps1, eps2), samples)


# ------------------------------------------------------------------ torus ---


def torus_suite(k: int = 1, eps: float = 0.1, v1: float = math.pi, grid_n: int = 1024, n: int = 2) -> list[CheckReport]:
    spec = torus.TorusSpec(n, (0.0,) * n, eps, k)
    rot = torus.RotationSpec((v1,) + (0.0,) * (n - 1))
    tag = f"torus.k{k}"
    reports = []

    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(200):
        q = rng.uniform(0.0, TWO_PI, n)
        diff = np.max(np.abs(torus.pullback_form(spec, q).entries - torus.finite_difference_pullback(spec, q)))
        worst = max(worst, float(diff))
    reports.append(
        make_check(
            f"{tag}.pullback-matches-finite-difference",
            1e-6 - worst,
            0.0,
            params={"k": k, "eps": eps, "n": n, "max_abs_difference": worst, "bound": 1e-6},
            notes="closed-form restricted 2-form vs central differences of the embedding",
        )
    )

    defect = torus.lagrangian_defect(spec, grid_n)
    reports.append(
        make_check(
            f"{tag}.not-lagrangian",
            defect,
            1e-12,
            params={"k": k, "eps": eps, "grid_n": grid_n, "expected": abs(eps)},
            notes="largest pullback entry over the angle grid; equals |eps| for this family",
        )
    )

    margin = torus.displacement_margin(spec, rot, grid_n)
    reports.append(
        make_check(
            f"{tag}.rotation-displaces",
            margin,
            1e-12,
            params={"k": k, "eps": eps, "v1": v1, "grid_n": grid_n},
            notes="minimum momentum gap between the torus and its rotated image",
        )
    )

    clearance = torus.zero_section_margin(spec, grid_n)
    reports.append(
        make_check(
            f"{tag}.reference-torus-avoided",
            clearance,
            1e-12,
            params={"k": k, "eps": eps, "grid_n": grid_n},
            notes="minimum momentum gap to the reference torus {p = p0}",
        )
    )

    q_grid = np.arange(grid_n) * (TWO_PI / grid_n)
    residuals = np.array([torus.rotation_tangency_residual(spec, rot, q) for q in q_grid])
    if k == 1:
        spread = float(residuals.max() - residuals.min())
        reports.append(
            make_check(
                f"{tag}.rotation-nowhere-tangent",
                float(residuals.min()),
                1e-12,
                params={"k": k, "eps": eps, "v1": v1, "constant_value": abs(v1 * eps), "spread": spread},
                notes="tangency residual is the constant |v1*eps| for the linear profile",
            )
        )
    else:
        minima = [(q, r) for q, r in torus.residual_minima(spec, rot, grid_n) if r < 1e-9 * max(abs(v1 * eps), 1.0)]
        locations = sorted(min(q, TWO_PI - q) if q > math.pi * 1.5 else q for q, _ in minima)
        expected = [0.0, math.pi]
        loc_err = (
            max(abs(a - b) for a, b in zip(locations, expected)) if len(locations) == len(expected) else float("inf")
        )
        # tangency angles must be exactly the zeros of the pullback entry
        form_vals = [abs(torus.pullback_form(spec, np.array([q] + [0.0] * (n - 1))).entries[0, 1]) for q, _ in minima]
        form_err = max(form_vals) if form_vals else float("inf")
        reports.append(
            make_check(
                f"{tag}.tangency-locus",
                1e-6 - max(loc_err, form_err / max(abs(eps), 1e-300)),
                0.0,
                params={"k": k, "eps": eps, "v1": v1, "locations": locations, "location_error": loc_err},
                notes="rotation-field tangency angles coincide with the vanishing of the pullback form",
            )
        )

        a_coef, b_coef = 1.0, 1.0
        q_fine = np.arange(10000) * (TWO_PI / 10000)
        ham = np.array([torus.hamiltonian_tangency_residual(spec, a_coef, b_coef, q) for q in q_fine])
        floor = min(abs(b_coef), abs(eps * a_coef)) / 2.0
        reports.append(
            make_check(
                f"{tag}.explicit-field-transversal",
                float(ham.min()),
                floor,
                params={"k": k, "eps": eps, "a": a_coef, "b": b_coef, "min_residual": float(ham.min())},
                notes="the explicit transverse field stays off the tangent spaces everywhere",
            )
        )
    return reports


# ----------------------------------------------------------------- linear ---

_LINEAR_TABLE = (
    (0.2, planar.EquilibriumType.UNSTABLE_NODE),
    (1.0 / 3.0, planar.EquilibriumType.UNSTABLE_DEGENERATE_NODE),
    (0.6, planar.EquilibriumType.UNSTABLE_FOCUS),
    (1.0, planar.EquilibriumType.CENTER),
    (2.0, planar.EquilibriumType.STABLE_FOCUS),
    (3.0, planar.EquilibriumType.STABLE_DEGENERATE_NODE),
    (5.0, planar.EquilibriumType.STABLE_NODE),
)


def linear_suite() -> list[CheckReport]:
    reports = []
    ok = all(planar.classify_linear(mu)[0] is expected for mu, expected in _LINEAR_TABLE)
    reports.append(
        make_check(
            "linear.classification-table",
            1.0 if ok else -1.0,
            0.0,
            params={"cases": [(mu, t.value) for mu, t in _LINEAR_TABLE]},
            notes="equilibrium type across the seven parameter ranges",
        )
    )

    anchors = {
        1.0 / 3.0: (complex(1.0), complex(1.0)),
        1.0: (complex(0.0, math.sqrt(3.0)), complex(0.0, -math.sqrt(3.0))),
        3.0: (complex(-3.0), complex(-3.0)),
    }
    worst = 0.0
    for mu, expected in anchors.items():
        _, eig = planar.classify_linear(mu)
        worst = max(worst, max(abs(a - b) for a, b in zip(eig, expected)))
    reports.append(
        make_check(
            "linear.boundary-eigenvalues",
            1e-12 - worst,
            0.0,
            params={"max_abs_error": worst},
            notes="double eigenvalues at mu = 1/3 and 3, imaginary pair at mu = 1",
        )
    )

    worst = 0.0
    for mu in (0.2, 0.5, 1.0, 2.0, 5.0):
        _, eig = planar.classify_linear(mu)
        for lam in eig:
            worst = max(worst, abs(lam * lam + 3.0 * (mu - 1.0) * lam + 3.0 * mu))
    reports.append(
        make_check(
            "linear.characteristic-residual",
            1e-10 - worst,
            0.0,
            params={"max_abs_residual": worst},
            notes="eigenvalues satisfy the characteristic polynomial",
        )
    )
    return reports


# --------------------------------------------------------------- portraits --


def expected_signature(family, mu: float) -> dict:
    """Case list for the portrait signature by family and parameter range."""
    family = Family(family)
    if family is Family.F1:
        branches = mu < 1.0 and abs(mu - 1.0) > 1e-12
        return {"has_homoclinic": True, "has_origin_to_infinity": branches, "has_asymptotic_to_o": branches}
    branches = mu > 1.0 and abs(mu - 1.0) > 1e-12
    return {"has_homoclinic": False, "has_origin_to_infinity": branches, "has_asymptotic_to_o": branches}


def crossing_root_oracle(curve: InvariantCurve, y_lo: float = 1e-4, y_hi: float = 50.0, grid_n: int = 4096) -> float:
    """Positive axis crossing located by sign change + bisection on the rhs."""
    y = np.geomspace(y_lo, y_hi, grid_n)
    vals = curve.rhs(y)
    sign_change = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if sign_change.size == 0:
        raise planar.DomainError("no axis crossing in the search window")
    i = int(sign_change[0])
    lo, hi = float(y[i]), float(y[i + 1])
    f_lo = float(curve.rhs(np.asarray(lo)))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = float(curve.rhs(np.asarray(mid)))
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        if hi - lo < 1e-14 * hi:
            break
    return 0.5 * (lo + hi)


def _conservation_seed(curve: InvariantCurve) -> tuple[float, float]:
    cls = planar.classify_curve(curve, corroborate=False)
    if PhaseCurveClass.HOMOCLINIC in cls.classes:
        y = 0.5 * cls.crossing_ordinates[1]
    elif cls.crossing_ordinates:
        y = 1.25 * cls.crossing_ordinates[0]
    else:
        y = 1.0
    x = math.sqrt(max(float(curve.rhs(np.asarray(y))), 0.0))
    return x, y


def portrait_suite(family, mu: float, corroborate: bool = True) -> list[CheckReport]:
    family = Family(family)
    sys = PlanarSystem(family, mu)
    tag = f"portrait.{family.value}.mu-{mu:g}"
    reports = []

    sig = planar.portrait_signature(sys, corroborate=corroborate)
    expected = expected_signature(family, mu)
    observed = {k: getattr(sig, k) for k in expected}
    reports.append(
        make_check(
            f"{tag}.signature",
            1.0 if observed == expected else -1.0,
            0.0,
            params={"expected": expected, "observed": observed, "probes": list(sig.probes)},
            notes="curve-class inventory over the probe levels"
            + ("; classes cross-validated by integration" if corroborate else ""),
        )
    )

    worst = 0.0
    checked = 0
    for a in planar.admissible_probe_levels(family, mu):
        curve = InvariantCurve(family, mu, a)
        cls = planar.classify_curve(curve, corroborate=False)
        ordinates = [y for y in cls.crossing_ordinates if y > 0.0]
        if not ordinates:
            continue
        root = crossing_root_oracle(curve)
        worst = max(worst, abs(root - ordinates[0]))
        checked += 1
    reports.append(
        make_check(
            f"{tag}.crossing-ordinates",
            1e-10 - worst,
            0.0,
            params={"curves_checked": checked, "max_abs_error": worst},
            notes="closed-form axis crossings vs independent bisection on the level function",
        )
    )

    residual = planar.reversibility_residual(sys, grid_n=64)
    reports.append(
        make_check(
            f"{tag}.reversibility",
            1e-12 - residual,
            0.0,
            params={"residual": residual},
            notes="field anti-commutes with the reflection (x, y) -> (-x, y)",
        )
    )

    worst = 0.0
    runs = 0
    for a in planar.admissible_probe_levels(family, mu, levels=(-1.0, 0.5, 2.0)):
        curve = InvariantCurve(family, mu, a)
        x0, y0 = _conservation_seed(curve)
        h0 = float(np.asarray(planar.first_integral(family, mu, x0, y0)))
        for direction in (1, -1):
            traj = planar.integrate(sys, x0, y0, tmax=0.3, tol=1e-9, direction=direction)
            xe, ye = traj.end
            if ye <= 0.0:
                continue
            he = float(np.asarray(planar.first_integral(family, mu, xe, ye)))
            worst = max(worst, abs(he - h0))
            runs += 1
    reports.append(
        make_check(
            f"{tag}.conservation",
            1e-6 - worst,
            0.0,
            params={"runs": runs, "max_abs_drift": worst, "integrator_tol": 1e-9},
            notes="first integral along numerically integrated trajectories",
        )
    )

    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(50):
        k = float(rng.uniform(0.2, 5.0))
        x = float(rng.uniform(-2.0, 2.0))
        y = float(rng.uniform(0.3, 2.0))
        actual, predicted = planar.homothety_check(family, mu, k, x, y)
        worst = max(worst, abs(actual - predicted) / max(1.0, abs(predicted)))
    reports.append(
        make_check(
            f"{tag}.homothety",
            1e-10 - worst,
            0.0,
            params={"samples": 50, "max_rel_error": worst},
            notes="level parameter transforms by the predicted multiplier under (x, y) -> (kx, ky)",
        )
    )

    norm_sys = PlanarSystem(family, mu, normalized=True)
    xs = np.linspace(-30.0, 30.0, 1000)
    ys = np.linspace(0.0, 30.0, 1000)
    gx, gy = np.meshgrid(xs, ys)
    fx, fy = planar.eval_field(norm_sys, gx, gy)
    bound_margin = min(1.0 - float(np.max(np.abs(fx))), mu / 2.0 - float(np.max(np.abs(fy)))) + 1e-12
    reports.append(
        make_check(
            f"{tag}.normalized-bounds",
            bound_margin,
            0.0,
            params={"max_abs_dx": float(np.max(np.abs(fx))), "max_abs_dy": float(np.max(np.abs(fy))), "dy_bound": mu / 2.0},
            notes="dividing by 1 + x^2 + y^2 bounds |x'| by 1 and |y'| by mu/2; "
            "the mu factor scales the 1/2 bound of the mu-factored normal form",
        )
    )
    return reports


# ---------------------------------------------------------------- figures ---


def figures_suite() -> list[CheckReport]:
    reports = []
    with tempfile.TemporaryDirectory() as tmp:
        first = Path(tmp) / "first"
        second = Path(tmp) / "second"
        emit_all_figures(first)
        emit_all_figures(second)
        identical = all(filecmp.cmp(first / f"{fid}.svg", second / f"{fid}.svg", shallow=False) for fid in FIGURE_IDS)
        reports.append(
            make_check(
                "figures.deterministic",
                1.0 if identical else -1.0,
                0.0,
                params={"figures": list(FIGURE_IDS)},
                notes="two emissions of every figure are byte-identical",
            )
        )

        content = (first / "fig2-1.svg").read_text(encoding="utf-8")
        n_paths = content.count("<path ")
        named = ("boundary-inner", "boundary-outer", "base-ellipse", "rotated-ellipse", "sheared-image", "rotated-sheared-image")
        have_ids = all(f'id="{name}"' in content for name in named)
        reports.append(
            make_check(
                "figures.annulus-named-paths",
                1.0 if (n_paths == 6 and have_ids) else -1.0,
                0.0,
                params={"path_count": n_paths, "expected_ids": list(named)},
                notes="the annulus figure consists of exactly the six named curve paths",
            )
        )
    return reports


# -------------------------------------------------------------------- all ---


def full_suite() -> list[CheckReport]:
    reports = []
    reports += annulus_suite()
    reports += torus_suite(k=1)
    reports += torus_suite(k=3)
    reports += linear_suite()
    for family in (Family.F1, Family.F2):
        for mu in (0.5, 1.0, 2.0):
            reports += portrait_suite(family, mu)
    reports += figures_suite()
    return reports
