"""Numerical certification of three explicit dynamical-systems constructions.

The package verifies, with explicit margins and error budgets:

* a pair of annulus diffeomorphisms, a quarter turn and its shear conjugate,
  whose composition moves two explicit closed curves strictly off themselves;
* a non-Lagrangian torus graph in the cotangent bundle of the n-torus that
  misses its image under almost every angle rotation and misses its reference
  torus;
* two quadratic planar vector-field families on the closed upper half-plane
  whose phase portraits change topological type as the parameter crosses 1,
  plus the linear family whose equilibrium runs through seven types.
"""

from .annulus import ShearParams, conjugated_turn, displacing_map, push_curve, shear, verify_counterexample
from .curves import ClosedCurve, ellipse_curve, hausdorff_distance, inside_curve, min_separation
from .cylinder import exactness_defect, loop_action_integral, momentum_translation, twisted_rotation
from .errors import ConfigurationError, DomainError, IndeterminateError, NumericalError, VerificationError
from .figures import FigureSpec, emit_all_figures, emit_figure
from .frames import AnnulusPoint, FramePoint, cartesian_to_frame, frame_to_cartesian
from .planar import (
    EquilibriumType,
    Family,
    InvariantCurve,
    PhaseCurveClass,
    PlanarSystem,
    Trajectory,
    classify_curve,
    classify_linear,
    eval_field,
    first_integral,
    homothety_check,
    integrate,
    portrait_signature,
    reversibility_residual,
    sample_curve,
)
from .report import CheckReport, all_passed, emit_report, make_check
from .torus import (
    RotationSpec,
    TorusSpec,
    displacement_margin,
    embed,
    hamiltonian_tangency_residual,
    lagrangian_defect,
    pullback_form,
    rotation_tangency_residual,
    zero_section_margin,
)

__version__ = "0.1.0"
