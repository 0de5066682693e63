"""Flywheel cross-section shape optimization.

A clamped cubic B-spline describes the thickness profile of a rotating
disk; mass and kinetic energy are linear functionals of the control
thicknesses; peak Von-Mises stress comes from a finite-difference solve of
the rotating-disk boundary value problem; and the Jaya algorithm searches
the thickness box for the design storing the most energy within the mass
and stress limits.
"""
from .bspline import ProfileCurve, basis, basis_derivative, knot_vector
from .config import LoadedConfig, default_config_dict, load_config
from .errors import (
    ConfigError,
    DomainError,
    FlywheelError,
    GeometryError,
    NumericalError,
    ParameterError,
)
from .model import (
    FlywheelSpec,
    control_radii,
    energy_coefficients,
    kinetic_energy,
    mass,
    mass_coefficients,
    profile_curve,
)
from .optimizer import (
    DesignEvaluation,
    ProblemConfig,
    RunResult,
    evaluate_constraints,
    evaluate_design,
    jaya_step,
    penalized_objective,
    run,
)
from .stress import StressField, assemble_and_solve, max_von_mises, ode_coefficients

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ProfileCurve", "basis", "basis_derivative", "knot_vector",
    "FlywheelSpec", "control_radii", "profile_curve",
    "mass", "kinetic_energy", "mass_coefficients", "energy_coefficients",
    "StressField", "ode_coefficients", "assemble_and_solve", "max_von_mises",
    "ProblemConfig", "RunResult", "DesignEvaluation",
    "evaluate_design", "evaluate_constraints", "penalized_objective",
    "jaya_step", "run",
    "LoadedConfig", "load_config", "default_config_dict",
    "FlywheelError", "ParameterError", "DomainError", "GeometryError",
    "NumericalError", "ConfigError",
]
