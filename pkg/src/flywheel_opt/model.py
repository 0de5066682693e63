"""Flywheel mass and kinetic energy as functions of the thickness design vector.

The control radii are fixed (equally spaced between the inner and outer
radius), so both mass and kinetic energy are linear in the thicknesses:
M(x) = a . x and E_k(x) = b . x. The coefficient vectors are obtained by
Gauss-Legendre quadrature of the shell integrals over each B-spline knot
span and cached per flywheel definition, since the optimizer evaluates
these functionals for every candidate in every generation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .bspline import ProfileCurve, basis_matrix, knot_vector
from .errors import NumericalError, ParameterError

__all__ = [
    "FlywheelSpec",
    "control_radii",
    "profile_curve",
    "mass_coefficients",
    "energy_coefficients",
    "mass",
    "kinetic_energy",
]

GAUSS_POINTS = 16  # exact for the piecewise-polynomial integrands (degree <= 14)


@dataclass(frozen=True)
class FlywheelSpec:
    """Material constants, geometry, speed and constraint limits of one flywheel.

    All values are SI: kg/m^3, Pa, m, rad/s, kg.
    """

    density: float
    elastic_modulus: float
    poisson_ratio: float
    inner_radius: float
    outer_radius: float
    angular_velocity: float
    max_mass: float
    allowable_stress: float
    n_control_points: int = 8

    def __post_init__(self) -> None:
        if not 0.0 < self.inner_radius < self.outer_radius:
            raise ParameterError(
                f"need 0 < inner_radius < outer_radius, got "
                f"{self.inner_radius} and {self.outer_radius}")
        if self.density < 0.0:
            raise ParameterError(f"density must be >= 0, got {self.density}")
        if self.angular_velocity < 0.0:
            raise ParameterError(f"angular_velocity must be >= 0, got {self.angular_velocity}")
        if not 0.0 <= self.poisson_ratio < 0.5:
            raise ParameterError(f"poisson_ratio must be in [0, 0.5), got {self.poisson_ratio}")
        if self.max_mass <= 0.0:
            raise ParameterError(f"max_mass must be > 0, got {self.max_mass}")
        if self.allowable_stress <= 0.0:
            raise ParameterError(f"allowable_stress must be > 0, got {self.allowable_stress}")
        if self.n_control_points < 4:
            raise ParameterError(f"need at least 4 control points, got {self.n_control_points}")


def control_radii(spec: FlywheelSpec) -> np.ndarray:
    """Fixed control-point radii: n equally spaced values from R1 to R2."""
    return np.linspace(spec.inner_radius, spec.outer_radius, spec.n_control_points)


def profile_curve(spec: FlywheelSpec, thicknesses) -> ProfileCurve:
    """Cubic profile curve for a thickness design vector over the fixed radii."""
    x = np.asarray(thicknesses, dtype=float)
    if x.shape != (spec.n_control_points,):
        raise ParameterError(
            f"design vector must have length {spec.n_control_points}, got shape {x.shape}")
    return ProfileCurve.from_profile(control_radii(spec), x)


@lru_cache(maxsize=None)
def _span_quadrature(n: int, k: int, n_points: int):
    """Gauss-Legendre nodes/weights over every knot span, plus basis matrices there."""
    knots = knot_vector(n, k)
    u_parts, w_parts = [], []
    x_ref, w_ref = leggauss(n_points)
    for a, b in zip(knots[:-1], knots[1:]):
        if b > a:
            u_parts.append(0.5 * (a + b) + 0.5 * (b - a) * x_ref)
            w_parts.append(0.5 * (b - a) * w_ref)
    u_q = np.concatenate(u_parts)
    w_q = np.concatenate(w_parts)
    b0 = basis_matrix(knots, n, k, u_q, 0)
    b1 = basis_matrix(knots, n, k, u_q, 1)
    for arr in (u_q, w_q, b0, b1):
        arr.flags.writeable = False
    return u_q, w_q, b0, b1


def _coefficients(spec: FlywheelSpec, kind: str, n_points: int) -> np.ndarray:
    _, w_q, b0, b1 = _span_quadrature(spec.n_control_points, 4, n_points)
    radii = control_radii(spec)
    r = b0 @ radii
    dr = b1 @ radii
    if kind == "mass":
        weight = 2.0 * math.pi * spec.density * w_q * r * dr
    else:
        weight = math.pi * spec.density * spec.angular_velocity**2 * w_q * r**3 * dr
    return b0.T @ weight


def _checked_coefficients(spec: FlywheelSpec, kind: str, n_points: int) -> np.ndarray:
    coeffs = _coefficients(spec, kind, n_points)
    refined = _coefficients(spec, kind, n_points + 8)
    scale = max(float(np.max(np.abs(refined))), 1.0)
    drift = float(np.max(np.abs(coeffs - refined))) / scale
    if drift > 1e-9:
        raise NumericalError(
            f"{kind} quadrature did not converge: {n_points} vs {n_points + 8} "
            f"point rules differ by {drift:.3e} (relative)")
    coeffs.flags.writeable = False
    return coeffs


@lru_cache(maxsize=None)
def mass_coefficients(spec: FlywheelSpec, n_points: int = GAUSS_POINTS) -> np.ndarray:
    """Vector a with M(x) = a . x, in kg per meter of control thickness."""
    return _checked_coefficients(spec, "mass", n_points)


@lru_cache(maxsize=None)
def energy_coefficients(spec: FlywheelSpec, n_points: int = GAUSS_POINTS) -> np.ndarray:
    """Vector b with E_k(x) = b . x, in J per meter of control thickness."""
    return _checked_coefficients(spec, "energy", n_points)


def _as_design_vector(x, spec: FlywheelSpec) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.n_control_points,):
        raise ParameterError(
            f"design vector must have length {spec.n_control_points}, got shape {x.shape}")
    return x


def mass(x, spec: FlywheelSpec) -> float:
    """Flywheel mass in kg for a thickness design vector."""
    return float(mass_coefficients(spec) @ _as_design_vector(x, spec))


def kinetic_energy(x, spec: FlywheelSpec) -> float:
    """Stored kinetic energy in J for a thickness design vector."""
    return float(energy_coefficients(spec) @ _as_design_vector(x, spec))
