"""Finite-difference stress analysis of the rotating variable-thickness disk.

The radial equilibrium and compatibility relations reduce, via the stress
function Z = t * r * sigma_r, to a single second-order ODE in the curve
parameter u:

    C(u) Z'' + D(u) Z' + E(u) Z = F(u),   Z(0) = Z(S) = 0

with coefficients built from r(u), t(u) and their parametric derivatives.
The free boundaries carry no radial stress, which pins Z at both ends, so
central differencing on a uniform u-grid yields one tridiagonal system per
design. Radial and tangential stresses are recovered from Z, and the
Von-Mises (distortion energy) stress from those.

Everything here is pure: solving is a function of (curve, spec, h) with no
shared mutable state, so candidate designs can be evaluated concurrently.
The batched evaluator carries the same computation across a whole
population of thickness vectors at once.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bspline import ProfileCurve, basis_matrix, knot_vector
from .errors import GeometryError, NumericalError, ParameterError
from .model import FlywheelSpec, control_radii

__all__ = [
    "StressField",
    "ode_coefficients",
    "assemble_and_solve",
    "max_von_mises",
    "von_mises",
    "BatchStressEvaluator",
    "batch_evaluator",
]

DEFAULT_STEP = 0.01


@dataclass(frozen=True)
class StressField:
    """Per-node solution of the stress boundary value problem.

    u_nodes span [0, S] uniformly; z is the stress function (N); the three
    stress arrays are in Pa. Radial stress vanishes at both boundaries by
    construction.
    """

    u_nodes: np.ndarray
    radius: np.ndarray
    thickness: np.ndarray
    z: np.ndarray
    sigma_r: np.ndarray
    sigma_theta: np.ndarray
    sigma_vm: np.ndarray

    def __post_init__(self) -> None:
        for arr in (self.u_nodes, self.radius, self.thickness, self.z,
                    self.sigma_r, self.sigma_theta, self.sigma_vm):
            arr.flags.writeable = False


def von_mises(sigma_r, sigma_theta):
    """Plane-stress distortion-energy equivalent stress."""
    return np.sqrt(sigma_r**2 + sigma_theta**2 - sigma_r * sigma_theta)


def max_von_mises(field: StressField) -> float:
    """Largest Von-Mises stress over the solved grid, in Pa."""
    return float(np.max(field.sigma_vm))


def ode_coefficients(curve: ProfileCurve, spec: FlywheelSpec, u: float):
    """Coefficients (C, D, E, F) of the stress-function ODE at one parameter value.

    Requires dr/du > 0 at u; a non-monotone radius makes the parametric
    change of variables meaningless.
    """
    r, t = curve.point(u)
    dr, dt, d2r, _ = curve.derivatives(u)
    if dr <= 0.0:
        raise GeometryError(f"dr/du = {dr:.3e} <= 0 at u={u}: profile radius not monotone")
    nu = spec.poisson_ratio
    rot = spec.density * spec.angular_velocity**2
    c = r**2 * dr
    d = r * dr**2 - r**2 * d2r - (r**2 / t) * dr * dt
    e = nu * (r / t) * dt * dr**2 - dr**3
    f = -(3.0 + nu) * rot * t * r**3 * dr**3
    return c, d, e, f


@lru_cache(maxsize=None)
def _grid(n: int, k: int, h: float):
    """Uniform u-grid over [0, S] plus basis/derivative collocation matrices."""
    if h <= 0.0:
        raise ParameterError(f"step size must be > 0, got {h}")
    span = n - k + 1
    steps = span / h
    n_steps = int(round(steps))
    if n_steps < 2 or abs(steps - n_steps) > 1e-9 * max(1.0, steps):
        raise ParameterError(
            f"step size {h} must divide the parameter span {span} into >= 2 intervals")
    knots = knot_vector(n, k)
    u = np.linspace(0.0, float(span), n_steps + 1)
    b0 = basis_matrix(knots, n, k, u, 0)
    b1 = basis_matrix(knots, n, k, u, 1)
    b2 = basis_matrix(knots, n, k, u, 2)
    for arr in (u, b0, b1, b2):
        arr.flags.writeable = False
    return u, b0, b1, b2


def _coefficient_arrays(spec, r, dr, d2r, t, dt):
    """Vectorized ODE coefficients; shapes broadcast (nodes,) or (nodes, batch)."""
    nu = spec.poisson_ratio
    rot = spec.density * spec.angular_velocity**2
    c = r**2 * dr
    d = r * dr**2 - r**2 * d2r - (r**2 / t) * dr * dt
    e = nu * (r / t) * dt * dr**2 - dr**3
    f = -(3.0 + nu) * rot * t * r**3 * dr**3
    return c, d, e, f


def _solve_tridiagonal(lower, diag, upper, rhs):
    """Thomas algorithm, vectorized over trailing batch axes."""
    m = diag.shape[0]
    w = np.empty_like(upper)
    g = np.empty_like(rhs)
    z = np.empty_like(rhs)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        w[0] = upper[0] / diag[0]
        g[0] = rhs[0] / diag[0]
        for j in range(1, m):
            den = diag[j] - lower[j] * w[j - 1]
            w[j] = upper[j] / den
            g[j] = (rhs[j] - lower[j] * g[j - 1]) / den
        z[m - 1] = g[m - 1]
        for j in range(m - 2, -1, -1):
            z[j] = g[j] - w[j] * z[j + 1]
    if not np.all(np.isfinite(z)):
        raise NumericalError(
            "tridiagonal stress system is singular or ill-conditioned "
            "(non-finite values during elimination)")
    return z


def _solve_stress(spec, h, r, dr, d2r, t, dt):
    """Solve for Z and recover stresses. Array shapes: (nodes,) or (nodes, batch)."""
    if np.min(dr) <= 0.0:
        raise GeometryError(
            f"profile radius is not monotone along the curve (min dr/du = {np.min(dr):.3e})")
    if np.min(t) <= 0.0:
        raise GeometryError(f"thickness must stay positive (min t = {np.min(t):.3e} m)")
    c, d, e, f = _coefficient_arrays(spec, r, dr, d2r, t, dt)

    inv_h2 = 1.0 / h**2
    inv_2h = 0.5 / h
    sl = slice(1, -1)
    lower = c[sl] * inv_h2 - d[sl] * inv_2h
    diag = e[sl] - 2.0 * c[sl] * inv_h2
    upper = c[sl] * inv_h2 + d[sl] * inv_2h

    z = np.zeros_like(f)
    z[sl] = _solve_tridiagonal(lower, diag, upper, f[sl])

    # dZ/du: central stencils inside, one-sided second-order at the free edges
    # so the boundary tangential stress keeps the solver's O(h^2) accuracy.
    dz = np.empty_like(z)
    dz[sl] = (z[2:] - z[:-2]) * inv_2h
    dz[0] = (-3.0 * z[0] + 4.0 * z[1] - z[2]) * inv_2h
    dz[-1] = (3.0 * z[-1] - 4.0 * z[-2] + z[-3]) * inv_2h

    rot = spec.density * spec.angular_velocity**2
    sigma_r = z / (t * r)
    sigma_theta = dz / (dr * t) + rot * r**2
    return z, sigma_r, sigma_theta, von_mises(sigma_r, sigma_theta)


def assemble_and_solve(curve: ProfileCurve, spec: FlywheelSpec,
                       h: float = DEFAULT_STEP) -> StressField:
    """Solve the stress boundary value problem for one profile curve.

    Central differences at the interior nodes of a uniform u-grid with
    spacing h turn the ODE into a tridiagonal system with Z pinned to zero
    at both ends; it is linear in Z, so one direct solve suffices.
    """
    u, b0, b1, b2 = _grid(curve.n, curve.order, float(h))
    radii = curve.radii
    thicknesses = curve.thicknesses
    r, dr, d2r = b0 @ radii, b1 @ radii, b2 @ radii
    t, dt = b0 @ thicknesses, b1 @ thicknesses
    z, sigma_r, sigma_theta, sigma_vm = _solve_stress(spec, float(h), r, dr, d2r, t, dt)
    return StressField(
        u_nodes=u.copy(),
        radius=r,
        thickness=t,
        z=z,
        sigma_r=sigma_r,
        sigma_theta=sigma_theta,
        sigma_vm=sigma_vm,
    )


class BatchStressEvaluator:
    """Max Von-Mises stress for whole populations of thickness vectors.

    The control radii and the u-grid are fixed by the flywheel definition,
    so the radius arrays and collocation matrices are precomputed once;
    each batch costs a few dense products and one vectorized tridiagonal
    solve across all candidates.
    """

    def __init__(self, spec: FlywheelSpec, h: float = DEFAULT_STEP):
        self.spec = spec
        self.h = float(h)
        u, b0, b1, b2 = _grid(spec.n_control_points, 4, self.h)
        radii = control_radii(spec)
        self.u_nodes = u
        self._b0 = b0
        self._b1 = b1
        self._r = b0 @ radii
        self._dr = b1 @ radii
        self._d2r = b2 @ radii
        if np.min(self._dr) <= 0.0:
            raise GeometryError("control radii give a non-monotone radius along the curve")

    def max_von_mises(self, population: np.ndarray) -> np.ndarray:
        """Per-candidate max Von-Mises stress for a (batch, n) thickness array."""
        pop = np.atleast_2d(np.asarray(population, dtype=float))
        if pop.shape[1] != self.spec.n_control_points:
            raise ParameterError(
                f"population rows must have length {self.spec.n_control_points}, "
                f"got {pop.shape[1]}")
        t = self._b0 @ pop.T
        dt = self._b1 @ pop.T
        r = self._r[:, None]
        dr = self._dr[:, None]
        d2r = self._d2r[:, None]
        _, _, _, sigma_vm = _solve_stress(self.spec, self.h, r, dr, d2r, t, dt)
        return np.max(sigma_vm, axis=0)


@lru_cache(maxsize=None)
def batch_evaluator(spec: FlywheelSpec, h: float = DEFAULT_STEP) -> BatchStressEvaluator:
    """Shared evaluator per (spec, h); construction is the expensive part."""
    return BatchStressEvaluator(spec, h)
