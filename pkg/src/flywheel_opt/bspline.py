"""Clamped (nonperiodic) B-spline curves mapping a parameter u to (radius, thickness).

The curve is the standard Cox-de Boor construction of order k (degree k-1,
k = 4 for cubic) over the open-uniform knot vector with k-fold end knots,
so the curve interpolates its first and last control points and the
parameter runs over [0, S] with S = n - k + 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParameterError

__all__ = [
    "knot_vector",
    "basis",
    "basis_derivative",
    "basis_matrix",
    "ProfileCurve",
]


def knot_vector(n: int, k: int) -> np.ndarray:
    """Open-uniform knot vector for n control points of order k.

    The n + k knots are 0 (k-fold), 1, 2, ..., n - k, and S = n - k + 1
    (k-fold), which clamps the curve to its end control points.

    Args:
        n: number of control points, n >= k.
        k: spline order (degree + 1), k >= 2.

    Returns:
        Array of n + k nondecreasing knot values.
    """
    if not (isinstance(n, (int, np.integer)) and isinstance(k, (int, np.integer))):
        raise ParameterError(f"n and k must be integers, got n={n!r}, k={k!r}")
    if k < 2 or n < k:
        raise ParameterError(f"need n >= k >= 2, got n={n}, k={k}")
    knots = np.empty(n + k, dtype=float)
    for i in range(n + k):
        if i < k:
            knots[i] = 0.0
        elif i <= n:
            knots[i] = i - k + 1
        else:
            knots[i] = n - k + 1
    return knots


def _check_domain(u: float, knots: np.ndarray) -> None:
    if not (knots[0] <= u <= knots[-1]):
        raise DomainError(f"parameter u={u!r} outside [{knots[0]}, {knots[-1]}]")


def _basis(i: int, k: int, u: float, knots: np.ndarray) -> float:
    if k == 1:
        # Half-open spans; the final nonempty span is closed so u = S is defined.
        if knots[i] <= u < knots[i + 1]:
            return 1.0
        if u == knots[-1] and knots[i + 1] == u and knots[i] < knots[i + 1]:
            return 1.0
        return 0.0
    value = 0.0
    d1 = knots[i + k - 1] - knots[i]
    if d1 > 0.0:
        value += (u - knots[i]) / d1 * _basis(i, k - 1, u, knots)
    d2 = knots[i + k] - knots[i + 1]
    if d2 > 0.0:
        value += (knots[i + k] - u) / d2 * _basis(i + 1, k - 1, u, knots)
    return value


def _basis_derivative(i: int, k: int, u: float, knots: np.ndarray, order: int) -> float:
    if order == 0:
        return _basis(i, k, u, knots)
    if k == 1:
        return 0.0
    value = 0.0
    d1 = knots[i + k - 1] - knots[i]
    if d1 > 0.0:
        value += _basis_derivative(i, k - 1, u, knots, order - 1) / d1
    d2 = knots[i + k] - knots[i + 1]
    if d2 > 0.0:
        value -= _basis_derivative(i + 1, k - 1, u, knots, order - 1) / d2
    return (k - 1) * value


def basis(i: int, k: int, u: float, knots: np.ndarray) -> float:
    """Value of the basis function N_{i,k} at u (Cox-de Boor recursion).

    Terms with a repeated-knot zero denominator are dropped (the usual
    0/0 -> 0 convention).
    """
    if i < 0 or i + k >= len(knots):
        raise ParameterError(f"basis index i={i} out of range for {len(knots)} knots")
    _check_domain(u, knots)
    return _basis(i, k, float(u), knots)


def basis_derivative(i: int, k: int, u: float, knots: np.ndarray, order: int = 1) -> float:
    """Derivative of N_{i,k} at u of the given order (analytic, not numeric)."""
    if order < 0:
        raise ParameterError(f"derivative order must be >= 0, got {order}")
    if i < 0 or i + k >= len(knots):
        raise ParameterError(f"basis index i={i} out of range for {len(knots)} knots")
    _check_domain(u, knots)
    return _basis_derivative(i, k, float(u), knots, order)


def basis_matrix(knots: np.ndarray, n: int, k: int, u_values: np.ndarray,
                 derivative: int = 0) -> np.ndarray:
    """Collocation matrix B[j, i] = d^m N_{i,k} / du^m at u_values[j]."""
    u_values = np.asarray(u_values, dtype=float)
    out = np.empty((u_values.size, n), dtype=float)
    for j, u in enumerate(u_values.ravel()):
        _check_domain(u, knots)
        for i in range(n):
            out[j, i] = _basis_derivative(i, k, u, knots, derivative)
    return out


@dataclass(frozen=True)
class ProfileCurve:
    """Cross-section profile: a clamped B-spline through (radius, thickness) control points.

    Attributes:
        control_points: (n, 2) array of (r_i, t_i) pairs in meters; radii
            strictly increasing so r(u) is monotone.
        order: spline order k (4 for the cubic curves used here).
        knots: n + k nondecreasing knot values; built by :func:`knot_vector`
            when not supplied.
    """

    control_points: np.ndarray
    order: int = 4
    knots: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        pts = np.atleast_2d(np.asarray(self.control_points, dtype=float))
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ParameterError(f"control_points must be (n, 2), got shape {pts.shape}")
        n, k = pts.shape[0], self.order
        if k < 2 or n < k:
            raise ParameterError(f"need n >= order >= 2, got n={n}, order={k}")
        radii = pts[:, 0]
        if not np.all(np.diff(radii) > 0.0):
            raise ParameterError("control radii must be strictly increasing")
        knots = self.knots
        if knots is None:
            knots = knot_vector(n, k)
        else:
            knots = np.asarray(knots, dtype=float)
            if knots.shape != (n + k,):
                raise ParameterError(f"knots must have length n + k = {n + k}, got {knots.shape}")
            if np.any(np.diff(knots) < 0.0):
                raise ParameterError("knots must be nondecreasing")
            span = float(n - k + 1)
            if np.any(knots[:k] != 0.0) or np.any(knots[-k:] != span):
                raise ParameterError("end knots must be 0 and S with multiplicity k")
        pts.flags.writeable = False
        knots.flags.writeable = False
        object.__setattr__(self, "control_points", pts)
        object.__setattr__(self, "knots", knots)

    @classmethod
    def from_profile(cls, radii, thicknesses, order: int = 4) -> "ProfileCurve":
        """Build a curve from separate radius and thickness sequences."""
        radii = np.asarray(radii, dtype=float)
        thicknesses = np.asarray(thicknesses, dtype=float)
        if radii.shape != thicknesses.shape or radii.ndim != 1:
            raise ParameterError(
                f"radii and thicknesses must be matching 1-D sequences, "
                f"got {radii.shape} and {thicknesses.shape}")
        return cls(np.column_stack([radii, thicknesses]), order=order)

    @property
    def n(self) -> int:
        return self.control_points.shape[0]

    @property
    def span(self) -> float:
        """Upper parameter bound S = n - k + 1."""
        return float(self.n - self.order + 1)

    @property
    def radii(self) -> np.ndarray:
        return self.control_points[:, 0]

    @property
    def thicknesses(self) -> np.ndarray:
        return self.control_points[:, 1]

    def point(self, u: float) -> tuple[float, float]:
        """Curve point (r, t) at parameter u in [0, S]."""
        _check_domain(u, self.knots)
        u = float(u)
        r = t = 0.0
        for i in range(self.n):
            w = _basis(i, self.order, u, self.knots)
            if w != 0.0:
                r += w * self.control_points[i, 0]
                t += w * self.control_points[i, 1]
        return float(r), float(t)

    def derivatives(self, u: float) -> tuple[float, float, float, float]:
        """Parametric derivatives (dr/du, dt/du, d2r/du2, d2t/du2) at u."""
        _check_domain(u, self.knots)
        u = float(u)
        d = np.zeros(4)
        for i in range(self.n):
            w1 = _basis_derivative(i, self.order, u, self.knots, 1)
            w2 = _basis_derivative(i, self.order, u, self.knots, 2)
            d[0] += w1 * self.control_points[i, 0]
            d[1] += w1 * self.control_points[i, 1]
            d[2] += w2 * self.control_points[i, 0]
            d[3] += w2 * self.control_points[i, 1]
        return float(d[0]), float(d[1]), float(d[2]), float(d[3])
