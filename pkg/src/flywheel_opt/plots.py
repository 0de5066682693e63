"""Report figures rendered straight to files (format chosen by extension)."""
from __future__ import annotations

import numpy as np
from matplotlib.figure import Figure

from .bspline import ProfileCurve
from .stress import StressField

__all__ = ["save_stress_plot", "save_convergence_plot", "save_profile_plot"]

MPA = 1e6  # Pa per N/mm^2


def save_stress_plot(field: StressField, path) -> str:
    """Radial, tangential and Von-Mises stress versus radius."""
    fig = Figure(figsize=(6.4, 4.2))
    ax = fig.subplots()
    ax.plot(field.radius, field.sigma_r / MPA, label="radial")
    ax.plot(field.radius, field.sigma_theta / MPA, label="tangential")
    ax.plot(field.radius, field.sigma_vm / MPA, label="von mises", linewidth=2)
    ax.set_xlabel("radius (m)")
    ax.set_ylabel("stress (N/mm$^2$)")
    ax.grid(True, alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    return str(path)


def save_convergence_plot(history, path) -> str:
    """Best penalized objective per generation."""
    history = np.asarray(history, dtype=float)
    fig = Figure(figsize=(6.4, 4.2))
    ax = fig.subplots()
    ax.plot(np.arange(history.size), history)
    ax.set_xlabel("generation")
    ax.set_ylabel("best objective")
    ax.grid(True, alpha=0.4)
    fig.tight_layout()
    fig.savefig(path)
    return str(path)


def save_profile_plot(curve: ProfileCurve, path, samples: int = 400) -> str:
    """Cross-section outline: thickness curve mirrored about the radius axis."""
    u = np.linspace(0.0, curve.span, samples + 1)
    pts = np.array([curve.point(v) for v in u])
    r, t = pts[:, 0], pts[:, 1]
    fig = Figure(figsize=(6.4, 4.2))
    ax = fig.subplots()
    ax.fill_between(r, -t, t, alpha=0.25)
    ax.plot(r, t, color="C0")
    ax.plot(r, -t, color="C0")
    ax.plot(curve.radii, curve.thicknesses, "o--", color="C1", label="control points")
    ax.plot(curve.radii, -curve.thicknesses, "o--", color="C1")
    ax.set_xlabel("radius (m)")
    ax.set_ylabel("thickness (m)")
    ax.grid(True, alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    return str(path)
