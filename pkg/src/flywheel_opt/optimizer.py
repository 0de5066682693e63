"""Constrained maximization of stored kinetic energy with the Jaya algorithm.

The mass and peak Von-Mises stress limits are folded into the objective as
static penalties: each violated constraint adds a constant so large that
any infeasible candidate ranks below every feasible one. Jaya then needs
no algorithm-specific parameters: every candidate moves toward the current
best and away from the current worst, and a move is kept only when it
improves the penalized objective.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import model
from .errors import ParameterError
from .model import FlywheelSpec
from .stress import DEFAULT_STEP, batch_evaluator

__all__ = [
    "ProblemConfig",
    "RunResult",
    "DesignEvaluation",
    "PenaltyObjective",
    "evaluate_design",
    "evaluate_constraints",
    "penalized_objective",
    "jaya_step",
    "run",
]

STOP_MAX_ITERATIONS = "max_iterations"
STOP_STALLED = "stalled"


@dataclass(frozen=True, eq=False)
class ProblemConfig:
    """Search-space bounds, penalty setup and stopping parameters.

    Bounds may be scalars (one box for every variable) or per-variable
    sequences. ``literal_penalty_exponents`` switches the penalty for the
    B-th violated constraint from CP to CP**B; both dominate the energy
    scale, the default avoids needlessly huge magnitudes.
    ``per_candidate_random`` draws fresh Jaya weights for every candidate
    instead of sharing one draw per variable across the generation.
    """

    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    penalty_constant: float = 1e8
    population_size: int = 1000
    max_iterations: int = 500
    max_stall_generations: int = 50
    function_tolerance: float = 1e-6
    random_seed: int = 0
    literal_penalty_exponents: bool = False
    per_candidate_random: bool = False

    def __post_init__(self) -> None:
        lb = np.atleast_1d(np.asarray(self.lower_bounds, dtype=float))
        ub = np.atleast_1d(np.asarray(self.upper_bounds, dtype=float))
        if lb.ndim != 1 or ub.ndim != 1:
            raise ParameterError("bounds must be scalars or 1-D sequences")
        if lb.size != ub.size and 1 not in (lb.size, ub.size):
            raise ParameterError(
                f"bound lengths do not match: {lb.size} vs {ub.size}")
        low, high = np.broadcast_arrays(lb, ub)
        if np.any(low > high):
            raise ParameterError("every lower bound must be <= its upper bound")
        if self.population_size < 2:
            raise ParameterError(f"population_size must be >= 2, got {self.population_size}")
        if self.max_iterations < 1:
            raise ParameterError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.max_stall_generations < 1:
            raise ParameterError(
                f"max_stall_generations must be >= 1, got {self.max_stall_generations}")
        if self.function_tolerance <= 0.0:
            raise ParameterError(
                f"function_tolerance must be > 0, got {self.function_tolerance}")
        if self.penalty_constant <= 0.0:
            raise ParameterError(
                f"penalty_constant must be > 0, got {self.penalty_constant}")
        lb.flags.writeable = False
        ub.flags.writeable = False
        object.__setattr__(self, "lower_bounds", lb)
        object.__setattr__(self, "upper_bounds", ub)

    def bounds_for(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Per-variable bound arrays of length n (scalar bounds broadcast)."""
        if self.lower_bounds.size not in (1, n) or self.upper_bounds.size not in (1, n):
            raise ParameterError(
                f"bounds have {self.lower_bounds.size} entries but the problem has {n} variables")
        lb = np.broadcast_to(self.lower_bounds, (n,)).astype(float)
        ub = np.broadcast_to(self.upper_bounds, (n,)).astype(float)
        return lb, ub


@dataclass(frozen=True)
class DesignEvaluation:
    """Canonical single-design evaluation; every reported summary comes from here."""

    mass: float
    kinetic_energy: float
    max_stress: float
    g1: float
    g2: float
    feasible: bool


@dataclass(frozen=True, eq=False)
class RunResult:
    """Outcome of one optimization run."""

    best_x: np.ndarray
    best_objective: float
    kinetic_energy: float
    mass: float
    max_stress: float
    history: np.ndarray
    iterations_run: int
    stop_reason: str

    def __post_init__(self) -> None:
        self.best_x.flags.writeable = False
        self.history.flags.writeable = False


def evaluate_design(x, spec: FlywheelSpec, h: float = DEFAULT_STEP) -> DesignEvaluation:
    """Mass, kinetic energy, peak stress and constraint values for one design."""
    x = np.asarray(x, dtype=float)
    m = model.mass(x, spec)
    ek = model.kinetic_energy(x, spec)
    vm = float(batch_evaluator(spec, h).max_von_mises(x[None, :])[0])
    g1 = m - spec.max_mass
    g2 = vm - spec.allowable_stress
    return DesignEvaluation(
        mass=m, kinetic_energy=ek, max_stress=vm,
        g1=g1, g2=g2, feasible=bool(g1 <= 0.0 and g2 <= 0.0))


def evaluate_constraints(x, spec: FlywheelSpec, h: float = DEFAULT_STEP) -> tuple[float, float]:
    """Constraint values (g1, g2); the design is feasible iff both are <= 0.

    g1 is the mass excess over the allowed maximum (kg); g2 the peak
    Von-Mises stress excess over the permissible stress (Pa).
    """
    ev = evaluate_design(x, spec, h)
    return ev.g1, ev.g2


def _penalty(g1, g2, config: ProblemConfig):
    cp = config.penalty_constant
    violated1 = (np.asarray(g1) > 0.0).astype(float)
    violated2 = (np.asarray(g2) > 0.0).astype(float)
    if config.literal_penalty_exponents:
        return violated1 * cp + violated2 * cp**2
    return (violated1 + violated2) * cp


def penalized_objective(x, spec: FlywheelSpec, config: ProblemConfig,
                        h: float = DEFAULT_STEP) -> float:
    """Objective to minimize: -E_k plus a constant penalty per violated constraint."""
    ev = evaluate_design(x, spec, h)
    return float(-ev.kinetic_energy + _penalty(ev.g1, ev.g2, config))


class PenaltyObjective:
    """Penalized objective over whole populations, with cached coefficients.

    Stress evaluation dominates the cost; with ``threads`` > 1 the
    population is split into contiguous chunks evaluated concurrently.
    Results do not depend on the chunking.
    """

    def __init__(self, spec: FlywheelSpec, config: ProblemConfig,
                 h: float = DEFAULT_STEP, threads: int = 1):
        self.spec = spec
        self.config = config
        self.h = float(h)
        self.threads = max(1, int(threads))
        self._mass_coeffs = model.mass_coefficients(spec)
        self._energy_coeffs = model.energy_coefficients(spec)
        self._stress = batch_evaluator(spec, self.h)

    def _max_von_mises(self, population: np.ndarray) -> np.ndarray:
        if self.threads == 1 or population.shape[0] < 2 * self.threads:
            return self._stress.max_von_mises(population)
        chunks = np.array_split(population, self.threads)
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            parts = list(pool.map(self._stress.max_von_mises, chunks))
        return np.concatenate(parts)

    def constraints(self, population: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        pop = np.atleast_2d(np.asarray(population, dtype=float))
        g1 = pop @ self._mass_coeffs - self.spec.max_mass
        g2 = self._max_von_mises(pop) - self.spec.allowable_stress
        return g1, g2

    def __call__(self, population: np.ndarray) -> np.ndarray:
        pop = np.atleast_2d(np.asarray(population, dtype=float))
        g1, g2 = self.constraints(pop)
        return -(pop @ self._energy_coeffs) + _penalty(g1, g2, self.config)


def jaya_step(population: np.ndarray, objectives: np.ndarray, config: ProblemConfig,
              rng: np.random.Generator, objective_fn) -> tuple[np.ndarray, np.ndarray]:
    """One Jaya generation: move toward best / away from worst, keep improvements.

    Ties for best or worst go to the lowest index. Moves are clamped to the
    bounds before evaluation, so every candidate ever scored is in-box.
    """
    population = np.asarray(population, dtype=float)
    n = population.shape[1]
    lb, ub = config.bounds_for(n)
    best = int(np.argmin(objectives))
    worst = int(np.argmax(objectives))
    if config.per_candidate_random:
        r1 = rng.random(population.shape)
        r2 = rng.random(population.shape)
    else:
        r1 = rng.random(n)
        r2 = rng.random(n)
    magnitude = np.abs(population)
    moved = population + r1 * (population[best] - magnitude) - r2 * (population[worst] - magnitude)
    np.clip(moved, lb, ub, out=moved)
    new_objectives = np.asarray(objective_fn(moved))
    accept = new_objectives < objectives
    return (np.where(accept[:, None], moved, population),
            np.where(accept, new_objectives, objectives))


def run(spec: FlywheelSpec, config: ProblemConfig, h: float = DEFAULT_STEP,
        threads: int = 1) -> RunResult:
    """Optimize the thickness profile; deterministic for a given seed.

    The population starts uniform inside the bounds. Iteration stops when
    the per-generation best value has changed by no more than the relative
    function tolerance for more than ``max_stall_generations`` consecutive
    generations, or at ``max_iterations``. The summary fields of the result
    are recomputed through :func:`evaluate_design` so they match any later
    re-evaluation of ``best_x`` exactly.
    """
    n = spec.n_control_points
    lb, ub = config.bounds_for(n)
    rng = np.random.default_rng(config.random_seed)
    objective = PenaltyObjective(spec, config, h=h, threads=threads)

    population = rng.uniform(lb, ub, size=(config.population_size, n))
    objectives = objective(population)
    history = [float(np.min(objectives))]

    stall = 0
    iterations = 0
    stop_reason = STOP_MAX_ITERATIONS
    for iteration in range(1, config.max_iterations + 1):
        population, objectives = jaya_step(population, objectives, config, rng, objective)
        f_now = float(np.min(objectives))
        if abs(f_now - history[-1]) / max(1.0, abs(f_now)) <= config.function_tolerance:
            stall += 1
        else:
            stall = 0
        history.append(f_now)
        iterations = iteration
        if stall > config.max_stall_generations:
            stop_reason = STOP_STALLED
            break

    best_x = population[int(np.argmin(objectives))].copy()
    ev = evaluate_design(best_x, spec, h)
    best_objective = float(-ev.kinetic_energy + _penalty(ev.g1, ev.g2, config))
    return RunResult(
        best_x=best_x,
        best_objective=best_objective,
        kinetic_energy=ev.kinetic_energy,
        mass=ev.mass,
        max_stress=ev.max_stress,
        history=np.asarray(history),
        iterations_run=iterations,
        stop_reason=stop_reason,
    )


def threads_from_env(default: int = 1) -> int:
    """Worker-thread cap from the FLYWHEEL_THREADS environment variable."""
    raw = os.environ.get("FLYWHEEL_THREADS", "")
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ParameterError(f"FLYWHEEL_THREADS must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ParameterError(f"FLYWHEEL_THREADS must be >= 1, got {value}")
    return value
