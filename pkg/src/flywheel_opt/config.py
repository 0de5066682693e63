"""JSON run configuration: material, design limits, optimizer and solver settings.

A config file has four optional sections (``material``, ``design``,
``optimizer``, ``solver``); anything omitted falls back to the built-in
grey-cast-iron thresher flywheel defaults. Values carry the units of the
data sheet they come from (GPa, N/mm^2, mm-free meters) and are converted
to SI on load.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .model import FlywheelSpec
from .optimizer import ProblemConfig

__all__ = ["LoadedConfig", "default_config_dict", "load_config", "config_digest"]

DEFAULTS = {
    "material": {
        "name": "grey cast iron",
        "density_kg_m3": 7250.0,
        "elastic_modulus_gpa": 210.0,
        "poisson_ratio": 0.3,
    },
    "design": {
        "n_control_points": 8,
        "inner_radius_m": 0.06,
        "outer_radius_m": 0.5,
        "angular_velocity_rad_s": 65.45,
        "max_mass_kg": 115.0,
        "allowable_stress_n_mm2": 6.4,
    },
    "optimizer": {
        "lower_bounds_m": 0.01,
        "upper_bounds_m": 0.06,
        "penalty_constant": 1e8,
        "population_size": 1000,
        "max_iterations": 500,
        "max_stall_generations": 50,
        "function_tolerance": 1e-6,
        "random_seed": 1,
        "literal_penalty_exponents": False,
        "per_candidate_random": False,
    },
    "solver": {
        "step_size": 0.01,
    },
}


@dataclass(frozen=True)
class LoadedConfig:
    """Validated configuration plus the digest of the file it came from."""

    spec: FlywheelSpec
    problem: ProblemConfig
    step_size: float
    material_name: str
    digest: str
    source: str


def default_config_dict() -> dict:
    """Deep copy of the built-in default configuration."""
    return json.loads(json.dumps(DEFAULTS))


def config_digest(raw: bytes) -> str:
    """Content hash of a config file, recomputable from the file alone."""
    return "sha256:" + hashlib.sha256(raw).hexdigest()


class _Section:
    """One config section with type-checked, defaulted field access."""

    def __init__(self, source: str, name: str, data: dict):
        self.source = source
        self.name = name
        self.data = data
        unknown = set(data) - set(DEFAULTS[name])
        if unknown:
            raise ConfigError(
                f"{source}: unknown field(s) in section '{name}': "
                + ", ".join(sorted(unknown)))

    def _fail(self, key: str, message: str):
        raise ConfigError(f"{self.source}: {self.name}.{key}: {message}")

    def number(self, key: str, minimum=None, positive=False) -> float:
        value = self.data.get(key, DEFAULTS[self.name][key])
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self._fail(key, f"expected a number, got {value!r}")
        value = float(value)
        if positive and value <= 0.0:
            self._fail(key, f"must be > 0, got {value}")
        if minimum is not None and value < minimum:
            self._fail(key, f"must be >= {minimum}, got {value}")
        return value

    def integer(self, key: str, minimum=None) -> int:
        value = self.data.get(key, DEFAULTS[self.name][key])
        if isinstance(value, bool) or not isinstance(value, int):
            self._fail(key, f"expected an integer, got {value!r}")
        if minimum is not None and value < minimum:
            self._fail(key, f"must be >= {minimum}, got {value}")
        return value

    def boolean(self, key: str) -> bool:
        value = self.data.get(key, DEFAULTS[self.name][key])
        if not isinstance(value, bool):
            self._fail(key, f"expected true/false, got {value!r}")
        return value

    def string(self, key: str) -> str:
        value = self.data.get(key, DEFAULTS[self.name][key])
        if not isinstance(value, str):
            self._fail(key, f"expected a string, got {value!r}")
        return value

    def bounds(self, key: str):
        value = self.data.get(key, DEFAULTS[self.name][key])
        if isinstance(value, bool):
            self._fail(key, f"expected a number or list of numbers, got {value!r}")
        if isinstance(value, (int, float)):
            return float(value)
        if isinstance(value, list) and value and all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            return [float(v) for v in value]
        self._fail(key, f"expected a number or non-empty list of numbers, got {value!r}")


def load_config(path) -> LoadedConfig:
    """Load, validate and convert a JSON config file.

    Raises ConfigError with the offending location for malformed JSON and
    with the section.field name for invalid values.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{path}: not valid UTF-8: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"{path}: unknown section(s): " + ", ".join(sorted(unknown)))
    for name, section in data.items():
        if not isinstance(section, dict):
            raise ConfigError(f"{path}: section '{name}' must be a JSON object")

    source = str(path)
    material = _Section(source, "material", data.get("material", {}))
    design = _Section(source, "design", data.get("design", {}))
    optimizer = _Section(source, "optimizer", data.get("optimizer", {}))
    solver = _Section(source, "solver", data.get("solver", {}))

    try:
        spec = FlywheelSpec(
            density=material.number("density_kg_m3", minimum=0.0),
            elastic_modulus=material.number("elastic_modulus_gpa", positive=True) * 1e9,
            poisson_ratio=material.number("poisson_ratio", minimum=0.0),
            inner_radius=design.number("inner_radius_m", positive=True),
            outer_radius=design.number("outer_radius_m", positive=True),
            angular_velocity=design.number("angular_velocity_rad_s", minimum=0.0),
            max_mass=design.number("max_mass_kg", positive=True),
            allowable_stress=design.number("allowable_stress_n_mm2", positive=True) * 1e6,
            n_control_points=design.integer("n_control_points", minimum=4),
        )
        problem = ProblemConfig(
            lower_bounds=optimizer.bounds("lower_bounds_m"),
            upper_bounds=optimizer.bounds("upper_bounds_m"),
            penalty_constant=optimizer.number("penalty_constant", positive=True),
            population_size=optimizer.integer("population_size", minimum=2),
            max_iterations=optimizer.integer("max_iterations", minimum=1),
            max_stall_generations=optimizer.integer("max_stall_generations", minimum=1),
            function_tolerance=optimizer.number("function_tolerance", positive=True),
            random_seed=optimizer.integer("random_seed"),
            literal_penalty_exponents=optimizer.boolean("literal_penalty_exponents"),
            per_candidate_random=optimizer.boolean("per_candidate_random"),
        )
        problem.bounds_for(spec.n_control_points)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    return LoadedConfig(
        spec=spec,
        problem=problem,
        step_size=solver.number("step_size", positive=True),
        material_name=material.string("name"),
        digest=config_digest(raw),
        source=source,
    )
