import json

import pytest

from flywheel_opt import FlywheelSpec


@pytest.fixture(scope="session")
def spec() -> FlywheelSpec:
    """The default grey-cast-iron thresher flywheel."""
    return FlywheelSpec(
        density=7250.0,
        elastic_modulus=210e9,
        poisson_ratio=0.3,
        inner_radius=0.06,
        outer_radius=0.5,
        angular_velocity=65.45,
        max_mass=115.0,
        allowable_stress=6.4e6,
        n_control_points=8,
    )


@pytest.fixture()
def small_config(tmp_path):
    """Config file with a population small enough for fast CLI runs."""
    from flywheel_opt import default_config_dict

    data = default_config_dict()
    data["optimizer"].update(
        population_size=40, max_iterations=30, max_stall_generations=8, random_seed=5)
    path = tmp_path / "small.json"
    path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    return path
