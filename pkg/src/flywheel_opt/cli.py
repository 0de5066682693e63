"""Command-line front end.

Subcommands:
  init-config  write the built-in default configuration to a JSON file
  evaluate     mass / kinetic energy / peak stress report for one design
  analyze      per-node stress field as CSV, optionally plotted
  optimize     run the Jaya search and write result files + figures

Exit codes: 0 success, 2 usage, 3 configuration error, 4 numerical or
geometry failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import LoadedConfig, default_config_dict, load_config
from .errors import ConfigError, DomainError, GeometryError, NumericalError, ParameterError
from .model import profile_curve
from .optimizer import evaluate_design, run, threads_from_env
from .plots import save_convergence_plot, save_profile_plot, save_stress_plot
from .stress import assemble_and_solve

STRESS_CSV_HEADER = ["u", "r_m", "t_m", "Z_N", "sigma_r_Pa", "sigma_theta_Pa", "sigma_vm_Pa"]
PROFILE_CSV_HEADER = ["u", "r_m", "t_m", "t_mirror_m"]
CONVERGENCE_CSV_HEADER = ["iteration", "best_f"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_NUMERICAL = 4


def _parse_design(parser: argparse.ArgumentParser, text: str, n: int) -> np.ndarray:
    items = [s for s in text.split(",") if s.strip()]
    if not items:
        parser.error("--x needs a comma-separated list of thicknesses in meters")
    try:
        values = [float(s) for s in items]
    except ValueError:
        parser.error(f"--x contains a non-numeric entry: {text!r}")
    if len(values) != n:
        parser.error(f"--x needs exactly {n} thicknesses for this config, got {len(values)}")
    return np.asarray(values, dtype=float)


def _warn_out_of_bounds(x: np.ndarray, cfg: LoadedConfig) -> None:
    lb, ub = cfg.problem.bounds_for(cfg.spec.n_control_points)
    if np.any(x < lb) or np.any(x > ub):
        print("warning: design vector lies outside the optimizer bounds; "
              "evaluating anyway", file=sys.stderr)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def _stress_rows(field):
    return zip(field.u_nodes, field.radius, field.thickness, field.z,
               field.sigma_r, field.sigma_theta, field.sigma_vm)


def _summary_dict(x: np.ndarray, cfg: LoadedConfig) -> dict:
    ev = evaluate_design(x, cfg.spec, cfg.step_size)
    return {
        "best_x_m": [float(v) for v in x],
        "mass_kg": ev.mass,
        "kinetic_energy_j": ev.kinetic_energy,
        "max_von_mises_pa": ev.max_stress,
        "max_von_mises_n_mm2": ev.max_stress / 1e6,
        "g1_kg": ev.g1,
        "g2_pa": ev.g2,
        "feasible": ev.feasible,
    }


def _print_report(summary: dict, cfg: LoadedConfig) -> None:
    spec = cfg.spec
    print(f"material:            {cfg.material_name}")
    print("design vector (m):   " + ", ".join(f"{v:.6g}" for v in summary["best_x_m"]))
    print(f"mass:                {summary['mass_kg']:.6f} kg"
          f"  (limit {spec.max_mass:g} kg, g1 = {summary['g1_kg']:+.6f} kg)")
    print(f"kinetic energy:      {summary['kinetic_energy_j']:.6f} J")
    print(f"max von mises:       {summary['max_von_mises_pa']:.6f} Pa"
          f" = {summary['max_von_mises_n_mm2']:.6f} N/mm^2"
          f"  (limit {spec.allowable_stress / 1e6:g} N/mm^2,"
          f" g2 = {summary['g2_pa']:+.6f} Pa)")
    print(f"mass constraint:     {'satisfied' if summary['g1_kg'] <= 0 else 'VIOLATED'}")
    print(f"stress constraint:   {'satisfied' if summary['g2_pa'] <= 0 else 'VIOLATED'}")
    print(f"feasible:            {'yes' if summary['feasible'] else 'no'}")


def cmd_init_config(args) -> int:
    path = Path(args.path)
    path.write_text(json.dumps(default_config_dict(), indent=2) + "\n", encoding="utf-8")
    print(f"wrote default config to {path}")
    return EXIT_OK


def cmd_evaluate(args, parser) -> int:
    cfg = load_config(args.config)
    x = _parse_design(parser, args.x, cfg.spec.n_control_points)
    _warn_out_of_bounds(x, cfg)
    _print_report(_summary_dict(x, cfg), cfg)
    return EXIT_OK


def cmd_analyze(args, parser) -> int:
    cfg = load_config(args.config)
    x = _parse_design(parser, args.x, cfg.spec.n_control_points)
    _warn_out_of_bounds(x, cfg)
    field = assemble_and_solve(profile_curve(cfg.spec, x), cfg.spec, cfg.step_size)
    csv_path = Path(args.csv)
    _write_csv(csv_path, STRESS_CSV_HEADER, _stress_rows(field))
    print(f"wrote stress field ({field.u_nodes.size} nodes) to {csv_path}")
    if args.svg:
        save_stress_plot(field, args.svg)
        print(f"wrote stress plot to {args.svg}")
    print(f"max von mises: {float(np.max(field.sigma_vm)):.6f} Pa"
          f" = {float(np.max(field.sigma_vm)) / 1e6:.6f} N/mm^2")
    return EXIT_OK


def cmd_optimize(args) -> int:
    cfg = load_config(args.config)
    problem = cfg.problem
    if args.seed is not None:
        problem = dataclasses.replace(problem, random_seed=args.seed)
    threads = threads_from_env()

    result = run(cfg.spec, problem, h=cfg.step_size, threads=threads)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    summary = _summary_dict(result.best_x, cfg)
    summary.update({
        "objective_f": result.best_objective,
        "stop_reason": result.stop_reason,
        "iterations_run": result.iterations_run,
        "seed": problem.random_seed,
        "step_size": cfg.step_size,
    })
    (out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2) + "\n", encoding="utf-8")

    _write_csv(out_dir / "convergence.csv", CONVERGENCE_CSV_HEADER,
               ((i, f) for i, f in enumerate(result.history)))

    curve = profile_curve(cfg.spec, result.best_x)
    field = assemble_and_solve(curve, cfg.spec, cfg.step_size)
    u = field.u_nodes
    pts = np.array([curve.point(v) for v in u])
    _write_csv(out_dir / "profile.csv", PROFILE_CSV_HEADER,
               zip(u, pts[:, 0], pts[:, 1], -pts[:, 1]))
    _write_csv(out_dir / "stress.csv", STRESS_CSV_HEADER, _stress_rows(field))

    save_convergence_plot(result.history, out_dir / "convergence.png")
    save_profile_plot(curve, out_dir / "profile.png")
    save_stress_plot(field, out_dir / "stress.png")

    outputs = ["summary.json", "convergence.csv", "profile.csv", "stress.csv",
               "convergence.png", "profile.png", "stress.png", "manifest.json"]
    manifest = {
        "tool_version": __version__,
        "config_source": cfg.source,
        "config_digest": cfg.digest,
        "seed": problem.random_seed,
        "created_utc": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        "step_size": cfg.step_size,
        "outputs": outputs,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8")

    _print_report(summary, cfg)
    print(f"objective f:         {result.best_objective:.6f}")
    print(f"stopped:             {result.stop_reason} after {result.iterations_run} iterations")
    print(f"outputs in:          {out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flywheel",
        description="Flywheel cross-section shape analysis and optimization.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_init = sub.add_parser("init-config", help="write the default configuration file")
    p_init.add_argument("path", nargs="?", default="flywheel.json",
                        help="destination path (default: flywheel.json)")

    p_eval = sub.add_parser("evaluate", help="report mass, energy and peak stress of a design")
    p_eval.add_argument("--config", required=True, help="JSON configuration file")
    p_eval.add_argument("--x", required=True,
                        help="comma-separated control thicknesses in meters")

    p_ana = sub.add_parser("analyze", help="export the per-node stress field")
    p_ana.add_argument("--config", required=True, help="JSON configuration file")
    p_ana.add_argument("--x", required=True,
                       help="comma-separated control thicknesses in meters")
    p_ana.add_argument("--csv", default="stress.csv",
                       help="stress field CSV path (default: stress.csv)")
    p_ana.add_argument("--svg", default=None, help="optional stress plot path")

    p_opt = sub.add_parser("optimize", help="run the Jaya shape optimization")
    p_opt.add_argument("--config", required=True, help="JSON configuration file")
    p_opt.add_argument("--seed", type=int, default=None,
                       help="override the random seed from the config")
    p_opt.add_argument("--out", required=True, help="output directory")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "init-config":
            return cmd_init_config(args)
        if args.command == "evaluate":
            return cmd_evaluate(args, parser)
        if args.command == "analyze":
            return cmd_analyze(args, parser)
        return cmd_optimize(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, GeometryError, DomainError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
