"""Command line front end.

Subcommands: airy, solve, inverse, reciprocal, modulate, plot.
Exit codes: 0 success, 1 a residual exceeded its tolerance, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import ermakov, involutory, reciprocal, stefan
from .errors import AiryOverflowError, BracketError, ConvergenceError, DomainError
from .output import heatmap, line_plot, read_csv, write_csv, write_json
from .reports import GridSpec
from .similarity import grid_points, make_solution, pde_residual, residual_field, eval_u
from .specialfn import INV_PI, airy


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """One run. ``grid`` x-values are fractions of the front S(t); ``lattice``
    x-values are fractions of the image front S*; ``modulated_grid`` is in
    absolute (x, t*)."""

    lam: float = 1.0
    a: float = 1.0
    c1: float = 1.0
    c2: float = 0.25
    gamma: Optional[float] = 1.0
    P_m: Optional[float] = None
    bracket: Optional[tuple[float, float]] = None
    grid: GridSpec = GridSpec(0.0, 1.0, 0.0, 10.0, 50, 50)
    boundary_times: int = 20
    quadrature: int = 16
    fd_step: float = 1e-3
    lattice: GridSpec = GridSpec(0.2, 0.6, 1.0, 1.4, 40, 40)
    modulation: dict = field(default_factory=lambda: {"family": "power", "exponent": 0.5, "a": 1.0, "t_max": 10.0})
    modulated_grid: GridSpec = GridSpec(0.1, 0.9, 0.1, 2.0, 30, 30)
    output_dir: str = "out"
    emit: tuple[str, ...] = ("csv", "json")
    tol: float = 1e-9
    tol_fd: float = 1e-5
    tol_compat: float = 1e-4
    tol_path: float = 1e-8
    tol_origin: float = 1e-10
    tol_involution: float = 1e-10
    tol_modulated: float = 1e-4

    _KEYS = {
        "lambda": "lam", "a": "a", "c1": "c1", "c2": "c2", "gamma": "gamma", "P_m": "P_m",
        "bracket": "bracket", "boundary_times": "boundary_times", "quadrature": "quadrature",
        "fd_step": "fd_step", "modulation": "modulation", "output_dir": "output_dir", "emit": "emit",
        "tol": "tol", "tol_fd": "tol_fd", "tol_compat": "tol_compat", "tol_path": "tol_path",
        "tol_origin": "tol_origin", "tol_involution": "tol_involution", "tol_modulated": "tol_modulated",
    }
    _GRIDS = ("grid", "lattice", "modulated_grid")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        kwargs = {}
        for key, value in data.items():
            if key in cls._GRIDS:
                try:
                    kwargs[key] = GridSpec(**value)
                except (TypeError, DomainError) as exc:
                    raise ConfigError(f"{key}: {exc}") from exc
            elif key in cls._KEYS:
                kwargs[cls._KEYS[key]] = value
            else:
                raise ConfigError(f"unknown config key {key!r}")
        if "P_m" in data and "gamma" not in data:
            kwargs["gamma"] = None
        if kwargs.get("emit") is not None:
            kwargs["emit"] = tuple(kwargs["emit"])
        if kwargs.get("bracket") is not None:
            kwargs["bracket"] = tuple(kwargs["bracket"])
        return cls(**kwargs)

    def validate(self) -> None:
        if (self.gamma is None) == (self.P_m is None):
            raise ConfigError("exactly one of gamma and P_m must be given")
        if not (isinstance(self.lam, (int, float)) and self.lam > 0):
            raise ConfigError(
                f"lambda={self.lam!r}: only lambda > 0 is supported (positivity regime: kstar > 0, Psi > 0)"
            )
        if not self.a > 0:
            raise ConfigError(f"a={self.a!r}: the time offset must be positive")
        if not set(self.emit) <= {"csv", "json", "svg"}:
            raise ConfigError(f"emit must be a subset of csv,json,svg, got {self.emit!r}")


def load_config(args: argparse.Namespace) -> RunConfig:
    data = {}
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    cfg = RunConfig.from_dict(data)
    over = {}
    for flag, attr in (("lam", "lam"), ("a", "a"), ("c1", "c1"), ("c2", "c2"), ("out", "output_dir"), ("tol", "tol")):
        value = getattr(args, flag, None)
        if value is not None:
            over[attr] = value
    if getattr(args, "gamma", None) is not None:
        over.update(gamma=args.gamma, P_m=None)
    if getattr(args, "pm", None) is not None:
        over.update(P_m=args.pm, gamma=None)
    if getattr(args, "emit", None):
        over["emit"] = tuple(s for s in args.emit.split(",") if s)
    cfg = replace(cfg, **over)
    cfg.validate()
    return cfg


def build_problem(cfg: RunConfig) -> stefan.StefanProblem:
    try:
        sol = make_solution(cfg.lam, cfg.c1, cfg.c2, cfg.a)
    except (DomainError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    gamma = cfg.gamma
    if gamma is None:
        bracket = cfg.bracket or stefan.scan_bracket(sol, cfg.P_m)
        if bracket is None:
            raise ConfigError(f"no front coefficient in the scanned range gives P_m={cfg.P_m!r}")
        try:
            gamma = stefan.inverse_solve(sol, cfg.P_m, bracket)
        except (BracketError, ConvergenceError, DomainError) as exc:
            raise ConfigError(str(exc)) from exc
    try:
        return stefan.forward_solve(sol, gamma)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _breaches(checks: list[tuple[str, float, float]]) -> list[str]:
    return [f"{name}: {value!r} >= tolerance {tol!r}" for name, value, tol in checks if not (value < tol)]


def _finish(breaches: list[str]) -> int:
    for msg in breaches:
        print(f"tolerance breached: {msg}", file=sys.stderr)
    return 1 if breaches else 0


# subcommands ----------------------------------------------------------------


def cmd_airy(args) -> int:
    try:
        v = airy(np.asarray(args.z, dtype=float))
    except (DomainError, AiryOverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print("z,ai,aip,bi,bip,wronskian_defect")
    for row in zip(args.z, v.ai, v.aip, v.bi, v.bip, np.abs(v.wronskian - INV_PI)):
        print(",".join(format(float(x), ".17g") for x in row))
    return 0


def solve_outputs(cfg: RunConfig, problem: stefan.StefanProblem) -> tuple[dict, dict, list[tuple[str, float, float]]]:
    sol = problem.sol
    pde_a = pde_residual(sol, cfg.grid, "analytic", gamma=problem.gamma)
    pde_fd = pde_residual(sol, cfg.grid, "finite-difference", cfg.fd_step, gamma=problem.gamma)
    times = np.linspace(cfg.grid.t0, cfg.grid.t1, cfg.boundary_times)
    bcs = stefan.boundary_residuals(problem, times)
    problem_doc = problem.to_dict()
    problem_doc["airy_argument_scale"] = {
        "implemented": ermakov.IMPLEMENTED_XI_SCALE,
        "as_printed": ermakov.PRINTED_XI_SCALE,
    }
    residual_doc = {
        "pde_analytic": pde_a.to_dict(),
        "pde_finite_difference": pde_fd.to_dict(),
        "boundary": [r.to_dict() for r in bcs],
        "derived_relations": {
            "L_m_minus_P_m_relative": abs(problem.L_m - problem.P_m) / abs(problem.P_m),
            "H_0": problem.H_0,
        },
        "tolerances": {"analytic": cfg.tol, "finite_difference": cfg.tol_fd},
    }
    checks = [("pde analytic", pde_a.max_abs, cfg.tol), ("pde finite-difference", pde_fd.max_abs, cfg.tol_fd)]
    checks += [(r.identity_name, r.max_abs, cfg.tol) for r in bcs]
    return problem_doc, residual_doc, checks


def cmd_solve(args) -> int:
    try:
        cfg = load_config(args)
        problem = build_problem(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    problem_doc, residual_doc, checks = solve_outputs(cfg, problem)
    X, T = grid_points(problem.sol, cfg.grid, problem.gamma)
    if "csv" in cfg.emit:
        write_csv(out / "solution.csv", ("x", "t", "u", "residual"),
                  (X, T, eval_u(problem.sol, X, T), residual_field(problem.sol, X, T)))
    if "json" in cfg.emit:
        write_json(out / "problem.json", problem_doc)
        write_json(out / "residuals.json", residual_doc)
    if "svg" in cfg.emit:
        U = eval_u(problem.sol, X, T)
        rows = np.unique(np.linspace(0, len(T) - 1, 5).astype(int))
        series = [(f"t={T[r, 0]:.3g}", X[r], U[r]) for r in rows]
        (out / "profile.svg").write_text(line_plot(series, "u(x, t) across the moving domain", "x", "u"))
        (out / "residual_heatmap.svg").write_text(
            heatmap(X.ravel(), T.ravel(), residual_field(problem.sol, X, T).ravel(), "PDE residual")
        )
    print(f"gamma={problem.gamma!r} L_m={problem.L_m!r} P_m={problem.P_m!r} H_0={problem.H_0!r}")
    return _finish(_breaches(checks))


def cmd_inverse(args) -> int:
    try:
        cfg = load_config(args)
        if cfg.P_m is None:
            raise ConfigError("inverse needs --pm (or P_m in the config)")
        problem = build_problem(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    doc = {"P_m_target": cfg.P_m, "gamma": problem.gamma, "P_m": problem.P_m, "S_0": problem.S_0}
    print(json.dumps(doc, sort_keys=True))
    return 0


def cmd_reciprocal(args) -> int:
    try:
        cfg = load_config(args)
        problem = build_problem(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    nq = cfg.quadrature
    fr = np.linspace(cfg.grid.x0, cfg.grid.x1, cfg.grid.nx)
    times = np.linspace(cfg.grid.t0, cfg.grid.t1, cfg.grid.nt)
    image = reciprocal.build_image(problem, fr, times, nq)
    s_img = reciprocal.image_front(problem, nq)
    lat = cfg.lattice
    lattice = replace(lat, x0=lat.x0 * s_img, x1=lat.x1 * s_img)
    compat = reciprocal.compatibility_residual(problem, lattice, nq)
    x1 = 0.5 * problem.S_0
    path_a, path_b = reciprocal.path_integrals(problem, x1, cfg.grid.t0, cfg.grid.t1, nq)
    drift = abs(reciprocal.origin_drift(problem, cfg.grid.t0, cfg.grid.t1, nq))
    doc = image.sidecar()
    doc.update(
        compatibility=compat.to_dict(),
        path_independence={"x1": x1, "space_then_time": path_a, "time_then_space": path_b,
                           "difference": abs(path_a - path_b)},
        origin_drift=drift,
        s_star_coeff_note="expected to vanish on exact instances (L_m = gamma Psi(gamma))",
    )
    s_vals = reciprocal.s_star(problem, times, image.s_star_const)
    if "csv" in cfg.emit:
        write_csv(out / "reciprocal.csv", ("x", "t", "x_star", "u_star"), (image.x, image.t, image.x_star, image.u_star))
        write_csv(out / "front.csv", ("t", "S", "S_star"), (times, stefan.front(problem, times), s_vals))
    if "json" in cfg.emit:
        write_json(out / "reciprocal.json", doc)
    if "svg" in cfg.emit:
        (out / "front.svg").write_text(line_plot(
            [("S(t)", times, stefan.front(problem, times)), ("S*(t*)", times, s_vals)],
            "moving boundary and its reciprocal image", "t", "position"))
    checks = [
        ("reciprocal compatibility", compat.max_abs, cfg.tol_compat),
        ("path independence", abs(path_a - path_b), cfg.tol_path),
        ("image origin drift", drift, cfg.tol_origin),
    ]
    print(f"s_star_coeff={image.s_star_coeff!r} s_star_const={image.s_star_const!r}")
    return _finish(_breaches(checks))


def cmd_modulate(args) -> int:
    try:
        cfg = load_config(args)
        problem = build_problem(cfg)
        mod = involutory.Modulation.from_config(cfg.modulation)
    except (ConfigError, DomainError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    sol = problem.sol
    inv_grid = GridSpec(cfg.modulated_grid.x0, cfg.modulated_grid.x1, 0.0, mod.t_max, 20, 20)
    err = involutory.involution_check(mod, inv_grid, lambda x, t: eval_u(sol, x, t))
    try:
        res = involutory.modulated_residual(sol, mod, cfg.modulated_grid, cfg.fd_step)
        ablation = involutory.modulated_residual(sol, mod, cfg.modulated_grid, cfg.fd_step, drop_drift=True)
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if "csv" in cfg.emit:
        X, TS = cfg.modulated_grid.mesh()
        T = mod.t_of_t_star(TS)
        write_csv(out / "modulated.csv", ("x", "t_star", "t", "u_star"),
                  (X, TS, T, involutory.push_forward(lambda x, t: eval_u(sol, x, t), mod, X, TS)))
    if "json" in cfg.emit:
        write_json(out / "involution.json", {
            "modulation": cfg.modulation,
            "round_trip_error": err,
            "modulated_residual": res.to_dict(),
            "ablation_residual": ablation.to_dict(),
        })
    checks = [("involution round trip", err, cfg.tol_involution), ("modulated pde", res.max_abs, cfg.tol_modulated)]
    print(f"round_trip_error={err!r} modulated_max={res.max_abs!r}")
    return _finish(_breaches(checks))


def cmd_plot(args) -> int:
    try:
        data = read_csv(Path(args.input))
    except (OSError, ValueError, StopIteration) as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return 2
    try:
        if args.kind == "profile":
            ts = np.unique(data["t"])
            picks = ts[np.unique(np.linspace(0, len(ts) - 1, min(5, len(ts))).astype(int))]
            series = [(f"t={tv:.3g}", data["x"][data["t"] == tv], data["u"][data["t"] == tv]) for tv in picks]
            svg = line_plot(series, "u(x, t)", "x", "u")
        elif args.kind == "heatmap":
            svg = heatmap(data["x"], data["t"], data[args.column], f"{args.column}")
        else:
            svg = line_plot([("S(t)", data["t"], data["S"]), ("S*(t*)", data["t"], data["S_star"])],
                            "moving boundary and its reciprocal image", "t", "position")
    except KeyError as exc:
        print(f"error: column {exc} missing from {args.input}", file=sys.stderr)
        return 2
    out = Path(args.out or Path(args.input).with_suffix(".svg"))
    out.write_text(svg)
    print(out)
    return 0


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--c1", type=float)
    p.add_argument("--c2", type=float)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--gamma", type=float)
    g.add_argument("--pm", type=float)
    p.add_argument("--out", help="output directory")
    p.add_argument("--tol", type=float, help="tolerance for analytic residuals")
    p.add_argument("--emit", help="comma-separated subset of csv,json,svg")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ermakov-stefan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("airy", help="print Ai, Ai', Bi, Bi' as CSV")
    p.add_argument("z", nargs="+", type=float)
    p.set_defaults(func=cmd_airy)

    for name, func, text in (
        ("solve", cmd_solve, "build the exact solution and Stefan problem, write residual reports"),
        ("inverse", cmd_inverse, "find gamma for a target P_m"),
        ("reciprocal", cmd_reciprocal, "tabulate the reciprocal image and check its equation"),
        ("modulate", cmd_modulate, "apply the involutory modulation and check it"),
    ):
        p = sub.add_parser(name, help=text)
        _add_run_flags(p)
        p.set_defaults(func=func)

    p = sub.add_parser("plot", help="render a CSV produced by another subcommand as SVG")
    p.add_argument("input")
    p.add_argument("--kind", choices=("profile", "heatmap", "front"), default="profile")
    p.add_argument("--column", default="residual", help="value column for heatmaps")
    p.add_argument("--out")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
