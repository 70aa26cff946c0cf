"""Command-line entry point: holonomy-lab <command> [options]."""
from __future__ import annotations

import argparse
import itertools
import sys
import time
from dataclasses import dataclass, field, asdict, fields
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .report_io import csv_text, dumps, validate_report, write_text

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

MIN_GRID = {"field": 2, "geometry": 16, "chern": 8, "chern4": 4}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str = ""
    action: str | None = None
    system: str | None = None
    level: str | None = None
    j: str | None = None
    component: str = "F"
    grid: int | None = None
    grid4: int | None = None
    tol: float | None = None
    step: float = 1e-5
    out: str | None = None
    seed: int = 0
    threads: int | None = None
    loop: str | None = None
    segments: int = 512
    T: float | None = None
    steps: int | None = None
    suite: list[str] = field(default_factory=lambda: ["all"])
    all: bool = False
    oracle: bool = True
    config: str | None = None

    def validate(self) -> None:
        if self.tol is not None and self.tol <= 0:
            raise UsageError("--tol must be positive")
        if not 1e-7 <= self.step <= 1e-3:
            raise UsageError("--step must lie in [1e-7, 1e-3]")
        if self.threads is not None and self.threads < 1:
            raise UsageError("--threads must be at least 1")
        for name, value, floor in (("--grid", self.grid, MIN_GRID.get(self.command, 2)),
                                   ("--grid4", self.grid4, MIN_GRID["chern4"])):
            if value is not None and value < floor:
                raise UsageError(f"{name} must be at least {floor} for {self.command}")

    def public(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def load_toml(path: str) -> dict:
    try:
        import tomllib  # Python 3.11+
    except ModuleNotFoundError:
        import tomli as tomllib
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def build_config(ns: argparse.Namespace) -> RunConfig:
    """Defaults, then the TOML file, then explicit flags."""
    cfg = RunConfig()
    if getattr(ns, "config", None):
        for k, v in load_toml(ns.config).items():
            setattr(cfg, k, v)
    for f in fields(RunConfig):
        v = getattr(ns, f.name, None)
        if v is not None:
            setattr(cfg, f.name, v)
    cfg.validate()
    return cfg


# -------------------------------------------------------------------- parser

def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("common options")
    g.add_argument("--tol", type=float, help="acceptance tolerance for this command")
    g.add_argument("--seed", type=int, help="seed for randomized point sets")
    g.add_argument("--out", help="output path (default: stdout)")
    g.add_argument("--threads", type=int, help="worker cap for quadratures (env HOLONOMY_LAB_THREADS)")
    g.add_argument("--config", help="TOML file of defaults; flags override it")
    g.add_argument("--step", type=float, help="finite-difference step")


def _system(p: argparse.ArgumentParser, level_required: bool = True) -> None:
    p.add_argument("--system", required=level_required, help="su2, su2-quad, su3-deg, su3-flag, su3-adj")
    p.add_argument("--level", required=level_required, help="level label, e.g. 1/2, E1, E3, -, 0, +")
    p.add_argument("--j", help="spin for su2 systems")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holonomy-lab", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra", help="Lie-algebra identities")
    p.add_argument("action", choices=["verify"])
    _common(p)

    p = sub.add_parser("geometry", help="CP2 volume, self-duality, inner products")
    p.add_argument("action", choices=["volume", "selfdual", "inner"])
    p.add_argument("--grid", type=int)
    _common(p)

    p = sub.add_parser("field", help="dump connection or curvature components on a grid (CSV)")
    p.add_argument("action", choices=["dump"])
    _system(p)
    p.add_argument("--component", choices=["A", "F"])
    p.add_argument("--grid", type=int)
    _common(p)

    p = sub.add_parser("chern", help="Chern numbers")
    _system(p, level_required=False)
    p.add_argument("--all", action="store_true", default=None, help="the full table of integers")
    p.add_argument("--grid", type=int, help="2D grid per axis")
    p.add_argument("--grid4", type=int, help="4D grid per axis")
    _common(p)

    p = sub.add_parser("holonomy", help="Wilson loop of a level around a loop")
    _system(p)
    p.add_argument("--loop", required=True, help="loop JSON file")
    p.add_argument("--segments", type=int)
    _common(p)

    p = sub.add_parser("simulate", help="Schrodinger evolution around a loop")
    _system(p)
    p.add_argument("--loop", required=True, help="loop JSON file")
    p.add_argument("--T", type=float, required=True, help="total time")
    p.add_argument("--steps", type=int)
    p.add_argument("--segments", type=int)
    _common(p)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", nargs="+", help="algebra monopole geometry fields decomposition chern holonomy | all")
    p.add_argument("--no-oracle", dest="oracle", action="store_false", default=None,
                   help="skip the Schrodinger-evolution oracle")
    p.add_argument("--grid", type=int, help="2D grid per axis")
    p.add_argument("--grid4", type=int, help="4D grid per axis")
    _common(p)
    return parser


# ------------------------------------------------------------------ commands

def _envelope(kind: str, cfg: RunConfig, body: dict) -> dict:
    return {"report": kind, "version": __version__, "config": cfg.public(), **body}


def _emit(report: dict, cfg: RunConfig) -> None:
    validate_report(report)
    write_text(dumps(report), cfg.out)


def _system_spec(cfg: RunConfig):
    from .parametrization import make_system

    try:
        return make_system(cfg.system, j=Fraction(cfg.j) if cfg.j else None)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_algebra(cfg: RunConfig) -> int:
    from .lie_algebra import verify_algebra

    checks = verify_algebra()
    ok = all(c["pass"] for c in checks)
    _emit(_envelope("algebra", cfg, {"checks": checks, "pass": ok}), cfg)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_geometry(cfg: RunConfig) -> int:
    from . import geometry as geo
    from .parametrization import random_points

    t0 = time.perf_counter()
    n = cfg.grid or 32
    if cfg.action == "volume":
        res = geo.volume_cp2(n, cfg.threads)
        value, expected, tol = float(res.value), geo.CP2_VOLUME, cfg.tol or 1e-6
        error = abs(value - expected) / expected
    elif cfg.action == "inner":
        res = geo.form_inner_product(geo.kahler_form, geo.kahler_form, n, cfg.threads)
        value, expected, tol = float(res.value), geo.ETA_NORM_SQUARED, cfg.tol or 1e-5
        error = abs(value - expected) / expected
    else:
        x = random_points("CP2", 100, np.random.default_rng(cfg.seed))
        eta = geo.kahler_form(x)
        value = float(np.max(np.abs(geo.hodge_star(eta, geo.metric_at(x)) - eta)))
        expected, tol, error = 0.0, cfg.tol or 1e-8, value
    body = {"quantity": cfg.action, "value": value, "expected": expected, "error": error, "tolerance": tol,
            "pass": error <= tol, "wall_time": time.perf_counter() - t0}
    _emit(_envelope("geometry", cfg, body), cfg)
    return EXIT_OK if error <= tol else EXIT_FAIL


def _chart_grid(manifold: str, n: int) -> np.ndarray:
    """Cell-centred grid over the chart, shape (n**dim, dim)."""
    from .parametrization import ANGLE_RANGES

    axes = []
    for r in ANGLE_RANGES[manifold]:
        lo, hi = r[1], r[2]
        axes.append(lo + (np.arange(n) + 0.5) * (hi - lo) / n)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=-1)


def cmd_field(cfg: RunConfig) -> int:
    from .gauge_field import connection_builder, curvature_builder, level_block
    from .parametrization import COORD_NAMES

    system = _system_spec(cfg)
    try:
        block = level_block(system, cfg.level)
        builder = (connection_builder if cfg.component == "A" else curvature_builder)(block)
    except (KeyError, ValueError, NotImplementedError) as exc:
        raise UsageError(str(exc)) from exc
    names = COORD_NAMES[system.manifold]
    x = _chart_grid(system.manifold, cfg.grid or 16)
    vals = builder(x)
    d = block.dim
    ent = list(itertools.product(range(d), range(d)))
    header = list(names)
    cols = []
    if cfg.component == "A":
        for m in range(len(names)):
            for i, k in ent:
                header += [f"A{m + 1}_{i + 1}{k + 1}_re", f"A{m + 1}_{i + 1}{k + 1}_im"]
                cols.append(vals[:, m, i, k])
    else:
        for m, n in itertools.combinations(range(len(names)), 2):
            for i, k in ent:
                header += [f"F{m + 1}{n + 1}_{i + 1}{k + 1}_re", f"F{m + 1}{n + 1}_{i + 1}{k + 1}_im"]
                cols.append(vals[:, m, n, i, k])
    parts = [x]
    for c in cols:
        parts += [c.real[:, None], c.imag[:, None]]
    write_text(csv_text(header, np.hstack(parts)), cfg.out)
    return EXIT_OK


def cmd_chern(cfg: RunConfig) -> int:
    from . import topology as topo

    gate = cfg.tol or topo.INTEGER_GATE
    g2 = cfg.grid or topo.DEFAULT_GRID_2D
    g4 = cfg.grid4 or topo.DEFAULT_GRID_4D
    t0 = time.perf_counter()
    if cfg.all:
        rows = topo.chern_table(g2, g4, cfg.threads)
        for r in rows:
            r["pass"] = abs(r["value"] - r["expected"]) < gate
        ok = all(r["pass"] for r in rows)
        _emit(_envelope("chern-table", cfg, {"results": rows, "pass": ok,
                                             "wall_time": time.perf_counter() - t0}), cfg)
        return EXIT_OK if ok else EXIT_FAIL
    if not cfg.system or not cfg.level:
        raise UsageError("chern needs --system and --level, or --all")
    system = _system_spec(cfg)
    try:
        if system.kind == "su2-linear":
            rep = topo.su2_monopole_charge(system.j, cfg.level, cfg.grid or 64)
        elif system.kind == "su2-quadratic":
            if Fraction(cfg.level) != Fraction(1, 2):
                raise UsageError("the su2-quad flux report covers the +-1/2 pair (--level 1/2)")
            rep = topo.su2_degenerate_flux(system.j, cfg.grid or 64)
        else:
            name = {"su3-degenerate": "su3-deg", "su3-nondegenerate": "su3-flag", "su3-adjoint": "su3-adj"}[system.kind]
            rep = topo.level_report(name, cfg.level, g2, g4, with_c2=system.manifold == "CP2",
                                    with_action=system.manifold == "CP2" and len(system.level(cfg.level).indices) > 1,
                                    threads=cfg.threads)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    body = rep.to_dict()
    ok = all(c is None or c["deviation"] < gate for c in (body["c1"], body["c2"]))
    body["accepted"] = ok
    _emit(_envelope("chern", cfg, body), cfg)
    return EXIT_OK if ok else EXIT_FAIL


def _load_loop(cfg: RunConfig):
    from .holonomy import load_loop

    try:
        return load_loop(cfg.loop)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read loop {cfg.loop}: {exc}") from exc


def cmd_holonomy(cfg: RunConfig) -> int:
    from .holonomy import CONVERGENCE_TOL, wilson_loop

    system = _system_spec(cfg)
    loop = _load_loop(cfg)
    t0 = time.perf_counter()
    try:
        h = wilson_loop(system, cfg.level, loop, cfg.segments)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    body = h.to_dict()
    body["system"] = system.kind
    body["wall_time"] = time.perf_counter() - t0
    tol = cfg.tol or CONVERGENCE_TOL
    body["converged"] = h.convergence < tol
    _emit(_envelope("holonomy", cfg, body), cfg)
    return EXIT_OK if h.convergence < tol else EXIT_FAIL


def cmd_simulate(cfg: RunConfig) -> int:
    from .dynamics import MAX_LEAKAGE, evolve, extract_holonomy

    system = _system_spec(cfg)
    loop = _load_loop(cfg)
    try:
        run = evolve(system, cfg.level, loop, cfg.T, cfg.steps)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    oracle = extract_holonomy(run, cfg.segments, check_leakage=False)
    body = oracle.to_dict()
    tol = cfg.tol or MAX_LEAKAGE
    body["pass"] = oracle.leakage < tol
    _emit(_envelope("simulation", cfg, body), cfg)
    return EXIT_OK if body["pass"] else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    from .verification import SuiteOptions, run_suites

    opts = SuiteOptions(seed=cfg.seed, step=cfg.step, threads=cfg.threads, oracle=cfg.oracle)
    if cfg.grid:
        opts.grid_2d = cfg.grid
    if cfg.grid4:
        opts.grid_4d = cfg.grid4
    try:
        report = run_suites(cfg.suite, opts)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(_envelope("verification", cfg, report.to_dict()), cfg)
    for c in report.checks:
        if not c.passed:
            print(f"FAIL {c.name}: error {c.error:.3g} > {c.tolerance:.3g}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {"algebra": cmd_algebra, "geometry": cmd_geometry, "field": cmd_field, "chern": cmd_chern,
            "holonomy": cmd_holonomy, "simulate": cmd_simulate, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = build_config(ns)
        if cfg.threads:
            import os
            os.environ["HOLONOMY_LAB_THREADS"] = str(cfg.threads)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"holonomy-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"holonomy-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
