"""Seeded experiment runner behind the command line.

A run writes ``convergence_<seed>.csv`` per seed, ``pattern_<seed>.csv`` and
``pattern_uniform.csv`` in antenna mode, and ``summary.json`` last.
"""
from __future__ import annotations

import csv
import json
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from . import antenna as ant
from .baselines import ALO, HILL_CLIMB, RANDOM_SEARCH, run_alo, run_hill_climb, run_random_search
from .benchmarks import BENCHMARK_IDS, PAPER_DIMS, Benchmark
from .optimizer import Cone, OptimizerConfig, Pyramid, RunReport, optimize
from .rng import RngStream, derive_seed

AHCOA = "ahcoa"
ALGORITHMS = {
    AHCOA: optimize,
    ALO: run_alo,
    RANDOM_SEARCH: run_random_search,
    HILL_CLIMB: run_hill_climb,
}
MODES = ("bench", "antenna", "sweep")
SHAPES = {"pyramid": lambda: Pyramid(3.0, 1.0), "cone": lambda: Cone(1.0, 3.0)}
OUT_ENV = "ANTHILL_OUT_DIR"
DEFAULT_OUT = "anthill_out"


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


class OutputError(OSError):
    """Output directory cannot be written (CLI exit code 3)."""


@dataclass
class ExperimentConfig:
    mode: str = "bench"
    algorithm: str = AHCOA
    benchmark: str = "F1"
    dim: int = 30
    pop: int = 30
    iters: int = 500
    seeds: list[int] = field(default_factory=lambda: [1])
    out: str | None = None
    s_min: float = 0.01
    shape: str = "pyramid"
    jobs: int = 1
    # sweep mode
    benchmarks: list[str] = field(default_factory=lambda: list(BENCHMARK_IDS))
    dims: list[int] = field(default_factory=lambda: list(PAPER_DIMS))
    # antenna mode
    n_elements: int = 10
    spacing: float = 0.5
    variables: str = ant.AMPLITUDES
    amplitude_bounds: list[float] = field(default_factory=lambda: [1.0, 2.4])
    phase_bounds: list[float] = field(default_factory=lambda: [90.0, 180.0])
    symmetric: bool = False
    null_targets: list[list[float]] = field(default_factory=list)
    null_weight: float = 1.0
    resolution: float = 0.1

    @property
    def budget(self) -> int:
        return self.pop * (self.iters + 1)

    @property
    def out_dir(self) -> Path:
        return Path(self.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)

    def validate(self) -> "ExperimentConfig":
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; expected one of {', '.join(ALGORITHMS)}")
        for name in ("dim", "pop", "iters", "jobs", "n_elements"):
            if not isinstance(getattr(self, name), int) or isinstance(getattr(self, name), bool):
                raise ConfigError(f"{name} must be an integer")
        if self.pop < 2:
            raise ConfigError("pop must be >= 2")
        if self.iters < 1:
            raise ConfigError("iters must be >= 1")
        if self.dim < 1:
            raise ConfigError("dim must be >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if not self.seeds or not all(isinstance(s, int) and not isinstance(s, bool) and s >= 0 for s in self.seeds):
            raise ConfigError("seeds must be a non-empty list of non-negative integers")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds must be distinct")
        if not 0.0 < self.s_min < 1.0:
            raise ConfigError("s_min must lie in (0, 1)")
        if self.shape not in SHAPES:
            raise ConfigError(f"unknown shape {self.shape!r}; expected one of {', '.join(SHAPES)}")
        for b in [self.benchmark, *self.benchmarks]:
            if str(b).upper() not in BENCHMARK_IDS:
                raise ConfigError(f"unknown benchmark {b!r}; expected one of {', '.join(BENCHMARK_IDS)}")
        self.benchmark = self.benchmark.upper()
        self.benchmarks = [b.upper() for b in self.benchmarks]
        if self.mode == "sweep" and (not self.benchmarks or not self.dims or min(self.dims) < 1):
            raise ConfigError("sweep needs non-empty benchmarks and positive dims")
        if self.mode == "antenna":
            try:
                self.problem()
            except ValueError as exc:
                raise ConfigError(f"invalid antenna settings: {exc}") from None
        return self

    def problem(self) -> ant.SynthesisProblem:
        if len(self.amplitude_bounds) != 2 or len(self.phase_bounds) != 2:
            raise ValueError("bounds must be [lower, upper] pairs")
        return ant.SynthesisProblem(
            geometry=ant.ArrayGeometry(self.n_elements, self.spacing),
            variables=self.variables,
            amplitude_bounds=tuple(self.amplitude_bounds),
            phase_bounds_deg=tuple(self.phase_bounds),
            symmetric=self.symmetric,
            null_targets=[tuple(nt) for nt in self.null_targets],
            null_weight=self.null_weight,
            resolution_deg=self.resolution,
        )

    def objective_key(self) -> tuple:
        """What is being optimized; comparisons require this to match."""
        if self.mode == "antenna":
            return ("antenna", self.n_elements, self.spacing, self.variables, tuple(self.amplitude_bounds),
                    tuple(self.phase_bounds), self.symmetric,
                    tuple(map(tuple, self.null_targets)), self.null_weight, self.resolution)
        if self.mode == "sweep":
            return ("sweep", tuple(self.benchmarks), tuple(self.dims))
        return ("bench", self.benchmark, self.dim)


_FIELDS = {f.name for f in fields(ExperimentConfig)}


def parse_config(path: str | os.PathLike | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Load a JSON config, apply flag overrides (``None`` values ignored), validate."""
    data = {}
    if path is not None:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: malformed JSON ({exc})") from None
        except OSError as exc:
            raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be a JSON object")
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    unknown = sorted(set(data) - _FIELDS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(repr(k) for k in unknown)}")
    try:
        cfg = ExperimentConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()


def write_convergence_csv(report: RunReport, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iteration", "best_fitness"])
        for t, best in report.convergence:
            w.writerow([t, repr(float(best))])


def describe(values: list[float]) -> dict:
    return {
        "median": statistics.median(values),
        "mean": statistics.fmean(values),
        "std": statistics.pstdev(values),
        "min": min(values),
        "max": max(values),
    }


def _run_seed(cfg: ExperimentConfig, seed: int, out_dir: Path) -> dict:
    opt_cfg = OptimizerConfig(space=_space(cfg), population_size=cfg.pop,
                              iterations=cfg.iters, seed=seed, shape=SHAPES[cfg.shape](), s_min=cfg.s_min)
    run = ALGORITHMS[cfg.algorithm]
    if cfg.mode == "antenna":
        problem = cfg.problem()
        objective = problem
    else:
        # F7 noise gets its own stream so it never perturbs the optimizer's draws
        objective = Benchmark(cfg.benchmark, cfg.dim, RngStream(derive_seed(seed, 1)))

    start = time.perf_counter()
    report = run(objective, opt_cfg)
    elapsed = time.perf_counter() - start

    write_convergence_csv(report, out_dir / f"convergence_{seed}.csv")
    entry = {
        "seed": seed,
        "best_fitness": report.elite_fitness,
        "initial_fitness": report.initial_fitness,
        "evaluations": report.evaluations,
        "nan_evaluations": report.nan_evaluations,
        "wall_clock_s": elapsed,
        "best_position": [float(v) for v in report.elite_position],
    }
    if cfg.mode == "antenna":
        exc = problem.decode(report.elite_position)
        ant.write_pattern_csv(problem.pattern(exc), out_dir / f"pattern_{seed}.csv")
        met = problem.metrics(exc)
        entry.update(max_sll_db=met.max_sll_db, amplitudes=exc.amplitudes.tolist(),
                     phases_deg=exc.phases_deg.tolist(), null_depths_db=[
                         [a, d] for a, d in met.null_depths_db.items()])
    else:
        entry["out_of_range_evaluations"] = objective.out_of_range
    return entry


def _space(cfg: ExperimentConfig):
    if cfg.mode == "antenna":
        return cfg.problem().space
    return Benchmark(cfg.benchmark, cfg.dim, RngStream(0)).space


def _prepare_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
        probe = path / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise OutputError(f"cannot write to output directory {path}: {exc.strerror}") from None
    return path


def run_experiment(cfg: ExperimentConfig, out_dir: Path | None = None) -> dict:
    """Run every seed of a bench or antenna config and write its files."""
    if cfg.mode == "sweep":
        return run_sweep(cfg, out_dir)
    out_dir = _prepare_dir(Path(out_dir) if out_dir else cfg.out_dir)
    try:
        if cfg.jobs > 1 and len(cfg.seeds) > 1:
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                runs = list(pool.map(_run_seed, [cfg] * len(cfg.seeds), cfg.seeds, [out_dir] * len(cfg.seeds)))
        else:
            runs = [_run_seed(cfg, s, out_dir) for s in cfg.seeds]

        summary = {
            "mode": cfg.mode,
            "algorithm": cfg.algorithm,
            "objective": cfg.benchmark if cfg.mode == "bench" else "antenna",
            "dim": cfg.dim if cfg.mode == "bench" else cfg.problem().dimension,
            "pop": cfg.pop,
            "iters": cfg.iters,
            "budget": cfg.budget,
            "runs": runs,
            "best_fitness": describe([r["best_fitness"] for r in runs]),
        }
        if cfg.mode == "antenna":
            problem = cfg.problem()
            uniform = ant.Excitation.uniform(cfg.n_elements)
            ant.write_pattern_csv(problem.pattern(uniform), out_dir / "pattern_uniform.csv")
            summary["uniform_max_sll_db"] = problem.metrics(uniform).max_sll_db
            summary["uniform_fitness"] = problem.fitness_of(uniform)
        with open(out_dir / "summary.json", "w") as fh:
            json.dump(summary, fh, indent=2, allow_nan=True)
            fh.write("\n")
    except OSError as exc:
        raise OutputError(f"writing results to {out_dir} failed: {exc}") from None
    return summary


def run_sweep(cfg: ExperimentConfig, out_dir: Path | None = None) -> dict:
    """Run the bench config over every benchmark x dimension pair."""
    root = _prepare_dir(Path(out_dir) if out_dir else cfg.out_dir)
    rows = {}
    for b in cfg.benchmarks:
        for d in cfg.dims:
            sub = ExperimentConfig(**{**asdict(cfg), "mode": "bench", "benchmark": b, "dim": d})
            rows[f"{b}_d{d}"] = run_experiment(sub, root / f"{b}_d{d}")
    try:
        with open(root / "sweep.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["benchmark", "dim", "median", "mean", "std", "min", "max"])
            for key, s in rows.items():
                st = s["best_fitness"]
                w.writerow([s["objective"], s["dim"], *(repr(float(st[k])) for k in ("median", "mean", "std", "min", "max"))])
    except OSError as exc:
        raise OutputError(f"writing sweep table to {root} failed: {exc}") from None
    return {"mode": "sweep", "cells": rows}


def compare(configs: list[ExperimentConfig], out_dir: Path | None = None) -> dict:
    """Run several algorithms on one objective at equal budgets.

    Writes one sub-directory per algorithm and ``comparison.csv`` with per-seed
    bests and a final median row.  No winner is declared.
    """
    if len(configs) < 2:
        raise ConfigError("compare needs at least two algorithm configs")
    first = configs[0]
    if first.mode == "sweep":
        raise ConfigError("compare works on bench or antenna configs")
    for c in configs[1:]:
        if c.budget != first.budget:
            raise ConfigError(
                f"budget mismatch: {first.algorithm} has {first.budget} evaluations, {c.algorithm} has {c.budget}")
        if c.objective_key() != first.objective_key():
            raise ConfigError("compared configs must optimize the same objective")
        if c.seeds != first.seeds:
            raise ConfigError("compared configs must use the same seeds")
    names = [c.algorithm for c in configs]
    if len(set(names)) != len(names):
        raise ConfigError("each algorithm may appear only once in a comparison")

    root = _prepare_dir(Path(out_dir) if out_dir else first.out_dir)
    summaries = {c.algorithm: run_experiment(c, root / c.algorithm) for c in configs}
    per_seed = {a: {r["seed"]: r["best_fitness"] for r in s["runs"]} for a, s in summaries.items()}
    medians = {a: s["best_fitness"]["median"] for a, s in summaries.items()}
    try:
        with open(root / "comparison.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["seed", *names])
            for seed in first.seeds:
                w.writerow([seed, *(repr(float(per_seed[a][seed])) for a in names)])
            w.writerow(["median", *(repr(float(medians[a])) for a in names)])
    except OSError as exc:
        raise OutputError(f"writing comparison to {root} failed: {exc}") from None
    return {"algorithms": names, "per_seed": per_seed, "median": medians, "summaries": summaries}
