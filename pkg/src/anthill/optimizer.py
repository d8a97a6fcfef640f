"""Ant hill colonization optimizer (AHCOA).

Each iteration every ant picks a guide through rank-based natural selection,
proposes a position by averaging a random walk around the guide with one
around the elite, and keeps the proposal only if it is strictly better.  The
walk intervals shrink with the hill construction rate, so the colony moves
from exploration to exploitation as the hill nears completion.

Draw order (normative, so runs replay exactly):

1. ``P * D`` draws for the initial population, ant by ant.
2. Per iteration, per ant in index order: one selection draw, then ``D * T``
   draws for the guide walks followed by ``D * T`` for the elite walks.
"""
from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .rng import RngStream

Objective = Callable[[np.ndarray], float]


class SearchSpace:
    """Axis-aligned box ``lower <= x <= upper``."""

    def __init__(self, lower, upper):
        lower = np.atleast_1d(np.asarray(lower, dtype=float)).copy()
        upper = np.atleast_1d(np.asarray(upper, dtype=float)).copy()
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError("lower and upper must be 1-d and of equal length")
        if not np.all(lower < upper):
            raise ValueError("every lower bound must be strictly below its upper bound")
        self.lower = lower
        self.upper = upper
        self.lower.flags.writeable = False
        self.upper.flags.writeable = False

    @classmethod
    def uniform(cls, lo: float, hi: float, dim: int) -> "SearchSpace":
        return cls(np.full(dim, lo), np.full(dim, hi))

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def clamp(self, x) -> np.ndarray:
        return np.minimum(np.maximum(np.asarray(x, dtype=float), self.lower), self.upper)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def sample(self, stream: RngStream, n: int) -> np.ndarray:
        """``n`` uniform points, row by row (``n * dim`` draws)."""
        u = stream.uniforms(n * self.dim).reshape(n, self.dim)
        return self.clamp(self.lower + u * self.width)

    def __repr__(self) -> str:
        return f"SearchSpace(dim={self.dim})"


@dataclass
class Ant:
    position: np.ndarray
    fitness: float


@dataclass(frozen=True)
class Pyramid:
    base_area: float
    height: float

    def __post_init__(self):
        if not (self.base_area > 0 and self.height > 0):
            raise ValueError("pyramid base area and height must be positive")

    def volume(self) -> float:
        return self.base_area * self.height / 3.0


@dataclass(frozen=True)
class Cone:
    radius: float
    height: float

    def __post_init__(self):
        if not (self.radius > 0 and self.height > 0):
            raise ValueError("cone radius and height must be positive")

    def volume(self) -> float:
        return math.pi * self.radius**2 * self.height / 3.0


HillShape = Pyramid | Cone


def volume_rate(shape: HillShape, t: float) -> float:
    """Hill volume built per unit time when construction takes time ``t``."""
    if not t > 0:
        raise ValueError(f"construction time must be positive, got {t}")
    if isinstance(shape, Pyramid):
        return (1.0 / 3.0) * shape.base_area * shape.height / t
    if isinstance(shape, Cone):
        return (1.0 / 3.0) * math.pi * shape.radius**2 * shape.height / t
    raise TypeError(f"unknown hill shape {shape!r}")


@dataclass(frozen=True)
class ConstructionSchedule:
    """Maps iterations to the shrink factor of the walk intervals.

    Construction time is warped as ``tau(t) = 1 + (t - 1) * kappa`` so that the
    normalized volume rate falls from 1 at the first iteration to ``s_min`` at
    the last, whatever the budget.
    """

    shape: HillShape = field(default_factory=lambda: Pyramid(3.0, 1.0))
    s_min: float = 0.01
    total_iterations: int = 1

    def __post_init__(self):
        if not 0.0 < self.s_min < 1.0:
            raise ValueError(f"s_min must lie in (0, 1), got {self.s_min}")
        if self.total_iterations < 1:
            raise ValueError("total_iterations must be >= 1")

    @property
    def kappa(self) -> float:
        if self.total_iterations == 1:
            return 0.0
        return (1.0 / self.s_min - 1.0) / (self.total_iterations - 1)

    def construction_time(self, t: int) -> float:
        return 1.0 + (t - 1) * self.kappa


def shrink_factor(schedule: ConstructionSchedule, t: int) -> float:
    if not 1 <= t <= schedule.total_iterations:
        raise ValueError(f"iteration {t} outside [1, {schedule.total_iterations}]")
    tau = schedule.construction_time(t)
    return volume_rate(schedule.shape, tau) / volume_rate(schedule.shape, 1.0)


def natural_selection(fitnesses: Sequence[float], stream: RngStream) -> int:
    """Rank-based roulette wheel for minimization.

    The best ant gets weight ``P``, the worst weight 1.  Tied ants share the
    mean of their rank weights and sit on the wheel in index order.  Consumes
    exactly one draw.
    """
    f = np.asarray(fitnesses, dtype=float)
    n = f.shape[0]
    if n == 0:
        raise ValueError("cannot select from an empty population")
    order = np.argsort(f, kind="stable")
    weights = np.arange(n, 0, -1, dtype=float)
    fs = f[order]
    start = 0
    for k in range(1, n + 1):
        if k == n or fs[k] != fs[start]:
            if k - start > 1:
                weights[start:k] = weights[start:k].mean()
            start = k
    target = stream.next_uniform() * (n * (n + 1) / 2)
    cum = 0.0
    for w, idx in zip(weights, order):
        cum += w
        if target < cum:
            return int(idx)
    return int(order[-1])


def walk_interval(center: np.ndarray, space: SearchSpace, s: float) -> tuple[np.ndarray, np.ndarray]:
    """Interval of width ``s * width`` around ``center``, clipped to the space."""
    half = 0.5 * s * space.width
    lo = np.maximum(center - half, space.lower)
    hi = np.minimum(center + half, space.upper)
    return lo, hi


def candidate_position(guide, elite, space: SearchSpace, s: float, t: int, n_iter: int,
                       stream: RngStream) -> np.ndarray:
    """Average of walk-derived positions around ``guide`` and ``elite``.

    Each coordinate takes step ``t`` of an ``n_iter``-step walk scaled into
    the shrunken interval around the respective centre.  Advances ``stream``
    by ``2 * dim * n_iter`` draws.
    """
    if not 0.0 < s <= 1.0:
        raise ValueError(f"shrink factor must lie in (0, 1], got {s}")
    guide = np.asarray(guide, dtype=float)
    elite = np.asarray(elite, dtype=float)
    lo, hi = walk_interval(guide, space, s)
    g = _kernels.walk_entries(stream, lo, hi, t, n_iter)
    lo, hi = walk_interval(elite, space, s)
    e = _kernels.walk_entries(stream, lo, hi, t, n_iter)
    return space.clamp((g + e) / 2.0)


@dataclass
class OptimizerConfig:
    space: SearchSpace
    population_size: int = 30
    iterations: int = 500
    seed: int = 0
    shape: HillShape = field(default_factory=lambda: Pyramid(3.0, 1.0))
    s_min: float = 0.01

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")

    @property
    def schedule(self) -> ConstructionSchedule:
        return ConstructionSchedule(self.shape, self.s_min, self.iterations)

    @property
    def budget(self) -> int:
        return self.population_size * (self.iterations + 1)


@dataclass
class RunReport:
    elite_position: np.ndarray
    elite_fitness: float
    convergence: list[tuple[int, float]]
    evaluations: int
    initial_fitness: float
    nan_evaluations: int = 0
    algorithm: str = "ahcoa"


class _Counter:
    """Objective wrapper that counts calls and maps NaN to +inf."""

    def __init__(self, objective: Objective):
        self.objective = objective
        self.calls = 0
        self.nans = 0

    def __call__(self, x: np.ndarray) -> float:
        self.calls += 1
        value = float(self.objective(x))
        if math.isnan(value):
            self.nans += 1
            return math.inf
        return value


def optimize(objective: Objective, config: OptimizerConfig) -> RunReport:
    """Minimize ``objective`` over ``config.space`` with AHCOA."""
    space = config.space
    P, T = config.population_size, config.iterations
    schedule = config.schedule
    stream = RngStream(config.seed)
    f = _Counter(objective)

    positions = space.sample(stream, P)
    fitness = np.array([f(p.copy()) for p in positions])
    best = int(np.argmin(fitness))
    elite = Ant(positions[best].copy(), float(fitness[best]))
    initial = elite.fitness

    convergence = []
    for t in range(1, T + 1):
        s = shrink_factor(schedule, t)
        for i in range(P):
            guide = natural_selection(fitness, stream)
            cand = candidate_position(positions[guide], elite.position, space, s, t, T, stream)
            fc = f(cand)
            if fc < fitness[i]:
                positions[i] = cand
                fitness[i] = fc
        best = int(np.argmin(fitness))
        if fitness[best] < elite.fitness:
            elite = Ant(positions[best].copy(), float(fitness[best]))
        convergence.append((t, elite.fitness))

    return RunReport(
        elite_position=elite.position,
        elite_fitness=elite.fitness,
        convergence=convergence,
        evaluations=f.calls,
        initial_fitness=initial,
        nan_evaluations=f.nans,
    )
