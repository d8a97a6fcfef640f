"""The seven unimodal test functions F1-F7.

F2 and F4 use absolute values (Schwefel 2.22 / 2.21) and F6 is the floored
step function; those are the forms whose minimum is 0 on the listed ranges.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .optimizer import SearchSpace
from .rng import RngStream


def sphere(x):
    return float(np.sum(x * x))


def schwefel_2_22(x):
    a = np.abs(x)
    return float(np.sum(a) + np.prod(a))


def schwefel_1_2(x):
    return float(np.sum(np.cumsum(x) ** 2))


def schwefel_2_21(x):
    return float(np.max(np.abs(x)))


def rosenbrock(x):
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


def step(x):
    return float(np.sum(np.floor(x + 0.5) ** 2))


def quartic_noise(x, stream: RngStream):
    i = np.arange(1, x.shape[0] + 1)
    return float(np.sum(i * x**4)) + stream.next_uniform()


_FUNCTIONS = {
    "F1": (sphere, 100.0),
    "F2": (schwefel_2_22, 10.0),
    "F3": (schwefel_1_2, 100.0),
    "F4": (schwefel_2_21, 100.0),
    "F5": (rosenbrock, 30.0),
    "F6": (step, 100.0),
    "F7": (quartic_noise, 1.28),
}

BENCHMARK_IDS = tuple(_FUNCTIONS)
PAPER_DIMS = (30, 200)
F_MIN = 0.0


def _lookup(bench_id: str):
    try:
        return _FUNCTIONS[bench_id.upper()]
    except KeyError:
        raise KeyError(f"unknown benchmark {bench_id!r}; expected one of {', '.join(BENCHMARK_IDS)}") from None


def evaluate(bench_id: str, x, stream: RngStream | None = None) -> float:
    func, _ = _lookup(bench_id)
    x = np.asarray(x, dtype=float)
    if func is quartic_noise:
        if stream is None:
            raise ValueError("F7 needs a random stream for its noise term")
        return func(x, stream)
    return func(x)


def bound(bench_id: str) -> float:
    """Half-width of the symmetric search range."""
    return _lookup(bench_id)[1]


def in_range(bench_id: str, x) -> bool:
    r = bound(bench_id)
    x = np.asarray(x, dtype=float)
    return bool(np.all(np.abs(x) <= r))


@dataclass
class Benchmark:
    """A test function at a fixed dimension, callable as an objective.

    Points outside the range are still evaluated but counted in
    ``out_of_range`` so callers can detect clamping bugs.
    """

    id: str
    dimension: int
    stream: RngStream | None = None
    out_of_range: int = 0

    def __post_init__(self):
        _lookup(self.id)
        self.id = self.id.upper()
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.id == "F7" and self.stream is None:
            raise ValueError("F7 needs a random stream for its noise term")

    @property
    def range(self) -> tuple[float, float]:
        r = bound(self.id)
        return -r, r

    @property
    def f_min(self) -> float:
        return F_MIN

    @property
    def space(self) -> SearchSpace:
        return SearchSpace.uniform(*self.range, self.dimension)

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise ValueError(f"{self.id} expects a vector of length {self.dimension}, got shape {x.shape}")
        if not in_range(self.id, x):
            self.out_of_range += 1
        return evaluate(self.id, x, self.stream)
