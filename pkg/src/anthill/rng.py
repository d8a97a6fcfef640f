"""Seeded SplitMix64 stream and the cumulative-sum random walk built on it.

Everything stochastic in the package draws from :class:`RngStream`, so a run is
reproducible bit-for-bit from its seed on any platform.
"""
from __future__ import annotations

from collections.abc import Sequence

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / 9007199254740992.0


def mix64(z: int) -> int:
    """SplitMix64 output function (finalizer) on a 64-bit integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """Seed of the ``index``-th independent child stream of ``master_seed``."""
    return mix64((master_seed + index * GOLDEN_GAMMA) & MASK64)


class RngStream:
    """Single-owner SplitMix64 generator.

    The state is a plain 64-bit integer; it advances by the golden gamma on
    every draw, which is what lets the batch and compiled paths jump ahead.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = int(seed) & MASK64

    def __repr__(self) -> str:
        return f"RngStream(state=0x{self.state:016x})"

    def copy(self) -> "RngStream":
        return RngStream(self.state)

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def next_uniform(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits of one draw."""
        return (self.next_u64() >> 11) * _INV_2_53

    def uniforms(self, n: int) -> np.ndarray:
        """``n`` consecutive draws as an array; identical to ``n`` calls of
        :meth:`next_uniform`."""
        if n < 0:
            raise ValueError("n must be non-negative")
        k = np.arange(1, n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.state) + k * np.uint64(GOLDEN_GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
            z = z ^ (z >> np.uint64(31))
        self.state = (self.state + n * GOLDEN_GAMMA) & MASK64
        return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53

    def spawn(self, index: int) -> "RngStream":
        """Independent child stream; does not advance this stream."""
        return RngStream(derive_seed(self.state, index))


def step_from_uniform(u: float) -> int:
    # r(t) = 1 iff u > 0.5; an exact tie steps down
    return 1 if u > 0.5 else -1


def bernoulli_step(stream: RngStream) -> int:
    """One +1/-1 step of the walk, consuming a single uniform draw."""
    return step_from_uniform(stream.next_uniform())


def walk_from_uniforms(draws: Sequence[float]) -> list[float]:
    """Cumulative walk ``[0, c1, ..., cn]`` for an explicit sequence of draws."""
    values = [0.0]
    pos = 0
    for u in draws:
        pos += step_from_uniform(u)
        values.append(float(pos))
    return values


def random_walk(n_steps: int, stream: RngStream) -> list[float]:
    """Walk of ``n_steps`` unit steps starting at 0 (length ``n_steps + 1``)."""
    if n_steps < 0:
        raise ValueError(f"n_steps must be >= 0, got {n_steps}")
    return walk_from_uniforms([stream.next_uniform() for _ in range(n_steps)])


def scale_walk(walk: Sequence[float], target_lo: float, target_hi: float) -> list[float]:
    """Min-max map a walk onto ``[target_lo, target_hi]``.

    A constant walk maps every entry to the interval midpoint.
    """
    if target_lo > target_hi:
        raise ValueError(f"reversed interval [{target_lo}, {target_hi}]")
    lo, hi = min(walk), max(walk)
    if hi == lo:
        mid = 0.5 * (target_lo + target_hi)
        return [mid] * len(walk)
    span = target_hi - target_lo
    out = []
    for x in walk:
        y = (x - lo) / (hi - lo) * span + target_lo
        # rounding must not leak outside the interval
        out.append(min(max(y, target_lo), target_hi))
    return out
