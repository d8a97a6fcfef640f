"""Linear array factor, pattern metrics and side-lobe synthesis objective.

Elements are isotropic and equally spaced along the array axis, centred on
the origin, with spacing measured in wavelengths.  Angles are measured from
the array axis, so broadside is 90 degrees.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .optimizer import SearchSpace

DB_FLOOR = -120.0
GRATING_MARGIN_DB = 0.5

AMPLITUDES = "amplitudes"
AMPLITUDES_AND_PHASES = "amplitudes+phases"


@dataclass(frozen=True)
class ArrayGeometry:
    n_elements: int
    spacing_wavelengths: float = 0.5

    def __post_init__(self):
        if self.n_elements < 2:
            raise ValueError("an array needs at least 2 elements")
        if not self.spacing_wavelengths > 0:
            raise ValueError("element spacing must be positive")

    @property
    def positions(self) -> np.ndarray:
        """Element coordinates in wavelengths, symmetric about the centre."""
        n = np.arange(1, self.n_elements + 1)
        return self.spacing_wavelengths * (n - (self.n_elements + 1) / 2)


@dataclass
class Excitation:
    amplitudes: np.ndarray
    phases_deg: np.ndarray = None

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=float)
        if self.phases_deg is None:
            self.phases_deg = np.zeros_like(self.amplitudes)
        self.phases_deg = np.asarray(self.phases_deg, dtype=float)
        if self.amplitudes.ndim != 1 or self.amplitudes.shape != self.phases_deg.shape:
            raise ValueError("amplitudes and phases must be 1-d vectors of equal length")
        if not np.all(self.amplitudes > 0):
            raise ValueError("amplitudes must be strictly positive")

    @classmethod
    def uniform(cls, n_elements: int) -> "Excitation":
        return cls(np.ones(n_elements))

    @property
    def weights(self) -> np.ndarray:
        return self.amplitudes * np.exp(1j * np.deg2rad(self.phases_deg))


def _check(geometry: ArrayGeometry, excitation: Excitation):
    if excitation.amplitudes.shape[0] != geometry.n_elements:
        raise ValueError(
            f"excitation has {excitation.amplitudes.shape[0]} elements, geometry has {geometry.n_elements}")


def steering_matrix(geometry: ArrayGeometry, theta_deg) -> np.ndarray:
    theta = np.deg2rad(np.atleast_1d(np.asarray(theta_deg, dtype=float)))
    return np.exp(1j * 2 * np.pi * np.outer(np.cos(theta), geometry.positions))


def array_factor(geometry: ArrayGeometry, excitation: Excitation, theta_deg: float) -> complex:
    if not 0.0 <= theta_deg <= 180.0:
        raise ValueError(f"theta must lie in [0, 180] degrees, got {theta_deg}")
    _check(geometry, excitation)
    return complex(steering_matrix(geometry, theta_deg)[0] @ excitation.weights)


def theta_grid(resolution_deg: float = 0.1) -> np.ndarray:
    n = round(180.0 / resolution_deg)
    if n < 180 or not math.isclose(n * resolution_deg, 180.0, rel_tol=1e-9):
        raise ValueError(f"resolution {resolution_deg} must divide 180 degrees into at least 180 steps")
    return np.linspace(0.0, 180.0, n + 1)


def to_db(magnitude: np.ndarray) -> np.ndarray:
    peak = np.max(magnitude)
    if not peak > 0:
        raise ValueError("array factor vanishes everywhere; pattern cannot be normalized")
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(magnitude / peak)
    return np.maximum(db, DB_FLOOR)


@dataclass
class RadiationPattern:
    theta_deg: np.ndarray
    magnitude_db: np.ndarray

    def level_at(self, theta_deg: float) -> float:
        return float(self.magnitude_db[np.argmin(np.abs(self.theta_deg - theta_deg))])

    def mirrored(self) -> "RadiationPattern":
        """Pattern seen from the other end of the array (theta -> 180 - theta)."""
        return RadiationPattern(180.0 - self.theta_deg[::-1], self.magnitude_db[::-1].copy())


def compute_pattern(geometry: ArrayGeometry, excitation: Excitation,
                    resolution_deg: float = 0.1) -> RadiationPattern:
    _check(geometry, excitation)
    theta = theta_grid(resolution_deg)
    af = steering_matrix(geometry, theta) @ excitation.weights
    return RadiationPattern(theta, to_db(np.abs(af)))


@dataclass
class PatternMetrics:
    main_lobe_theta_deg: float
    first_null_left_deg: float
    first_null_right_deg: float
    sidelobe_peaks: list[tuple[float, float]]
    max_sll_db: float
    null_depths_db: dict[float, float] = field(default_factory=dict)
    grating_lobes: list[tuple[float, float]] = field(default_factory=list)


def _local_extrema(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Indices of local maxima and minima, the end points included."""
    left = np.empty_like(m)
    right = np.empty_like(m)
    # an end point must strictly beat its one neighbour to be a lobe, so a
    # floored plateau at 0 or 180 degrees is not one
    left[1:], right[:-1] = m[:-1], m[1:]
    left[0], right[-1] = -np.inf, -np.inf
    is_max = (m > left) & (m >= right)
    is_max[0] = m[0] > m[1]
    is_max[-1] = m[-1] > m[-2]
    left[0], right[-1] = np.inf, np.inf
    is_min = (m < left) & (m <= right)
    return np.flatnonzero(is_max), np.flatnonzero(is_min)


def extract_metrics(pattern: RadiationPattern, null_queries=()) -> PatternMetrics:
    """Main lobe, side-lobe peaks and null depths of a normalized pattern.

    Side lobes are local maxima outside the first nulls flanking the main
    lobe.  End-fire maxima at 0 and 180 degrees count as side lobes.  Lobes
    within ``GRATING_MARGIN_DB`` of the main peak are also listed as grating
    lobes; they still count toward ``max_sll_db``.  With no side lobes at all
    ``max_sll_db`` is the dB floor.
    """
    m = pattern.magnitude_db
    th = pattern.theta_deg
    maxima, minima = _local_extrema(m)
    main = int(np.argmax(m))

    below = minima[minima < main]
    above = minima[minima > main]
    if (below.size == 0 and main != 0) or (above.size == 0 and main != m.size - 1):
        raise ValueError("no nulls found around the main lobe; pattern is degenerate")
    left = int(below[-1]) if below.size else main
    right = int(above[0]) if above.size else main

    side = maxima[(maxima < left) | (maxima > right)]
    peaks = [(float(th[i]), float(m[i])) for i in side]
    max_sll = max((lvl for _, lvl in peaks), default=DB_FLOOR)
    grating = [(a, lvl) for a, lvl in peaks if lvl >= -GRATING_MARGIN_DB]
    depths = {float(q): pattern.level_at(q) for q in null_queries}
    return PatternMetrics(
        main_lobe_theta_deg=float(th[main]),
        first_null_left_deg=float(th[left]),
        first_null_right_deg=float(th[right]),
        sidelobe_peaks=peaks,
        max_sll_db=float(max_sll),
        null_depths_db=depths,
        grating_lobes=grating,
    )


@dataclass
class SynthesisProblem:
    """Side-lobe minimization over element excitations.

    The decision vector holds amplitudes first, then phases (if enabled).
    With ``symmetric`` only the outer half of the array (edge to centre) is
    encoded and mirrored.  Fitness is the peak side-lobe level in dB plus
    ``null_weight`` times the total dB excess over each null target.
    """

    geometry: ArrayGeometry
    variables: str = AMPLITUDES
    amplitude_bounds: tuple[float, float] = (1.0, 2.4)
    phase_bounds_deg: tuple[float, float] = (90.0, 180.0)
    symmetric: bool = False
    null_targets: list[tuple[float, float]] = field(default_factory=list)
    null_weight: float = 1.0
    resolution_deg: float = 0.1

    def __post_init__(self):
        if self.variables not in (AMPLITUDES, AMPLITUDES_AND_PHASES):
            raise ValueError(f"variables must be {AMPLITUDES!r} or {AMPLITUDES_AND_PHASES!r}")
        lo, hi = self.amplitude_bounds
        if not 0 < lo < hi:
            raise ValueError("amplitude bounds must satisfy 0 < lower < upper")
        lo, hi = self.phase_bounds_deg
        if not lo < hi:
            raise ValueError("phase bounds must satisfy lower < upper")
        self.null_targets = [(float(a), float(t)) for a, t in self.null_targets]
        for angle, _ in self.null_targets:
            if not 0.0 < angle < 180.0:
                raise ValueError(f"null target angle {angle} outside (0, 180)")
        if self.null_weight < 0:
            raise ValueError("null_weight must be non-negative")
        theta_grid(self.resolution_deg)

    @property
    def n_free(self) -> int:
        n = self.geometry.n_elements
        return (n + 1) // 2 if self.symmetric else n

    @property
    def with_phases(self) -> bool:
        return self.variables == AMPLITUDES_AND_PHASES

    @property
    def dimension(self) -> int:
        return self.n_free * (2 if self.with_phases else 1)

    @property
    def space(self) -> SearchSpace:
        lo = [self.amplitude_bounds[0]] * self.n_free
        hi = [self.amplitude_bounds[1]] * self.n_free
        if self.with_phases:
            lo += [self.phase_bounds_deg[0]] * self.n_free
            hi += [self.phase_bounds_deg[1]] * self.n_free
        return SearchSpace(lo, hi)

    def _mirror(self, half: np.ndarray) -> np.ndarray:
        if not self.symmetric:
            return half
        n = self.geometry.n_elements
        return np.concatenate([half, half[: n // 2][::-1]])

    def decode(self, x) -> Excitation:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise ValueError(f"expected a decision vector of length {self.dimension}, got shape {x.shape}")
        amps = self._mirror(x[: self.n_free])
        phases = self._mirror(x[self.n_free:]) if self.with_phases else None
        return Excitation(amps, phases)

    def encode(self, excitation: Excitation) -> np.ndarray:
        """Inverse of :meth:`decode` (the mirrored half is dropped)."""
        parts = [excitation.amplitudes[: self.n_free]]
        if self.with_phases:
            parts.append(excitation.phases_deg[: self.n_free])
        return np.concatenate(parts)

    @cached_property
    def _steering(self) -> tuple[np.ndarray, np.ndarray]:
        theta = theta_grid(self.resolution_deg)
        return theta, steering_matrix(self.geometry, theta)

    def pattern(self, excitation: Excitation) -> RadiationPattern:
        _check(self.geometry, excitation)
        theta, steer = self._steering
        return RadiationPattern(theta, to_db(np.abs(steer @ excitation.weights)))

    def metrics(self, excitation: Excitation) -> PatternMetrics:
        queries = [a for a, _ in self.null_targets]
        return extract_metrics(self.pattern(excitation), queries)

    def fitness_of(self, excitation: Excitation) -> float:
        met = self.metrics(excitation)
        penalty = 0.0
        if self.null_weight > 0:
            for angle, target in self.null_targets:
                penalty += max(0.0, met.null_depths_db[angle] - target)
        return met.max_sll_db + self.null_weight * penalty

    def __call__(self, x) -> float:
        return self.fitness_of(self.decode(x))


def synthesis_fitness(problem: SynthesisProblem, x) -> float:
    return problem(x)


def write_pattern_csv(pattern: RadiationPattern, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["theta_deg", "af_db"])
        for th, db in zip(pattern.theta_deg, pattern.magnitude_db):
            w.writerow([f"{th:.6f}", f"{db:.6f}"])
