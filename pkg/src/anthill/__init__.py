"""Ant hill colonization optimization (AHCOA) with benchmark and antenna objectives."""
from .antenna import (
    ArrayGeometry,
    Excitation,
    PatternMetrics,
    RadiationPattern,
    SynthesisProblem,
    array_factor,
    compute_pattern,
    extract_metrics,
    synthesis_fitness,
)
from .baselines import run_alo, run_hill_climb, run_random_search
from .benchmarks import Benchmark, evaluate
from .optimizer import (
    Ant,
    Cone,
    ConstructionSchedule,
    OptimizerConfig,
    Pyramid,
    RunReport,
    SearchSpace,
    candidate_position,
    natural_selection,
    optimize,
    shrink_factor,
    volume_rate,
)
from .rng import RngStream, bernoulli_step, random_walk, scale_walk

__version__ = "0.1.0"
