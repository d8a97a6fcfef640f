"""Reference optimizers used to put AHCOA results in context.

All three share the AHCOA budget convention (``P * (T + 1)`` evaluations),
report through :class:`~anthill.optimizer.RunReport` and draw from the same
seeded stream, so comparisons are fair and replayable.
"""
from __future__ import annotations

import math

import numpy as np

from . import _kernels
from .optimizer import Objective, OptimizerConfig, RunReport, SearchSpace, _Counter, natural_selection
from .rng import RngStream

ALO = "alo"
RANDOM_SEARCH = "random"
HILL_CLIMB = "hillclimb"


def alo_ratio(t: int, n_iter: int) -> float:
    """Boundary shrink ratio of the ant lion optimizer at iteration ``t``."""
    frac = t / n_iter
    for limit, w in ((0.95, 6), (0.9, 5), (0.75, 4), (0.5, 3), (0.1, 2)):
        if frac > limit:
            return 10.0**w * frac
    return 1.0


def _walk_around(center, space: SearchSpace, ratio: float, t: int, n_iter: int,
                 stream: RngStream) -> np.ndarray:
    # the two sign draws decide on which side of the antlion each scaled bound falls
    lo_b = space.lower / ratio
    hi_b = space.upper / ratio
    lo = center + lo_b if stream.next_uniform() < 0.5 else center - lo_b
    hi = center + hi_b if stream.next_uniform() < 0.5 else center - hi_b
    return _kernels.walk_entries(stream, np.minimum(lo, hi), np.maximum(lo, hi), t, n_iter)


def run_alo(objective: Objective, config: OptimizerConfig) -> RunReport:
    """Ant lion optimizer with rank-roulette antlion selection.

    Per ant: one selection draw, then for the antlion and the elite in turn two
    sign draws and ``D * T`` walk draws.
    """
    space = config.space
    P, T = config.population_size, config.iterations
    stream = RngStream(config.seed)
    f = _Counter(objective)

    antlions = space.sample(stream, P)
    fit = np.array([f(a.copy()) for a in antlions])
    order = np.argsort(fit, kind="stable")
    antlions, fit = antlions[order], fit[order]
    elite_pos, elite_fit = antlions[0].copy(), float(fit[0])
    initial = elite_fit

    convergence = []
    for t in range(1, T + 1):
        ratio = alo_ratio(t, T)
        ants = np.empty_like(antlions)
        for i in range(P):
            k = natural_selection(fit, stream)
            ra = _walk_around(antlions[k], space, ratio, t, T, stream)
            re = _walk_around(elite_pos, space, ratio, t, T, stream)
            ants[i] = space.clamp((ra + re) / 2.0)
        ant_fit = np.array([f(a.copy()) for a in ants])

        # antlions catch fitter ants: keep the best P of both groups
        pool = np.concatenate([antlions, ants])
        pool_fit = np.concatenate([fit, ant_fit])
        keep = np.argsort(pool_fit, kind="stable")[:P]
        antlions, fit = pool[keep], pool_fit[keep]
        if fit[0] < elite_fit:
            elite_pos, elite_fit = antlions[0].copy(), float(fit[0])
        convergence.append((t, elite_fit))

    return RunReport(elite_pos, elite_fit, convergence, f.calls, initial, f.nans, ALO)


def run_random_search(objective: Objective, config: OptimizerConfig,
                      budget: int | None = None) -> RunReport:
    """Uniform sampling in sweeps of ``P``; the first sweep is iteration 0.

    ``budget`` overrides the default ``P * (T + 1)`` evaluations; a short last
    sweep is recorded as its own iteration.
    """
    space = config.space
    P = config.population_size
    budget = config.budget if budget is None else budget
    if budget < 1:
        raise ValueError("budget must be >= 1")
    stream = RngStream(config.seed)
    f = _Counter(objective)

    elite_pos, elite_fit = None, math.inf
    initial = math.inf
    convergence = []
    done, t = 0, 0
    while done < budget:
        n = min(P, budget - done)
        for x in space.sample(stream, n):
            fx = f(x)
            if elite_pos is None or fx < elite_fit:
                elite_pos, elite_fit = x.copy(), fx
        done += n
        if t == 0:
            initial = elite_fit
        else:
            convergence.append((t, elite_fit))
        t += 1

    return RunReport(elite_pos, elite_fit, convergence, f.calls, initial, f.nans, RANDOM_SEARCH)


def run_hill_climb(objective: Objective, config: OptimizerConfig, start=None,
                   step: float = 0.1, patience: int = 20, budget: int | None = None) -> RunReport:
    """(1+1) coordinate climber with +/- perturbations.

    Each step moves one uniformly chosen coordinate by ``step * width`` in a
    random direction (two draws) and accepts only strict improvements.  After
    ``patience`` consecutive rejections the step halves.  Progress is recorded
    every ``P`` evaluations so iteration numbers line up with AHCOA's.
    """
    space = config.space
    P = config.population_size
    budget = config.budget if budget is None else budget
    if budget < 1:
        raise ValueError("budget must be >= 1")
    stream = RngStream(config.seed)
    f = _Counter(objective)
    width = space.width

    if start is None:
        x = space.sample(stream, 1)[0]
    else:
        x = space.clamp(start)
    fx = f(x.copy())
    initial = fx
    convergence = []
    rejections = 0
    for n in range(2, budget + 1):
        i = min(int(stream.next_uniform() * space.dim), space.dim - 1)
        sign = 1.0 if stream.next_uniform() > 0.5 else -1.0
        y = x.copy()
        y[i] += sign * step * width[i]
        y = space.clamp(y)
        fy = f(y)
        if fy < fx:
            x, fx = y, fy
            rejections = 0
        else:
            rejections += 1
            if rejections == patience:
                step /= 2.0
                rejections = 0
        if n > P and (n - P) % P == 0:
            convergence.append(((n - P) // P, fx))
    if budget > P and (budget - P) % P:
        convergence.append(((budget - P) // P + 1, fx))

    return RunReport(x, fx, convergence, f.calls, initial, f.nans, HILL_CLIMB)
