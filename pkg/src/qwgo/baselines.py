"""Simulated annealing and a real-coded genetic algorithm on the continuous domain.

Both report an evaluation-indexed best-so-far trace so they can be put on the
same functional-evaluation axis as the quantum runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qwgo.errors import DomainError
from qwgo.objectives import ObjectiveSpec


@dataclass(frozen=True)
class SAConfig:
    t0: float = 100.0
    alpha: float = 0.95
    sigma: float | None = None  # default (x_hi - x_lo) / 20
    max_evals: int = 10_000

    def __post_init__(self):
        if self.t0 <= 0 or not 0 < self.alpha < 1:
            raise DomainError("need t0 > 0 and 0 < alpha < 1")
        if self.sigma is not None and self.sigma <= 0:
            raise DomainError("sigma must be positive")
        if self.max_evals < 1:
            raise DomainError("max_evals must be at least 1")


@dataclass(frozen=True)
class GAConfig:
    population: int = 25
    tournament: int = 2
    crossover_rate: float = 0.9
    mutation_rate: float = 0.1
    sigma: float | None = None  # default (x_hi - x_lo) / 10
    max_evals: int = 10_000

    def __post_init__(self):
        if self.population < 2 or self.tournament < 1:
            raise DomainError("need population >= 2 and tournament >= 1")
        if not (0 <= self.crossover_rate <= 1 and 0 <= self.mutation_rate <= 1):
            raise DomainError("rates must lie in [0, 1]")
        if self.sigma is not None and self.sigma <= 0:
            raise DomainError("sigma must be positive")
        if self.max_evals < 1:
            raise DomainError("max_evals must be at least 1")


@dataclass
class BaselineTrace:
    """best_f[e - 1], best_x[e - 1] hold the incumbent after e evaluations."""

    best_f: np.ndarray
    best_x: np.ndarray

    def first_success_evals(self, target_x: float, tol: float) -> int | None:
        hit = np.flatnonzero(np.abs(self.best_x - target_x) < tol)
        return int(hit[0]) + 1 if hit.size else None


class _Recorder:
    def __init__(self, f, budget: int):
        self.f = f
        self.best_f = np.empty(budget)
        self.best_x = np.empty(budget)
        self.n = 0
        self.budget = budget
        self._bf, self._bx = math.inf, math.nan

    @property
    def exhausted(self) -> bool:
        return self.n >= self.budget

    def __call__(self, x: float) -> float:
        y = float(self.f(x))
        if y < self._bf:
            self._bf, self._bx = y, x
        self.best_f[self.n] = self._bf
        self.best_x[self.n] = self._bx
        self.n += 1
        return y

    def batch(self, xs: np.ndarray) -> np.ndarray:
        """Evaluate as many of xs as the budget allows, recording each in order."""
        xs = np.asarray(xs, dtype=float)[: self.budget - self.n]
        ys = np.asarray(self.f(xs), dtype=float)
        if ys.size == 0:
            return ys
        # Running best over [previous best, ys...]; strict improvement keeps the earliest x.
        cand_f = np.concatenate(([self._bf], ys))
        cand_x = np.concatenate(([self._bx], xs))
        run_min = np.minimum.accumulate(cand_f)
        improved = np.concatenate(([True], cand_f[1:] < run_min[:-1]))
        owner = np.maximum.accumulate(np.where(improved, np.arange(len(cand_f)), 0))
        sl = slice(self.n, self.n + len(ys))
        self.best_f[sl] = run_min[1:]
        self.best_x[sl] = cand_x[owner[1:]]
        self.n += len(ys)
        self._bf, self._bx = float(run_min[-1]), float(cand_x[owner[-1]])
        return ys

    def trace(self) -> BaselineTrace:
        return BaselineTrace(self.best_f[: self.n].copy(), self.best_x[: self.n].copy())


def metropolis_acceptance(delta_f: float, temperature: float) -> float:
    if delta_f <= 0:
        return 1.0
    return math.exp(-delta_f / temperature)


def run_sa(objective: ObjectiveSpec, config: SAConfig, rng: np.random.Generator) -> BaselineTrace:
    lo, hi = objective.default_domain
    sigma = config.sigma or (hi - lo) / 20
    evaluate = _Recorder(objective.f, config.max_evals)

    x = float(rng.uniform(lo, hi))
    fx = evaluate(x)
    k = 0
    while not evaluate.exhausted:
        temperature = config.t0 * config.alpha**k
        cand = float(np.clip(x + sigma * rng.standard_normal(), lo, hi))
        fc = evaluate(cand)
        if rng.random() < metropolis_acceptance(fc - fx, temperature):
            x, fx = cand, fc
        k += 1
    return evaluate.trace()


def _tournament(fit: np.ndarray, size: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Indices of `count` tournament winners, each the fittest of `size` uniform entrants."""
    entrants = rng.integers(len(fit), size=(count, size))
    return entrants[np.arange(count), np.argmin(fit[entrants], axis=1)]


def run_ga(objective: ObjectiveSpec, config: GAConfig, rng: np.random.Generator) -> BaselineTrace:
    """Generational GA: tournament selection, BLX-0.5 crossover, Gaussian mutation, one elite."""
    lo, hi = objective.default_domain
    sigma = config.sigma or (hi - lo) / 10
    evaluate = _Recorder(objective.f, config.max_evals)

    pop = rng.uniform(lo, hi, size=config.population)
    fit = evaluate.batch(pop)
    pop = pop[: len(fit)]

    while not evaluate.exhausted:
        elite = int(np.argmin(fit))
        k = config.population - 1
        a = pop[_tournament(fit, config.tournament, k, rng)]
        b = pop[_tournament(fit, config.tournament, k, rng)]
        lo_p, hi_p = np.minimum(a, b), np.maximum(a, b)
        span = hi_p - lo_p
        blend = rng.uniform(lo_p - 0.5 * span, hi_p + 0.5 * span)
        child = np.where(rng.random(k) < config.crossover_rate, blend, a)
        child = np.where(rng.random(k) < config.mutation_rate, child + sigma * rng.standard_normal(k), child)
        child = np.clip(child, lo, hi)
        child_fit = evaluate.batch(child)
        pop = np.concatenate(([pop[elite]], child[: len(child_fit)]))
        fit = np.concatenate(([fit[elite]], child_fit))
    return evaluate.trace()
