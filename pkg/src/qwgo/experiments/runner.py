"""Seeded multi-run fan-out and aggregation into success curves and averaged PDFs."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from qwgo.baselines import BaselineTrace, GAConfig, SAConfig, run_ga, run_sa
from qwgo.objectives import ObjectiveSpec
from qwgo.optimizer import RunConfig, RunTrace, run


@dataclass(frozen=True)
class CurvePoint:
    axis_value: int
    success_prob: float
    stderr: float


@dataclass
class SuccessCurve:
    algorithm: str
    objective: str
    r0: int | None
    axis: str  # "iterations" or "evaluations"
    points: list[CurvePoint]
    runs: int

    def at(self, axis_value: int) -> float:
        for p in self.points:
            if p.axis_value == axis_value:
                return p.success_prob
        raise KeyError(axis_value)


@dataclass
class AveragePdf:
    iteration: int
    mean_probability: np.ndarray


def default_jobs() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def _chunk(items: list, parts: int) -> list[list]:
    size = math.ceil(len(items) / parts)
    return [items[i:i + size] for i in range(0, len(items), size)]


def _quantum_chunk(algorithm: str, config: RunConfig, seeds: list[int], record_pdf: bool) -> list[RunTrace]:
    return [run(algorithm, replace(config, seed=s), record_pdf=record_pdf) for s in seeds]


def run_many(algorithm: str, config: RunConfig, runs: int, jobs: int = 1, record_pdf: bool = False) -> list[RunTrace]:
    """Runs with seeds config.seed + i, returned in run-index order regardless of `jobs`."""
    seeds = [config.seed + i for i in range(runs)]
    if jobs <= 1 or runs <= 1:
        return _quantum_chunk(algorithm, config, seeds, record_pdf)
    chunks = _chunk(seeds, min(jobs, runs))
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        futures = [pool.submit(_quantum_chunk, algorithm, config, c, record_pdf) for c in chunks]
        return [t for f in futures for t in f.result()]


def _baseline_chunk(method: str, objective: ObjectiveSpec, config, seeds: list[int]) -> list[BaselineTrace]:
    fn = run_sa if method == "sa" else run_ga
    return [fn(objective, config, np.random.default_rng(s)) for s in seeds]


def run_baseline_many(method: str, objective: ObjectiveSpec, config: SAConfig | GAConfig, runs: int,
                      base_seed: int = 0, jobs: int = 1) -> list[BaselineTrace]:
    seeds = [base_seed + i for i in range(runs)]
    if jobs <= 1 or runs <= 1:
        return _baseline_chunk(method, objective, config, seeds)
    chunks = _chunk(seeds, min(jobs, runs))
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        futures = [pool.submit(_baseline_chunk, method, objective, config, c) for c in chunks]
        return [t for f in futures for t in f.result()]


def success_curve(first_success: list[int | None], axis_values, **meta) -> SuccessCurve:
    """Fraction of runs whose first success happened at or before each axis value."""
    runs = len(first_success)
    hits = np.array([math.inf if s is None else s for s in first_success], dtype=float)
    points = []
    for v in axis_values:
        p = float(np.count_nonzero(hits <= v)) / runs
        points.append(CurvePoint(int(v), p, math.sqrt(p * (1.0 - p) / runs)))
    return SuccessCurve(points=points, runs=runs, **meta)


def iterations_to_success(trace: RunTrace) -> int | None:
    """Scheduled iterations completed at first success; 0 means the seeding step succeeded."""
    it = trace.first_success_iteration
    return None if it is None else it + 1


def quantum_curves(traces: list[RunTrace], algorithm: str, objective: str, r0: int | None,
                   budget: int) -> tuple[SuccessCurve, SuccessCurve]:
    max_iter = traces[0].config.max_iter
    by_iter = success_curve([iterations_to_success(t) for t in traces], range(max_iter + 1),
                            algorithm=algorithm, objective=objective, r0=r0, axis="iterations")
    by_eval = success_curve([t.first_success_evals for t in traces], range(1, budget + 1),
                            algorithm=algorithm, objective=objective, r0=r0, axis="evaluations")
    return by_iter, by_eval


def average_pdfs(traces: list[RunTrace]) -> list[AveragePdf]:
    n_iter = min(len(t.pdfs) for t in traces)
    out = []
    for i in range(n_iter):
        mean = np.mean([t.pdfs[i] for t in traces], axis=0)
        out.append(AveragePdf(i, mean))
    return out


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum())
