"""Threshold-descent Grover optimization, with and without quantum-walk steps.

`run_bbw` follows the static rotation schedule: every iteration prepares the
uniform state, applies the scheduled number of threshold-oracle rotations and
measures.  `run_bbw_qw` replaces every iteration whose scheduled count is at most
`r0` with a single walk step started from a basis state, and also seeds the
threshold with a walk step instead of a uniform sample.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from qwgo.ctqw import DEFAULT_TAU, WalkOperator, WalkParams, apply_walk, build_walk_operator, default_spread
from qwgo.errors import DomainError, NumericalFailure
from qwgo.grover import ThresholdOracle, grover_rotations
from qwgo.objectives import ObjectiveSpec, get_objective, grid_argmin, grid_values, load_tabulated
from qwgo.statevector import GridDomain, QuantumState, init_basis, init_uniform, measure, probabilities

log = logging.getLogger(__name__)

ROTATION_SCHEDULE = (
    0, 0, 0, 0, 1, 1, 0, 1, 1, 2, 1, 2, 3, 1, 4, 5, 1, 6, 2, 7, 9, 11, 13, 16, 5, 20,
    24, 28, 34, 2, 41, 49, 4, 60, 72, 9, 88, 105, 125, 3, 149, 22, 183, 219,
)

WALK, GROVER, UNIFORM = "walk", "grover", "uniform"
START_POLICIES = ("current-best", "random", "center")


def scheduled_rotations(i: int) -> int:
    # Past the end of the table the last (largest) count is repeated.
    return ROTATION_SCHEDULE[min(i, len(ROTATION_SCHEDULE) - 1)]


def evaluation_count(step_kind: str, rotations: int = 0) -> int:
    """Cost of one iteration: 1 per measurement, rotation and walk step."""
    if step_kind == WALK:
        return 2
    if step_kind == GROVER:
        return rotations + 1
    if step_kind == UNIFORM:
        return 1
    raise DomainError(f"unknown step kind {step_kind!r}")


@dataclass(frozen=True)
class RunConfig:
    objective: str = "rastrigin"
    domain: tuple[float, float] | None = None
    q: int = 9
    r0: int = 2
    z: float | None = None
    tau: float = DEFAULT_TAU
    seed: int = 0
    max_iter: int = len(ROTATION_SCHEDULE)
    success_tolerance: float = 1e-4
    walk_start_policy: str = "current-best"
    early_stop_on_success: bool = False

    def __post_init__(self):
        if self.q < 1:
            raise DomainError(f"qubit count must be positive, got {self.q}")
        if self.max_iter < 0:
            raise DomainError(f"max_iter must be nonnegative, got {self.max_iter}")
        if self.success_tolerance <= 0:
            raise DomainError("success_tolerance must be positive")
        if self.walk_start_policy not in START_POLICIES:
            raise DomainError(f"walk_start_policy must be one of {START_POLICIES}")
        if self.tau < 0 or (self.z is not None and self.z < 0):
            raise DomainError("tau and z must be nonnegative")


@dataclass
class Problem:
    """Everything a run needs that does not depend on the seed."""

    spec: ObjectiveSpec
    domain: GridDomain
    values: np.ndarray
    target_index: int
    params: WalkParams
    _walk: WalkOperator | None = field(default=None, repr=False)

    @property
    def target_x(self) -> float:
        return self.domain.coord(self.target_index)

    @property
    def walk(self) -> WalkOperator:
        if self._walk is None:
            self._walk = build_walk_operator(self.domain, self.params, self.values)
        return self._walk


def resolve_objective(name: str, domain: tuple[float, float] | None, q: int) -> tuple[ObjectiveSpec, GridDomain]:
    if name.lower().endswith(".csv") and Path(name).is_file():
        if domain is None:
            raise DomainError("a tabulated objective needs an explicit domain")
        grid = GridDomain(float(domain[0]), float(domain[1]), q)
        return load_tabulated(name, grid), grid
    spec = get_objective(name)
    lo, hi = domain if domain is not None else spec.default_domain
    return spec, GridDomain(float(lo), float(hi), q)


@functools.lru_cache(maxsize=32)
def _cached_problem(objective, domain, q, z, tau) -> Problem:
    spec, grid = resolve_objective(objective, domain, q)
    values = grid_values(spec, grid)
    target, _ = grid_argmin(values)
    spread = default_spread(grid) if z is None else z
    params = WalkParams.from_spread(spread, tau, grid.delta)
    return Problem(spec, grid, values, target, params)


def build_problem(config: RunConfig) -> Problem:
    return _cached_problem(config.objective, config.domain, config.q, config.z, config.tau)


@dataclass(frozen=True)
class StepRecord:
    iteration: int
    step_kind: str
    rotations: int
    cum_evals: int
    sample_index: int
    sample_x: float
    sample_f: float
    threshold_c: float
    best_x: float
    best_f: float
    success: bool


@dataclass
class RunTrace:
    """Per-iteration history of one run.

    `initial` is the threshold-seeding step that precedes the scheduled
    iterations (iteration -1); `records` holds one entry per scheduled iteration.
    """

    algorithm: str
    config: RunConfig
    initial: StepRecord | None = None
    records: list[StepRecord] = field(default_factory=list)
    pdfs: list[np.ndarray] | None = None
    initial_pdf: np.ndarray | None = None
    error: str | None = None

    @property
    def steps(self) -> list[StepRecord]:
        return ([self.initial] if self.initial else []) + self.records

    @property
    def total_evals(self) -> int:
        steps = self.steps
        return steps[-1].cum_evals if steps else 0

    @property
    def first_success(self) -> StepRecord | None:
        return next((s for s in self.steps if s.success), None)

    @property
    def first_success_iteration(self) -> int | None:
        s = self.first_success
        return None if s is None else s.iteration

    @property
    def first_success_evals(self) -> int | None:
        s = self.first_success
        return None if s is None else s.cum_evals


def _start_index(policy: str, problem: Problem, best: int | None, rng: np.random.Generator) -> int:
    n = problem.domain.n_states
    if policy == "center":
        return n // 2
    if policy == "random" or best is None:
        return int(rng.integers(n))
    return best


def _search(config: RunConfig, rng: np.random.Generator, use_walks: bool, record_pdf: bool, algorithm: str) -> RunTrace:
    problem = build_problem(config)
    values = problem.values
    coords = problem.domain.coords()
    trace = RunTrace(algorithm, config, pdfs=[] if record_pdf else None)

    def prepare(kind: str, rotations: int, c: float | None, best: int | None) -> QuantumState:
        if kind == WALK:
            k = _start_index(config.walk_start_policy, problem, best, rng)
            return apply_walk(problem.walk, init_basis(problem.domain, k))
        state = init_uniform(problem.domain)
        if kind == GROVER:
            state = grover_rotations(state, ThresholdOracle(values, c), rotations)
        return state

    def is_success(j: int) -> bool:
        return abs(coords[j] - problem.target_x) < config.success_tolerance

    try:
        kind = WALK if use_walks else UNIFORM
        state = prepare(kind, 0, None, None)
        if record_pdf:
            trace.initial_pdf = probabilities(state)
        j = measure(state, rng)
        evals = evaluation_count(kind)
        best, c = j, float(values[j])
        success = is_success(best)
        trace.initial = StepRecord(-1, kind, 0, evals, j, float(coords[j]), c, c, float(coords[j]), c, success)

        for i in range(config.max_iter):
            if config.early_stop_on_success and success:
                break
            rot = scheduled_rotations(i)
            if use_walks and rot <= config.r0:
                kind, used = WALK, 0
            elif rot == 0:
                kind, used = UNIFORM, 0
            else:
                kind, used = GROVER, rot
            state = prepare(kind, used, c, best)
            if record_pdf:
                trace.pdfs.append(probabilities(state))
            j = measure(state, rng)
            evals += evaluation_count(kind, used)
            if values[j] < c:
                best, c = j, float(values[j])
            success = success or is_success(best)
            trace.records.append(StepRecord(
                i, kind, used, evals, j, float(coords[j]), float(values[j]), c,
                float(coords[best]), float(values[best]), success,
            ))
    except NumericalFailure as exc:
        log.warning("run aborted (%s, seed %s): %s", algorithm, config.seed, exc)
        trace.error = str(exc)
    return trace


def _rng(config: RunConfig, rng) -> np.random.Generator:
    return np.random.default_rng(config.seed) if rng is None else rng


def run_bbw_qw(config: RunConfig, rng: np.random.Generator | None = None, record_pdf: bool = False) -> RunTrace:
    """Walk-enhanced search. A negative r0 disables walks, reducing to `run_bbw`."""
    return _search(config, _rng(config, rng), config.r0 >= 0, record_pdf, "bbw-qw")


def run_bbw(config: RunConfig, rng: np.random.Generator | None = None, record_pdf: bool = False) -> RunTrace:
    return _search(config, _rng(config, rng), False, record_pdf, "bbw")


ALGORITHMS = {"bbw": run_bbw, "bbw-qw": run_bbw_qw}


def run(algorithm: str, config: RunConfig, rng=None, record_pdf: bool = False) -> RunTrace:
    try:
        fn = ALGORITHMS[algorithm]
    except KeyError:
        raise DomainError(f"unknown algorithm {algorithm!r}; expected bbw or bbw-qw") from None
    return fn(config, rng, record_pdf)


def with_seed(config: RunConfig, seed: int) -> RunConfig:
    return replace(config, seed=seed)
