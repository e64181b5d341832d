"""Benchmark objectives, their grid images, and the 3-qubit exp(-x) oracle demo."""

from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from qwgo.errors import DomainError, NumericalFailure
from qwgo.statevector import GridDomain

SCHWEFEL_SHIFT = -4.189829


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    return 10.0 + x**2 - 10.0 * np.cos(2.0 * np.pi * x)


def schwefel(x):
    # Scaled 1-D form; minimum near x = -14.03 on [-15, 15].
    x = np.asarray(x, dtype=float)
    return SCHWEFEL_SHIFT + 30.0 * x * np.sin(np.sqrt(np.abs(30.0 * x)))


def ackley(x):
    x = np.asarray(x, dtype=float)
    return -20.0 * np.exp(-0.2 * np.abs(4.0 * x)) - np.exp(np.cos(2.0 * np.pi * x))


@dataclass(frozen=True)
class ObjectiveSpec:
    name: str
    f: Callable[[np.ndarray], np.ndarray]
    default_domain: tuple[float, float]
    known_optimum_x: float
    known_optimum_f: float
    tabulated: bool = False


def dense_scan_minimum(f, lo: float, hi: float, points: int = 1_000_001) -> tuple[float, float]:
    """Brute-force minimizer on an even grid, polished by a bounded 1-D search."""
    xs = np.linspace(lo, hi, points)
    fx = f(xs)
    i = int(np.argmin(fx))
    step = (hi - lo) / (points - 1)
    a, b = max(lo, xs[i] - step), min(hi, xs[i] + step)
    res = minimize_scalar(lambda t: float(f(t)), bounds=(a, b), method="bounded",
                          options={"xatol": 1e-12})
    if res.success and res.fun <= fx[i]:
        return float(res.x), float(res.fun)
    return float(xs[i]), float(fx[i])


@functools.cache
def _schwefel_spec() -> ObjectiveSpec:
    x_opt, f_opt = dense_scan_minimum(schwefel, -15.0, 15.0)
    return ObjectiveSpec("schwefel", schwefel, (-15.0, 15.0), x_opt, f_opt)


_BUILTIN = {
    "rastrigin": lambda: ObjectiveSpec("rastrigin", rastrigin, (-5.0, 5.0), 0.0, 0.0),
    "schwefel": _schwefel_spec,
    "ackley": lambda: ObjectiveSpec("ackley", ackley, (-5.0, 5.0), 0.0, -20.0 - math.e),
}

OBJECTIVE_NAMES = tuple(_BUILTIN)


def get_objective(name: str) -> ObjectiveSpec:
    try:
        return _BUILTIN[name.lower()]()
    except KeyError:
        raise DomainError(f"unknown objective {name!r}; expected one of {', '.join(OBJECTIVE_NAMES)}") from None


def evaluate(spec: ObjectiveSpec, x: float) -> float:
    if not math.isfinite(x):
        raise DomainError(f"objective argument must be finite, got {x!r}")
    y = float(spec.f(x))
    if not math.isfinite(y):
        raise NumericalFailure(f"{spec.name}({x}) is not finite")
    return y


def grid_values(spec: ObjectiveSpec, domain: GridDomain) -> np.ndarray:
    y = np.asarray(spec.f(domain.coords()), dtype=float)
    if not np.all(np.isfinite(y)):
        raise NumericalFailure(f"{spec.name} is not finite on the grid")
    return y


def grid_argmin(values) -> tuple[int, float]:
    """Brute-force grid optimum; np.argmin already breaks ties toward the lowest index."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise DomainError("empty value vector")
    j = int(np.argmin(v))
    return j, float(v[j])


def load_tabulated(path, domain: GridDomain, name: str | None = None) -> ObjectiveSpec:
    """Read an `x,f` CSV with exactly one row per grid point.

    Off-grid queries (used by the continuous baselines) are linearly interpolated.
    """
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or set(rows[0]) != {"x", "f"}:
        raise DomainError(f"{path}: expected header 'x,f'")
    xs = np.array([float(r["x"]) for r in rows])
    fs = np.array([float(r["f"]) for r in rows])
    if len(xs) != domain.n_states:
        raise DomainError(f"{path}: {len(xs)} rows, grid has {domain.n_states} states")
    if not np.allclose(xs, domain.coords(), rtol=0, atol=1e-9 * max(1.0, abs(domain.delta))):
        raise DomainError(f"{path}: x column does not match the grid x_j = x_lo + j*delta")
    if not np.all(np.isfinite(fs)):
        raise NumericalFailure(f"{path}: non-finite f values")

    def f(x):
        return np.interp(x, xs, fs)

    j, fmin = grid_argmin(fs)
    return ObjectiveSpec(name or str(path), f, (domain.x_lo, domain.x_hi), float(xs[j]), fmin, tabulated=True)


def fixedpoint_eval_exp(x1: int, x2: int, x3: int) -> tuple[int, int, int]:
    """Bitwise black boxes for exp(-x) on 3 fractional bits: 0.x1x2x3 -> 0.f1f2f3."""
    for bit in (x1, x2, x3):
        if bit not in (0, 1):
            raise DomainError(f"bits must be 0 or 1, got {bit!r}")
    a, b, c = bool(x1), bool(x2), bool(x3)
    f1 = not (a and b and c)
    f2 = (not a and not b) or (not a and b and not c) or (a and b and c)
    f3 = (not a and (not b or (b and c))) or (a and not b and not c) or (a and b and c)
    return int(f1), int(f2), int(f3)


def bits_to_fraction(bits) -> float:
    return sum(bit / 2 ** (k + 1) for k, bit in enumerate(bits))
