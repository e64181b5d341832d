"""Executable theory checks behind `qwgo validate`.

Each check compares an implementation path against an independent route
(closed form, eigendecomposition, finite differences, exhaustive truth table)
and reports the worst deviation it saw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from qwgo.ctqw import (DEFAULT_TAU, WalkParams, apply_walk, build_walk_operator, default_spread,
                       qw_efficiency_bound, walk_probability_closed_form)
from qwgo.grover import ThresholdOracle, grover_rotations, theoretical_success
from qwgo.objectives import OBJECTIVE_NAMES, bits_to_fraction, fixedpoint_eval_exp, get_objective, grid_values
from qwgo.specfun import bessel_j, bessel_j_deriv, bessel_j_row
from qwgo.statevector import GridDomain, init_basis, init_uniform, probabilities


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    error: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: max_err={self.error:.3e} tol={self.tolerance:.0e} {self.detail}".rstrip()


def check_grover_law(n_states: int = 512, ms=(1, 2, 64, 128, 256), max_r: int = 25) -> CheckResult:
    q = int(math.log2(n_states))
    domain = GridDomain(0.0, 1.0, q)
    worst = 0.0
    spread = 0.0
    for m in ms:
        values = np.where(np.arange(n_states) < m, 0.0, 1.0)
        oracle = ThresholdOracle(values, 0.5)
        for r in range(max_r + 1):
            p = probabilities(grover_rotations(init_uniform(domain), oracle, r))
            worst = max(worst, abs(p[:m].sum() - theoretical_success(m, n_states, r)))
            spread = max(spread, float(np.ptp(p[:m])))
    passed = worst <= 1e-9 and spread <= 1e-12
    return CheckResult("grover-law", passed, worst, 1e-9, f"marked_spread={spread:.1e}")


def check_bessel() -> CheckResult:
    reflect = 0.0
    for z in (0.1, 1.0, 10.0, 100.0):
        row = bessel_j_row(-64, 64, z)
        for n in range(65):
            reflect = max(reflect, abs(row[-n] - (-1) ** n * row[n]))
    norm = 0.0
    for z in (1.0, 10.0, 100.0, 500.0):
        m = math.ceil(z) + 40
        norm = max(norm, abs(float((bessel_j_row(-m, m, z).values ** 2).sum()) - 1.0))
    deriv = 0.0
    h = 1e-6
    for n, z in ((0, 1.0), (1, 2.5), (4, 3.0), (10, 12.0), (40, 30.0)):
        fd = (bessel_j(n, z + h) - bessel_j(n, z - h)) / (2 * h)
        deriv = max(deriv, abs(fd - bessel_j_deriv(n, z)))
    passed = reflect <= 1e-14 and norm <= 1e-10 and deriv <= 1e-6
    return CheckResult("bessel", passed, max(reflect, norm, deriv), 1e-6,
                       f"reflection={reflect:.1e} normalization={norm:.1e} derivative={deriv:.1e}")


def free_propagator_oracle(n_states: int, z: float, tau: float = 1.0) -> np.ndarray:
    """exp(-i H tau) for the V = 0 lattice Hamiltonian via its real tridiagonal eigensystem."""
    params = WalkParams.from_spread(z, tau, 1.0)
    hop = params.b / params.delta**2
    lam, vecs = eigh_tridiagonal(np.full(n_states, hop), np.full(n_states - 1, -0.5 * hop))
    return (vecs * np.exp(-1j * lam * tau)) @ vecs.T


def expm_deviation(n_states: int = 256, z: float = 20.0) -> float:
    q = int(math.log2(n_states))
    domain = GridDomain(0.0, float(n_states), q)  # delta = 1
    params = WalkParams.from_spread(z, 1.0, domain.delta)
    walk = build_walk_operator(domain, params, np.zeros(n_states)).matrix()
    exact = free_propagator_oracle(n_states, z, 1.0)
    lo, hi = n_states // 4, 3 * n_states // 4
    return float(np.abs(walk[lo:hi + 1, lo:hi + 1] - exact[lo:hi + 1, lo:hi + 1]).max())


def check_expm(n_states: int = 256, z: float = 20.0) -> CheckResult:
    dev = expm_deviation(n_states, z)
    return CheckResult("expm", dev <= 1e-6, dev, 1e-6, f"n={n_states} z={z:g} interior=[N/4,3N/4]")


def benchmark_walk_law(name: str, q: int = 9, tau: float = DEFAULT_TAU):
    spec = get_objective(name)
    domain = GridDomain(*spec.default_domain, q)
    values = grid_values(spec, domain)
    params = WalkParams.from_spread(default_spread(domain), tau, domain.delta)
    start = domain.n_states // 2
    return domain, values, params, start


def check_closed_form() -> CheckResult:
    worst = 0.0
    for name in OBJECTIVE_NAMES:
        domain, values, params, start = benchmark_walk_law(name)
        op = build_walk_operator(domain, params, values)
        p_walk = probabilities(apply_walk(op, init_basis(domain, start)))
        p_closed = walk_probability_closed_form(domain, params, values, start)
        worst = max(worst, float(np.abs(p_walk - p_closed).max()))
    return CheckResult("closed-form", worst <= 1e-9, worst, 1e-9)


def walk_vs_uniform_moments(name: str) -> tuple[float, float, float, float]:
    """(walk mean, uniform mean, walk variance, uniform variance) of f from the center start."""
    domain, values, params, start = benchmark_walk_law(name)
    p = walk_probability_closed_form(domain, params, values, start)
    mean_w = float(p @ values)
    var_w = float(p @ (values - mean_w) ** 2)
    return mean_w, float(values.mean()), var_w, float(values.var())


def check_walk_moments() -> CheckResult:
    ok = True
    parts = []
    for name in OBJECTIVE_NAMES:
        mw, mu, vw, vu = walk_vs_uniform_moments(name)
        ok &= mw < mu and vw < vu
        parts.append(f"{name}: mean {mw:.3g}<{mu:.3g} var {vw:.3g}<{vu:.3g}")
    return CheckResult("walk-moments", ok, 0.0, 0.0, "; ".join(parts))


def check_efficiency_bound() -> CheckResult:
    params = WalkParams.from_spread(1.0, 0.1, 1.0)
    cases = [
        (qw_efficiency_bound(4, 512, 0.0, 0, params, 0.5), True),
        (qw_efficiency_bound(128, 512, 0.0, 1, params, 1.0 / math.sqrt(128)), False),
        (qw_efficiency_bound(1, 512, 0.0, 17, params, 0.9), False),
    ]
    bad = sum(got != want for got, want in cases)
    return CheckResult("efficiency-bound", bad == 0, float(bad), 0.0, f"{len(cases)} cases")


def nearest_fixedpoint_exp(x: float, bits: int = 3) -> float:
    """exp(-x) rounded to the nearest representable 0.b1..bk value, ties low, clamped."""
    grid = np.arange(2**bits) / 2**bits
    y = math.exp(-x)
    return float(grid[int(np.argmin(np.abs(grid - y)))])


def check_fixedpoint() -> CheckResult:
    bad = 0
    for k in range(8):
        bits = ((k >> 2) & 1, (k >> 1) & 1, k & 1)
        x = bits_to_fraction(bits)
        bad += bits_to_fraction(fixedpoint_eval_exp(*bits)) != nearest_fixedpoint_exp(x)
    return CheckResult("fixedpoint", bad == 0, float(bad), 0.0, "8-row truth table")


CHECKS = {
    "grover-law": check_grover_law,
    "bessel": check_bessel,
    "expm": check_expm,
    "closed-form": check_closed_form,
    "walk-moments": check_walk_moments,
    "efficiency-bound": check_efficiency_bound,
    "fixedpoint": check_fixedpoint,
}
