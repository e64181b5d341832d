"""Threshold-oracle Grover rotations on the emulated register."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qwgo.errors import DomainError
from qwgo.statevector import QuantumState


@dataclass(frozen=True)
class ThresholdOracle:
    values: np.ndarray
    c: float

    @property
    def marked(self) -> np.ndarray:
        # Strict: a state exactly at the threshold is not an improvement.
        return np.asarray(self.values) < self.c


def count_solutions(oracle: ThresholdOracle) -> int:
    return int(np.count_nonzero(oracle.marked))


def apply_oracle(state: QuantumState, oracle: ThresholdOracle) -> QuantumState:
    marked = oracle.marked
    if marked.shape != state.amplitudes.shape:
        raise DomainError("oracle and state sizes differ")
    return QuantumState(np.where(marked, -state.amplitudes, state.amplitudes), state.domain)


def apply_diffusion(state: QuantumState) -> QuantumState:
    """Inversion about the mean amplitude, 2|s><s| - I."""
    a = state.amplitudes
    return QuantumState(2.0 * a.mean() - a, state.domain)


def grover_rotations(state: QuantumState, oracle: ThresholdOracle, r: int) -> QuantumState:
    if r < 0:
        raise DomainError(f"rotation count must be nonnegative, got {r}")
    marked = oracle.marked
    if marked.shape != state.amplitudes.shape:
        raise DomainError("oracle and state sizes differ")
    sign = np.where(marked, -1.0, 1.0)
    a = state.amplitudes.copy()
    for _ in range(r):
        a *= sign
        a = 2.0 * a.mean() - a
    return QuantumState(a, state.domain)


def theoretical_success(m: int, n_states: int, r: int) -> float:
    """sin^2((2r + 1) asin(sqrt(m / N))): marked-set mass after r rotations from uniform."""
    if not 1 <= m <= n_states:
        raise DomainError(f"need 1 <= m <= N, got m={m}, N={n_states}")
    if r < 0:
        raise DomainError(f"rotation count must be nonnegative, got {r}")
    return math.sin((2 * r + 1) * math.asin(math.sqrt(m / n_states))) ** 2
