"""Exact amplitude-vector emulation of a q-qubit search register."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from qwgo.errors import DomainError, NumericalFailure


@dataclass(frozen=True)
class GridDomain:
    """[x_lo, x_hi) split into N = 2**q left-aligned cells, x_j = x_lo + j * delta."""

    x_lo: float
    x_hi: float
    q: int

    def __post_init__(self):
        if not (np.isfinite(self.x_lo) and np.isfinite(self.x_hi)) or self.x_hi <= self.x_lo:
            raise DomainError(f"need finite x_lo < x_hi, got [{self.x_lo}, {self.x_hi}]")
        if int(self.q) != self.q or self.q < 1:
            raise DomainError(f"qubit count must be a positive integer, got {self.q}")

    @property
    def n_states(self) -> int:
        return 1 << int(self.q)

    @property
    def delta(self) -> float:
        return (self.x_hi - self.x_lo) / self.n_states

    def coords(self) -> np.ndarray:
        return self.x_lo + np.arange(self.n_states) * self.delta

    def coord(self, j: int) -> float:
        return self.x_lo + j * self.delta

    def nearest_index(self, x: float) -> int:
        j = int(round((x - self.x_lo) / self.delta))
        return min(max(j, 0), self.n_states - 1)


@dataclass
class QuantumState:
    amplitudes: np.ndarray
    domain: GridDomain = field(repr=False)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.domain.n_states,):
            raise DomainError(
                f"amplitude vector of shape {self.amplitudes.shape} does not match "
                f"{self.domain.n_states} grid states"
            )

    def copy(self) -> "QuantumState":
        return QuantumState(self.amplitudes.copy(), self.domain)


def init_basis(domain: GridDomain, j: int) -> QuantumState:
    n = domain.n_states
    if not 0 <= j < n:
        raise DomainError(f"basis index {j} outside [0, {n})")
    amps = np.zeros(n, dtype=complex)
    amps[j] = 1.0
    return QuantumState(amps, domain)


def init_uniform(domain: GridDomain) -> QuantumState:
    """Hadamard image of |0...0>: every amplitude is 1/sqrt(N)."""
    n = domain.n_states
    return QuantumState(np.full(n, 1.0 / np.sqrt(n), dtype=complex), domain)


def _mass(state: QuantumState) -> tuple[np.ndarray, float, float]:
    """(|psi / peak|^2, its sum, peak) with peak = max |psi|.

    Walk outputs can reach |psi| ~ e^600 under negative potentials, so squares
    are taken after scaling.
    """
    mag = np.abs(state.amplitudes)
    peak = float(mag.max()) if mag.size else 0.0
    if not np.isfinite(peak) or peak <= 0.0:
        raise NumericalFailure(f"state has unusable amplitude scale {peak!r}")
    p = (mag / peak) ** 2
    return p, float(p.sum()), peak


def probabilities(state: QuantumState) -> np.ndarray:
    """Born-rule probabilities, renormalized so sub-normalized states are valid input."""
    p, total, _ = _mass(state)
    return p / total


def normalize(state: QuantumState) -> QuantumState:
    _, total, peak = _mass(state)
    return QuantumState(state.amplitudes / peak / np.sqrt(total), state.domain)


def measure(state: QuantumState, rng: np.random.Generator) -> int:
    """Sample a basis index by inverse CDF; draws exactly one uniform variate."""
    p, _, _ = _mass(state)
    cdf = np.cumsum(p)
    u = rng.random() * cdf[-1]
    # side="right" never lands on a zero-probability index.
    j = int(np.searchsorted(cdf, u, side="right"))
    return min(j, len(p) - 1)
