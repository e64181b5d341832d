"""Continuous-time quantum walk on the 1-D search lattice.

The one-step propagator has the closed form

    u_jk = i^(j-k) * exp(-i z) * exp(-V_j tau) * J_{j-k}(z),   z = b tau / delta^2,

i.e. a symmetric Toeplitz Bessel kernel, a global phase and a diagonal damping
by the potential at the arrival state.  The kernel is derived on the infinite
lattice; here it is truncated at the domain edges (no wraparound), so the
operator is only approximately unitary and callers renormalize at sampling time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from qwgo.errors import DomainError, NumericalFailure
from qwgo.specfun import BesselRow, bessel_j_row
from qwgo.statevector import GridDomain, QuantumState

DEFAULT_TAU = 1.5

# exp(x) overflows float64 just above 709.78.
_EXP_LIMIT = 700.0


@dataclass(frozen=True)
class WalkParams:
    b: float
    tau: float
    delta: float

    def __post_init__(self):
        if self.delta <= 0:
            raise DomainError(f"grid spacing must be positive, got {self.delta}")
        if self.tau < 0 or self.b < 0:
            raise DomainError(f"need b >= 0 and tau >= 0, got b={self.b}, tau={self.tau}")

    @property
    def z(self) -> float:
        return self.b * self.tau / self.delta**2

    @classmethod
    def from_spread(cls, z: float, tau: float, delta: float) -> "WalkParams":
        """Derive b from the dimensionless spread z and the time step tau.

        tau = 0 is accepted only with z = 0 and gives the identity walk.
        """
        if tau == 0:
            if z != 0:
                raise DomainError("tau = 0 requires z = 0")
            return cls(b=0.0, tau=0.0, delta=delta)
        if z < 0 or tau < 0:
            raise DomainError(f"need z >= 0 and tau > 0, got z={z}, tau={tau}")
        return cls(b=z * delta**2 / tau, tau=tau, delta=delta)


def default_spread(domain: GridDomain) -> float:
    return domain.n_states / 2


def _check_potential(domain: GridDomain, potential) -> np.ndarray:
    v = np.asarray(potential, dtype=float)
    if v.shape != (domain.n_states,):
        raise DomainError(f"potential of shape {v.shape} does not match {domain.n_states} grid states")
    if not np.all(np.isfinite(v)):
        raise NumericalFailure("potential contains non-finite values")
    return v


def build_hamiltonian(domain: GridDomain, b: float, potential) -> np.ndarray:
    """Tridiagonal drift-diffusion Hamiltonian on the truncated lattice."""
    v = _check_potential(domain, potential)
    n = domain.n_states
    hop = b / domain.delta**2
    h = np.zeros((n, n), dtype=complex)
    idx = np.arange(n)
    h[idx, idx] = hop - 1j * v
    h[idx[:-1], idx[1:]] = -0.5 * hop
    h[idx[1:], idx[:-1]] = -0.5 * hop
    return h


@dataclass
class WalkOperator:
    params: WalkParams
    potential: np.ndarray
    bessel: BesselRow
    global_phase: complex
    damping: np.ndarray
    _matrix: np.ndarray | None = field(default=None, repr=False)

    @property
    def n_states(self) -> int:
        return len(self.potential)

    def kernel(self) -> np.ndarray:
        """i^n J_n(z) for n = -(N-1)..(N-1); symmetric since i^-n J_-n = i^n J_n."""
        n = self.bessel.orders
        return (1j ** (n % 4)) * self.bessel.values

    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            n = self.n_states
            offsets = np.subtract.outer(np.arange(n), np.arange(n)) + (n - 1)
            toeplitz = self.kernel()[offsets]
            self._matrix = (self.global_phase * self.damping)[:, None] * toeplitz
        return self._matrix

    def column(self, k: int) -> np.ndarray:
        """Image of basis state k, without materializing the full matrix."""
        n = self.n_states
        offsets = np.arange(n) - k + (n - 1)
        return self.global_phase * self.damping * self.kernel()[offsets]


def build_walk_operator(domain: GridDomain, params: WalkParams, potential) -> WalkOperator:
    v = _check_potential(domain, potential)
    if not math.isclose(params.delta, domain.delta, rel_tol=1e-12):
        raise DomainError(f"walk spacing {params.delta} differs from grid spacing {domain.delta}")
    n = domain.n_states
    z = params.z
    exponent = -v * params.tau
    if exponent.max() > _EXP_LIMIT:
        raise NumericalFailure(
            f"damping exp(-V tau) overflows (max exponent {exponent.max():.1f}); reduce tau"
        )
    return WalkOperator(
        params=params,
        potential=v,
        bessel=bessel_j_row(-(n - 1), n - 1, z),
        global_phase=complex(np.exp(-1j * z)),
        damping=np.exp(exponent),
    )


def apply_walk(op: WalkOperator, state: QuantumState) -> QuantumState:
    """One walk step. The result is deliberately left unnormalized."""
    if state.amplitudes.shape != (op.n_states,):
        raise DomainError("state and walk operator sizes differ")
    nz = np.flatnonzero(state.amplitudes)
    if len(nz) == 1:
        k = int(nz[0])
        out = state.amplitudes[k] * op.column(k)
    else:
        out = op.matrix() @ state.amplitudes
    if not np.any(out):
        raise NumericalFailure("walk step annihilated the state")
    return QuantumState(out, state.domain)


def walk_probability_closed_form(domain: GridDomain, params: WalkParams, potential, start: int) -> np.ndarray:
    """Normalized arrival law p_j ~ exp(-2 V_j tau) J_{j-K}(z)^2 from basis state K."""
    v = _check_potential(domain, potential)
    n = domain.n_states
    if not 0 <= start < n:
        raise DomainError(f"start index {start} outside [0, {n})")
    row = bessel_j_row(-start, n - 1 - start, params.z)
    # Shifting V by its minimum leaves the normalized law unchanged and cannot overflow.
    w = np.exp(-2.0 * params.tau * (v - v.min())) * row.values**2
    total = w.sum()
    if not np.isfinite(total) or total <= 0:
        raise NumericalFailure("walk distribution has zero mass")
    return w / total


def qw_efficiency_bound(m: int, n_states: int, c: float, r: int, params: WalkParams, j_low: float) -> bool:
    """Sufficient condition for one walk step to beat r Grover rotations at threshold c.

    Compares sqrt(m) exp(-c tau) |J_L| against sin((2r + 1) asin(sqrt(m / N))),
    where J_L is the smallest-magnitude Bessel factor over the marked states.
    """
    if not 1 <= m <= n_states:
        raise DomainError(f"need 1 <= m <= N, got m={m}, N={n_states}")
    if r < 0:
        raise DomainError(f"rotation count must be nonnegative, got {r}")
    if abs(j_low) > 1:
        raise DomainError(f"|J_L| must be at most 1, got {j_low}")
    lhs = math.sqrt(m) * math.exp(-c * params.tau) * abs(j_low)
    rhs = math.sin((2 * r + 1) * math.asin(math.sqrt(m / n_states)))
    return lhs > rhs
