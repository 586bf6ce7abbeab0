"""W, GHZ and single-excitation multi-qubit states.

Qubit 1 is the leftmost tensor factor: a basis index is the binary number
with qubit 1 as its most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hilbert
from .errors import DimensionMismatch, LengthMismatch, NotNormalized, TooFewQubits, TooManyQubits
from .hilbert import DensityMatrix, StateVector

MAX_QUBITS = 12
NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MultiQubitState:
    n_qubits: int
    vector: StateVector
    family: str = "general"  # "W", "GHZ" or "general"

    def __post_init__(self):
        if self.vector.dim != 2**self.n_qubits:
            raise DimensionMismatch(f"{self.vector.dim} amplitudes for {self.n_qubits} qubits")

    @property
    def amplitudes(self) -> np.ndarray:
        return self.vector.amplitudes

    def density_matrix(self) -> DensityMatrix:
        return self.vector.density_matrix()

    def reduced(self, qubits) -> DensityMatrix:
        """Reduced state on ``qubits`` (1-based, returned in ascending order)."""
        keep = [q - 1 for q in qubits]
        return hilbert.partial_trace(self.density_matrix(), [2] * self.n_qubits, keep)


def _check_n(n: int):
    if n < 2:
        raise TooFewQubits(f"need at least 2 qubits, got {n}")
    if n > MAX_QUBITS:
        raise TooManyQubits(f"at most {MAX_QUBITS} qubits supported, got {n}")


def _labels(n):
    return tuple(format(i, f"0{n}b") for i in range(2**n))


def single_excitation_index(qubit: int, n: int) -> int:
    """Basis index of ``|0..1..0>`` with the excitation on ``qubit`` (1-based)."""
    return 1 << (n - qubit)


def w_state(n: int) -> MultiQubitState:
    _check_n(n)
    psi = np.zeros(2**n, dtype=complex)
    for q in range(1, n + 1):
        psi[single_excitation_index(q, n)] = 1 / np.sqrt(n)
    return MultiQubitState(n, StateVector(psi, _labels(n)), "W")


def ghz_state(n: int, alpha: complex = 1 / np.sqrt(2), beta: complex = 1 / np.sqrt(2)) -> MultiQubitState:
    _check_n(n)
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1) > NORM_TOL:
        raise NotNormalized(f"|alpha|^2 + |beta|^2 = {norm!r}")
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = alpha
    psi[-1] = beta
    return MultiQubitState(n, StateVector(psi, _labels(n)), "GHZ")


def general_single_excitation(coeffs, n: int | None = None) -> MultiQubitState:
    """``sum_k c_k |0..0 1_k 0..0>``.

    Maps, for instance, a row of FMO exciton amplitudes onto an n-qubit
    state with one qubit per site.
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    if n is None:
        n = c.size
    if c.size != n:
        raise LengthMismatch(f"{c.size} coefficients for {n} qubits")
    _check_n(n)
    norm = float(np.sum(np.abs(c) ** 2))
    if abs(norm - 1) > NORM_TOL:
        raise NotNormalized(f"sum |c_k|^2 = {norm!r}")
    psi = np.zeros(2**n, dtype=complex)
    for q, ck in enumerate(c, start=1):
        psi[single_excitation_index(q, n)] = ck
    return MultiQubitState(n, StateVector(psi, _labels(n)), "general")


def site_pair_qubits(rho, i: int, j: int) -> np.ndarray:
    """Two-qubit state of sites ``i`` and ``j`` for a single-excitation density matrix.

    ``rho`` is indexed by localized excitations (any extra levels such as a
    ground or sink state count as "neither site excited"). Qubit order is
    ``(i, j)``; the ``|11>`` block is empty because at most one site is
    excited. Equals the partial trace of the corresponding multi-qubit state.
    """
    m = hilbert.as_array(rho)
    out = np.zeros((4, 4), dtype=complex)
    pi, pj = m[i, i].real, m[j, j].real
    out[0, 0] = 1 - pi - pj
    out[2, 2] = pi
    out[1, 1] = pj
    out[2, 1] = m[i, j]
    out[1, 2] = m[j, i]
    return out
