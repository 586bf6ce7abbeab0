"""Quantum-information diagnostics: distances, entropies, entanglement, discord.

Entropies and informations are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import hilbert
from .errors import DimensionMismatch, GridMismatch, SupNormViolation, WrongDimension
from .hilbert import SIGMA_X, SIGMA_Y, SIGMA_Z, DensityMatrix
from .lindblad import Trajectory

SUP_NORM_TOL = 1e-9

# discord search: coarse (theta, phi) grid, then simplex refinement
DISCORD_GRID = (64, 128)
DISCORD_XTOL = 1e-5


@dataclass(frozen=True)
class MeasurePoint:
    t_ps: float
    value: float
    label: str


@dataclass(frozen=True)
class DiscordDecomposition:
    mutual_info_bits: float
    classical_corr_bits: float
    discord_bits: float
    measured_subsystem: str
    theta: float
    phi: float


def _pair(r1, r2):
    a, b = hilbert.as_array(r1), hilbert.as_array(r2)
    if a.shape != b.shape or a.ndim != 2:
        raise DimensionMismatch(f"state shapes differ: {a.shape} vs {b.shape}")
    return a, b


def trace_distance(r1, r2) -> float:
    """``||r1 - r2||_1 / 2``."""
    a, b = _pair(r1, r2)
    return 0.5 * hilbert.trace_norm(a - b)


def trace_distance_series(traj1: Trajectory, traj2: Trajectory) -> np.ndarray:
    if traj1.times_ps.shape != traj2.times_ps.shape or not np.array_equal(traj1.times_ps, traj2.times_ps):
        raise GridMismatch("trajectories are recorded on different time grids")
    if traj1.states.shape != traj2.states.shape:
        raise GridMismatch(f"trajectory state shapes differ: {traj1.states.shape} vs {traj2.states.shape}")
    diff = np.asarray(traj1.states) - np.asarray(traj2.states)
    # Hermitian differences: trace norm = sum |eigenvalues|
    return 0.5 * np.abs(np.linalg.eigvalsh(diff)).sum(axis=1)


def blp_nonmarkovianity(traj1: Trajectory, traj2: Trajectory) -> float:
    """Total increase of the trace distance along a pair of trajectories.

    Sum over recorded intervals of ``max(0, D(t_k+1) - D(t_k))``. This is
    the measure for one fixed initial pair, hence a lower bound on the
    supremum over pairs; resolving revivals is up to the recording grid.
    """
    d = trace_distance_series(traj1, traj2)
    return float(np.clip(np.diff(d), 0, None).sum())


def amplitude_damping_channel(u: complex):
    """Qubit map induced by the exact Lorentzian-bath evolution.

    Basis index 0 is the ground state, 1 the excited state. The returned
    callable maps a 2x2 density matrix (array or :class:`DensityMatrix`)
    to a 2x2 array.
    """
    u = complex(u)
    if abs(u) > 1 + SUP_NORM_TOL:
        raise SupNormViolation(f"|u| = {abs(u)!r} exceeds 1")
    p = min(abs(u) ** 2, 1.0)

    def channel(rho):
        r = hilbert.as_array(rho)
        if r.shape != (2, 2):
            raise WrongDimension(f"amplitude-damping channel acts on qubits, got shape {r.shape}")
        out = np.empty((2, 2), dtype=complex)
        out[1, 1] = p * r[1, 1]
        out[0, 0] = r[0, 0] + (1 - p) * r[1, 1]
        out[1, 0] = u * r[1, 0]
        out[0, 1] = np.conj(u) * r[0, 1]
        return out

    return channel


def channel_trajectory(times_ps, u_values, rho0) -> Trajectory:
    """Trajectory of a qubit under ``amplitude_damping_channel(u(t))``."""
    states = np.array([amplitude_damping_channel(u)(rho0) for u in u_values])
    times = np.asarray(times_ps, dtype=float)
    if times.shape[0] != states.shape[0]:
        raise GridMismatch("times and amplitudes differ in length")
    return Trajectory(times, states, ("0", "1"))


PLUS = np.full((2, 2), 0.5, dtype=complex)
MINUS = np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=complex)


def blp_amplitude_damping(times_ps, u_values, pair=(PLUS, MINUS)) -> float:
    """BLP measure of the ``u(t)`` channel on an initial pair (default ``|+>, |->``)."""
    return blp_nonmarkovianity(
        channel_trajectory(times_ps, u_values, pair[0]),
        channel_trajectory(times_ps, u_values, pair[1]),
    )


def _entropy_from_eigenvalues(w) -> float:
    w = w[w > hilbert.TOL.entropy_cutoff]
    return float(-(w * np.log2(w)).sum())


def von_neumann_entropy(rho) -> float:
    """``-tr rho log2 rho`` in bits; eigenvalues <= 1e-14 contribute nothing."""
    m = hilbert.check_hermitian(rho)
    return max(0.0, _entropy_from_eigenvalues(np.linalg.eigvalsh(m)))


def _bipartite(rho_ab, dims):
    m = hilbert.as_array(rho_ab)
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2 or m.ndim != 2 or m.shape != (dims[0] * dims[1],) * 2:
        raise DimensionMismatch(f"dims {dims} do not match state shape {m.shape}")
    return m, dims


def mutual_information(rho_ab, dims=(2, 2)) -> float:
    """``S(A) + S(B) - S(AB)`` in bits."""
    m, dims = _bipartite(rho_ab, dims)
    s_a = von_neumann_entropy(hilbert.partial_trace(m, dims, 0))
    s_b = von_neumann_entropy(hilbert.partial_trace(m, dims, 1))
    return max(0.0, s_a + s_b - von_neumann_entropy(m))


def conditional_entropy(rho_ab, dims=(2, 2), conditioned_on: str = "B") -> float:
    """``S(AB) - S(B)`` (or ``- S(A)``) in bits; negative for entangled states."""
    m, dims = _bipartite(rho_ab, dims)
    if conditioned_on not in ("A", "B"):
        raise ValueError(f"conditioned_on must be 'A' or 'B', got {conditioned_on!r}")
    keep = 1 if conditioned_on == "B" else 0
    return von_neumann_entropy(m) - von_neumann_entropy(hilbert.partial_trace(m, dims, keep))


def _two_qubit(rho) -> np.ndarray:
    m = hilbert.as_array(rho)
    if m.shape != (4, 4):
        raise WrongDimension(f"expected a two-qubit (4x4) state, got shape {m.shape}")
    return hilbert.check_hermitian(m)


_YY = np.kron(SIGMA_Y, SIGMA_Y)


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit state.

    With ``rho = W W^dag`` (W built from the eigenvectors above the entropy
    cutoff), the square roots of the eigenvalues of ``rho (Y x Y) rho^* (Y x Y)``
    are the singular values of ``W^T (Y x Y) W``. Taking them as singular
    values avoids square roots of round-off for low-rank states.
    """
    m = _two_qubit(rho)
    w, v = np.linalg.eigh(m)
    keep = w > hilbert.TOL.entropy_cutoff
    W = v[:, keep] * np.sqrt(w[keep])
    mu = np.zeros(4)
    if W.shape[1]:
        s = np.linalg.svd(W.T @ _YY @ W, compute_uv=False)
        mu[: s.size] = s
    mu = np.sort(mu)[::-1]
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def _swap_qubits(m):
    return m.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)


def _projectors(theta, phi):
    n = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)
    ns = np.einsum("...k,kij->...ij", n, np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z]))
    return 0.5 * (hilbert.IDENTITY_2 + ns), 0.5 * (hilbert.IDENTITY_2 - ns)


def _classical_correlation(m, s_a, theta, phi):
    """``S(A) - sum_b p_b S(A|b)`` for projective measurements of B along (theta, phi)."""
    R = m.reshape(2, 2, 2, 2)
    total = np.zeros(np.shape(theta))
    for proj in _projectors(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)):
        # Tr_B[(1 x P) rho]
        cond = np.einsum("...bc,acdb->...ad", proj, R)
        p = np.einsum("...ii->...", cond).real
        safe = np.where(p > hilbert.TOL.entropy_cutoff, p, 1.0)
        lam = np.linalg.eigvalsh(cond / safe[..., None, None])
        lam = np.where(lam > hilbert.TOL.entropy_cutoff, lam, 1.0)
        s = -(lam * np.log2(lam)).sum(axis=-1)
        total += np.where(p > hilbert.TOL.entropy_cutoff, p * s, 0.0)
    return s_a - total


def discord_two_qubit(rho, measured: str = "B") -> DiscordDecomposition:
    """Quantum discord with rank-one projective measurements on one qubit.

    ``J`` is maximised over Bloch directions on a 64 x 128 (theta, phi) grid,
    then refined by Nelder-Mead to a simplex size below 1e-5 rad.
    """
    m = _two_qubit(rho)
    if measured not in ("A", "B"):
        raise ValueError(f"measured must be 'A' or 'B', got {measured!r}")
    if measured == "A":
        m = _swap_qubits(m)
    s_a = von_neumann_entropy(hilbert.partial_trace(m, (2, 2), 0))
    info = mutual_information(m)

    n_t, n_p = DISCORD_GRID
    theta = np.linspace(0.0, np.pi, n_t)
    phi = np.linspace(0.0, 2 * np.pi, n_p, endpoint=False)
    T, P = np.meshgrid(theta, phi, indexing="ij")
    J = _classical_correlation(m, s_a, T, P)
    i, j = np.unravel_index(np.argmax(J), J.shape)
    best_x = np.array([theta[i], phi[j]])
    best_j = float(J[i, j])

    dt, dp = theta[1] - theta[0], phi[1] - phi[0]
    res = optimize.minimize(
        lambda x: -float(_classical_correlation(m, s_a, x[0], x[1])),
        best_x,
        method="Nelder-Mead",
        options={
            "initial_simplex": [best_x, best_x + [dt, 0], best_x + [0, dp]],
            "xatol": DISCORD_XTOL,
            "fatol": 1e-15,
            "maxiter": 4000,
        },
    )
    if -res.fun > best_j:
        best_x, best_j = res.x, float(-res.fun)

    classical = min(max(best_j, 0.0), info)
    return DiscordDecomposition(
        mutual_info_bits=info,
        classical_corr_bits=classical,
        discord_bits=info - classical,
        measured_subsystem=measured,
        theta=float(best_x[0] % (2 * np.pi)),
        phi=float(best_x[1] % (2 * np.pi)),
    )


def bell_state(which: str = "phi+") -> DensityMatrix:
    s = 1 / np.sqrt(2)
    vecs = {
        "phi+": [s, 0, 0, s],
        "phi-": [s, 0, 0, -s],
        "psi+": [0, s, s, 0],
        "psi-": [0, s, -s, 0],
    }
    return DensityMatrix.from_state(np.array(vecs[which], dtype=complex))


def werner_state(p: float) -> DensityMatrix:
    return DensityMatrix(p * bell_state().matrix + (1 - p) * np.eye(4) / 4)
