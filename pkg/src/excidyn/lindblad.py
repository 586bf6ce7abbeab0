"""Lindblad propagation of FMO exciton transport into a reaction-center sink.

State space for an N-site Hamiltonian is ``{ground, site 1..N, sink}`` with
ground at index 0 and the sink at index N+1. Hamiltonians are in rad/ps,
rates in 1/ps, times in ps.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import hilbert
from .errors import DimensionMismatch, NoSinkChannel, PositivityBreach, StepTooLarge, UnknownSite
from .fmo import SiteHamiltonian
from .hilbert import DensityMatrix

POSITIVITY_BREACH = -1e-6

GROUND = "ground"
SINK = "sink"


@dataclass(frozen=True, eq=False)
class JumpOperator:
    operator: np.ndarray
    rate: float
    label: str


@dataclass(frozen=True, eq=False)
class LindbladModel:
    hamiltonian: np.ndarray
    jump_ops: tuple = ()
    basis_labels: tuple = ()

    def __post_init__(self):
        h = np.array(self.hamiltonian, dtype=complex)
        hilbert.check_hermitian(h)
        d = h.shape[0]
        jumps = []
        for j in self.jump_ops:
            if not isinstance(j, JumpOperator):
                j = JumpOperator(*j)
            op = np.array(j.operator, dtype=complex)
            if op.shape != (d, d):
                raise DimensionMismatch(f"jump operator {j.label!r} has shape {op.shape}, expected {(d, d)}")
            if not np.isfinite(j.rate) or j.rate < 0:
                raise ValueError(f"jump rate for {j.label!r} must be finite and >= 0, got {j.rate}")
            op.setflags(write=False)
            jumps.append(JumpOperator(op, float(j.rate), j.label))
        labels = tuple(self.basis_labels) or tuple(str(i) for i in range(d))
        if len(labels) != d:
            raise DimensionMismatch(f"{len(labels)} basis labels for dimension {d}")
        h.setflags(write=False)
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "jump_ops", tuple(jumps))
        object.__setattr__(self, "basis_labels", labels)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def index(self, label: str) -> int:
        try:
            return self.basis_labels.index(label)
        except ValueError:
            raise UnknownSite(f"unknown basis state {label!r}") from None

    def generator_norm_estimate(self) -> float:
        """Rough upper scale of the generator: Hamiltonian spread plus dissipator norms."""
        w = np.linalg.eigvalsh(self.hamiltonian)
        diss = sum(2 * j.rate * np.linalg.norm(j.operator, 2) ** 2 for j in self.jump_ops)
        return float(w[-1] - w[0] + diss)


@dataclass(frozen=True)
class TransportScenario:
    initial_site: str = "BChl 1"
    t_final_ps: float = 5.0
    dt_ps: float = 5e-4
    dephasing_rate: float = 1.0
    sink_rate: float = 1.0
    loss_rate: float = 0.001
    sink_site: str = "BChl 3"

    def __post_init__(self):
        for name in ("dephasing_rate", "sink_rate", "loss_rate"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")
        if not (self.t_final_ps > 0 and self.dt_ps > 0):
            raise ValueError("t_final_ps and dt_ps must be positive")
        if self.dt_ps >= self.t_final_ps:
            raise ValueError(f"dt_ps ({self.dt_ps}) must be smaller than t_final_ps ({self.t_final_ps})")


@dataclass(frozen=True, eq=False)
class Trajectory:
    times_ps: np.ndarray
    states: np.ndarray  # (n_times, dim, dim)
    basis_labels: tuple
    channels: dict = field(default_factory=dict)

    def __len__(self):
        return self.times_ps.size

    def state(self, k: int) -> DensityMatrix:
        return DensityMatrix(self.states[k], self.basis_labels)

    def population(self, label: str) -> np.ndarray:
        return self.states[:, self.basis_labels.index(label), self.basis_labels.index(label)].real

    @property
    def populations(self) -> np.ndarray:
        return np.einsum("tii->ti", self.states).real


def build_fmo_transport_model(s: TransportScenario, h: SiteHamiltonian) -> LindbladModel:
    """Embed ``h`` in ``{ground, sites, sink}`` with dephasing, sink and loss jumps."""
    n = h.n_sites
    d = n + 2
    sink_idx = 1 + h.index(s.sink_site)
    h.index(s.initial_site)
    ham = np.zeros((d, d), dtype=complex)
    ham[1 : n + 1, 1 : n + 1] = h.angular()
    jumps = []
    for k, label in enumerate(h.site_labels, start=1):
        jumps.append(JumpOperator(hilbert.projector(k, k, d), s.dephasing_rate, f"dephasing {label}"))
    jumps.append(JumpOperator(hilbert.projector(d - 1, sink_idx, d), s.sink_rate, f"sink <- {s.sink_site}"))
    for k, label in enumerate(h.site_labels, start=1):
        jumps.append(JumpOperator(hilbert.projector(0, k, d), s.loss_rate, f"loss {label}"))
    return LindbladModel(ham, tuple(jumps), (GROUND, *h.site_labels, SINK))


def localized_state(model: LindbladModel, label: str) -> DensityMatrix:
    i = model.index(label)
    return DensityMatrix(hilbert.projector(i, i, model.dim), model.basis_labels)


def lindblad_rhs(model: LindbladModel, rho) -> np.ndarray:
    """``d rho/dt = -i[H, rho] + sum_k g_k (L rho L^dag - {L^dag L, rho}/2)``."""
    r = hilbert.as_array(rho)
    if r.shape != (model.dim, model.dim):
        raise DimensionMismatch(f"state shape {r.shape} does not match model dimension {model.dim}")
    h = model.hamiltonian
    out = -1j * (h @ r - r @ h)
    for j in model.jump_ops:
        if j.rate == 0:
            continue
        L = j.operator
        LdL = L.conj().T @ L
        out += j.rate * (L @ r @ L.conj().T - 0.5 * (LdL @ r + r @ LdL))
    return out


def liouvillian(model: LindbladModel) -> np.ndarray:
    """Superoperator acting on row-major flattened density matrices."""
    d = model.dim
    eye = np.eye(d)
    h = model.hamiltonian
    sup = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for j in model.jump_ops:
        if j.rate == 0:
            continue
        L = j.operator
        LdL = L.conj().T @ L
        sup += j.rate * (np.kron(L, L.conj()) - 0.5 * (np.kron(LdL, eye) + np.kron(eye, LdL.T)))
    return sup


def rk4_propagator(model: LindbladModel, dt: float) -> np.ndarray:
    """One classical RK4 step of the (linear, autonomous) master equation as a matrix."""
    a = dt * liouvillian(model)
    step = np.eye(a.shape[0], dtype=complex)
    term = step
    for k in range(1, 5):
        term = term @ a / k
        step = step + term
    return step


def propagate(model: LindbladModel, rho0, t_final_ps: float, dt_ps: float, record_every: int = 1) -> Trajectory:
    """Fixed-step RK4 integration from ``rho0`` over ``[0, t_final_ps]``.

    The step is shrunk, if needed, so that an integer number of steps lands
    exactly on ``t_final_ps``. After each step the state is Hermitized and its
    trace renormalized; the pre-renormalization trace is kept as the
    ``trace`` channel. ``record_every`` thins the stored states.
    """
    r0 = hilbert.as_array(rho0).astype(complex)
    if r0.shape != (model.dim, model.dim):
        raise DimensionMismatch(f"initial state shape {r0.shape} does not match model dimension {model.dim}")
    if not isinstance(rho0, DensityMatrix):
        DensityMatrix(r0)
    if t_final_ps <= 0 or dt_ps <= 0:
        raise ValueError("t_final_ps and dt_ps must be positive")
    n_steps = max(1, int(round(t_final_ps / dt_ps)))
    dt = t_final_ps / n_steps
    norm_dt = model.generator_norm_estimate() * dt
    if norm_dt >= 0.1:
        warnings.warn(StepTooLarge(f"generator norm x dt = {norm_dt:.3g} >= 0.1"), stacklevel=2)
    d = model.dim
    P = rk4_propagator(model, dt)
    vec = r0.reshape(-1).copy()

    times, states, traces, purities, mins = [], [], [], [], []

    def record(k, m, tr):
        w = np.linalg.eigvalsh(m)
        if w[0] < POSITIVITY_BREACH:
            raise PositivityBreach(f"minimum eigenvalue {w[0]:.3e} at t = {k * dt:.6g} ps")
        times.append(k * dt)
        states.append(m.copy())
        traces.append(tr)
        purities.append(hilbert.purity(m))
        mins.append(float(w[0]))

    record(0, r0, float(np.trace(r0).real))
    for k in range(1, n_steps + 1):
        m = (P @ vec).reshape(d, d)
        m = 0.5 * (m + m.conj().T)
        tr = float(np.trace(m).real)
        m /= tr
        vec = m.reshape(-1)
        if k % record_every == 0 or k == n_steps:
            record(k, m, tr)

    states = np.array(states)
    times = np.array(times)
    states.setflags(write=False)
    times.setflags(write=False)
    channels = {
        "trace": np.array(traces),
        "purity": np.array(purities),
        "min_eigenvalue": np.array(mins),
    }
    return Trajectory(times, states, model.basis_labels, channels)


def transfer_efficiency(traj: Trajectory) -> float:
    """Population delivered to the sink at the final recorded time."""
    if SINK not in traj.basis_labels:
        raise NoSinkChannel("trajectory has no 'sink' basis state")
    return float(traj.population(SINK)[-1])

