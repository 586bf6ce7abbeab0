"""Dense complex linear algebra backbone.

Matrices are plain ``numpy`` arrays. :class:`DensityMatrix` and
:class:`StateVector` are validated, read-only wrappers used where a value has
to carry the physical-state invariants across module boundaries; every
function here also accepts bare arrays.
"""

from __future__ import annotations

import contextlib
import dataclasses
import string
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError, InvalidState, NotHermitian, NotSquare


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10
    trace: float = 1e-10
    min_eigenvalue: float = -1e-8
    norm: float = 1e-10
    # eigenvalues at or below this are excluded from entropy sums (0 log 0 = 0)
    entropy_cutoff: float = 1e-14
    # eigenvalue threshold deciding the support of a state
    support: float = 1e-12


TOL = Tolerances()


def set_tolerances(**overrides) -> Tolerances:
    """Replace module tolerances; returns the previous set."""
    global TOL
    previous = TOL
    TOL = dataclasses.replace(TOL, **overrides)
    return previous


@contextlib.contextmanager
def tolerances(**overrides):
    previous = set_tolerances(**overrides)
    try:
        yield TOL
    finally:
        set_tolerances(**dataclasses.asdict(previous))


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def as_array(x) -> np.ndarray:
    """Return the matrix/vector behind ``x`` (wrapper or array-like)."""
    if isinstance(x, DensityMatrix):
        return x.matrix
    if isinstance(x, StateVector):
        return x.amplitudes
    return np.asarray(x)


def _default_labels(dim):
    return tuple(str(i) for i in range(dim))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix over a labelled basis."""

    matrix: np.ndarray
    basis_labels: tuple = ()

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise NotSquare(f"density matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidState("density matrix has non-finite entries")
        asym = np.abs(m - m.conj().T).max()
        if asym > TOL.hermitian:
            raise NotHermitian(f"max |rho - rho^dag| = {asym:.3e}")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TOL.trace:
            raise InvalidState(f"trace {tr!r} differs from 1")
        lo = np.linalg.eigvalsh(m).min()
        if lo < TOL.min_eigenvalue:
            raise InvalidState(f"minimum eigenvalue {lo:.3e} is negative")
        labels = tuple(self.basis_labels) or _default_labels(m.shape[0])
        if len(labels) != m.shape[0]:
            raise DimensionMismatch(f"{len(labels)} basis labels for dimension {m.shape[0]}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "basis_labels", labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_state(cls, psi, basis_labels=()) -> "DensityMatrix":
        psi = as_array(psi).astype(complex).ravel()
        return cls(np.outer(psi, psi.conj()), basis_labels)

    def purity(self) -> float:
        return float(np.real(np.einsum("ij,ji->", self.matrix, self.matrix)))

    def populations(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    basis_labels: tuple = ()

    def __post_init__(self):
        a = _frozen(np.ravel(self.amplitudes))
        if not np.all(np.isfinite(a)):
            raise InvalidState("state vector has non-finite amplitudes")
        norm = np.linalg.norm(a)
        if abs(norm - 1.0) > TOL.norm:
            raise InvalidState(f"state vector norm {norm!r} differs from 1")
        labels = tuple(self.basis_labels) or _default_labels(a.size)
        if len(labels) != a.size:
            raise DimensionMismatch(f"{len(labels)} basis labels for dimension {a.size}")
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "basis_labels", labels)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density_matrix(self) -> DensityMatrix:
        return DensityMatrix.from_state(self.amplitudes, self.basis_labels)


def _square(m) -> np.ndarray:
    m = as_array(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {m.shape}")
    return m


def check_hermitian(m, tol=None) -> np.ndarray:
    m = _square(m)
    tol = TOL.hermitian if tol is None else tol
    asym = np.abs(m - m.conj().T).max() if m.size else 0.0
    if asym > tol:
        raise NotHermitian(f"max |m - m^dag| = {asym:.3e} exceeds {tol:.1e}")
    return m


def hermitian_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns ascending real eigenvalues and the matrix whose columns are the
    orthonormal eigenvectors. LAPACK ``zheevd`` via ``numpy.linalg.eigh``.
    """
    m = check_hermitian(m)
    return np.linalg.eigh(m)


def matrix_function(m, f: Callable) -> np.ndarray:
    """Apply a real scalar function to a Hermitian matrix, ``V f(L) V^dag``.

    ``f`` may be a numpy ufunc or any scalar callable. A non-finite or
    non-real value of ``f`` at an eigenvalue raises :class:`DomainError`.
    """
    w, v = hermitian_eig(m)
    try:
        with np.errstate(all="ignore"):
            fw = np.asarray(f(w))
            if fw.shape != w.shape:
                fw = np.asarray([f(x) for x in w])
    except (ValueError, ArithmeticError, TypeError) as exc:
        raise DomainError(f"function undefined on spectrum {w}: {exc}") from exc
    if np.iscomplexobj(fw):
        if np.any(np.abs(fw.imag) > 0):
            raise DomainError("function returned complex values on the spectrum")
        fw = fw.real
    fw = fw.astype(float)
    if not np.all(np.isfinite(fw)):
        raise DomainError(f"function undefined at eigenvalue(s) {w[~np.isfinite(fw)]}")
    out = (v * fw) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def tensor_product(a, b, *more) -> np.ndarray:
    """Kronecker product; ``(a x b)[i*p+k, j*q+l] = a[i, j] * b[k, l]``."""
    out = np.kron(as_array(a), as_array(b))
    for c in more:
        out = np.kron(out, as_array(c))
    return out


def partial_trace(rho, dims: Sequence[int], keep):
    """Reduce ``rho`` over a tensor-product space to the subsystems in ``keep``.

    Parameters
    ----------
    rho : DensityMatrix or array
        Operator on ``dims[0] x dims[1] x ...`` (subsystem 0 leftmost).
    dims : sequence of int
        Subsystem dimensions.
    keep : int or iterable of int
        Subsystems retained, in ascending order in the result.

    Returns the same kind as ``rho``: a :class:`DensityMatrix` for a
    :class:`DensityMatrix` input, a plain array otherwise. The map is linear,
    so arbitrary (non-state) operators may be reduced as arrays.
    """
    m = _square(rho)
    dims = [int(d) for d in dims]
    if any(d <= 0 for d in dims) or int(np.prod(dims)) != m.shape[0]:
        raise DimensionMismatch(f"subsystem dims {dims} do not multiply to {m.shape[0]}")
    keep = sorted({keep} if isinstance(keep, (int, np.integer)) else set(keep))
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise DimensionMismatch(f"keep={keep} is not a nonempty subset of 0..{len(dims) - 1}")
    n = len(dims)
    if 2 * n > len(string.ascii_letters):
        raise DimensionMismatch("too many subsystems")
    row = list(string.ascii_letters[:n])
    col = list(string.ascii_letters[n : 2 * n])
    for k in range(n):
        if k not in keep:
            col[k] = row[k]
    out_idx = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out_idx, m.reshape(dims + dims))
    d_keep = int(np.prod([dims[k] for k in keep]))
    reduced = reduced.reshape(d_keep, d_keep)
    if isinstance(rho, DensityMatrix):
        return DensityMatrix(0.5 * (reduced + reduced.conj().T))
    return reduced


def trace_norm(m) -> float:
    """Sum of singular values."""
    m = _square(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False).sum())


def purity(rho) -> float:
    m = _square(rho)
    return float(np.real(np.einsum("ij,ji->", m, m)))


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(i: int, j: int, dim: int) -> np.ndarray:
    """``|i><j|`` in a ``dim``-dimensional space."""
    m = np.zeros((dim, dim), dtype=complex)
    m[i, j] = 1.0
    return m


SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
