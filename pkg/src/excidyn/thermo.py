"""Relative entropy, dissipated work, and predictive lost work.

Relative entropies are in nats, informations and conditional entropies in
bits, energies in cm^-1 (``kB`` in cm^-1/K).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import hilbert
from .correlations import mutual_information
from .errors import DimensionMismatch, MarginalChanged, NegativeLostWork
from .fmo import UNITS
from .hilbert import DensityMatrix

MARGINAL_TOL = 1e-8


@dataclass(frozen=True)
class ThermoContext:
    temperature_K: float
    kB_cm1_per_K: float = UNITS.kB_cm1_per_K

    def __post_init__(self):
        if not (np.isfinite(self.temperature_K) and self.temperature_K > 0):
            raise ValueError(f"temperature must be > 0 K, got {self.temperature_K}")

    @property
    def kT_cm1(self) -> float:
        return self.kB_cm1_per_K * self.temperature_K


@dataclass(frozen=True)
class WorkReport:
    dissipated_work_cm1: float
    entropy_production_nats: float
    relative_entropy_nats: float
    temperature_K: float

    @property
    def dissipated_work_zJ(self) -> float:
        return self.dissipated_work_cm1 * UNITS.cm1_to_zJ


def relative_entropy(rho, sigma) -> float:
    """``tr[rho (ln rho - ln sigma)]`` in nats.

    Returns ``math.inf`` when the support of ``rho`` is not contained in the
    support of ``sigma`` (eigenvalue threshold ``TOL.support``).
    """
    r = hilbert.check_hermitian(rho)
    s = hilbert.check_hermitian(sigma)
    if r.shape != s.shape:
        raise DimensionMismatch(f"state shapes differ: {r.shape} vs {s.shape}")
    cut = hilbert.TOL.support
    ws, vs = np.linalg.eigh(s)
    # weight of rho on the kernel of sigma
    off = ws <= cut
    if off.any():
        leak = np.einsum("ik,ij,jk->k", vs[:, off].conj(), r, vs[:, off]).real
        if leak.max() > cut:
            return math.inf
    wr = np.linalg.eigvalsh(r)
    wr = wr[wr > hilbert.TOL.entropy_cutoff]
    neg_entropy = float((wr * np.log(wr)).sum())
    # tr[rho ln sigma] restricted to the support of sigma
    diag = np.einsum("ik,ij,jk->k", vs[:, ~off].conj(), r, vs[:, ~off]).real
    cross = float((diag * np.log(ws[~off])).sum())
    return max(0.0, neg_entropy - cross)


def dissipated_work(rho, rho_reversed, ctx: ThermoContext) -> WorkReport:
    """Dissipated work ``kB T D(rho || rho~)`` and entropy production ``D`` (units of kB).

    ``rho_reversed`` is supplied by the caller; an infinite relative entropy
    propagates to infinite work.
    """
    d = relative_entropy(rho, rho_reversed)
    return WorkReport(
        dissipated_work_cm1=ctx.kT_cm1 * d,
        entropy_production_nats=d,
        relative_entropy_nats=d,
        temperature_K=ctx.temperature_K,
    )


def predictive_lost_work(rho_sx_before, rho_sx_after, dims, ctx: ThermoContext) -> float:
    """Lost work ``kB T ln2 [I(S:X) - I(S:X')]`` in cm^-1 when only X evolves.

    Raises :class:`MarginalChanged` if the S marginal moves by more than
    1e-8. A negative result is returned as is, with a
    :class:`NegativeLostWork` warning.
    """
    before = hilbert.as_array(rho_sx_before)
    after = hilbert.as_array(rho_sx_after)
    if before.shape != after.shape:
        raise DimensionMismatch(f"state shapes differ: {before.shape} vs {after.shape}")
    dims = tuple(int(d) for d in dims)
    s_before = hilbert.partial_trace(before, dims, 0)
    s_after = hilbert.partial_trace(after, dims, 0)
    drift = np.abs(s_before - s_after).max()
    if drift > MARGINAL_TOL:
        raise MarginalChanged(f"system marginal changed by {drift:.3e}")
    lost = ctx.kT_cm1 * math.log(2) * (mutual_information(before, dims) - mutual_information(after, dims))
    if lost < 0:
        warnings.warn(NegativeLostWork(f"lost work is negative ({lost:.6g} cm^-1)"), stacklevel=2)
    return lost


def thermal_state(h, ctx: ThermoContext) -> DensityMatrix:
    """Canonical state ``exp(-h/kT)/Z`` for a Hermitian ``h`` in cm^-1."""
    w, v = hilbert.hermitian_eig(h)
    boltz = np.exp(-(w - w[0]) / ctx.kT_cm1)
    boltz /= boltz.sum()
    m = (v * boltz) @ v.conj().T
    return DensityMatrix(0.5 * (m + m.conj().T))


def depolarize(rho, p: float) -> np.ndarray:
    """``(1-p) rho + p I/d``."""
    m = hilbert.as_array(rho)
    return (1 - p) * m + p * np.eye(m.shape[0]) / m.shape[0]
