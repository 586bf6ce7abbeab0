"""Eight-site FMO exciton Hamiltonian, its exciton basis, and unit handling."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
import yaml
from scipy import constants

from . import hilbert
from .config import load_yaml
from .errors import AsymmetricInput, DimensionError, ParseError, UnknownSite


@dataclass(frozen=True)
class UnitSystem:
    cm1_to_rad_per_ps: float
    kB_cm1_per_K: float
    cm1_to_zJ: float


# 2*pi*c with c in cm/ps; k_B/(h c) in cm^-1/K; h c * 1 cm^-1 in zeptojoule
UNITS = UnitSystem(
    cm1_to_rad_per_ps=2 * np.pi * constants.c * 1e2 * 1e-12,
    kB_cm1_per_K=constants.k / (constants.h * constants.c * 1e2),
    cm1_to_zJ=constants.h * constants.c * 1e2 * 1e21,
)


def cm1_to_angular(e_cm1):
    """Convert wavenumbers (cm^-1) to angular frequency (rad/ps)."""
    return np.multiply(e_cm1, UNITS.cm1_to_rad_per_ps)


def angular_to_cm1(w_rad_ps):
    return np.divide(w_rad_ps, UNITS.cm1_to_rad_per_ps)


SYMMETRY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SiteHamiltonian:
    energies_cm1: np.ndarray
    site_labels: tuple

    def __post_init__(self):
        m = np.array(self.energies_cm1, dtype=float, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise DimensionError(f"Hamiltonian must be a nonempty square matrix, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ParseError("Hamiltonian has non-finite entries")
        if np.abs(m - m.T).max() > 1e-12:
            raise AsymmetricInput("site Hamiltonian is not symmetric")
        labels = tuple(self.site_labels) or tuple(f"BChl {i + 1}" for i in range(m.shape[0]))
        if len(labels) != m.shape[0]:
            raise DimensionError(f"{len(labels)} site labels for {m.shape[0]} sites")
        if len(set(labels)) != len(labels):
            raise ParseError("duplicate site labels")
        m.setflags(write=False)
        object.__setattr__(self, "energies_cm1", m)
        object.__setattr__(self, "site_labels", labels)

    @property
    def n_sites(self) -> int:
        return self.energies_cm1.shape[0]

    def index(self, label: str) -> int:
        try:
            return self.site_labels.index(label)
        except ValueError:
            raise UnknownSite(f"unknown site {label!r}; known sites: {list(self.site_labels)}") from None

    def angular(self) -> np.ndarray:
        """Hamiltonian in rad/ps."""
        return cm1_to_angular(self.energies_cm1)


@dataclass(frozen=True, eq=False)
class ExcitonBasis:
    """Ascending exciton energies; row ``k`` of ``site_amplitudes`` is exciton ``k``."""

    energies_cm1: np.ndarray
    site_amplitudes: np.ndarray
    site_labels: tuple
    sign_convention: str = "largest-magnitude component positive"

    @property
    def n_excitons(self) -> int:
        return self.energies_cm1.size


def parse_site_hamiltonian(text: str) -> SiteHamiltonian:
    """Build a :class:`SiteHamiltonian` from a YAML document.

    Required keys are ``units`` (must be ``cm-1``) and ``matrix`` (N rows of N
    reals); ``site_labels`` is optional. Asymmetry up to ``1e-9`` cm^-1 is
    averaged away, anything larger is rejected.
    """
    try:
        doc = load_yaml(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"invalid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("Hamiltonian document must be a mapping")
    unknown = set(doc) - {"units", "matrix", "site_labels"}
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}")
    if doc.get("units") != "cm-1":
        raise ParseError(f"units must be 'cm-1', got {doc.get('units')!r}")
    rows = doc.get("matrix")
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError("'matrix' must be a list of rows")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError(f"matrix is not square ({n} rows, row lengths {[len(r) for r in rows]})")
    try:
        m = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"non-numeric matrix entry: {exc}") from exc
    asym = np.abs(m - m.T).max()
    if asym > SYMMETRY_TOL:
        i, j = np.unravel_index(np.argmax(np.abs(m - m.T)), m.shape)
        raise AsymmetricInput(f"entries ({i + 1},{j + 1})={m[i, j]} and ({j + 1},{i + 1})={m[j, i]} differ")
    m = 0.5 * (m + m.T)
    labels = doc.get("site_labels") or ()
    if not isinstance(labels, (list, tuple)):
        raise ParseError("'site_labels' must be a list")
    return SiteHamiltonian(m, tuple(str(s) for s in labels))


def load_site_hamiltonian(path) -> SiteHamiltonian:
    return parse_site_hamiltonian(Path(path).read_text())


def _data_text(name: str) -> str:
    return resources.files("excidyn.data").joinpath(name).read_text()


def builtin_fmo8() -> SiteHamiltonian:
    """The bundled eight-site FMO Hamiltonian (cm^-1)."""
    return parse_site_hamiltonian(_data_text("fmo8_cm1.yaml"))


def diagonalize(h: SiteHamiltonian) -> ExcitonBasis:
    w, v = hilbert.hermitian_eig(h.energies_cm1)
    v = v.real.T.copy()
    for row in v:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1
    w = w.copy()
    w.setflags(write=False)
    v.setflags(write=False)
    return ExcitonBasis(w, v, h.site_labels)


def site_occupation_probabilities(basis: ExcitonBasis) -> np.ndarray:
    """Probability of exciton ``k`` (row) residing on each site (column)."""
    return basis.site_amplitudes**2


@dataclass(frozen=True)
class ReferenceTable:
    labels: tuple
    energies_cm1: np.ndarray
    amplitudes: np.ndarray
    site_labels: tuple


def reference_excitons() -> ReferenceTable:
    """Bundled reference exciton energies and amplitudes, in ascending energy order."""
    doc = load_yaml(_data_text("fmo8_excitons.yaml"))
    rows = sorted(doc["excitons"], key=lambda r: r["energy"])
    return ReferenceTable(
        labels=tuple(r["label"] for r in rows),
        energies_cm1=np.array([r["energy"] for r in rows], dtype=float),
        amplitudes=np.array([r["amplitudes"] for r in rows], dtype=float),
        site_labels=tuple(doc["site_labels"]),
    )


def compare_with_reference(basis: ExcitonBasis) -> dict:
    """Energy and |amplitude| deviations of ``basis`` from the bundled reference excitons."""
    ref = reference_excitons()
    if basis.n_excitons != ref.energies_cm1.size:
        raise DimensionError(f"reference table has {ref.energies_cm1.size} excitons, basis has {basis.n_excitons}")
    de = basis.energies_cm1 - ref.energies_cm1
    da = np.abs(basis.site_amplitudes) - np.abs(ref.amplitudes)
    return {
        "energy_deviation_cm1": de,
        "amplitude_deviation": da,
        "max_energy_deviation_cm1": float(np.abs(de).max()),
        "max_amplitude_deviation": float(np.abs(da).max()),
        "energy_sum_cm1": float(basis.energies_cm1.sum()),
        "table_energy_sum_cm1": float(ref.energies_cm1.sum()),
    }
