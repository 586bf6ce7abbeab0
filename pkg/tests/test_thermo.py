import math
import warnings

import numpy as np
import pytest

from excidyn import thermo
from excidyn.correlations import mutual_information
from excidyn.errors import DimensionMismatch, MarginalChanged, NegativeLostWork
from excidyn.thermo import ThermoContext

from conftest import random_density, random_unitary

KB = 0.695034800
ROOM = ThermoContext(300.0)
CLASSICAL = np.diag([0.5, 0, 0, 0.5]).astype(complex)
KET0 = np.diag([1.0, 0.0])


def test_relative_entropy_examples(rng):
    rho = random_density(rng, 3)
    assert thermo.relative_entropy(rho, rho) == pytest.approx(0, abs=1e-10)
    assert thermo.relative_entropy(KET0, np.eye(2) / 2) == pytest.approx(math.log(2), abs=1e-12)
    assert thermo.relative_entropy(KET0, np.diag([0.0, 1.0])) == math.inf
    assert thermo.relative_entropy(np.eye(2) / 2, KET0) == math.inf
    with pytest.raises(DimensionMismatch):
        thermo.relative_entropy(np.eye(2) / 2, np.eye(3) / 3)


def test_relative_entropy_commuting_case_is_classical_kl():
    p, q = np.array([0.5, 0.3, 0.2]), np.array([0.2, 0.2, 0.6])
    assert thermo.relative_entropy(np.diag(p), np.diag(q)) == pytest.approx(float(np.sum(p * np.log(p / q))), abs=1e-12)


def test_relative_entropy_on_shared_partial_support():
    rho = np.diag([0.7, 0.3, 0.0])
    sigma = np.diag([0.5, 0.25, 0.25])
    expected = 0.7 * math.log(0.7 / 0.5) + 0.3 * math.log(0.3 / 0.25)
    assert thermo.relative_entropy(rho, sigma) == pytest.approx(expected, abs=1e-12)


def test_klein_inequality(rng):
    for _ in range(100):
        a, b = random_density(rng, 3), random_density(rng, 3)
        assert thermo.relative_entropy(a, b) > 1e-10


def test_unitary_invariance(rng):
    for _ in range(10):
        a, b, U = random_density(rng, 4), random_density(rng, 4), random_unitary(rng, 4)
        rotated = thermo.relative_entropy(U @ a @ U.conj().T, U @ b @ U.conj().T)
        assert rotated == pytest.approx(thermo.relative_entropy(a, b), abs=1e-9)


def test_depolarizing_monotonicity(rng):
    for _ in range(20):
        a, b = random_density(rng, 3), random_density(rng, 3)
        d = thermo.relative_entropy(a, b)
        for p in (0.1, 0.5, 0.9):
            assert thermo.relative_entropy(thermo.depolarize(a, p), thermo.depolarize(b, p)) <= d + 1e-9


def test_work_report_identities(rng):
    for _ in range(5):
        a, b = random_density(rng, 2), random_density(rng, 2)
        r = thermo.dissipated_work(a, b, ROOM)
        assert r.dissipated_work_cm1 == pytest.approx(KB * 300 * r.relative_entropy_nats, rel=1e-9)
        assert abs(r.entropy_production_nats - r.relative_entropy_nats) < 1e-12
        assert r.temperature_K == 300.0
        assert r.dissipated_work_zJ == pytest.approx(r.dissipated_work_cm1 * 0.0198644586, rel=1e-8)


def test_dissipated_work_examples(rng):
    rho = random_density(rng, 2)
    same = thermo.dissipated_work(rho, rho, ROOM)
    assert same.dissipated_work_cm1 == pytest.approx(0, abs=1e-8)
    r = thermo.dissipated_work(KET0, np.eye(2) / 2, ROOM)
    assert r.dissipated_work_cm1 == pytest.approx(300 * KB * math.log(2), rel=1e-9)
    assert r.dissipated_work_cm1 == pytest.approx(144.53, abs=0.01)
    hot = thermo.dissipated_work(KET0, np.eye(2) / 2, ThermoContext(600.0))
    assert hot.dissipated_work_cm1 == pytest.approx(2 * r.dissipated_work_cm1, rel=1e-12)
    assert hot.entropy_production_nats == r.entropy_production_nats
    assert thermo.dissipated_work(KET0, np.diag([0.0, 1.0]), ROOM).dissipated_work_cm1 == math.inf


def test_context_validation():
    with pytest.raises(ValueError):
        ThermoContext(0.0)
    with pytest.raises(ValueError):
        ThermoContext(-5.0)
    assert ROOM.kT_cm1 == pytest.approx(208.5104, abs=1e-4)


def test_lost_work_classical_fixture():
    after = np.kron(np.eye(2) / 2, np.eye(2) / 2)
    assert mutual_information(CLASSICAL) == pytest.approx(1)
    lost = thermo.predictive_lost_work(CLASSICAL, after, (2, 2), ROOM)
    assert lost == pytest.approx(300 * KB * math.log(2), rel=1e-6)
    assert lost == pytest.approx(144.53, abs=0.01)


def test_lost_work_zero_cases(rng):
    rho = random_density(rng, 4)
    assert thermo.predictive_lost_work(rho, rho, (2, 2), ROOM) == pytest.approx(0, abs=1e-12)
    s = random_density(rng, 2)
    prod = np.kron(s, random_density(rng, 3))
    prod2 = np.kron(s, random_density(rng, 3))
    assert thermo.predictive_lost_work(prod, prod2, (2, 3), ROOM) == pytest.approx(0, abs=1e-9)


def test_lost_work_errors_and_warning():
    with pytest.raises(MarginalChanged):
        thermo.predictive_lost_work(CLASSICAL, np.eye(4) / 4 + np.diag([0.1, 0.1, -0.1, -0.1]), (2, 2), ROOM)
    with pytest.raises(DimensionMismatch):
        thermo.predictive_lost_work(CLASSICAL, np.eye(2) / 2, (2, 2), ROOM)
    # X gains correlation with S: I' > I, lost work is negative and flagged
    with pytest.warns(NegativeLostWork):
        lost = thermo.predictive_lost_work(np.eye(4) / 4, CLASSICAL, (2, 2), ROOM)
    assert lost == pytest.approx(-300 * KB * math.log(2), rel=1e-9)


def test_thermal_state_examples(rng):
    E = ROOM.kT_cm1 * math.log(2)
    th = thermo.thermal_state(np.diag([0.0, E]), ROOM)
    np.testing.assert_allclose(th.populations(), [2 / 3, 1 / 3], atol=1e-12)
    h = np.diag([0.0, 100.0, 250.0])
    hot = thermo.thermal_state(h, ThermoContext(1e12))
    np.testing.assert_allclose(hot.matrix, np.eye(3) / 3, atol=1e-6)
    a = rng.normal(size=(4, 4)) * 50
    h = a + a.T
    th = thermo.thermal_state(h, ROOM).matrix
    assert np.abs(th @ h - h @ th).max() < 1e-10


def test_thermal_state_is_minimum_free_energy(rng):
    # Gibbs variational principle: D(rho || rho_th) = beta (F[rho] - F_eq) >= 0
    h = np.diag([0.0, 80.0, 300.0])
    th = thermo.thermal_state(h, ROOM).matrix
    for _ in range(5):
        rho = random_density(rng, 3)
        w = np.linalg.eigvalsh(rho)
        free = np.trace(rho @ h).real + ROOM.kT_cm1 * float(np.sum(w * np.log(w)))
        free_eq = -ROOM.kT_cm1 * math.log(np.sum(np.exp(-np.diag(h) / ROOM.kT_cm1)))
        assert thermo.relative_entropy(rho, th) == pytest.approx((free - free_eq) / ROOM.kT_cm1, abs=1e-9)


def test_depolarize():
    np.testing.assert_allclose(thermo.depolarize(KET0, 1.0), np.eye(2) / 2)
    np.testing.assert_allclose(thermo.depolarize(KET0, 0.0), KET0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        thermo.depolarize(CLASSICAL, 0.3)
