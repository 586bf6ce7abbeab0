import warnings

import numpy as np
import pytest

from excidyn import fmo, hilbert, lindblad
from excidyn.errors import DimensionMismatch, NoSinkChannel, PositivityBreach, StepTooLarge, UnknownSite
from excidyn.lindblad import JumpOperator, LindbladModel, TransportScenario

from conftest import random_density

SX = hilbert.SIGMA_X


@pytest.fixture(scope="module")
def h8():
    return fmo.builtin_fmo8()


def fmo_model(h8, **rates):
    return lindblad.build_fmo_transport_model(TransportScenario(**rates), h8)


def quiet_propagate(*args, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StepTooLarge)
        return lindblad.propagate(*args, **kw)


def test_model_layout(h8):
    m = fmo_model(h8)
    assert m.dim == 10
    assert m.basis_labels[0] == "ground" and m.basis_labels[-1] == "sink"
    assert m.basis_labels[3] == "BChl 3"
    sink = [j for j in m.jump_ops if j.label.startswith("sink")]
    assert len(sink) == 1
    np.testing.assert_array_equal(sink[0].operator, hilbert.projector(9, 3, 10))
    assert len(m.jump_ops) == 17
    np.testing.assert_allclose(m.hamiltonian[1:9, 1:9], h8.angular())
    assert np.all(m.hamiltonian[0] == 0) and np.all(m.hamiltonian[9] == 0)


def test_zero_rate_model_is_unitary(h8):
    m = fmo_model(h8, dephasing_rate=0.0, sink_rate=0.0, loss_rate=0.0)
    assert all(j.rate == 0 for j in m.jump_ops)
    L = lindblad.liouvillian(m)
    H = m.hamiltonian
    unitary = -1j * (np.kron(H, np.eye(10)) - np.kron(np.eye(10), H.T))
    np.testing.assert_allclose(L, unitary)


def test_model_errors(h8):
    with pytest.raises(UnknownSite):
        lindblad.build_fmo_transport_model(TransportScenario(sink_site="BChl 12"), h8)
    with pytest.raises(UnknownSite):
        lindblad.build_fmo_transport_model(TransportScenario(initial_site="nowhere"), h8)
    with pytest.raises(ValueError):
        TransportScenario(dephasing_rate=-1.0)
    with pytest.raises(ValueError):
        TransportScenario(t_final_ps=1.0, dt_ps=2.0)
    with pytest.raises(ValueError):
        LindbladModel(np.zeros((2, 2)), (JumpOperator(np.eye(2), np.inf, "x"),))
    with pytest.raises(DimensionMismatch):
        LindbladModel(np.zeros((2, 2)), (JumpOperator(np.eye(3), 1.0, "x"),))


def test_rhs_ground_state_is_stationary(h8):
    m = fmo_model(h8)
    assert np.abs(lindblad.lindblad_rhs(m, lindblad.localized_state(m, "ground"))).max() == 0


def test_rhs_pure_dephasing_on_diagonal_state():
    d = 3
    m = LindbladModel(np.diag([0.0, 1.0, 2.5]), tuple(JumpOperator(hilbert.projector(k, k, d), 2.0, f"d{k}") for k in range(d)))
    rho = np.diag([0.2, 0.5, 0.3])
    assert np.abs(lindblad.lindblad_rhs(m, rho)).max() == 0


def test_rhs_rabi_commutator():
    omega = 1.7
    m = LindbladModel(omega / 2 * SX)
    out = lindblad.lindblad_rhs(m, np.diag([1.0, 0.0]))
    assert out[0, 0] == 0 and out[1, 1] == 0
    # -i (Omega/2) [sx, |0><0|] = -i (Omega/2) (|1><0| - |0><1|)
    assert out[0, 1] == pytest.approx(1j * omega / 2)
    assert out[1, 0] == pytest.approx(-1j * omega / 2)


def test_rhs_traceless_hermitian_and_matches_liouvillian(h8, rng):
    m = fmo_model(h8, dephasing_rate=0.7, sink_rate=2.0, loss_rate=0.3)
    L = lindblad.liouvillian(m)
    for _ in range(3):
        rho = random_density(rng, 10)
        out = lindblad.lindblad_rhs(m, rho)
        assert abs(np.trace(out)) < 1e-12
        assert np.abs(out - out.conj().T).max() < 1e-12
        assert np.abs((L @ rho.reshape(-1)).reshape(10, 10) - out).max() < 1e-10
    with pytest.raises(DimensionMismatch):
        lindblad.lindblad_rhs(m, np.eye(3) / 3)


def test_propagator_equals_rk4_stages(h8, rng):
    m = fmo_model(h8)
    rho = random_density(rng, 10)
    dt = 2e-4
    f = lambda r: lindblad.lindblad_rhs(m, r)
    k1 = f(rho)
    k2 = f(rho + dt / 2 * k1)
    k3 = f(rho + dt / 2 * k2)
    k4 = f(rho + dt * k3)
    stepped = rho + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    P = lindblad.rk4_propagator(m, dt)
    assert np.abs((P @ rho.reshape(-1)).reshape(10, 10) - stepped).max() < 1e-13


def test_zero_generator_keeps_state(rng):
    rho = random_density(rng, 4)
    traj = lindblad.propagate(LindbladModel(np.zeros((4, 4))), rho, 1.0, 0.01)
    assert np.abs(traj.states - rho).max() < 1e-15
    assert len(traj) == 101


def test_rabi_oracle():
    omega = 1.0
    traj = lindblad.propagate(LindbladModel(omega / 2 * SX), np.diag([1.0, 0.0]), 10.0, 1e-3)
    excited = traj.populations[:, 1]
    assert np.abs(excited - np.sin(omega * traj.times_ps / 2) ** 2).max() < 1e-6
    assert np.abs(traj.channels["purity"] - 1).max() < 1e-9


def test_amplitude_damping_oracle():
    gamma = 0.8
    m = LindbladModel(np.zeros((2, 2)), (JumpOperator(hilbert.projector(0, 1, 2), gamma, "decay"),))
    traj = lindblad.propagate(m, np.diag([0.0, 1.0]), 5.0, 1e-3)
    assert np.abs(traj.populations[:, 1] - np.exp(-gamma * traj.times_ps)).max() < 1e-7


def test_step_adjusts_to_land_on_t_final():
    traj = lindblad.propagate(LindbladModel(np.zeros((2, 2))), np.eye(2) / 2, 1.0, 0.3)
    assert traj.times_ps[-1] == pytest.approx(1.0)
    np.testing.assert_allclose(np.diff(traj.times_ps), 1 / 3)


def test_record_every_keeps_endpoints():
    traj = lindblad.propagate(LindbladModel(SX), np.diag([1.0, 0.0]), 1.0, 1e-3, record_every=7)
    assert traj.times_ps[0] == 0 and traj.times_ps[-1] == pytest.approx(1.0)
    assert len(traj) == 1000 // 7 + 2


def test_step_too_large_warns(h8):
    m = fmo_model(h8)
    with pytest.warns(StepTooLarge):
        lindblad.propagate(m, lindblad.localized_state(m, "BChl 1"), 0.1, 1e-3)


def test_positivity_breach_is_fatal():
    # RK4 far outside its stability region blows up a decaying population
    m = LindbladModel(np.zeros((2, 2)), (JumpOperator(hilbert.projector(0, 1, 2), 1000.0, "decay"),))
    with pytest.raises(PositivityBreach), warnings.catch_warnings():
        warnings.simplefilter("ignore", StepTooLarge)
        lindblad.propagate(m, np.diag([0.0, 1.0]), 1.0, 0.01)


@pytest.mark.parametrize(
    "rates",
    [
        dict(dephasing_rate=0.0, sink_rate=0.0, loss_rate=0.0),
        dict(dephasing_rate=1.0, sink_rate=1.0, loss_rate=0.001),
        dict(dephasing_rate=10.0, sink_rate=0.1, loss_rate=1.0),
    ],
)
def test_cptp_invariants(h8, rates):
    m = fmo_model(h8, **rates)
    traj = lindblad.propagate(m, lindblad.localized_state(m, "BChl 1"), 2.0, 1e-4, record_every=50)
    assert np.abs(traj.channels["trace"] - 1).max() < 1e-8
    assert traj.channels["min_eigenvalue"].min() > -1e-8
    assert traj.channels["purity"].max() <= 1 + 1e-9
    if not any(rates.values()):
        assert np.abs(traj.channels["purity"] - 1).max() < 1e-9
    traj.state(len(traj) - 1)


def test_pure_dephasing_keeps_populations(rng):
    d = 4
    m = LindbladModel(np.diag([0.0, 0.5, 1.0, 3.0]), tuple(JumpOperator(hilbert.projector(k, k, d), 0.5 + k, f"d{k}") for k in range(d)))
    rho = random_density(rng, d)
    traj = lindblad.propagate(m, rho, 3.0, 1e-3, record_every=10)
    assert np.abs(traj.populations - np.diag(rho).real).max() < 1e-9
    mags = np.abs(traj.states[:, ~np.eye(d, dtype=bool)])
    assert np.all(np.diff(mags, axis=0) <= 1e-15)


def test_fourth_order_convergence(h8):
    m = fmo_model(h8)
    rho0 = lindblad.localized_state(m, "BChl 1")
    dts = (4e-3, 2e-3, 1e-3)
    runs = [quiet_propagate(m, rho0, 1.0, dt, record_every=int(round(0.1 / dt))) for dt in dts]
    for a, b in zip(runs, runs[1:]):
        np.testing.assert_allclose(a.times_ps, b.times_ps)
    for key in ("states", "purity"):
        get = (lambda r: r.states) if key == "states" else (lambda r: r.channels["purity"])
        first = np.abs(get(runs[1]) - get(runs[0])).max()
        second = np.abs(get(runs[2]) - get(runs[1])).max()
        assert second < first / 15


def test_efficiency_without_sink_rate_is_zero(h8):
    m = fmo_model(h8, sink_rate=0.0)
    traj = lindblad.propagate(m, lindblad.localized_state(m, "BChl 1"), 1.0, 5e-4, record_every=100)
    assert lindblad.transfer_efficiency(traj) == 0


def test_branching_ratio(h8):
    zero = fmo.SiteHamiltonian(np.zeros((8, 8)), h8.site_labels)
    s = TransportScenario(initial_site="BChl 3", dephasing_rate=0.0, sink_rate=1.0, loss_rate=1.0, t_final_ps=30.0, dt_ps=1e-3)
    m = lindblad.build_fmo_transport_model(s, zero)
    traj = lindblad.propagate(m, lindblad.localized_state(m, s.initial_site), s.t_final_ps, s.dt_ps, record_every=1000)
    assert lindblad.transfer_efficiency(traj) == pytest.approx(0.5, abs=1e-6)


def spectral_gap(model):
    w = np.linalg.eigvals(lindblad.liouvillian(model)).real
    return float(-w[w < -1e-9].max())


def test_sink_only_absorbing_limit(h8):
    m = fmo_model(h8, loss_rate=0.0)
    t_final = 20 / spectral_gap(m)
    traj = quiet_propagate(m, lindblad.localized_state(m, "BChl 1"), t_final, 2e-3, record_every=5000)
    assert lindblad.transfer_efficiency(traj) == pytest.approx(1.0, abs=0.01)


def test_no_sink_channel():
    traj = lindblad.propagate(LindbladModel(np.zeros((2, 2))), np.eye(2) / 2, 0.1, 0.01)
    with pytest.raises(NoSinkChannel):
        lindblad.transfer_efficiency(traj)
