import itertools

import numpy as np
import pytest

from excidyn import fmo, hilbert, multipartite as mp
from excidyn.correlations import concurrence
from excidyn.errors import LengthMismatch, NotNormalized, TooFewQubits, TooManyQubits

from conftest import random_density


def permute_qubits(psi, perm):
    n = len(perm)
    return psi.reshape((2,) * n).transpose(perm).reshape(-1)


def test_w2_is_bell_like():
    w = mp.w_state(2)
    s = 1 / np.sqrt(2)
    np.testing.assert_allclose(w.amplitudes, [0, s, s, 0], atol=1e-15)
    assert w.family == "W" and w.n_qubits == 2


def test_w_has_no_vacuum_and_single_excitations():
    for n in (2, 3, 5):
        psi = mp.w_state(n).amplitudes
        assert psi[0] == 0
        support = np.flatnonzero(psi)
        assert all(bin(i).count("1") == 1 for i in support)
        assert support.size == n


def test_qubit_ordering():
    assert mp.single_excitation_index(1, 3) == 0b100
    assert mp.single_excitation_index(3, 3) == 0b001
    psi = mp.general_single_excitation([1, 0, 0]).amplitudes
    assert psi[4] == 1
    assert mp.w_state(3).reduced([1]).populations()[1] == pytest.approx(1 / 3)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_w_pairwise_concurrence(n):
    w = mp.w_state(n)
    for i, j in itertools.combinations(range(1, n + 1), 2):
        assert concurrence(w.reduced([i, j])) == pytest.approx(2 / n, abs=1e-9)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_ghz_pairwise_concurrence(n):
    g = mp.ghz_state(n)
    for i, j in itertools.combinations(range(1, n + 1), 2):
        red = g.reduced([i, j])
        np.testing.assert_allclose(red.matrix, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
        assert concurrence(red) == pytest.approx(0, abs=1e-9)


def test_ghz_examples():
    np.testing.assert_array_equal(mp.ghz_state(3, 1, 0).amplitudes, hilbert.ket(0, 8))
    assert concurrence(mp.ghz_state(2).density_matrix()) == pytest.approx(1, abs=1e-9)
    g = mp.ghz_state(4, 0.6, 0.8j)
    assert g.amplitudes[0] == 0.6 and g.amplitudes[-1] == 0.8j


def test_permutation_symmetry():
    for n in (3, 4):
        w, g = mp.w_state(n).amplitudes, mp.ghz_state(n).amplitudes
        for perm in itertools.permutations(range(n)):
            assert np.array_equal(permute_qubits(w, perm), w)
            assert np.array_equal(permute_qubits(g, perm), g)


def test_general_single_excitation_from_exciton_row():
    basis = fmo.diagonalize(fmo.builtin_fmo8())
    row = basis.site_amplitudes[0]
    s = mp.general_single_excitation(row)
    assert s.n_qubits == 8
    assert abs(s.amplitudes[mp.single_excitation_index(3, 8)]) == pytest.approx(0.937, abs=0.01)
    assert np.linalg.norm(s.amplitudes) == pytest.approx(1, abs=1e-12)


def test_general_single_excitation_limits():
    one_hot = mp.general_single_excitation([0, 1, 0, 0])
    np.testing.assert_array_equal(one_hot.amplitudes, hilbert.ket(0b0100, 16))
    for n in (2, 4, 7):
        eq = mp.general_single_excitation(np.full(n, 1 / np.sqrt(n)))
        np.testing.assert_allclose(eq.amplitudes, mp.w_state(n).amplitudes, atol=1e-15)


def test_errors():
    with pytest.raises(TooFewQubits):
        mp.w_state(1)
    with pytest.raises(TooManyQubits):
        mp.w_state(13)
    with pytest.raises(NotNormalized):
        mp.ghz_state(3, 1, 1)
    with pytest.raises(NotNormalized):
        mp.general_single_excitation([1, 1])
    with pytest.raises(LengthMismatch):
        mp.general_single_excitation([1, 0], n=3)
    assert mp.w_state(12).amplitudes.size == 4096


def test_site_pair_qubits_matches_partial_trace(rng):
    c = rng.normal(size=5) + 1j * rng.normal(size=5)
    c /= np.linalg.norm(c)
    state = mp.general_single_excitation(c)
    rho_sites = np.outer(c, c.conj())
    for i, j in [(0, 1), (1, 3), (4, 2)]:
        expected = state.reduced([i + 1, j + 1]) if i < j else None
        got = mp.site_pair_qubits(rho_sites, i, j)
        if expected is not None:
            np.testing.assert_allclose(got, expected.matrix, atol=1e-14)
        assert concurrence(got) == pytest.approx(2 * abs(rho_sites[i, j]), abs=1e-9)


def test_site_pair_qubits_on_mixed_single_excitation_state(rng):
    rho = random_density(rng, 6)
    pair = mp.site_pair_qubits(rho, 2, 3)
    assert np.trace(pair).real == pytest.approx(1)
    assert np.linalg.eigvalsh(pair).min() > -1e-12
    assert concurrence(pair) == pytest.approx(2 * abs(rho[2, 3]), abs=1e-9)
