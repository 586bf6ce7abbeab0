"""
Entanglement and discord of two-site excitations
================================================

Single-excitation states across sites behave like W states. Their pairwise
concurrence and discord are computed here, alongside the GHZ state and the
exciton states of the FMO Hamiltonian.
"""

import itertools

import numpy as np

from excidyn import correlations as cr
from excidyn import fmo, multipartite as mp

bell = cr.bell_state()
d = cr.discord_two_qubit(bell)
print(f"Bell:  C = {cr.concurrence(bell):.3f}  I = {d.mutual_info_bits:.3f}  J = {d.classical_corr_bits:.3f}  discord = {d.discord_bits:.4f}")
classical = np.diag([0.5, 0, 0, 0.5])
print(f"classical mixture: discord = {cr.discord_two_qubit(classical).discord_bits:.1e}")

for n in range(2, 7):
    w = mp.w_state(n)
    print(f"W_{n}: pairwise concurrence {cr.concurrence(w.reduced([1, 2])):.4f} (2/n = {2 / n:.4f})")
print(f"GHZ_3: pairwise concurrence {cr.concurrence(mp.ghz_state(3).reduced([1, 2])):.1e}")

# the lowest exciton as an 8-qubit single-excitation state
basis = fmo.diagonalize(fmo.builtin_fmo8())
state = mp.general_single_excitation(basis.site_amplitudes[0])
pairs = sorted(
    ((cr.concurrence(state.reduced([i, j])), i, j) for i, j in itertools.combinations(range(1, 9), 2)),
    reverse=True,
)
print("\nlowest exciton, most entangled site pairs:")
for c, i, j in pairs[:4]:
    print(f"  BChl {i} - BChl {j}: C = {c:.3f}")
