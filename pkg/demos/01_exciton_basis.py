"""
Exciton basis of the FMO monomer
================================

Diagonalize the eight-site Hamiltonian and compare the exciton energies and
site amplitudes with the bundled reference table.
"""

import numpy as np

from excidyn import fmo

h = fmo.builtin_fmo8()
print("site energies (cm^-1):", np.diag(h.energies_cm1))

# eigh returns ascending energies; each eigenvector is sign-fixed so that
# its largest component is positive
basis = fmo.diagonalize(h)
ref = fmo.reference_excitons()

print("\nexciton   E (cm^-1)   reference   dominant site (weight)")
weights = fmo.site_occupation_probabilities(basis)
for k in range(basis.n_excitons - 1, -1, -1):
    site = int(np.argmax(weights[k]))
    print(f"e{k + 1:<7} {basis.energies_cm1[k]:10.2f}  {ref.energies_cm1[k]:10.1f}   {h.site_labels[site]} ({weights[k, site]:.2f})")

# the lowest exciton sits mostly on BChl 3, next to the reaction center
cmp = fmo.compare_with_reference(basis)
print(f"\nmax energy deviation    {cmp['max_energy_deviation_cm1']:.3f} cm^-1")
print(f"max amplitude deviation {cmp['max_amplitude_deviation']:.4f}")
print(f"sum of energies         {cmp['energy_sum_cm1']:.6f} cm^-1 (trace of H, reference rows sum to {cmp['table_energy_sum_cm1']:.1f})")
