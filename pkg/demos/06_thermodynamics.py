"""
Dissipated work and predictive lost work
========================================

Relative entropy between a state and its time-reversed counterpart sets the
dissipated work. Losing correlations between a system and its environment
costs kT ln 2 per bit.
"""

import numpy as np

from excidyn import fmo, thermo
from excidyn.correlations import mutual_information

ctx = thermo.ThermoContext(300.0)
print(f"kT at 300 K = {ctx.kT_cm1:.3f} cm^-1")

rho = np.diag([1.0, 0.0])
for p in (0.0, 0.5, 0.9, 1.0):
    rev = thermo.depolarize(rho, p)
    rep = thermo.dissipated_work(rho, rev, ctx)
    print(f"reversed = depolarized by {p:.1f}:  D = {rep.relative_entropy_nats:8.4f} nats  W = {rep.dissipated_work_cm1:9.3f} cm^-1 ({rep.dissipated_work_zJ:.3f} zJ)")

# S and X perfectly correlated, then X alone is depolarized (S stays I/2)
before = np.diag([0.5, 0, 0, 0.5])
for p in (0.0, 0.25, 0.5, 1.0):
    after = np.kron(np.eye(2) / 2, np.eye(2) / 2) * p + before * (1 - p)
    lost = thermo.predictive_lost_work(before, after, (2, 2), ctx)
    print(f"depolarize X by {p:.2f}: I' = {mutual_information(after):.3f} bits, lost work {lost:8.3f} cm^-1")
print(f"kT ln 2 = {ctx.kT_cm1 * np.log(2):.3f} cm^-1")

# thermal populations of the FMO exciton ladder
basis = fmo.diagonalize(fmo.builtin_fmo8())
th = thermo.thermal_state(np.diag(basis.energies_cm1), ctx)
print("thermal exciton populations at 300 K:", np.round(th.populations(), 3))
