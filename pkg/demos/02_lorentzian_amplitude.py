"""
Excited-state amplitude in a Lorentzian bath
============================================

A two-level system coupled to a Lorentzian reservoir has an exactly solvable
amplitude u(t). The critical coupling gamma0 = delta_omega / 4 separates
monotone decay from damped oscillation.
"""

import numpy as np

from excidyn import tcl
from excidyn.tcl import BathSpec

dw = 7.534  # rad/ps, i.e. 40 cm^-1
t = np.linspace(0.0, 1.0, 100_001)

for ratio in (0.25, 1.0, 16.0):
    bath = BathSpec(gamma0=ratio * dw / 4, delta_omega=dw)
    closed = tcl.closed_form_trace(bath, t)
    # the same amplitude from the integro-differential equation, step 1e-5 ps
    kernel = tcl.amplitude_kernel_integration(bath, t)
    diff = np.abs(closed.u_values - kernel.u_values).max()
    dp = closed.population_difference
    print(f"gamma0 = {bath.gamma0:6.3f}  {bath.regime():11s}  |u(1 ps)|^2 = {closed.excited_population[-1]:.4f}"
          f"  min dP = {dp.min():+.3f}  closed vs kernel {diff:.1e}")

# strong coupling in cm^-1: half-width 20 cm^-1, gamma0 = delta_omega
bath = BathSpec.from_cm1(gamma0=40.0, delta_omega=40.0)
u = tcl.amplitude_closed_form(bath, t)
dp = tcl.population_difference(u)
print("\npopulation difference at 0.1 ps steps, strong coupling:")
print(np.round(dp[::10_000], 3))
