"""
Information backflow and the BLP measure
========================================

The Lorentzian amplitude defines a qubit channel. The trace distance of the
evolved |+> and |-> states equals |u(t)|, so any revival of |u| is
information flowing back from the bath.
"""

import numpy as np

from excidyn import correlations as cr
from excidyn import tcl
from excidyn.tcl import BathSpec

dw = 7.534
t = np.linspace(0.0, 3.0, 30_001)

for ratio in (0.2, 0.9, 1.5, 4.0, 16.0):
    bath = BathSpec(gamma0=ratio * dw / 4, delta_omega=dw)
    u = tcl.amplitude_closed_form(bath, t)
    print(f"gamma0 / (dw/4) = {ratio:5.1f}  {bath.regime():11s}  BLP = {cr.blp_amplitude_damping(t, u):.4f}")

# a Markovian semigroup with the same initial decay never revives
u = np.exp(-0.5 * t)
print(f"\nMarkovian damping                     BLP = {cr.blp_amplitude_damping(t, u):.1e}")

# the series itself
bath = BathSpec(gamma0=4 * dw, delta_omega=dw)
u = tcl.amplitude_closed_form(bath, t)
d = cr.trace_distance_series(cr.channel_trajectory(t, u, cr.PLUS), cr.channel_trajectory(t, u, cr.MINUS))
print("trace distance every 0.25 ps:", np.round(d[::2500], 3))
