"""
Excitation transport into the reaction center
=============================================

Propagate a Lindblad master equation over {ground, 8 sites, sink} from an
excitation on BChl 1, with local dephasing, a sink fed from BChl 3 and a
weak loss to the ground state.
"""

import numpy as np

from excidyn import fmo, lindblad
from excidyn.lindblad import TransportScenario

h = fmo.builtin_fmo8()

for dephasing in (0.0, 1.0, 10.0, 100.0):
    s = TransportScenario(t_final_ps=5.0, dt_ps=5e-4, dephasing_rate=dephasing)
    model = lindblad.build_fmo_transport_model(s, h)
    rho0 = lindblad.localized_state(model, s.initial_site)
    # keep generator norm x dt below 0.1; strong dephasing needs a finer step
    dt = min(s.dt_ps, 0.05 / model.generator_norm_estimate())
    traj = lindblad.propagate(model, rho0, s.t_final_ps, dt, record_every=100)
    print(f"dephasing {dephasing:6.1f}/ps  efficiency after {s.t_final_ps} ps: {lindblad.transfer_efficiency(traj):.3f}"
          f"  final purity {traj.channels['purity'][-1]:.3f}")

# intermediate dephasing helps: it breaks up the localization that
# pure coherent evolution produces in a disordered site landscape

s = TransportScenario(t_final_ps=1.0)
model = lindblad.build_fmo_transport_model(s, h)
traj = lindblad.propagate(model, lindblad.localized_state(model, "BChl 1"), 1.0, 5e-4, record_every=200)
print("\nt (ps)  " + "  ".join(f"{lab[-1]:>5}" for lab in traj.basis_labels[1:9]))
for t, p in zip(traj.times_ps, traj.populations):
    print(f"{t:5.2f}  " + "  ".join(f"{x:5.3f}" for x in p[1:9]))
