"""Exciton transfer dynamics in the FMO pigment-protein complex.

Submodules
----------
hilbert        dense linear algebra, density matrices, partial trace
fmo            eight-site FMO Hamiltonian, exciton basis, units
tcl            exact Lorentzian-bath qubit amplitude and its kernel-equation oracle
lindblad       Lindblad transport with ground and sink levels
correlations   trace distance, BLP measure, entropies, concurrence, discord
thermo         relative entropy, dissipated work, predictive lost work
multipartite   W, GHZ and single-excitation multi-qubit states
cli            ``excidyn`` command-line entry point
"""

__version__ = "0.1.0"

from . import correlations, fmo, hilbert, lindblad, multipartite, tcl, thermo  # noqa: E402

__all__ = ["correlations", "fmo", "hilbert", "lindblad", "multipartite", "tcl", "thermo", "__version__"]
