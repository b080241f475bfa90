"""
Level statistics of the golden chain
====================================

The nearest-neighbour golden chain is integrable. Adding the
next-nearest-neighbour braided term breaks integrability, and the
spacing ratios move from Poisson towards GOE.
"""

from __future__ import annotations

from anyonchain import GoldenChainSpec, golden_chain_spectrum, level_spacing_ratios
from anyonchain.hamiltonian import GOE_MEAN_RATIO, POISSON_MEAN_RATIO

L = 18

###############################################################################
# Mean spacing ratio in the parity-even J = 0 sector.

for lam in (0.0, 0.3, 0.9):
    spec = GoldenChainSpec(L, lam=lam, J="0", parity=1)
    energies = golden_chain_spectrum(spec).eigenvalues
    stats = level_spacing_ratios(energies)
    print(f"lambda={lam:.1f}  dim={energies.size:4d}  <r>={stats.mean:.4f}")

print(f"reference: Poisson {POISSON_MEAN_RATIO:.4f}, GOE {GOE_MEAN_RATIO:.4f}")
