"""
Page curve of a Fibonacci chain
===============================

Haar-random states in the J = 0 sector of a chain of ``L`` tau anyons.
The exact Haar average of the anyonic entanglement entropy is compared
with a Monte Carlo estimate and with the large-L asymptotic form.
"""

from __future__ import annotations

import numpy as np

from anyonchain import (
    asymptotic_aee,
    bipartite_decomposition,
    build_fibonacci,
    exact_average_aee,
    monte_carlo_aee,
    sector_dims,
)

model = build_fibonacci()
L = 12

###############################################################################
# Exact average, sampled mean and asymptotic curve for every cut.

print(f"{'LA':>3} {'exact':>9} {'sampled':>9} {'stderr':>8} {'asympt':>9}")
for LA in range(1, L):
    exact = exact_average_aee(sector_dims(model, "tau", L, LA, "0"))
    dec = bipartite_decomposition(model, "tau", L, LA, "0")
    mc = monte_carlo_aee(dec, 500, seed=[7, LA], threads=1)
    asym = asymptotic_aee(model, "tau", "0", L, LA / L)
    print(f"{LA:3d} {exact:9.5f} {mc.mean:9.5f} {mc.standard_error:8.5f} {asym:9.5f}")

###############################################################################
# The curve is symmetric about the middle cut when J = 0.

left = exact_average_aee(sector_dims(model, "tau", L, 4, "0"))
right = exact_average_aee(sector_dims(model, "tau", L, L - 4, "0"))
print("mirror difference:", abs(left - right))
assert np.isclose(left, right)
