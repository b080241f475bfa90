"""Numerical tolerances shared across the package."""

#: Residual below which category axioms, unitarity etc. are accepted.
ACCEPT_TOL = 1e-10

#: Residual the constructions are expected to reach in practice.
TARGET_TOL = 1e-12

#: Negative eigenvalues of a density block above ``-EIG_CLIP`` are clipped to zero.
EIG_CLIP = 1e-12

#: Sector weights below this are treated as empty.
WEIGHT_FLOOR = 1e-15

#: Relative (to spectral width) threshold below which a level spacing is degenerate.
DEGENERATE_SPACING = 1e-12
