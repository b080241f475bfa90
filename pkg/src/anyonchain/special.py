"""Digamma and trigamma for positive real arguments.

Both use upward recurrence to ``x >= 10`` followed by the asymptotic
(Bernoulli) series, which is accurate to double precision there.
"""

from __future__ import annotations

import math

EULER_GAMMA = 0.57721566490153286061

_SHIFT = 10.0

# B_{2n} / (2n) for the digamma series
_PSI_COEFFS = (
    1 / 12,
    -1 / 120,
    1 / 252,
    -1 / 240,
    1 / 132,
    -691 / 32760,
    1 / 12,
)

# B_{2n} for the trigamma series
_PSI1_COEFFS = (
    1 / 6,
    -1 / 30,
    1 / 42,
    -1 / 30,
    5 / 66,
    -691 / 2730,
    7 / 6,
)


def digamma(x: float) -> float:
    """Psi(x) = d/dx log Gamma(x) for x > 0."""
    x = float(x)
    if x <= 0:
        raise ValueError("digamma is implemented for x > 0 only")
    acc = 0.0
    while x < _SHIFT:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for c in _PSI_COEFFS:
        series += c * power
        power *= inv2
    return acc + math.log(x) - 0.5 / x - series


def trigamma(x: float) -> float:
    """Psi'(x) for x > 0."""
    x = float(x)
    if x <= 0:
        raise ValueError("trigamma is implemented for x > 0 only")
    acc = 0.0
    while x < _SHIFT:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    power = inv2 * inv
    for c in _PSI1_COEFFS:
        series += c * power
        power *= inv2
    return acc + inv + 0.5 * inv2 + series
