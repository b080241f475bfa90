"""Closed-form Haar averages, variances and large-L asymptotics of the AEE.

All entropies are in nats. The exact formulas only need the sector
dimensions ``(alpha, m_alpha, n_alpha, d_alpha)`` of a bipartition, bundled in
:class:`SectorDims`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .category import AnyonModel
from .fusion import dim_bruteforce
from .special import EULER_GAMMA, digamma, trigamma

_HALF_TOL = 1e-12


@dataclass(frozen=True)
class SectorDims:
    alphas: tuple[int, ...]
    m: tuple[int, ...]
    n: tuple[int, ...]
    d: tuple[float, ...]
    D: int
    dJ: float
    L: int
    LA: int

    @property
    def f(self) -> float:
        return self.LA / self.L

    @property
    def weights(self) -> np.ndarray:
        """``m_alpha n_alpha / D_J``."""
        return np.array(self.m) * np.array(self.n) / self.D


def sector_dims(model: AnyonModel, jext, L: int, LA: int, J, side: str = "A") -> SectorDims:
    """Sector dimensions of the cut after ``LA`` sites, seen from ``side``.

    ``side="B"`` swaps the roles of the subsystems: sectors are labelled by the
    B charge ``beta`` with ``m_beta = D_beta(L_B)`` and
    ``n_beta = sum_{alpha : N_{alpha beta}^J = 1} D_alpha(L_A)``.
    """
    jext, J = model.index(jext), model.index(J)
    LB = L - LA
    own, other = (LA, LB) if side == "A" else (LB, LA)

    def dims(length):
        if length == 0:
            return [1] + [0] * (model.n - 1)
        return [dim_bruteforce(model, jext, length, a) for a in range(model.n)]

    d_own, d_other = dims(own), dims(other)
    N = model.fusion
    alphas, ms, ns = [], [], []
    for a in range(model.n):
        if d_own[a] == 0:
            continue
        nb = sum(d_other[b] for b in range(model.n) if N[a, b, J])
        if nb == 0:
            continue
        alphas.append(a)
        ms.append(d_own[a])
        ns.append(nb)
    D = dim_bruteforce(model, jext, L, J)
    return SectorDims(
        alphas=tuple(alphas),
        m=tuple(ms),
        n=tuple(ns),
        d=tuple(float(model.qdim[a]) for a in alphas),
        D=D,
        dJ=float(model.qdim[J]),
        L=L,
        LA=own,
    )


def single_sector(m: int, n: int, d: float = 1.0) -> SectorDims:
    """A one-sector ``SectorDims`` (the ordinary Page setting when ``d = 1``)."""
    return SectorDims((0,), (m,), (n,), (d,), m * n, 1.0, 2, 1)


def _check(dims: SectorDims):
    if dims.D == 0:
        raise ValueError("empty charge sector (D_J = 0)")


def page_phi(m: int, n: int, D: int) -> float:
    """Sector average ``Psi(D+1) - Psi(max(m,n)+1) - min((m-1)/2n, (n-1)/2m)`` without the log d term."""
    if m <= n:
        corr = (m - 1) / (2 * n)
    else:
        corr = (n - 1) / (2 * m)
    return digamma(D + 1) - digamma(max(m, n) + 1) - corr


def page_chi(m: int, n: int, D: int) -> float:
    if m <= n:
        corr = (m - 1) * (m + 2 * n - 1) / (4 * n * n)
    else:
        corr = (n - 1) * (n + 2 * m - 1) / (4 * m * m)
    return (m + n) * trigamma(max(m, n) + 1) - (D + 1) * trigamma(D + 1) - corr


def _phis(dims: SectorDims) -> np.ndarray:
    return np.array(
        [page_phi(m, n, dims.D) + math.log(d) for m, n, d in zip(dims.m, dims.n, dims.d)]
    )


def exact_average_aee(dims: SectorDims) -> float:
    """Haar average of the anyonic entanglement entropy in a fixed-J sector."""
    _check(dims)
    return float(np.dot(dims.weights, _phis(dims)))


def exact_variance(dims: SectorDims) -> float:
    _check(dims)
    phis = _phis(dims)
    chis = np.array([page_chi(m, n, dims.D) for m, n in zip(dims.m, dims.n)])
    w = dims.weights
    mean = float(np.dot(w, phis))
    return float((np.dot(w, phis**2 + chis) - mean**2) / (dims.D + 1))


def average_mutual_information(model: AnyonModel, jext, L: int, LA: int, J) -> float:
    """``<S(A:B)> = <S_A> + <S_B> - log d_J``."""
    sa = exact_average_aee(sector_dims(model, jext, L, LA, J, side="A"))
    sb = exact_average_aee(sector_dims(model, jext, L, LA, J, side="B"))
    return sa + sb - math.log(model.qdim[model.index(J)])


# ---------------------------------------------------------------------------
# asymptotics


def _is_half(f: float) -> bool:
    return abs(f - 0.5) < _HALF_TOL


def asymptotic_aee(model: AnyonModel, jext, J, L: int, f: float) -> float:
    """Leading large-L average: volume law plus the O(1) Page/topological terms."""
    dj = float(model.qdim[model.index(jext)])
    dJ = float(model.qdim[model.index(J)])
    if f <= 0.5 + _HALF_TOL:
        return f * L * math.log(dj) - (0.5 / dJ if _is_half(f) else 0.0)
    return (1 - f) * L * math.log(dj) + math.log(dJ)


def resolved_crossover(model: AnyonModel, jext, J, L: int, Lam: float, s: float) -> float:
    """Average AEE in the double-scaling window ``f = 1/2 + Lam / (2 L^s)``.

    For ``s = 1`` the constant term is ``-max(0, eta) - exp(-|eta|)/2`` with
    ``eta = Lam log d_jext - log d_J``.
    """
    if s <= 0:
        raise ValueError("scaling exponent s must be positive")
    dj = float(model.qdim[model.index(jext)])
    dJ = float(model.qdim[model.index(J)])
    f = 0.5 + Lam / (2 * L**s)
    LA = f * L
    LB = L - LA
    if s < 1:
        if Lam <= 0:
            return LA * math.log(dj)
        return LB * math.log(dj) + math.log(dJ)
    if s == 1:
        eta = Lam * math.log(dj) - math.log(dJ)
        return LA * math.log(dj) - max(0.0, eta) - 0.5 * math.exp(-abs(eta))
    return LA * math.log(dj) - 0.5 / dJ


def asymptotic_variance(model: AnyonModel, jext, L: int, f: float) -> float:
    """Log of the exponential decay of the variance (prefactor not determined)."""
    if not 0 < f < 1:
        raise ValueError("f must lie in (0, 1)")
    ldj = math.log(float(model.qdim[model.index(jext)]))
    if _is_half(f):
        return -L * ldj
    if f < 0.5:
        return -2 * (1 - f) * L * ldj
    return -2 * f * L * ldj


# ---------------------------------------------------------------------------
# q-deformed symmetry-resolved entropy (SU(2)_k, no topological term)

HALF_INTEGER = "half-integer"
INTEGER = "integer"


def _twice(spin) -> int:
    twice = Fraction(spin) * 2
    if twice.denominator != 1:
        raise ValueError(f"{spin!r} is not a (half-)integer spin")
    return int(twice)


def su2k_qdim(k: int, spin) -> float:
    theta = math.pi / (k + 2)
    return math.sin((_twice(spin) + 1) * theta) / math.sin(theta)


def alpha_parity_case(jext, LA: int) -> str:
    """Spin class of the A charges: half-integer iff ``jext`` is half-integer and ``LA`` odd."""
    return HALF_INTEGER if _twice(jext) % 2 == 1 and LA % 2 == 1 else INTEGER


def q_sree(k: int, jext, J, L: int, f: float, parity_case: str = INTEGER) -> float:
    """Large-L average von Neumann entropy of SU(2)_k chains for ``f <= 1/2``.

    Closed forms from summing ``d_alpha^2 log d_alpha`` with the Gauss digamma
    theorem. For odd ``k`` both spin classes give the same value and
    ``parity_case`` is ignored. Spins may be given as numbers or strings like
    ``"1/2"``.
    """
    if k < 1:
        raise ValueError("level k must be at least 1")
    if parity_case not in (HALF_INTEGER, INTEGER):
        raise ValueError(f"parity_case must be {HALF_INTEGER!r} or {INTEGER!r}")
    theta = math.pi / (k + 2)
    K = k + 2
    cot = lambda x: math.cos(x) / math.sin(x)  # noqa: E731
    volume = f * L * math.log(su2k_qdim(k, jext))
    page = 0.5 / su2k_qdim(k, J) if _is_half(f) else 0.0
    base = math.log(2 * math.sin(theta))
    if k % 2 == 1:
        const = math.pi / (2 * K) * cot(theta) + digamma(1 / K) / K + EULER_GAMMA / K
    elif parity_case == HALF_INTEGER:
        const = math.pi / K * cot(2 * theta) + 2 / K * digamma(2 / K) + 2 * EULER_GAMMA / K
    else:
        const = math.pi / K * (cot(theta) - cot(2 * theta)) + 2 / K * (digamma(1 / K) - digamma(2 / K))
    return volume + base + const - page
