"""States in a fixed-charge sector and their anyonic entanglement entropy.

A :class:`SectorState` holds the bipartite-basis amplitudes
``Psi[x, alpha, (beta, y)]`` of a normalized state. The partial quantum trace
over B yields sector weights ``p_alpha`` and unit-trace blocks ``R_alpha``,
from which

    S_A = H({p_alpha}) + sum_alpha p_alpha (H(spec R_alpha) + log d_alpha).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .constants import EIG_CLIP, TARGET_TOL, WEIGHT_FLOOR
from .fusion import BipartiteDecomposition

_MC_CHUNK = 250


def _default_threads() -> int:
    env = os.environ.get("ANYONCHAIN_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True, eq=False)
class SectorState:
    decomposition: BipartiteDecomposition
    amplitudes: np.ndarray  # bipartite-basis coefficients, length D

    def __post_init__(self):
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1) > TARGET_TOL:
            raise ValueError(f"state is not normalized (|psi| = {norm:.15g})")

    @classmethod
    def from_standard(cls, decomposition: BipartiteDecomposition, psi_std: np.ndarray) -> SectorState:
        return cls(decomposition, decomposition.to_bipartite(np.asarray(psi_std)))

    @property
    def blocks(self) -> list[np.ndarray]:
        return self.decomposition.blocks(self.amplitudes)

    @property
    def standard(self) -> np.ndarray:
        return self.decomposition.to_standard(self.amplitudes)


@dataclass(frozen=True)
class ReducedBlocks:
    alphas: tuple[int, ...]
    p: np.ndarray
    R: tuple[np.ndarray, ...]
    d: np.ndarray


def reduce(state: SectorState) -> ReducedBlocks:
    """Partial quantum trace over B, sector by sector."""
    dec = state.decomposition
    alphas, ps, Rs, ds = [], [], [], []
    for sector, psi in zip(dec.sectors, state.blocks):
        p = float(np.vdot(psi, psi).real)
        if p < WEIGHT_FLOOR:
            continue
        alphas.append(sector.alpha)
        ps.append(p)
        Rs.append(psi @ psi.conj().T / p)
        ds.append(dec.model.qdim[sector.alpha])
    return ReducedBlocks(tuple(alphas), np.array(ps), tuple(Rs), np.array(ds))


def reduce_b(state: SectorState) -> ReducedBlocks:
    """Partial quantum trace over A, giving blocks labelled by the B charge ``beta``."""
    dec = state.decomposition
    by_beta: dict[int, list[np.ndarray]] = {}
    for sector, psi in zip(dec.sectors, state.blocks):
        betas = np.array([b for b, _ in sector.b_states])
        for beta in np.unique(betas):
            by_beta.setdefault(int(beta), []).append(psi[:, betas == beta])
    alphas, ps, Rs, ds = [], [], [], []
    for beta in sorted(by_beta):
        # all A-side index values stacked; B index is the y path within beta
        psi = np.concatenate(by_beta[beta], axis=0)
        p = float(np.vdot(psi, psi).real)
        if p < WEIGHT_FLOOR:
            continue
        alphas.append(beta)
        ps.append(p)
        Rs.append(psi.T @ psi.conj() / p)
        ds.append(dec.model.qdim[beta])
    return ReducedBlocks(tuple(alphas), np.array(ps), tuple(Rs), np.array(ds))


def shannon(probs: np.ndarray) -> float:
    """Shannon entropy in nats with ``0 log 0 = 0``; small negative entries are clipped."""
    probs = np.asarray(probs, dtype=float)
    if np.any(probs < -EIG_CLIP):
        raise ValueError(f"negative probability {probs.min():.3e} (not PSD)")
    probs = np.clip(probs, 0, None)
    nz = probs[probs > 0]
    return float(-np.sum(nz * np.log(nz)))


def _block_entropies(blocks: ReducedBlocks) -> np.ndarray:
    return np.array([shannon(np.linalg.eigvalsh(R)) for R in blocks.R])


def aee(blocks: ReducedBlocks) -> float:
    """Anyonic entanglement entropy (nats)."""
    return shannon(blocks.p) + float(np.dot(blocks.p, _block_entropies(blocks) + np.log(blocks.d)))


def vn_entropy(blocks: ReducedBlocks) -> float:
    """Von Neumann entropy: the AEE without the topological ``log d_alpha`` terms."""
    return shannon(blocks.p) + float(np.dot(blocks.p, _block_entropies(blocks)))


def state_aee(state: SectorState) -> float:
    return aee(reduce(state))


def mutual_information(state: SectorState) -> float:
    """``S_A + S_B - log d_J``."""
    dec = state.decomposition
    return aee(reduce(state)) + aee(reduce_b(state)) - math.log(dec.model.qdim[dec.J])


# ---------------------------------------------------------------------------
# Haar sampling


def _gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def sample_haar(decomposition: BipartiteDecomposition, seed) -> SectorState:
    """Haar-random state of the sector: i.i.d. complex Gaussians, normalized."""
    if decomposition.D == 0:
        raise ValueError("cannot sample from an empty charge sector")
    rng = np.random.default_rng(seed)
    psi = _gaussian(rng, decomposition.D)
    return SectorState(decomposition, psi / np.linalg.norm(psi))


def batch_aee(decomposition: BipartiteDecomposition, psi: np.ndarray) -> np.ndarray:
    """AEE of many normalized states at once.

    ``psi`` has shape ``(D, k)`` in the bipartite basis; returns ``k`` entropies.
    Equivalent to applying :func:`aee` to each column.
    """
    k = psi.shape[1]
    total = np.zeros(k)
    ps = []
    for sector, block in zip(decomposition.sectors, decomposition.blocks(psi)):
        block = np.moveaxis(block, -1, 0)  # (k, m, n)
        p = np.einsum("kmn,kmn->k", block, block.conj()).real
        if sector.m <= sector.n:
            gram = block @ np.swapaxes(block.conj(), 1, 2)
        else:
            gram = np.swapaxes(block, 1, 2) @ block.conj()
        safe = np.where(p > WEIGHT_FLOOR, p, 1.0)
        lam = np.linalg.eigvalsh(gram / safe[:, None, None])
        if np.any(lam < -EIG_CLIP):
            raise ValueError("density block is not positive semidefinite")
        lam = np.clip(lam, 0, None)
        with np.errstate(divide="ignore", invalid="ignore"):
            h = -np.sum(np.where(lam > 0, lam * np.log(lam), 0.0), axis=1)
        h = np.where(p > WEIGHT_FLOOR, h, 0.0)
        total += p * (h + math.log(decomposition.model.qdim[sector.alpha]))
        ps.append(p)
    ps = np.array(ps)
    with np.errstate(divide="ignore", invalid="ignore"):
        total -= np.sum(np.where(ps > WEIGHT_FLOOR, ps * np.log(ps), 0.0), axis=0)
    return total


@dataclass(frozen=True)
class MonteCarloStats:
    mean: float
    sample_variance: float
    standard_error: float
    n_samples: int
    values: np.ndarray


def _mc_chunk(decomposition, seed_seq, size):
    rng = np.random.default_rng(seed_seq)
    psi = _gaussian(rng, (size, decomposition.D))
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    return batch_aee(decomposition, psi.T)


def monte_carlo_aee(
    decomposition: BipartiteDecomposition, n_samples: int, seed, threads: int | None = None
) -> MonteCarloStats:
    """AEE statistics over Haar samples.

    Samples are drawn in fixed chunks, each with its own child of
    ``SeedSequence(seed)``, so the result does not depend on ``threads``.
    ``seed`` is anything ``SeedSequence`` accepts (an int or a list of ints).
    """
    if n_samples < 2:
        raise ValueError("need at least two samples")
    if decomposition.D == 0:
        raise ValueError("cannot sample from an empty charge sector")
    sizes = [_MC_CHUNK] * (n_samples // _MC_CHUNK)
    if n_samples % _MC_CHUNK:
        sizes.append(n_samples % _MC_CHUNK)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    threads = threads or _default_threads()
    if threads == 1:
        parts = [_mc_chunk(decomposition, s, n) for s, n in zip(children, sizes)]
    else:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda a: _mc_chunk(decomposition, *a), zip(children, sizes)))
    values = np.concatenate(parts)
    var = float(np.var(values, ddof=1))
    return MonteCarloStats(
        mean=float(np.mean(values)),
        sample_variance=var,
        standard_error=math.sqrt(var / n_samples),
        n_samples=n_samples,
        values=values,
    )
