"""The open golden chain with braid-symmetrized next-nearest-neighbour terms.

    H = - sum_i Pi_0^(i,i+1) - lam * sum_i 1/2 (B_i Pi_0^(i+1,i+2) B_i^-1 + h.c.)

acting on the left-nested fusion basis of ``L`` anyons with total charge ``J``.
Spectra are resolved by the reflection (parity) symmetry, and eigenvectors can
be fed to the entanglement routines of :mod:`anyonchain.entropy`.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .analytic import asymptotic_aee, exact_average_aee, sector_dims
from .category import AnyonModel, braid_matrix, build_fibonacci
from .constants import DEGENERATE_SPACING
from .entropy import _default_threads, batch_aee
from .fusion import FusionBasis, bipartite_decomposition, enumerate_basis

GOE_MEAN_RATIO = 0.5307
POISSON_MEAN_RATIO = 2 * math.log(2) - 1


@lru_cache(maxsize=None)
def _fibonacci() -> AnyonModel:
    return build_fibonacci()


@dataclass(frozen=True)
class GoldenChainSpec:
    """Parameters of an open chain.

    ``parity`` selects a reflection sector (``+1`` or ``-1``); ``None`` keeps
    both. The model defaults to Fibonacci anyons with ``jext = tau``.
    """

    L: int
    lam: float = 0.0
    J: object = 0
    parity: int | None = None
    model: AnyonModel = field(default_factory=_fibonacci, repr=False)
    jext: object = "tau"

    def __post_init__(self):
        if self.L < 2:
            raise ValueError("golden chain needs L >= 2")
        if self.parity not in (None, 1, -1):
            raise ValueError("parity must be +1, -1 or None")

    @property
    def basis(self) -> FusionBasis:
        basis = enumerate_basis(self.model, self.jext, self.L, self.J)
        if basis.dim == 0:
            raise ValueError(f"charge {self.J!r} is not allowed for L={self.L}")
        return basis


# ---------------------------------------------------------------------------
# local operators


def _local_operator(basis: FusionBasis, p: int, block) -> sp.csr_matrix:
    """Embed an operator acting on the label ``x_p`` of every path.

    ``block(left, right)`` returns ``(rows, cols, matrix)`` for fixed neighbours
    ``x_{p-1} = left`` and ``x_{p+1} = right``.
    """
    paths = basis.paths
    cache = {}
    rows, cols, vals = [], [], []
    for j, path in enumerate(paths.tolist()):
        key = (path[p - 1], path[p + 1])
        if key not in cache:
            cache[key] = block(*key)
        labels_out, labels_in, mat = cache[key]
        c = labels_in.index(path[p])
        for r, label in enumerate(labels_out):
            amp = mat[r, c]
            if amp == 0:
                continue
            new = list(path)
            new[p] = label
            rows.append(basis.index_of(new))
            cols.append(j)
            vals.append(amp)
    dtype = complex if np.iscomplexobj(np.array(vals)) else float
    return sp.csr_matrix((np.array(vals, dtype=dtype), (rows, cols)), shape=(basis.dim, basis.dim))


def build_nn_projector(model: AnyonModel, basis: FusionBasis, i: int) -> sp.csr_matrix:
    """Projector of anyons ``i, i+1`` (1-based) onto the trivial fusion channel."""
    L = basis.L
    if not 1 <= i <= L - 1:
        raise IndexError(f"bond {i} outside 1..{L - 1}")
    j = basis.jext

    def block(left, right):
        fm = model.f_matrix(left, j, j, right)
        if 0 not in fm.cols:
            return list(fm.rows), list(fm.rows), np.zeros((len(fm.rows),) * 2)
        v = fm.data[:, fm.cols.index(0)]
        return list(fm.rows), list(fm.rows), np.outer(v, v.conj())

    P = _local_operator(basis, i, block)
    if P.dtype.kind == "c" and (P.nnz == 0 or abs(P.imag).max() < 1e-14):
        P = P.real.tocsr()
    return P


def _braid(model: AnyonModel, basis: FusionBasis, i: int, inverse: bool = False) -> sp.csr_matrix:
    """Exchange of anyons ``i`` and ``i+1`` as a sparse matrix on the path basis."""
    j = basis.jext

    def block(left, right):
        b = braid_matrix(model, left, j, j, right, inverse=inverse)
        return list(b.rows), list(b.cols), b.data

    return _local_operator(basis, i, block).astype(complex)


def build_nnn_term(
    model: AnyonModel, basis: FusionBasis, i: int, chirality: int = 1
) -> sp.csr_matrix:
    """Braid-symmetrized next-nearest-neighbour projector on anyons ``i, i+2``.

    ``chirality=-1`` swaps ``B`` and ``B^-1``; the result is identical.
    """
    L = basis.L
    if not 1 <= i <= L - 2:
        raise IndexError(f"NNN index {i} outside 1..{L - 2}")
    B = _braid(model, basis, i, inverse=chirality < 0)
    Binv = B.conj().T.tocsr()
    P = build_nn_projector(model, basis, i + 1)
    T = 0.5 * (B @ P @ Binv + Binv @ P @ B)
    imag = abs(T.imag).max() if T.nnz else 0.0
    if imag > 1e-12:
        raise RuntimeError(f"NNN term has imaginary part {imag:.2e}")
    T = T.real.tocsr()
    T.eliminate_zeros()
    return T


def build_hamiltonian(spec: GoldenChainSpec) -> sp.csr_matrix:
    """``-sum Pi_0 - lam sum NNN`` on the charge-``J`` sector, as a real sparse matrix."""
    model, basis = spec.model, spec.basis
    H = sp.csr_matrix((basis.dim, basis.dim))
    for i in range(1, spec.L):
        H = H - build_nn_projector(model, basis, i)
    if spec.lam != 0:
        for i in range(1, spec.L - 1):
            H = H - spec.lam * build_nnn_term(model, basis, i)
    H = H.real.tocsr()
    H.eliminate_zeros()
    return H


# ---------------------------------------------------------------------------
# reflection symmetry


def _left_to_right(model: AnyonModel, jext: int, L: int, J: int):
    """Basis change from the left-nested to the right-nested tree.

    Returns the right-nested label tuples ``(c_1, .., c_{L+1})`` with
    ``c_k`` the charge of anyons ``k..L`` (``c_1 = J``, ``c_{L+1} = 0``) and the
    sparse matrix mapping left-nested coefficients to right-nested ones.
    """
    if L == 1:
        return [(J, 0)], sp.identity(1, format="csr")
    dec = bipartite_decomposition(model, jext, L, 1, J)
    (sector,) = dec.sectors  # A is a single anyon of charge jext
    blocks, right_paths = [], []
    by_beta: dict[int, list[int]] = {}
    for pos, (beta, _) in enumerate(sector.b_states):
        by_beta.setdefault(beta, []).append(pos)
    # the sub-chain in each beta block is ordered like enumerate_basis(L-1, beta)
    order = []
    for beta in sorted(by_beta):
        sub_paths, U = _left_to_right(model, jext, L - 1, beta)
        blocks.append(U)
        right_paths.extend((J,) + c for c in sub_paths)
        order.extend(by_beta[beta])
    sel = sp.csr_matrix((np.ones(len(order)), (np.arange(len(order)), order)), shape=(dec.D, dec.D))
    U = sp.block_diag(blocks, format="csr") @ sel @ dec.transform
    return right_paths, U.tocsr()


def parity_operator(model: AnyonModel, basis: FusionBasis) -> sp.csr_matrix:
    """Reflection ``k -> L+1-k`` of the chain as an orthogonal matrix.

    The left-nested tree is recoupled into the right-nested one by recursive
    F-moves; mirroring a right-nested tree gives back a left-nested tree.
    """
    right_paths, U = _left_to_right(model, basis.jext, basis.L, basis.J)
    perm = [basis.index_of(tuple(reversed(c))) for c in right_paths]
    P = sp.csr_matrix((np.ones(len(perm)), (perm, np.arange(len(perm)))), shape=U.shape)
    R = (P @ U).tocsr()
    if R.dtype.kind == "c":
        if R.nnz and abs(R.imag).max() > 1e-12:
            raise RuntimeError("reflection operator is not real")
        R = R.real.tocsr()
    R.eliminate_zeros()
    return R


def parity_basis(R: sp.spmatrix, parity: int) -> np.ndarray:
    """Orthonormal columns spanning the ``parity`` eigenspace of ``R``."""
    vals, vecs = np.linalg.eigh(R.toarray())
    sel = np.abs(vals - parity) < 1e-8
    return vecs[:, sel]


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class SpectrumResult:
    """Eigenvalues (ascending) and optionally eigenvectors in the standard basis.

    ``parities[m]`` is the reflection sector of level ``m`` (0 when unresolved).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    parities: np.ndarray
    dim: int


def diagonalize(
    H: sp.spmatrix | np.ndarray,
    sector_projector: np.ndarray | None = None,
    vectors: bool = False,
) -> SpectrumResult:
    """Dense spectrum of ``H``, optionally restricted to the range of ``sector_projector``.

    ``sector_projector`` holds orthonormal columns (e.g. from :func:`parity_basis`).
    """
    Hd = H.toarray() if sp.issparse(H) else np.asarray(H)
    if Hd.shape[0] == 0:
        raise ValueError("cannot diagonalize an empty block")
    Q = sector_projector
    block = Hd if Q is None else Q.T.conj() @ Hd @ Q
    if block.shape[0] == 0:
        raise ValueError("sector projector selects an empty block")
    block = 0.5 * (block + block.T.conj())
    if vectors:
        E, V = np.linalg.eigh(block)
        if Q is not None:
            V = Q @ V
        k = min(3, len(E))
        res = np.linalg.norm(Hd @ V[:, :k] - V[:, :k] * E[:k], axis=0).max()
        scale = max(np.abs(Hd).max(), 1.0)
        if res > 1e-8 * scale * Hd.shape[0]:
            raise RuntimeError(f"eigenvector residual {res:.2e} too large")
    else:
        E, V = np.linalg.eigvalsh(block), None
    return SpectrumResult(E, V, np.zeros(len(E), dtype=int), len(E))


def golden_chain_spectrum(spec: GoldenChainSpec, vectors: bool = False) -> SpectrumResult:
    """Spectrum of the chain, resolved by parity.

    With ``spec.parity = None`` both sectors are diagonalized separately and
    merged, so eigenvectors never mix parities at accidental degeneracies.
    """
    H = build_hamiltonian(spec)
    R = parity_operator(spec.model, spec.basis)
    parities = [spec.parity] if spec.parity is not None else [1, -1]
    parts = []
    for par in parities:
        Q = parity_basis(R, par)
        if Q.shape[1] == 0:
            continue
        res = diagonalize(H, Q, vectors=vectors)
        parts.append((par, res))
    if not parts:
        raise ValueError("empty parity sector")
    E = np.concatenate([r.eigenvalues for _, r in parts])
    pars = np.concatenate([np.full(r.dim, p) for p, r in parts])
    order = np.argsort(E, kind="stable")
    V = None
    if vectors:
        V = np.concatenate([r.eigenvectors for _, r in parts], axis=1)[:, order]
    return SpectrumResult(E[order], V, pars[order], len(E))


@dataclass(frozen=True)
class LevelStatistics:
    ratios: np.ndarray  # r_m per level, NaN where undefined
    mean: float
    histogram: np.ndarray
    bin_edges: np.ndarray
    n_dropped: int


def level_spacing_ratios(eigenvalues, bins: int = 20) -> LevelStatistics:
    """Min-ratios of consecutive level spacings.

    ``r[m]`` uses ``s_m = E_m - E_{m-1}`` and ``s_{m+1}``. Ratios touching a
    spacing below ``1e-12`` times the spectral width are dropped (NaN) and
    counted in ``n_dropped``.
    """
    E = np.sort(np.asarray(eigenvalues, dtype=float))
    if len(np.unique(E)) < 3:
        raise ValueError("need at least three distinct levels")
    s = np.diff(E)
    width = E[-1] - E[0]
    small = s < DEGENERATE_SPACING * width
    r = np.full(len(E), np.nan)
    n_dropped = 0
    for m in range(1, len(E) - 1):
        a, b = s[m - 1], s[m]
        if small[m - 1] or small[m]:
            n_dropped += 1
            continue
        r[m] = min(a / b, b / a)
    valid = r[~np.isnan(r)]
    if not len(valid):
        raise ValueError("all spacings are degenerate")
    hist, edges = np.histogram(valid, bins=bins, range=(0.0, 1.0), density=True)
    return LevelStatistics(r, float(valid.mean()), hist, edges, n_dropped)


def reference_ratio_pdfs(r, caption_variant: bool = False) -> dict[str, np.ndarray]:
    """GOE and Poisson densities of the min-ratio on ``[0, 1]``.

    The Poisson density is ``2/(1+r)^2``; ``caption_variant=True`` returns the
    misprinted form ``2/(1+r^2)`` instead (not normalized on ``[0, 1]``).
    """
    r = np.asarray(r, dtype=float)
    if np.any((r < 0) | (r > 1)):
        raise ValueError("r must lie in [0, 1]")
    goe = 27 / 4 * (r + r**2) / (1 + r + r**2) ** 2.5
    poisson = 2 / (1 + r**2) if caption_variant else 2 / (1 + r) ** 2
    return {"goe": goe, "poisson": poisson}


# ---------------------------------------------------------------------------
# eigenstate entanglement


def default_window(dim: int) -> int:
    return min(2000, math.ceil(dim / 3))


def central_window(n: int, W: int | None) -> slice:
    """Central ``W`` levels by rank; ``W`` larger than ``n`` is clipped."""
    W = default_window(n) if W is None else W
    if W > n:
        warnings.warn(f"window {W} exceeds block dimension {n}; clipped", stacklevel=3)
        W = n
    if W < 1:
        raise ValueError("window must contain at least one state")
    start = (n - W) // 2
    return slice(start, start + W)


_AEE_CHUNK = 64


def _eigenstate_aee(decomp, V: np.ndarray, threads: int) -> np.ndarray:
    """AEE of every column of ``V``.

    Columns are processed in fixed-size chunks so the floating-point result
    does not depend on how many threads share the work.
    """
    psi = decomp.to_bipartite(V)
    starts = range(0, psi.shape[1], _AEE_CHUNK)
    work = lambda a: batch_aee(decomp, psi[:, a : a + _AEE_CHUNK])  # noqa: E731
    if threads == 1 or len(starts) == 1:
        return np.concatenate([work(a) for a in starts])
    with ThreadPoolExecutor(threads) as pool:
        return np.concatenate(list(pool.map(work, starts)))


@dataclass(frozen=True)
class AEECurve:
    LA: np.ndarray
    f: np.ndarray
    mean_aee: np.ndarray
    n_states: int
    analytic_exact: np.ndarray
    analytic_asymptotic: np.ndarray


def eigenstate_aee_curve(
    spec: GoldenChainSpec,
    window: int | None = None,
    LA_list=None,
    threads: int | None = None,
    spectrum: SpectrumResult | None = None,
) -> AEECurve:
    """Mean AEE of the central eigenstates for each cut ``LA``, next to the Haar values."""
    threads = threads or _default_threads()
    spectrum = spectrum or golden_chain_spectrum(spec, vectors=True)
    win = central_window(spectrum.dim, window)
    V = spectrum.eigenvectors[:, win]
    LA_list = list(range(1, spec.L)) if LA_list is None else [int(x) for x in LA_list]
    means, exact, asym = [], [], []
    for LA in LA_list:
        dec = bipartite_decomposition(spec.model, spec.jext, spec.L, LA, spec.J)
        means.append(float(np.mean(_eigenstate_aee(dec, V, threads))))
        exact.append(exact_average_aee(sector_dims(spec.model, spec.jext, spec.L, LA, spec.J)))
        asym.append(asymptotic_aee(spec.model, spec.jext, spec.J, spec.L, LA / spec.L))
    LA_arr = np.array(LA_list)
    return AEECurve(LA_arr, LA_arr / spec.L, np.array(means), V.shape[1], np.array(exact), np.array(asym))


def asymmetry_curve(
    spec: GoldenChainSpec,
    LA_list=None,
    window: int | None = None,
    threads: int | None = None,
    spectrum: SpectrumResult | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """``Delta(f) = |<S>(f) - <S>(1-f)|`` over the central eigenstates.

    Returns ``(f, Delta)`` for each requested ``LA`` (default ``1 .. L//2``).
    """
    L = spec.L
    LA_list = list(range(1, L // 2 + 1)) if LA_list is None else [int(x) for x in LA_list]
    needed = sorted(set(LA_list) | {L - x for x in LA_list})
    curve = eigenstate_aee_curve(spec, window, needed, threads, spectrum)
    lookup = dict(zip(curve.LA.tolist(), curve.mean_aee))
    delta = np.array([abs(lookup[x] - lookup[L - x]) for x in LA_list])
    return np.array(LA_list) / L, delta


@dataclass(frozen=True)
class FiniteSizeFit:
    a: float
    b: float
    rms_residual: float


def finite_size_fit(L_values, ratios) -> FiniteSizeFit:
    """Least-squares fit of ``ratio(L) = 1 + a/L + b/L**2``.

    Reported as is; nothing is assumed about the quality of the fit. With
    exactly two points the fit is an interpolation.
    """
    L = np.asarray(L_values, dtype=float)
    y = np.asarray(ratios, dtype=float) - 1.0
    if L.size < 2 or L.size != y.size:
        raise ValueError("need at least two (L, ratio) pairs of equal length")
    A = np.column_stack([1.0 / L, 1.0 / L**2])
    (a, b), *_ = np.linalg.lstsq(A, y, rcond=None)
    res = A @ np.array([a, b]) - y
    return FiniteSizeFit(float(a), float(b), float(np.sqrt(np.mean(res**2))))


def half_chain_ratio(L: int, lam: float, J="0", parity: int | None = 1, window: int | None = None,
                     threads: int | None = None) -> float:
    """Mean half-chain eigenstate AEE divided by the exact Haar average (even ``L``)."""
    curve = eigenstate_aee_curve(GoldenChainSpec(L, lam, J, parity), window, [L // 2], threads)
    return float(curve.mean_aee[0] / curve.analytic_exact[0])
