"""Fusion-tree bases, fusion-space dimensions and the bipartite basis change.

A chain of ``L`` identical anyons of charge ``jext`` with total charge ``J``
has the standard (left-nested) basis of label paths
``x_0 = 0, x_1 = jext, x_2, ..., x_L = J`` with ``N_{x_i jext}^{x_{i+1}} = 1``.
Paths are stored with ``x_0`` included and ordered lexicographically in the
label indices (doubled spins for SU(2)_k).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .category import AnyonModel


class UnsupportedOperation(Exception):
    """Raised when an operation needs modular data the model does not carry."""


@dataclass(frozen=True, eq=False)
class FusionBasis:
    model: AnyonModel
    jext: int
    L: int
    J: int
    paths: np.ndarray  # shape (dim, L + 1), columns x_0 .. x_L

    def __len__(self):
        return self.paths.shape[0]

    @property
    def dim(self) -> int:
        return self.paths.shape[0]

    @property
    def intermediates(self) -> np.ndarray:
        """The free labels ``x_2 .. x_{L-1}`` of every path."""
        return self.paths[:, 2 : self.L]

    @cached_property
    def _lookup(self) -> dict[tuple, int]:
        return {tuple(p): i for i, p in enumerate(self.paths.tolist())}

    def index_of(self, path) -> int:
        """Index of a path given as the full label vector ``x_0 .. x_L``."""
        return self._lookup[tuple(int(x) for x in path)]


def _reachable(model: AnyonModel, jext: int, steps: int, J: int) -> np.ndarray:
    """``ok[r, x]``: charge ``x`` can reach ``J`` by fusing ``r`` more ``jext`` anyons."""
    Nj = model.fusion[jext] > 0  # Nj[x, y]: x (x) jext -> y
    ok = np.zeros((steps + 1, model.n), dtype=bool)
    ok[0, J] = True
    for r in range(1, steps + 1):
        ok[r] = (Nj & ok[r - 1][None, :]).any(axis=1)
    return ok


def enumerate_basis(model: AnyonModel, jext, L: int, J) -> FusionBasis:
    """All admissible fusion paths of ``L`` anyons ``jext`` with total charge ``J``.

    A disallowed total charge gives an empty basis, not an error.
    """
    if L < 1:
        raise ValueError("chain length must be at least 1")
    jext, J = model.index(jext), model.index(J)
    ok = _reachable(model, jext, L, J)
    Nj = model.fusion[jext]
    paths = []
    prefix = [0]

    def extend(x, remaining):
        if remaining == 0:
            paths.append(list(prefix))
            return
        for y in np.flatnonzero(Nj[x]):
            if ok[remaining - 1, y]:
                prefix.append(int(y))
                extend(int(y), remaining - 1)
                prefix.pop()

    if ok[L, 0]:
        extend(0, L)
    arr = np.array(paths, dtype=np.int64).reshape(len(paths), L + 1)
    return FusionBasis(model, jext, L, J, arr)


def _int_power_row(model: AnyonModel, jext: int, L: int, start: int) -> list[int]:
    """Row ``start`` of ``N_jext^L`` in exact integer arithmetic."""
    Nj = model.fusion[jext].astype(int).tolist()
    n = model.n
    row = [0] * n
    row[start] = 1
    for _ in range(L):
        row = [sum(row[x] * Nj[x][y] for x in range(n)) for y in range(n)]
    return row


def dim_bruteforce(model: AnyonModel, jext, L: int, J) -> int:
    """``(N_jext^L)_{0J}`` by exact integer matrix powers."""
    jext, J = model.index(jext), model.index(J)
    return _int_power_row(model, jext, L, 0)[J]


def dim_verlinde(model: AnyonModel, jext, L: int, J) -> float:
    """``sum_j S_0j conj(S_Jj) (S_{jext j}/S_0j)^L``, real up to rounding."""
    if model.s_matrix is None:
        raise UnsupportedOperation(f"{model.name} carries no S-matrix")
    jext, J = model.index(jext), model.index(J)
    S = model.s_matrix
    lam = S[jext] / S[0]
    return float(np.real(np.sum(S[0] * S[J].conj() * lam**L)))


@dataclass(frozen=True)
class TorusDims:
    """Fusion-space dimensions of ``L`` anyons on a torus.

    ``subsystem[x1, gamma]`` is the dimension of a length-``LC`` segment entering
    with label ``x1`` and leaving with charge ``gamma``.
    """

    total: int
    total_verlinde: float
    LC: int
    subsystem: np.ndarray
    subsystem_verlinde: np.ndarray


def torus_dims(model: AnyonModel, jext, L: int, LC: int | None = None) -> TorusDims:
    if model.s_matrix is None:
        raise UnsupportedOperation(f"{model.name} carries no S-matrix")
    jext = model.index(jext)
    LC = L if LC is None else LC
    n = model.n
    full = [_int_power_row(model, jext, L, x) for x in range(n)]
    sub = np.array([_int_power_row(model, jext, LC, x) for x in range(n)], dtype=object)
    S = model.s_matrix
    lam = S[jext] / S[0]
    sub_v = np.real(np.einsum("xj,gj,j->xg", S, S.conj(), lam**LC))
    return TorusDims(
        total=sum(full[x][x] for x in range(n)),
        total_verlinde=float(np.real(np.sum(lam**L))),
        LC=LC,
        subsystem=sub,
        subsystem_verlinde=sub_v,
    )


# ---------------------------------------------------------------------------
# bipartite basis


@dataclass(frozen=True)
class Sector:
    """One charge sector ``alpha`` of subsystem A.

    ``a_paths`` are the A-side paths (``x_0 .. x_{LA}``); ``b_states`` pairs each
    B-side path (``y_0 .. y_{LB}``) with its B charge ``beta = y_{LB}``.
    """

    alpha: int
    m: int
    n: int
    offset: int
    a_paths: np.ndarray
    b_states: list[tuple[int, tuple[int, ...]]]


@dataclass(frozen=True, eq=False)
class BipartiteDecomposition:
    """Sector structure of ``V^J`` across the cut after ``LA`` sites.

    ``transform`` maps standard-basis coefficients to bipartite-basis
    coefficients; in the latter the sector ``alpha`` occupies the slice
    ``offset : offset + m*n`` and reshapes row-major to the ``(m, n)`` matrix
    ``Psi[x, (beta, y)]``.
    """

    model: AnyonModel
    jext: int
    L: int
    LA: int
    J: int
    sectors: list[Sector]
    transform: sp.csr_matrix = field(repr=False)

    @property
    def LB(self) -> int:
        return self.L - self.LA

    @property
    def D(self) -> int:
        return sum(s.m * s.n for s in self.sectors)

    @property
    def f(self) -> float:
        return self.LA / self.L

    def sector_table(self) -> list[tuple[int, int, int]]:
        return [(s.alpha, s.m, s.n) for s in self.sectors]

    def blocks(self, psi_bip: np.ndarray) -> list[np.ndarray]:
        """Split bipartite coefficients (shape ``(D, ...)``) into per-sector ``(m, n, ...)`` blocks."""
        return [
            psi_bip[s.offset : s.offset + s.m * s.n].reshape((s.m, s.n) + psi_bip.shape[1:])
            for s in self.sectors
        ]

    def to_bipartite(self, psi_std: np.ndarray) -> np.ndarray:
        return self.transform @ psi_std

    def to_standard(self, psi_bip: np.ndarray) -> np.ndarray:
        return self.transform.conj().T @ psi_bip


def _fmove_stage(model, jext, keys, dtype):
    """One F-move absorbing the next B anyon into the B subtree.

    A key is ``(xA, y, z, rest)`` flattened: the A path, the B-subtree path, the
    charge ``z`` of ``alpha (x) Y`` and the untouched trailing labels.
    """
    F, N = model.F, model.fusion
    out_index: dict[tuple, int] = {}
    rows, cols, vals = [], [], []
    for col, (xa, y, z, rest) in enumerate(keys):
        alpha, yt, w = xa[-1], y[-1], rest[0]
        for y_new in np.flatnonzero(N[yt, jext]):
            if not N[alpha, y_new, w]:
                continue
            amp = F[alpha, yt, jext, w, z, y_new]
            if amp == 0:
                continue
            key = (xa, y + (int(y_new),), w, rest[1:])
            row = out_index.setdefault(key, len(out_index))
            rows.append(row)
            cols.append(col)
            vals.append(amp)
    new_keys = [None] * len(out_index)
    for key, i in out_index.items():
        new_keys[i] = key
    vals = np.array(vals) if dtype is complex else np.real(vals)
    M = sp.csr_matrix((vals, (rows, cols)), shape=(len(new_keys), len(keys)))
    return new_keys, M


_DECOMP_CACHE: dict[tuple, BipartiteDecomposition] = {}


def bipartite_decomposition(model: AnyonModel, jext, L: int, LA: int, J) -> BipartiteDecomposition:
    """Sector dimensions and the unitary standard -> bipartite basis change.

    The bipartite basis fuses the first ``LA`` anyons into a left-nested tree of
    charge ``alpha``, the remaining ``LB`` into a left-nested tree of charge
    ``beta``, and then ``alpha (x) beta -> J``. It is reached from the standard
    basis by ``LB - 1`` F-moves ``F^{alpha, y_t, jext}_{w}``. ``LA = L`` is
    allowed and gives the trivial bipartition with an empty B side.
    """
    jext, J = model.index(jext), model.index(J)
    if not 1 <= LA <= L:
        raise ValueError(f"need 1 <= LA <= L, got LA={LA}, L={L}")
    key = (model.fingerprint, jext, L, LA, J)
    if key in _DECOMP_CACHE:
        return _DECOMP_CACHE[key]

    LB = L - LA
    std = enumerate_basis(model, jext, L, J)
    N = model.fusion

    sectors = []
    offset = 0
    for alpha in range(model.n):
        a_paths = enumerate_basis(model, jext, LA, alpha).paths
        if not len(a_paths):
            continue
        b_states = []
        for beta in range(model.n):
            if not N[alpha, beta, J]:
                continue
            if LB == 0:
                if beta == 0:
                    b_states.append((0, (0,)))
                continue
            for y in enumerate_basis(model, jext, LB, beta).paths.tolist():
                b_states.append((beta, tuple(y)))
        if not b_states:
            continue
        sectors.append(Sector(alpha, len(a_paths), len(b_states), offset, a_paths, b_states))
        offset += len(a_paths) * len(b_states)

    D = len(std)
    if D == 0:
        decomp = BipartiteDecomposition(model, jext, L, LA, J, [], sp.csr_matrix((0, 0)))
        _DECOMP_CACHE[key] = decomp
        return decomp
    if offset != D:
        raise RuntimeError(f"sector dimensions sum to {offset}, expected {D}")

    # final bipartite index of (xA, yB) pairs
    final_index = {}
    for s in sectors:
        for i, xa in enumerate(s.a_paths.tolist()):
            for j, (_, y) in enumerate(s.b_states):
                final_index[(tuple(xa), y)] = s.offset + i * s.n + j

    dtype = complex if np.any(model.F.imag) else float
    if LB == 0:
        perm = [final_index[(tuple(p), (0,))] for p in std.paths.tolist()]
        T = sp.csr_matrix((np.ones(D, dtype=dtype), (perm, np.arange(D))), shape=(D, D))
    else:
        keys = [
            (tuple(p[: LA + 1]), (0, jext), p[LA + 1], tuple(p[LA + 2 :]))
            for p in std.paths.tolist()
        ]
        T = sp.identity(D, dtype=dtype, format="csr")
        for _ in range(LB - 1):
            keys, M = _fmove_stage(model, jext, keys, dtype)
            T = (M @ T).tocsr()
        perm = [final_index[(xa, y)] for xa, y, _, _ in keys]
        P = sp.csr_matrix((np.ones(D), (perm, np.arange(D))), shape=(D, D))
        T = (P @ T).tocsr()
    T.eliminate_zeros()
    decomp = BipartiteDecomposition(model, jext, L, LA, J, sectors, T)
    _DECOMP_CACHE[key] = decomp
    return decomp


def clear_cache():
    _DECOMP_CACHE.clear()
