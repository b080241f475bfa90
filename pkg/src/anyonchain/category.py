"""Category data for multiplicity-free anyon models.

An :class:`AnyonModel` bundles the fusion rules, quantum dimensions,
F-symbols, R-symbols and (optionally) the modular S-matrix of a unitary
(pre)modular category. Labels are integer indices ``0..n-1`` with index 0
the vacuum; for SU(2)_k the index of spin ``j`` is the doubled spin ``2j``.

F-symbols are stored as a dense array ``F[a, b, c, d, e, f]`` holding
:math:`(F^{abc}_d)_{ef}`, where ``e`` is the intermediate charge of ``a x b``
and ``f`` the intermediate charge of ``b x c``. Entries outside the
admissible set are exactly zero. R-symbols are stored as ``R[a, b, c]``
holding :math:`R^{ab}_c`.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .constants import ACCEPT_TOL


class LabeledMatrix(NamedTuple):
    """A small matrix together with the charge labels of its rows and columns."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    data: np.ndarray


@dataclass(frozen=True, eq=False)
class AnyonModel:
    name: str
    labels: tuple[str, ...]
    dual: np.ndarray
    fusion: np.ndarray
    qdim: np.ndarray
    F: np.ndarray
    R: np.ndarray
    s_matrix: np.ndarray | None = None
    params: dict = field(default_factory=dict)

    vacuum = 0

    def __post_init__(self):
        for arr in (self.dual, self.fusion, self.qdim, self.F, self.R, self.s_matrix):
            if arr is not None:
                arr.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def total_qdim(self) -> float:
        return float(np.sqrt(np.sum(self.qdim**2)))

    @property
    def is_modular(self) -> bool:
        return self.s_matrix is not None

    @property
    def fingerprint(self) -> str:
        h = hashlib.sha1(self.name.encode())
        for arr in (self.fusion, self.F, self.R):
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()

    def index(self, label) -> int:
        """Resolve a label given either as an index or as its display name."""
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.n:
                raise ValueError(f"label index {label} out of range for {self.name}")
            return int(label)
        label = str(label)
        if label in self.labels:
            return self.labels.index(label)
        raise ValueError(f"unknown label {label!r} for {self.name}; labels are {self.labels}")

    def fusion_matrix(self, a) -> np.ndarray:
        """Integer matrix ``(N_a)_{bc} = N_{ab}^c``."""
        return np.asarray(self.fusion[self.index(a)], dtype=np.int64)

    def products(self, a: int, b: int) -> list[int]:
        """Charges ``c`` with ``N_{ab}^c = 1``."""
        return [int(c) for c in np.flatnonzero(self.fusion[a, b])]

    def f_matrix(self, a: int, b: int, c: int, d: int) -> LabeledMatrix:
        """The recoupling matrix :math:`F^{abc}_d` on its admissible labels."""
        N = self.fusion
        rows = tuple(e for e in range(self.n) if N[a, b, e] and N[e, c, d])
        cols = tuple(f for f in range(self.n) if N[b, c, f] and N[a, f, d])
        return LabeledMatrix(rows, cols, self.F[a, b, c, d][np.ix_(rows, cols)])

    def __repr__(self):
        return f"AnyonModel({self.name}, labels={self.labels})"


# ---------------------------------------------------------------------------
# constructors


def _spin_name(twice_j: int) -> str:
    return str(Fraction(twice_j, 2))


def su2k_s_matrix(k: int) -> np.ndarray:
    a = np.arange(k + 1)
    return np.sqrt(2.0 / (k + 2)) * np.sin(np.outer(a + 1, a + 1) * np.pi / (k + 2))


def _su2k_fusion(k: int) -> np.ndarray:
    n = k + 1
    N = np.zeros((n, n, n), dtype=np.int8)
    for a in range(n):
        for b in range(n):
            for c in range(abs(a - b), min(a + b, 2 * k - a - b) + 1, 2):
                N[a, b, c] = 1
    return N


class _QFactorial:
    """q-factorials ``[m]!`` at ``q = exp(2 pi i / (k+2))``; zero once ``m >= k+2``."""

    def __init__(self, k: int):
        theta = np.pi / (k + 2)
        vals = [1.0]
        for m in range(1, 4 * k + 8):
            vals.append(vals[-1] * np.sin(m * theta) / np.sin(theta) if m < k + 2 else 0.0)
        self._vals = vals

    def __call__(self, m: int) -> float:
        return self._vals[m]


def _sign(m: int) -> int:
    return -1 if m % 2 else 1


def _q6j(A, B, C, D, E, G, qf: _QFactorial) -> float:
    """q-Racah 6j symbol ``{a b c; d e g}`` with all arguments doubled spins."""

    def delta(x, y, z):
        return np.sqrt(
            qf((x + y - z) // 2) * qf((x - y + z) // 2) * qf((-x + y + z) // 2) / qf((x + y + z) // 2 + 1)
        )

    tri = [(A, B, C), (A, E, G), (D, B, G), (D, E, C)]
    lo = max(sum(t) for t in tri) // 2
    hi = min(A + B + D + E, B + C + E + G, C + A + G + D) // 2
    total = 0.0
    for z in range(lo, hi + 1):
        num = qf(z + 1)
        if num == 0.0:
            continue
        den = 1.0
        for t in tri:
            den *= qf(z - sum(t) // 2)
        den *= qf((A + B + D + E) // 2 - z) * qf((B + C + E + G) // 2 - z) * qf((C + A + G + D) // 2 - z)
        total += _sign(z) * num / den
    return total * delta(A, B, C) * delta(A, E, G) * delta(D, B, G) * delta(D, E, C)


def build_su2k(k: int) -> AnyonModel:
    """SU(2)_k anyons with spins ``0, 1/2, ..., k/2`` (label index = doubled spin).

    F-symbols are the unitary q-6j symbols
    ``(F^{abc}_d)_{ef} = (-1)^{a+b+c+d} sqrt([2e+1][2f+1]) {a b e; c d f}_q``
    and R-symbols ``R^{ab}_c = (-1)^{c-a-b} q^{(c(c+1)-a(a+1)-b(b+1))/2}`` with
    ``q = exp(2 pi i/(k+2))``. ``k = 0`` gives the trivial one-object model.
    """
    if k < 0:
        raise ValueError("level k must be nonnegative")
    n = k + 1
    N = _su2k_fusion(k)
    qf = _QFactorial(k)
    theta = np.pi / (k + 2)
    qint = np.sin((np.arange(n) + 1) * theta) / np.sin(theta)

    F = np.zeros((n,) * 6, dtype=complex)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    for e in np.flatnonzero(N[a, b]):
                        if not N[e, c, d]:
                            continue
                        for f in np.flatnonzero(N[b, c]):
                            if not N[a, f, d]:
                                continue
                            sign = _sign((a + b + c + d) // 2)
                            F[a, b, c, d, e, f] = (
                                sign * np.sqrt(qint[e] * qint[f]) * _q6j(a, b, e, c, d, f, qf)
                            )

    R = np.zeros((n, n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            for c in np.flatnonzero(N[a, b]):
                casimir = (c * (c + 2) - a * (a + 2) - b * (b + 2)) / 4  # j(j+1) in doubled units
                R[a, b, c] = _sign((c - a - b) // 2) * np.exp(2j * np.pi * casimir / (2 * (k + 2)))

    S = su2k_s_matrix(k)
    return AnyonModel(
        name=f"SU(2)_{k}",
        labels=tuple(_spin_name(m) for m in range(n)),
        dual=np.arange(n),
        fusion=N,
        qdim=S[0] / S[0, 0],
        F=F,
        R=R,
        s_matrix=S,
        params={"family": "su2k", "k": k},
    )


def build_fibonacci() -> AnyonModel:
    """Fibonacci anyons ``{0, tau}`` with ``tau x tau = 0 + tau``."""
    phi = (1 + np.sqrt(5)) / 2
    N = np.zeros((2, 2, 2), dtype=np.int8)
    N[0, 0, 0] = N[0, 1, 1] = N[1, 0, 1] = N[1, 1, 0] = N[1, 1, 1] = 1

    F = np.zeros((2,) * 6, dtype=complex)
    for a, b, c, d in np.ndindex(2, 2, 2, 2):
        for e in range(2):
            for f in range(2):
                if N[a, b, e] and N[e, c, d] and N[b, c, f] and N[a, f, d]:
                    F[a, b, c, d, e, f] = 1.0
    F[1, 1, 1, 1] = [[1 / phi, 1 / np.sqrt(phi)], [1 / np.sqrt(phi), -1 / phi]]

    R = np.zeros((2, 2, 2), dtype=complex)
    R[0, 0, 0] = R[0, 1, 1] = R[1, 0, 1] = 1.0
    R[1, 1, 0] = np.exp(-4j * np.pi / 5)
    R[1, 1, 1] = np.exp(3j * np.pi / 5)

    D = np.sqrt(1 + phi**2)
    S = np.array([[1.0, phi], [phi, -1.0]]) / D
    return AnyonModel(
        name="Fibonacci",
        labels=("0", "tau"),
        dual=np.arange(2),
        fusion=N,
        qdim=np.array([1.0, phi]),
        F=F,
        R=R,
        s_matrix=S,
        params={"family": "fibonacci"},
    )


def build_abelian_zn(n: int) -> AnyonModel:
    """Abelian Z_n anyons with trivial F-symbols and bicharacter braiding.

    ``R^{ab}_{a+b} = exp(2 pi i ab / n)``; the attached S-matrix is the
    character table ``exp(-2 pi i ab / n) / sqrt(n)`` of the fusion ring.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    a = np.arange(n)
    N = np.zeros((n, n, n), dtype=np.int8)
    N[a[:, None], a[None, :], (a[:, None] + a[None, :]) % n] = 1

    F = np.zeros((n,) * 6, dtype=complex)
    for x, y, z in np.ndindex(n, n, n):
        F[x, y, z, (x + y + z) % n, (x + y) % n, (y + z) % n] = 1.0
    R = np.zeros((n, n, n), dtype=complex)
    R[a[:, None], a[None, :], (a[:, None] + a[None, :]) % n] = np.exp(2j * np.pi * np.outer(a, a) / n)

    return AnyonModel(
        name=f"Z_{n}",
        labels=tuple(str(x) for x in range(n)),
        dual=(-a) % n,
        fusion=N,
        qdim=np.ones(n),
        F=F,
        R=R,
        s_matrix=np.exp(-2j * np.pi * np.outer(a, a) / n) / np.sqrt(n),
        params={"family": "zn", "n": n},
    )


def build_model(family: str, **kwargs) -> AnyonModel:
    """Dispatch on a family name: ``su2k`` (needs ``k``), ``fibonacci``, ``zn`` (needs ``n``)."""
    family = family.lower()
    if family == "su2k":
        return build_su2k(int(kwargs["k"]))
    if family == "fibonacci":
        return build_fibonacci()
    if family == "zn":
        return build_abelian_zn(int(kwargs["n"]))
    raise ValueError(f"unknown model family {family!r}")


def conjugate_braiding(model: AnyonModel) -> AnyonModel:
    """The mirror-image theory: all R-symbols (and S) complex conjugated."""
    return AnyonModel(
        name=model.name + "*",
        labels=model.labels,
        dual=model.dual.copy(),
        fusion=model.fusion.copy(),
        qdim=model.qdim.copy(),
        F=model.F.copy(),
        R=model.R.conj(),
        s_matrix=None if model.s_matrix is None else model.s_matrix.conj(),
        params=dict(model.params, chirality=-model.params.get("chirality", 1)),
    )


# ---------------------------------------------------------------------------
# braiding


def braid_matrix(model: AnyonModel, a, b, c, d, inverse: bool = False) -> LabeledMatrix:
    r"""Braid of the two legs ``b, c`` attached after charge ``a`` with total ``d``.

    :math:`(B^{abc}_d)_{ef} = \sum_g (F^{acb}_d)_{eg} R^{cb}_g [(F^{abc}_d)^{-1}]_{gf}`.
    Rows are labelled by ``e`` in ``a x c``, columns by ``f`` in ``a x b``. With
    ``inverse=True`` the reversed crossing is returned, ``(B^{-1})_{fe} = conj(B_{ef})``.
    """
    a, b, c, d = (model.index(x) for x in (a, b, c, d))
    F1 = model.f_matrix(a, c, b, d)
    F2 = model.f_matrix(a, b, c, d)
    if not F1.rows or not F2.rows:
        raise ValueError(f"inadmissible braid labels {(a, b, c, d)} in {model.name}")
    if F1.cols != F2.cols:
        raise ValueError("inconsistent F-matrix labels")
    rphase = np.array([model.R[c, b, g] for g in F1.cols])
    B = F1.data @ np.diag(rphase) @ np.linalg.inv(F2.data)
    if inverse:
        return LabeledMatrix(F2.rows, F1.rows, B.conj().T)
    return LabeledMatrix(F1.rows, F2.rows, B)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    """Maximal residual of each axiom; ``valid`` iff all are below ``tol``."""

    pentagon: float
    hexagon: float
    f_unitarity: float
    verlinde: float
    qdim: float
    tol: float = ACCEPT_TOL

    @property
    def residuals(self) -> dict[str, float]:
        return {
            "pentagon": self.pentagon,
            "hexagon": self.hexagon,
            "f_unitarity": self.f_unitarity,
            "verlinde": self.verlinde,
            "qdim": self.qdim,
        }

    @property
    def valid(self) -> bool:
        return all(v < self.tol for v in self.residuals.values())

    def __str__(self):
        lines = [f"{k:12s} {v:.3e}" for k, v in self.residuals.items()]
        lines.append(f"valid: {self.valid}")
        return "\n".join(lines)


def pentagon_residual(model: AnyonModel) -> float:
    """Max deviation of the pentagon equation over all admissible label tuples.

    For a four-leg tree ``a, b, c, d -> e`` checks
    ``F[f,c,d,e,g,l] F[a,b,l,e,f,k] = sum_h F[a,b,c,g,f,h] F[a,h,d,e,g,k] F[b,c,d,k,h,l]``.
    """
    N, F, n = model.fusion, model.F, model.n
    worst = 0.0
    for a, b, c, d, e in np.ndindex(n, n, n, n, n):
        left = [(f, g) for f in range(n) if N[a, b, f] for g in range(n) if N[f, c, g] and N[g, d, e]]
        right = [(k, l) for l in range(n) if N[c, d, l] for k in range(n) if N[b, l, k] and N[a, k, e]]
        if not left and not right:
            continue
        f, g = (np.array(x)[:, None] for x in zip(*left)) if left else (np.zeros((0, 1), int),) * 2
        k, l = (np.array(x)[None, :] for x in zip(*right)) if right else (np.zeros((1, 0), int),) * 2
        lhs = F[f, c, d, e, g, l] * F[a, b, l, e, f, k]
        h = np.arange(n)[:, None, None]
        rhs = np.sum(F[a, b, c, g, f, h] * F[a, h, d, e, g, k] * F[b, c, d, k, h, l], axis=0)
        if lhs.size:
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def hexagon_residual(model: AnyonModel) -> float:
    """Max deviation of both hexagon equations (for ``R`` and ``R^{-1}``)."""
    F, N = model.F, model.fusion
    worst = 0.0
    # second hexagon: R^{xy}_z -> (R^{yx}_z)^{-1}
    for R in (model.R, np.where(N > 0, model.R.transpose(1, 0, 2).conj(), 0)):
        lhs = np.einsum("cae,acbdeg,cbg->abcdeg", R, F, R)
        rhs = np.einsum("cabdef,cfd,abcdfg->abcdeg", F, R, F)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def f_unitarity_residual(model: AnyonModel) -> float:
    worst = 0.0
    n = model.n
    for a, b, c, d in np.ndindex(n, n, n, n):
        M = model.f_matrix(a, b, c, d)
        if len(M.rows) != len(M.cols):
            return np.inf
        if M.rows:
            worst = max(worst, float(np.max(np.abs(M.data @ M.data.conj().T - np.eye(len(M.rows))))))
    return worst


def verlinde_residual(model: AnyonModel) -> float:
    """Deviation of S from symmetric-unitary plus the Verlinde reconstruction of N."""
    if model.s_matrix is None:
        return 0.0
    S = model.s_matrix
    n = model.n
    res = max(
        float(np.max(np.abs(S - S.T))),
        float(np.max(np.abs(S @ S.conj().T - np.eye(n)))),
    )
    Nv = np.einsum("ax,bx,cx,x->abc", S, S, S.conj(), 1 / S[0])
    return max(res, float(np.max(np.abs(Nv - model.fusion))))


def qdim_residual(model: AnyonModel) -> float:
    worst = 0.0
    for a in range(model.n):
        lead = np.max(np.linalg.eigvals(model.fusion_matrix(a).astype(float)).real)
        worst = max(worst, abs(lead - model.qdim[a]))
    return worst


def validate(model: AnyonModel, tol: float = ACCEPT_TOL) -> ValidationReport:
    return ValidationReport(
        pentagon=pentagon_residual(model),
        hexagon=hexagon_residual(model),
        f_unitarity=f_unitarity_residual(model),
        verlinde=verlinde_residual(model),
        qdim=qdim_residual(model),
        tol=tol,
    )


# ---------------------------------------------------------------------------
# serialization


def dump_model(model: AnyonModel) -> str:
    """JSON document with labels, fusion triples and sparse F/R records.

    Floats are written with Python's shortest round-trip repr, so
    :func:`load_model` reproduces every entry bit for bit.
    """
    F_records = [
        [*map(int, idx), float(model.F[idx].real), float(model.F[idx].imag)]
        for idx in zip(*np.nonzero(model.F))
    ]
    R_records = [
        [*map(int, idx), float(model.R[idx].real), float(model.R[idx].imag)]
        for idx in zip(*np.nonzero(model.R))
    ]
    doc = {
        "name": model.name,
        "params": model.params,
        "labels": list(model.labels),
        "dual": [int(x) for x in model.dual],
        "fusion": [list(map(int, t)) for t in zip(*np.nonzero(model.fusion))],
        "qdim": [float(x) for x in model.qdim],
        "F": F_records,
        "R": R_records,
        "S": None
        if model.s_matrix is None
        else [[[float(z.real), float(z.imag)] for z in row] for row in model.s_matrix],
    }
    return json.dumps(doc)


def load_model(text: str) -> AnyonModel:
    doc = json.loads(text)
    n = len(doc["labels"])
    N = np.zeros((n, n, n), dtype=np.int8)
    for a, b, c in doc["fusion"]:
        N[a, b, c] = 1
    F = np.zeros((n,) * 6, dtype=complex)
    for *idx, re, im in doc["F"]:
        F[tuple(idx)] = complex(re, im)
    R = np.zeros((n,) * 3, dtype=complex)
    for *idx, re, im in doc["R"]:
        R[tuple(idx)] = complex(re, im)
    S = None
    if doc["S"] is not None:
        S = np.array([[complex(re, im) for re, im in row] for row in doc["S"]])
    return AnyonModel(
        name=doc["name"],
        labels=tuple(doc["labels"]),
        dual=np.array(doc["dual"]),
        fusion=N,
        qdim=np.array(doc["qdim"]),
        F=F,
        R=R,
        s_matrix=S,
        params=doc["params"],
    )
