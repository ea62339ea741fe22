"""Dense Hermitian linear algebra for the simulator.

The eigensolver is a cyclic complex Jacobi method: each rotation first
removes the phase of the pivot ``a_pq`` with a diagonal unitary, then applies
the real symmetric Jacobi rotation that annihilates it.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericalError, SingularMatrixError

MAX_SWEEPS = 30
MAX_DIM = 512


@dataclass(frozen=True)
class HermitianMatrix:
    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise InputError(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InputError("matrix has non-finite entries")
        if not np.array_equal(a, a.conj().T):
            raise InputError("matrix is not exactly Hermitian")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def symmetrized(cls, a) -> "HermitianMatrix":
        """Build from a nearly Hermitian array via ``(A + A^H)/2`` (exactly Hermitian)."""
        a = np.asarray(a, dtype=complex)
        return cls(0.5 * (a + a.conj().T))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def max_abs_entry(self) -> float:
        return float(np.max(np.abs(self.entries)))


@dataclass(frozen=True)
class Eigendecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns
    residual: float
    orthonormality_defect: float
    sweeps: int = 0

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def projector(self, indices) -> np.ndarray:
        v = self.eigenvectors[:, list(indices)]
        return v @ v.conj().T


@dataclass(frozen=True)
class InputVector:
    """Unit vector ``b`` with its eigen-expansion coefficients ``beta``."""

    b: np.ndarray
    beta: np.ndarray = field(default=None)

    @classmethod
    def from_raw(cls, b, decomp: Eigendecomposition | None = None) -> "InputVector":
        b = np.asarray(b, dtype=complex).ravel()
        if not np.all(np.isfinite(b)):
            raise InputError("vector has non-finite entries")
        nrm = np.linalg.norm(b)
        if nrm == 0.0:
            raise InputError("input vector is zero")
        b = b / nrm
        beta = None if decomp is None else decomp.eigenvectors.conj().T @ b
        return cls(b, beta)


def _phase_fix(v: np.ndarray) -> np.ndarray:
    """Rotate each column so its first non-negligible component is real positive."""
    out = v.copy()
    for j in range(v.shape[1]):
        col = out[:, j]
        idx = np.flatnonzero(np.abs(col) > 1e-10 * np.max(np.abs(col)))
        if idx.size:
            z = col[idx[0]]
            out[:, j] = col * (abs(z) / z)
    return out


def _diagnostics(a: np.ndarray, w: np.ndarray, v: np.ndarray):
    resid = float(np.max(np.linalg.norm(a @ v - v * w, axis=0))) if a.size else 0.0
    defect = float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))))
    return resid, defect


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _jacobi(a: np.ndarray, max_sweeps: int):
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    if scale == 0.0 or n == 1:
        return np.real(np.diag(a)).copy(), v, 0
    tol = np.finfo(float).eps * scale
    for sweep in range(1, max_sweeps + 1):
        off = _off_norm(a)
        if off <= tol:
            return np.real(np.diag(a)).copy(), v, sweep - 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300 or mag < 1e-3 * tol / n:
                    continue
                app, aqq = a[p, p].real, a[q, q].real
                phase = apq / mag  # e^{i alpha}
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # u2 = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                u2 = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = a[:, [p, q]] @ u2
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = u2.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0.0
                a[p, p], a[q, q] = a[p, p].real, a[q, q].real
                vc = v[:, [p, q]] @ u2
                v[:, p], v[:, q] = vc[:, 0], vc[:, 1]
    off = _off_norm(a)
    if off > 1e3 * tol:
        raise NumericalError(
            f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})")
    return np.real(np.diag(a)).copy(), v, max_sweeps


def eigendecompose(A: HermitianMatrix, method: str = "jacobi",
                   max_sweeps: int = MAX_SWEEPS) -> Eigendecomposition:
    """Eigenvalues ascending, eigenvectors phase-normalised.

    ``method="lapack"`` routes through ``numpy.linalg.eigh`` with the same
    ordering, phase convention and diagnostics.
    """
    if not isinstance(A, HermitianMatrix):
        A = HermitianMatrix(A)
    if A.n > MAX_DIM:
        raise InputError(f"dimension {A.n} exceeds desk-scale limit {MAX_DIM}")
    a = A.entries
    if method == "jacobi":
        w, v, sweeps = _jacobi(np.array(a), max_sweeps)
    elif method == "lapack":
        w, v = np.linalg.eigh(a)
        sweeps = 0
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    order = np.argsort(w, kind="stable")
    w, v = w[order], _phase_fix(v[:, order])
    resid, defect = _diagnostics(a, w, v)
    w.setflags(write=False)
    v.setflags(write=False)
    return Eigendecomposition(w, v, resid, defect, sweeps)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def make_matrix_with_spectrum(spectrum, seed=None) -> HermitianMatrix:
    """``U diag(spectrum) U^H`` with Haar-random ``U`` drawn from ``seed``."""
    lam = np.asarray(spectrum, dtype=float).ravel()
    if lam.size == 0:
        raise InputError("spectrum is empty")
    if not np.all(np.isfinite(lam)) or np.any(lam <= 0.0):
        raise InputError("spectrum values must be finite and positive")
    rng = np.random.default_rng(seed)
    u = haar_unitary(lam.size, rng)
    return HermitianMatrix.symmetrized((u * lam) @ u.conj().T)


def condition_number(decomp: Eigendecomposition) -> float:
    mags = np.abs(decomp.eigenvalues)
    if np.any(mags == 0.0):
        raise SingularMatrixError("matrix has a zero eigenvalue")
    return float(mags.max() / mags.min())


def reference_solve(A, b, decomp: Eigendecomposition | None = None) -> np.ndarray:
    """Normalised ``A^{-1} b`` computed as ``sum_j beta_j / lambda_j v_j``."""
    if decomp is None:
        decomp = eigendecompose(A if isinstance(A, HermitianMatrix) else HermitianMatrix(A))
    if np.any(decomp.eigenvalues == 0.0):
        raise SingularMatrixError("matrix is singular")
    vec = InputVector.from_raw(b, decomp)
    x = decomp.eigenvectors @ (vec.beta / decomp.eigenvalues)
    return x / np.linalg.norm(x)


# -- file formats -----------------------------------------------------------

def matrix_to_json(A: HermitianMatrix) -> str:
    flat = A.entries.ravel()
    return json.dumps({"n": A.n, "entries": [[float(z.real), float(z.imag)] for z in flat]})


def matrix_from_json(text: str) -> HermitianMatrix:
    try:
        d = json.loads(text)
        n = int(d["n"])
        pairs = np.asarray(d["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed matrix JSON: {exc}") from exc
    if pairs.shape != (n * n, 2):
        raise InputError(f"expected {n * n} [re, im] pairs, got shape {pairs.shape}")
    return HermitianMatrix((pairs[:, 0] + 1j * pairs[:, 1]).reshape(n, n))


def matrix_from_csv(text: str) -> HermitianMatrix:
    """Plain real symmetric matrix, one row per line."""
    try:
        rows = [[float(x) for x in r] for r in csv.reader(io.StringIO(text)) if r]
        a = np.asarray(rows, dtype=float)
    except ValueError as exc:
        raise InputError(f"malformed matrix CSV: {exc}") from exc
    return HermitianMatrix(a)


def vector_to_json(v) -> str:
    v = np.asarray(v, dtype=complex).ravel()
    return json.dumps({"n": int(v.size), "entries": [[float(z.real), float(z.imag)] for z in v]})


def vector_from_json(text: str) -> np.ndarray:
    try:
        d = json.loads(text)
        pairs = np.asarray(d["entries"], dtype=float)
        n = int(d["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed vector JSON: {exc}") from exc
    if pairs.shape != (n, 2):
        raise InputError(f"expected {n} [re, im] pairs")
    return pairs[:, 0] + 1j * pairs[:, 1]


def load_matrix(path: str) -> HermitianMatrix:
    with open(path) as fh:
        text = fh.read()
    if path.endswith(".csv"):
        return matrix_from_csv(text)
    return matrix_from_json(text)
