"""Phase-estimation discretization model.

Bins sit at ``lt_k = 2*pi*k/t0`` for integer ``k >= 1``.  A kernel assigns
each eigenvalue ``lam_j`` a short list of real non-negative amplitudes
``alpha_{k|j}`` over nearby bins; only the induced (j, k) weight
distribution is modelled, never a circuit.

Offsets are measured in phase units, ``delta = t0*(lam - lt_k)``, so that
adjacent bins are ``2*pi`` apart in delta.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, InputError

DEFAULT_RADIUS = 4
# absolute tie tolerance on |delta| when comparing the two neighbouring bins
TIE_TOL = 1e-12
# offsets (in bins) this close to a nonzero integer hit a Dirichlet null
NULL_TOL = 1e-12
_TAIL_BINS = 4096
# computed eigenvalues of a matrix with a planted top eigenvalue 1 may round above it
SPECTRUM_SLACK = 1e-10


class KernelKind(str, enum.Enum):
    NEAREST = "nearest"
    SINC = "sinc"
    SINE = "sine"

    @classmethod
    def parse(cls, kind) -> "KernelKind":
        if isinstance(kind, cls):
            return kind
        try:
            return cls(str(kind).lower())
        except ValueError:
            raise ConfigurationError(
                f"unknown kernel {kind!r}; expected one of {[k.value for k in cls]}") from None


@dataclass(frozen=True)
class QpeGrid:
    t0: float
    k_lo: int
    k_hi: int

    def __post_init__(self):
        if not (self.t0 > 0 and math.isfinite(self.t0)):
            raise ConfigurationError("t0 must be positive and finite")
        if self.k_lo < 1 or self.k_hi < self.k_lo + 1:
            raise ConfigurationError("grid needs at least 2 bins with k >= 1")

    @property
    def spacing(self) -> float:
        return 2.0 * math.pi / self.t0

    @property
    def T(self) -> int:
        return self.k_hi - self.k_lo + 1

    @property
    def ks(self) -> np.ndarray:
        return np.arange(self.k_lo, self.k_hi + 1)

    def value(self, k):
        """Bin value ``2*pi*k/t0``; the single formula used everywhere."""
        return 2.0 * math.pi * np.asarray(k, dtype=float) / self.t0

    @property
    def values(self) -> np.ndarray:
        return self.value(self.ks)

    def delta(self, lam, k):
        return self.t0 * (np.asarray(lam, dtype=float) - self.value(k))

    def covers(self, lam) -> np.ndarray:
        """True where the nearest bin of ``lam`` is a grid bin."""
        lam = np.asarray(lam, dtype=float)
        h = 0.5 * self.spacing
        return (lam >= self.value(self.k_lo) - h) & (lam <= self.value(self.k_hi) + h)


def build_grid(t0: float, spectrum, guard: int = 1) -> QpeGrid:
    """Bins covering ``[min - spacing, max + spacing]`` (clipped below at k = 1)."""
    lam = np.asarray(spectrum, dtype=float).ravel()
    if lam.size == 0:
        raise InputError("spectrum is empty")
    if not np.all(np.isfinite(lam)) or np.any(lam <= 0.0) or np.any(lam > 1.0 + SPECTRUM_SLACK):
        raise DomainError("spectrum must lie within (0, 1]")
    if not (t0 > 0 and math.isfinite(t0)):
        raise ConfigurationError("t0 must be positive and finite")
    if guard < 1:
        raise ConfigurationError("guard must be at least one bin")
    s = 2.0 * math.pi / t0
    lo, hi = float(lam.min()), float(lam.max())
    if hi / s < 1.0 - 1e-12:
        # fewer than two bins fall inside (0, max + spacing]
        raise ConfigurationError(
            f"t0={t0:g} is too small: bin spacing {s:.4g} exceeds the largest eigenvalue")
    k_lo = max(1, math.floor(lo / s + 1e-9) - guard)
    k_hi = math.ceil(hi / s - 1e-9) + guard
    return QpeGrid(float(t0), k_lo, k_hi)


def nearest_bin(grid: QpeGrid, lam) -> np.ndarray:
    """Index of the closest bin; exact midpoints go to the lower bin."""
    lam = np.asarray(lam, dtype=float)
    k0 = np.floor(lam / grid.spacing).astype(np.int64)
    k0 = np.maximum(k0, 0)
    d_lo = np.abs(grid.delta(lam, k0))
    d_hi = np.abs(grid.delta(lam, k0 + 1))
    k = np.where(d_lo <= d_hi + TIE_TOL, k0, k0 + 1)
    return np.clip(k, grid.k_lo, grid.k_hi)


def _sinc_weight(delta: np.ndarray) -> np.ndarray:
    x = delta / (2.0 * math.pi)
    w = np.abs(np.sinc(x))
    r = np.rint(x)
    w[(r != 0) & (np.abs(x - r) <= NULL_TOL)] = 0.0
    return w


def _sine_weight(delta: np.ndarray) -> np.ndarray:
    # |cos(d/2) / (d^2 - pi^2)| without the removable 0/0 at |d| = pi
    a = np.abs(delta)
    u = 0.5 * (math.pi - a)
    return 0.5 * np.abs(np.sinc(u / math.pi)) / (a + math.pi)


_WINDOWS = {KernelKind.SINC: _sinc_weight, KernelKind.SINE: _sine_weight}


@dataclass(frozen=True)
class DeltaTable:
    j: np.ndarray
    k: np.ndarray
    delta: np.ndarray

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.delta))) if self.delta.size else 0.0


@dataclass(frozen=True)
class KernelWeights:
    """Sparse per-eigenvalue amplitudes, stored flat and sorted by (j, k)."""

    grid: QpeGrid
    kind: KernelKind
    radius: int
    eigenvalues: np.ndarray
    j: np.ndarray
    k: np.ndarray
    alpha: np.ndarray
    discarded: np.ndarray  # squared mass dropped by truncation, per j

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def support(self, j: int):
        sel = self.j == j
        return self.k[sel], self.alpha[sel]

    def deltas(self) -> DeltaTable:
        return DeltaTable(self.j, self.k, self.grid.delta(self.eigenvalues[self.j], self.k))

    def norms(self) -> np.ndarray:
        return np.bincount(self.j, weights=self.alpha**2, minlength=self.n)


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


def build_kernel(grid: QpeGrid, eigenvalues, kind="nearest",
                 radius: int = DEFAULT_RADIUS) -> KernelWeights:
    kind = KernelKind.parse(kind)
    if radius < 0:
        raise ConfigurationError("support radius must be non-negative")
    lam = np.array(eigenvalues, dtype=float).ravel()
    if lam.size == 0:
        raise InputError("no eigenvalues")
    if not np.all(grid.covers(lam)):
        bad = lam[~grid.covers(lam)]
        raise DomainError(f"eigenvalue(s) {bad[:3]} outside grid coverage")
    kstar = nearest_bin(grid, lam)
    n = lam.size
    if kind is KernelKind.NEAREST:
        js = np.arange(n)
        ks = kstar.astype(np.int64)
        alpha = np.ones(n)
        discarded = np.zeros(n)
    else:
        window = _WINDOWS[kind]
        offs = np.arange(-radius, radius + 1)
        cand_k = kstar[:, None] + offs[None, :]
        inside = (cand_k >= grid.k_lo) & (cand_k <= grid.k_hi)
        w = window(grid.delta(lam[:, None], cand_k))
        w = np.where(inside, w, 0.0)
        # total squared mass of the untruncated window, for the diagnostic
        tail = np.arange(-_TAIL_BINS, _TAIL_BINS + 1)
        total = np.sum(window(grid.delta(lam[:, None], kstar[:, None] + tail[None, :])) ** 2, axis=1)
        kept = np.sum(w**2, axis=1)
        if np.any(kept <= 0.0):
            raise ConfigurationError("kernel support carries no weight")
        discarded = np.clip(1.0 - kept / total, 0.0, 1.0)
        w = w / np.sqrt(kept)[:, None]
        keep = w > 0.0
        js = np.broadcast_to(np.arange(n)[:, None], w.shape)[keep]
        ks = cand_k[keep].astype(np.int64)
        alpha = w[keep]
    _freeze(lam, js, ks, alpha, discarded)
    return KernelWeights(grid, kind, int(radius), lam, js, ks, alpha, discarded)


def c3_bound(weights: KernelWeights) -> float:
    """Largest squared offset over the supported (j, k) pairs."""
    d = weights.deltas().delta
    return float(np.max(d * d)) if d.size else 0.0


def kernel_to_csv(weights: KernelWeights) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "k", "lambda_j", "lambda_tilde_k", "delta", "weight"])
    dt = weights.deltas()
    lt = weights.grid.value(weights.k)
    for j, k, l, t, d, a in zip(weights.j, weights.k, weights.eigenvalues[weights.j],
                                lt, dt.delta, weights.alpha):
        w.writerow([int(j), int(k), repr(float(l)), repr(float(t)), repr(float(d)), repr(float(a))])
    return buf.getvalue()
