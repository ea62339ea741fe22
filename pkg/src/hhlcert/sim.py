"""Statevector model of the filtered solution states and their overlap.

States are indexed by (eigen-index j, bin k, flag) with flag 0 = well
(inverting) and flag 1 = ill.  The expectation over phase-estimation outcomes
is the exact finite sum with joint weights ``|beta_j|^2 |alpha_{k|j}|^2``.
The ideal state carries no bin index;
when it is compared with a discretized state it is expanded onto the latter's
(j, k) support, so both states live on a common index set.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .certifier.constants import ClaimedConstants
from .errors import DegenerateStateError, InputError, SpectrumWarning
from .filters import KappaParams, _params, filter_difference, filter_values
from .linalg import (Eigendecomposition, HermitianMatrix, InputVector, condition_number,
                     eigendecompose, make_matrix_with_spectrum)
from .qpe import KernelWeights, QpeGrid, build_grid, build_kernel, c3_bound

SWEEP_COLUMNS = ["kappa", "t0", "seed", "kernel", "n", "error_norm", "bound",
                 "re_overlap", "p", "p_tilde", "pass"]
FAMILIES = ("well", "mixed", "edge", "on-bin")


@dataclass(frozen=True)
class SolutionState:
    """Un-normalised amplitudes; ``k == -1`` marks the ideal (bin-free) state.

    ``alpha`` holds the kernel amplitude of each entry (1 for the ideal
    state) so the joint weights can be recovered when pairing states.
    """

    j: np.ndarray
    k: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray  # beta_j per entry
    lam: np.ndarray  # point at which (f, g) was evaluated, per entry
    well: np.ndarray
    ill: np.ndarray
    kappa: float
    t0: float | None = None
    c3: float | None = None
    normalized: bool = False

    @property
    def p(self) -> float:
        return float(np.sum(np.abs(self.well) ** 2 + np.abs(self.ill) ** 2))

    @property
    def is_ideal(self) -> bool:
        return bool(np.all(self.k < 0))

    def normalize(self) -> "SolutionState":
        p = self.p
        if p <= 0.0:
            raise DegenerateStateError("state has zero mass")
        s = 1.0 / math.sqrt(p)
        return SolutionState(self.j, self.k, self.alpha, self.beta, self.lam, self.well * s,
                             self.ill * s, self.kappa, self.t0, self.c3, True)

    def well_readout(self, decomp: Eigendecomposition) -> np.ndarray:
        """Normalised well-flag vector in the original basis, bin register erased."""
        amp = np.bincount(self.j, weights=self.well.real, minlength=decomp.n) \
            + 1j * np.bincount(self.j, weights=self.well.imag, minlength=decomp.n)
        x = decomp.eigenvectors @ amp
        nrm = np.linalg.norm(x)
        if nrm == 0.0:
            raise DegenerateStateError("well-flag component is zero")
        return x / nrm


def _check_kappa(decomp: Eigendecomposition, p: KappaParams):
    lam = decomp.eigenvalues
    if np.any(lam <= 0.0):
        raise InputError("the filtered-state model needs a positive spectrum")
    cond = condition_number(decomp)
    if p.kappa < cond * (1.0 - 1e-12):
        warnings.warn(f"kappa={p.kappa:g} is below the condition number {cond:.6g}",
                      SpectrumWarning, stacklevel=3)


def _beta(decomp: Eigendecomposition, b) -> np.ndarray:
    if isinstance(b, InputVector) and b.beta is not None:
        return b.beta
    return InputVector.from_raw(b, decomp).beta


def build_ideal_state(decomp: Eigendecomposition, b, kappa) -> SolutionState:
    p = _params(kappa)
    _check_kappa(decomp, p)
    beta = _beta(decomp, b)
    f, g = filter_values(p, decomp.eigenvalues)
    n = decomp.n
    lam = np.asarray(decomp.eigenvalues, dtype=float)
    return SolutionState(np.arange(n), np.full(n, -1), np.ones(n), beta, lam, beta * f, beta * g,
                         p.kappa)


def build_discretized_state(decomp: Eigendecomposition, b, kappa,
                            kernel: KernelWeights) -> SolutionState:
    p = _params(kappa)
    if kernel.n != decomp.n or not np.array_equal(kernel.eigenvalues, decomp.eigenvalues):
        raise InputError("kernel was built for a different spectrum")
    _check_kappa(decomp, p)
    beta = _beta(decomp, b)
    lt = kernel.grid.value(kernel.k)
    ft, gt = filter_values(p, lt)
    bj = beta[kernel.j]
    coef = bj * kernel.alpha
    return SolutionState(kernel.j, kernel.k, kernel.alpha, bj, lt, coef * ft, coef * gt, p.kappa,
                         kernel.grid.t0, c3_bound(kernel))


def _expand(ideal: SolutionState, disc: SolutionState) -> SolutionState:
    """Ideal amplitudes placed on the discretized state's (j, k) support."""
    a = disc.alpha
    return SolutionState(disc.j, disc.k, a, ideal.beta[disc.j], ideal.lam[disc.j],
                         ideal.well[disc.j] * a, ideal.ill[disc.j] * a, ideal.kappa)


@dataclass(frozen=True)
class OverlapResult:
    re_overlap: float
    error_norm: float
    bound_rhs: float
    satisfied: bool
    p: float
    p_tilde: float
    e_cross: float  # E[f f~ + g g~]
    mismatch: float  # E[|f - f~|^2 + |g - g~|^2], cancellation-free
    kappa: float
    t0: float | None
    c2: float
    c3: float

    @property
    def error_bound(self) -> float:
        """Derived target ``sqrt(2 c2 c3) kappa / t0`` (the epsilon of the final claim)."""
        if self.t0 is None:
            return math.inf
        return math.sqrt(2.0 * self.c2 * self.c3) * self.kappa / self.t0

    @property
    def identity_residual(self) -> float:
        return abs((self.p + self.p_tilde) - 2.0 * self.e_cross - self.mismatch)

    @property
    def am_gm_lower(self) -> float:
        return 2.0 * self.e_cross / (self.p + self.p_tilde)


def _bound_rhs(c2, c3, kappa, t0) -> float:
    if t0 is None:
        return 1.0
    return 1.0 - c2 * c3 * kappa * kappa / (t0 * t0)


def overlap(ideal: SolutionState, disc: SolutionState,
            c2: float | None = None, c3: float | None = None) -> OverlapResult:
    if ideal.kappa != disc.kappa:
        raise InputError("states were built with different kappa")
    if ideal.is_ideal and not disc.is_ideal:
        a = _expand(ideal, disc)
    elif ideal.is_ideal and disc.is_ideal:
        a = ideal
    else:
        a = ideal
        if not (np.array_equal(a.j, disc.j) and np.array_equal(a.k, disc.k)):
            raise InputError("states have different (j, k) supports")
    b = disc
    p, pt = a.p, b.p
    if p <= 0.0 or pt <= 0.0:
        raise DegenerateStateError(f"zero normalisation (p={p:g}, p_tilde={pt:g})")
    e_cross = float(np.sum((np.conj(a.well) * b.well + np.conj(a.ill) * b.ill).real))
    mismatch = _mismatch(a, b)
    sp, spt = math.sqrt(p), math.sqrt(pt)
    err = float(math.sqrt(np.sum(np.abs(a.well / sp - b.well / spt) ** 2
                                 + np.abs(a.ill / sp - b.ill / spt) ** 2)))
    err = min(err, 2.0)
    re = 1.0 - 0.5 * err * err
    c2 = ClaimedConstants().c2 if c2 is None else float(c2)
    c3 = (disc.c3 if disc.c3 is not None else 0.0) if c3 is None else float(c3)
    rhs = _bound_rhs(c2, c3, disc.kappa, disc.t0)
    return OverlapResult(re, err, rhs, re >= rhs, p, pt, e_cross, mismatch, disc.kappa,
                         disc.t0, c2, c3)


def _mismatch(a: SolutionState, b: SolutionState) -> float:
    if a.normalized or b.normalized:
        return float(np.sum(np.abs(a.well - b.well) ** 2 + np.abs(a.ill - b.ill) ** 2))
    df, dg = filter_difference(b.kappa, a.lam, b.lam)
    w = np.abs(a.beta * a.alpha) ** 2
    return float(np.sum(w * (df * df + dg * dg)))


@dataclass(frozen=True)
class BoundCheck:
    status: str  # "PASS" or "FAIL"
    overlap_ok: bool
    error_ok: bool
    overlap_margin: float  # re_overlap - (1 - c2 c3 kappa^2 / t0^2)
    error_margin: float  # sqrt(2 c2 c3) kappa / t0 - error_norm
    rhs: float
    error_bound: float

    @property
    def passed(self) -> bool:
        return self.status == "PASS"


def verify_bound(result: OverlapResult, kappa, t0, c2=None, c3=None) -> BoundCheck:
    c2 = ClaimedConstants().c2 if c2 is None else float(c2)
    c3 = result.c3 if c3 is None else float(c3)
    kappa = float(kappa)
    rhs = 1.0 - c2 * c3 * kappa * kappa / (t0 * t0)
    eb = math.sqrt(2.0 * c2 * c3) * kappa / t0
    ok1 = result.re_overlap >= rhs
    ok2 = result.error_norm <= eb
    return BoundCheck("PASS" if ok1 and ok2 else "FAIL", ok1, ok2,
                      result.re_overlap - rhs, eb - result.error_norm, rhs, eb)


# -- random instances -------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    A: HermitianMatrix
    decomp: Eigendecomposition
    b: InputVector
    kappa: float
    spectrum: np.ndarray


def random_spectrum(rng: np.random.Generator, n: int, kappa: float, family: str = "well",
                    grid: QpeGrid | None = None, pin: bool = False) -> np.ndarray:
    """Eigenvalues for a test family.

    ``well``: uniform on ``[1/kappa, 1]``.
    ``mixed``: uniform on ``[1/(4 kappa), 1]``, so all three regions occur.
    ``edge``: ``lam = mu/kappa`` with ``mu`` uniform on ``[1, 2]``; its law in
    ``kappa*lam`` does not depend on kappa.
    ``on-bin``: the ``well`` draw snapped to the nearest bin of ``grid``.

    ``pin`` forces both ends of the range into the spectrum (n >= 2), so the
    condition number then equals kappa exactly (``well``/``on-bin``).
    """
    if family not in FAMILIES:
        raise InputError(f"unknown spectrum family {family!r}")
    if n < 1:
        raise InputError("n must be positive")
    lo = 1.0 / kappa if family != "mixed" else 0.25 / kappa
    hi = min(1.0, 2.0 / kappa) if family == "edge" else 1.0
    lam = rng.uniform(lo, hi, n)
    if pin and family != "mixed" and n >= 2:
        lam[0], lam[1] = lo, hi
    if family == "on-bin":
        if grid is None:
            raise InputError("on-bin family needs a grid")
        s = grid.spacing
        k = np.clip(np.rint(lam / s), math.ceil(lo / s - 1e-9), math.floor(1.0 / s + 1e-9))
        lam = grid.value(k)
    return np.sort(lam)


def random_instance(seed, n: int, kappa: float, family: str = "well", t0: float | None = None,
                    method: str = "lapack", pin: bool = False) -> Instance:
    rng = np.random.default_rng(seed)
    grid = None
    if family == "on-bin":
        if t0 is None:
            raise InputError("on-bin family needs t0")
        grid = QpeGrid(float(t0), 1, 2)
    lam = random_spectrum(rng, n, kappa, family, grid, pin)
    A = make_matrix_with_spectrum(lam, seed=rng)
    decomp = eigendecompose(A, method=method)
    if family == "on-bin":
        # pin the computed spectrum to the exact bin values it approximates
        decomp = Eigendecomposition(lam.copy(), decomp.eigenvectors, decomp.residual,
                                    decomp.orthonormality_defect, decomp.sweeps)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return Instance(A, decomp, InputVector.from_raw(z, decomp), float(kappa), lam)


@dataclass(frozen=True)
class InstanceResult:
    kappa: float
    t0: float
    seed: int
    kernel: str
    n: int
    overlap: OverlapResult
    check: BoundCheck

    def row(self) -> dict:
        o = self.overlap
        return {"kappa": self.kappa, "t0": self.t0, "seed": self.seed, "kernel": self.kernel,
                "n": self.n, "error_norm": o.error_norm, "bound": self.check.error_bound,
                "re_overlap": o.re_overlap, "p": o.p, "p_tilde": o.p_tilde,
                "pass": self.check.passed}


def simulate(decomp: Eigendecomposition, b, kappa, t0, kernel="nearest",
             radius: int = 4, c2=None, c3=None):
    """Ideal and discretized states, their overlap and the bound check."""
    grid = build_grid(t0, decomp.eigenvalues)
    kw = build_kernel(grid, decomp.eigenvalues, kernel, radius)
    ideal = build_ideal_state(decomp, b, kappa)
    disc = build_discretized_state(decomp, b, kappa, kw)
    res = overlap(ideal, disc, c2=c2, c3=c3)
    return res, verify_bound(res, kappa, t0, res.c2, res.c3)


def run_instance(kappa, t0, seed: int, n: int, family: str = "well", kernel="nearest",
                 radius: int = 4, c2=None) -> InstanceResult:
    inst = random_instance(_seed_for(seed, kappa), n, kappa, family, t0)
    with warnings.catch_warnings():
        if family == "mixed":
            warnings.simplefilter("ignore", SpectrumWarning)
        res, chk = simulate(inst.decomp, inst.b, kappa, t0, kernel, radius, c2)
    kname = kernel.value if hasattr(kernel, "value") else str(kernel)
    return InstanceResult(float(kappa), float(t0), int(seed), kname, n, res, chk)


# -- sweeps -----------------------------------------------------------------

def _seed_for(seed: int, kappa: float) -> list[int]:
    # the instance for (kappa, seed) is shared by every t0 of a sweep
    return [int(seed), int(round(float(kappa) * 1e6))]


def loglog_slope(x, y) -> float:
    x = np.log(np.asarray(x, dtype=float))
    y = np.log(np.asarray(y, dtype=float))
    if x.size < 2 or np.ptp(x) == 0.0:
        raise InputError("slope fit needs at least two distinct abscissae")
    return float(np.polyfit(x, y, 1)[0])


@dataclass(frozen=True)
class SweepTable:
    rows: tuple  # of InstanceResult, sorted by (kappa, t0, seed)
    slopes_t0: dict = field(default_factory=dict)  # kappa -> slope of worst error vs t0
    slopes_kappa: dict = field(default_factory=dict)  # t0 -> slope of worst error vs kappa

    def worst(self) -> dict:
        """``(kappa, t0) -> worst error_norm`` over seeds."""
        out: dict = {}
        for r in self.rows:
            key = (r.kappa, r.t0)
            out[key] = max(out.get(key, 0.0), r.overlap.error_norm)
        return out

    @property
    def all_pass(self) -> bool:
        return all(r.check.passed for r in self.rows)

    def to_csv(self) -> str:
        lines = [",".join(SWEEP_COLUMNS)]
        for r in self.rows:
            d = r.row()
            lines.append(",".join(_fmt(d[c]) for c in SWEEP_COLUMNS))
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _fits(rows) -> tuple[dict, dict]:
    worst: dict = {}
    for r in rows:
        key = (r.kappa, r.t0)
        worst[key] = max(worst.get(key, 0.0), r.overlap.error_norm)
    st, sk = {}, {}
    for kap in sorted({k for k, _ in worst}):
        pts = sorted((t, e) for (k, t), e in worst.items() if k == kap and e > 0.0)
        if len({t for t, _ in pts}) >= 2:
            st[kap] = loglog_slope(*zip(*pts))
    for t0 in sorted({t for _, t in worst}):
        pts = sorted((k, e) for (k, t), e in worst.items() if t == t0 and e > 0.0)
        if len({k for k, _ in pts}) >= 2:
            sk[t0] = loglog_slope(*zip(*pts))
    return st, sk


def scaling_sweep(kappas, t0s=None, kernel="nearest", seeds=range(10), n: int = 8,
                  family: str = "well", t0_per_kappa=None, radius: int = 4,
                  jobs: int = 1) -> SweepTable:
    """Simulate every (kappa, t0, seed) tuple and fit log-log slopes.

    With ``t0_per_kappa`` set to a list of factors, each kappa uses
    ``t0 = factor * kappa`` instead of the shared ``t0s`` list.
    """
    kappas = list(kappas)
    seeds = list(seeds)
    if not kappas or not seeds:
        raise InputError("kappa and seed lists must be nonempty")
    tasks = []
    for kap in kappas:
        if t0_per_kappa is not None:
            ts = [float(f) * kap for f in t0_per_kappa]
        else:
            ts = list(t0s or [])
        if not ts:
            raise InputError("t0 list must be nonempty")
        for t0 in ts:
            for s in seeds:
                tasks.append((float(kap), float(t0), int(s)))

    def work(task):
        kap, t0, s = task
        return run_instance(kap, t0, s, n, family, kernel, radius)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(work, tasks))
    else:
        rows = [work(t) for t in tasks]
    rows.sort(key=lambda r: (r.kappa, r.t0, r.seed))
    st, sk = _fits(rows)
    return SweepTable(tuple(rows), st, sk)
