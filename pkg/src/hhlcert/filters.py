"""HHL filter functions f and g.

The spectrum is split at two breakpoints, ``1/kappa`` and ``1/(2 kappa)``::

    Well        lambda >= 1/kappa          f = 1/(2 kappa lambda)       g = 0
    Transition  1/(2k) <= lambda < 1/k     f = sin(pi s / 2) / 2        g = sin(pi (1 - s) / 2) / 2
    Ill         lambda < 1/(2 kappa)       f = 0                       g = 1/2

with ``s = (lambda - 1/(2k)) / (1/(2k))`` running from 0 to 1 across the
transition band.  ``sin(pi (1 - s)/2)`` is ``cos(pi s/2)`` written so that the
branch values agree *exactly* (in binary64) with the neighbouring branches at
the floating-point breakpoints; differences across a breakpoint then telescope
without an O(eps) jump, which matters when difference quotients are resolved
to 1e-9.

The breakpoints are the binary64 values ``fl(1/kappa)`` and ``fl(1/kappa)/2``
(the halving is exact), and the well branch is ``fl(1/kappa) / (2 lambda)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, ParameterError

__all__ = [
    "KappaParams",
    "Region",
    "FilterValue",
    "GenericFilter",
    "eval_filter",
    "classify_region",
    "derivative_bound",
    "filter_values",
    "filter_derivatives",
    "filter_difference",
    "norm_sq",
    "speed_sq",
    "region_codes",
    "hhl_filter",
]


class Region(enum.IntEnum):
    WELL = 0
    TRANSITION = 1
    ILL = 2

    @property
    def label(self) -> str:
        return self.name.capitalize()


@dataclass(frozen=True)
class KappaParams:
    kappa: float

    def __post_init__(self):
        k = float(self.kappa)
        if not math.isfinite(k) or k < 1.0:
            raise ParameterError(f"kappa must be a finite value >= 1, got {self.kappa!r}")
        object.__setattr__(self, "kappa", k)

    @property
    def well_edge(self) -> float:
        """Lower edge of the Well region, 1/kappa."""
        return 1.0 / self.kappa

    @property
    def ill_edge(self) -> float:
        """Upper edge of the Ill region, 1/(2 kappa)."""
        return 0.5 * (1.0 / self.kappa)

    @property
    def slope(self) -> float:
        """Angular rate of the transition branch, pi/(4 w) with w = 1/(2 kappa)."""
        return math.pi / (4.0 * self.ill_edge)


def _params(params) -> KappaParams:
    if isinstance(params, KappaParams):
        return params
    return KappaParams(params)


@dataclass(frozen=True)
class FilterValue:
    f: float
    g: float
    region: Region


def _check_lambda(lam) -> np.ndarray:
    arr = np.asarray(lam, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("lambda must be finite")
    if np.any(arr <= 0.0):
        raise DomainError("lambda must be strictly positive")
    return arr


def region_codes(params, lam) -> np.ndarray:
    """Vectorised region tags (0 = Well, 1 = Transition, 2 = Ill)."""
    p = _params(params)
    lam = _check_lambda(lam)
    return np.where(lam >= p.well_edge, 0, np.where(lam >= p.ill_edge, 1, 2)).astype(np.int8)


def classify_region(params, lam: float) -> Region:
    return Region(int(region_codes(params, lam)))


def _transition_s(p: KappaParams, lam):
    return (lam - p.ill_edge) / p.ill_edge


def filter_values(params, lam):
    """Return arrays ``(f, g)`` evaluated at ``lam`` (scalar or array)."""
    p = _params(params)
    lam = _check_lambda(lam)
    hi, lo = p.well_edge, p.ill_edge
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.clip(_transition_s(p, lam), 0.0, 1.0)
        f_t = 0.5 * np.sin(0.5 * np.pi * s)
        g_t = 0.5 * np.sin(0.5 * np.pi * (1.0 - s))
        f = np.where(lam >= hi, hi / (2.0 * lam), np.where(lam >= lo, f_t, 0.0))
        g = np.where(lam >= hi, 0.0, np.where(lam >= lo, g_t, 0.5))
    return f, g


def eval_filter(params, lam: float) -> FilterValue:
    p = _params(params)
    f, g = filter_values(p, lam)
    return FilterValue(float(f), float(g), classify_region(p, lam))


def filter_derivatives(params, lam):
    """Return arrays ``(f', g')``; at a breakpoint the derivative of the region's own branch."""
    p = _params(params)
    lam = _check_lambda(lam)
    hi = p.well_edge
    s = np.clip(_transition_s(p, lam), 0.0, 1.0)
    fp_t = p.slope * np.cos(0.5 * np.pi * s)
    gp_t = -p.slope * np.sin(0.5 * np.pi * s)
    code = region_codes(p, lam)
    fp = np.where(code == 0, -hi / (2.0 * lam * lam), np.where(code == 1, fp_t, 0.0))
    gp = np.where(code == 1, gp_t, 0.0)
    return fp, gp


def speed_sq(params, lam):
    """|d/dlambda (f, g)|^2, branch-wise: exactly slope^2 on the transition band."""
    p = _params(params)
    lam = _check_lambda(lam)
    code = region_codes(p, lam)
    well = (p.well_edge / (2.0 * lam * lam)) ** 2
    return np.where(code == 0, well, np.where(code == 1, p.slope**2, 0.0))


def norm_sq(params, lam):
    """f^2 + g^2, branch-wise: exactly 1/4 on the transition and ill regions."""
    p = _params(params)
    lam = _check_lambda(lam)
    well = (p.well_edge / (2.0 * lam)) ** 2
    return np.where(lam >= p.well_edge, well, 0.25)


def _well_diff(p: KappaParams, x1, x2):
    return 0.5 * p.well_edge * (x2 - x1) / (x1 * x2)


def _transition_diff(p: KappaParams, x1, x2):
    # product forms of sin(a) - sin(b); s1 - s2 is taken from x1 - x2 directly
    w = p.ill_edge
    s1 = (x1 - w) / w
    s2 = (x2 - w) / w
    ds = (x1 - x2) / w
    q = 0.25 * np.pi
    df = np.cos(q * (s1 + s2)) * np.sin(q * ds)
    dg = np.cos(q * (2.0 - s1 - s2)) * np.sin(-q * ds)
    return df, dg


def filter_difference(params, lam1, lam2):
    """Cancellation-free ``(f(l1) - f(l2), g(l1) - g(l2))``.

    The pair is clipped into each branch and the in-branch differences are
    summed; since f and g are continuous the pieces telescope exactly.
    """
    p = _params(params)
    lam1 = _check_lambda(lam1)
    lam2 = _check_lambda(lam2)
    hi, lo = p.well_edge, p.ill_edge
    w1 = np.maximum(lam1, hi)
    w2 = np.maximum(lam2, hi)
    t1 = np.clip(lam1, lo, hi)
    t2 = np.clip(lam2, lo, hi)
    df_t, dg_t = _transition_diff(p, t1, t2)
    return _well_diff(p, w1, w2) + df_t, dg_t


def derivative_bound(params) -> float:
    """Upper bound pi*kappa/2 on |f'| and |g'| (Lipschitz reference)."""
    p = _params(params)
    return math.pi * p.kappa / 2.0


@dataclass(frozen=True)
class GenericFilter:
    """A user-supplied pair of spectral amplitude functions.

    ``well`` gives the amplitude on the well (inverting) flag, ``ill`` the
    amplitude on the ill-conditioned flag.  ``lipschitz`` is the claimed
    Lipschitz constant per unit lambda, checked by
    :func:`hhlcert.certifier.certify_lipschitz`.
    """

    well: Callable[[np.ndarray], np.ndarray]
    ill: Callable[[np.ndarray], np.ndarray]
    lipschitz: float
    name: str = "custom"
    diff: Callable[[np.ndarray, np.ndarray], tuple] | None = None

    def __post_init__(self):
        if not (self.lipschitz > 0 and math.isfinite(self.lipschitz)):
            raise ParameterError("claimed Lipschitz constant must be positive and finite")

    def __call__(self, lam):
        lam = _check_lambda(lam)
        f = np.broadcast_to(np.asarray(self.well(lam), dtype=float), lam.shape)
        g = np.broadcast_to(np.asarray(self.ill(lam), dtype=float), lam.shape)
        return f, g

    def difference(self, lam1, lam2):
        if self.diff is not None:
            return self.diff(lam1, lam2)
        f1, g1 = self(lam1)
        f2, g2 = self(lam2)
        return f1 - f2, g1 - g2


def hhl_filter(params) -> GenericFilter:
    """The HHL (f, g) pair wrapped in the generic interface."""
    p = _params(params)
    return GenericFilter(
        well=lambda lam: filter_values(p, lam)[0],
        ill=lambda lam: filter_values(p, lam)[1],
        lipschitz=derivative_bound(p),
        diff=lambda a, b: filter_difference(p, a, b),
        name=f"hhl(kappa={p.kappa:g})",
    )
