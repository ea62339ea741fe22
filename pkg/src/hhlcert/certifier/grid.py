"""Sample grids in lambda for the sup-ratio scans.

The sups of the certified ratios sit at the breakpoints and at small
separations, so the grid combines a logarithmic part below ``1/(2 kappa)``,
a uniform part on ``[1/(2 kappa), lam_max]``, and geometric clusters on both
sides of each breakpoint.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError
from ..filters import KappaParams, _params


@dataclass(frozen=True)
class GridSpec:
    n: int = 2000
    lam_min: float = 1e-3
    lam_max: float = 1.0
    log_fraction: float = 0.2
    cluster: int = 40
    cluster_min: float = 1e-10  # relative offsets from each breakpoint
    cluster_max: float = 1e-2

    def __post_init__(self):
        if self.n < 2:
            raise ConfigurationError("grid needs at least 2 points")
        if not (0.0 < self.lam_min < self.lam_max <= 1.0):
            raise ConfigurationError("grid range must satisfy 0 < lam_min < lam_max <= 1")
        if not (0.0 <= self.log_fraction < 1.0):
            raise ConfigurationError("log_fraction must lie in [0, 1)")
        if self.cluster < 0 or not (0.0 < self.cluster_min < self.cluster_max < 1.0):
            raise ConfigurationError("invalid breakpoint cluster settings")


def build_lambda_grid(params, spec: GridSpec | int | None = None) -> np.ndarray:
    """Sorted, de-duplicated sample points in ``[lam_min, lam_max]``."""
    p: KappaParams = _params(params)
    if spec is None:
        spec = GridSpec()
    elif isinstance(spec, (int, np.integer)):
        spec = GridSpec(n=int(spec))
    lo_edge, hi_edge = p.ill_edge, p.well_edge
    n_log = int(round(spec.n * spec.log_fraction)) if lo_edge > spec.lam_min else 0
    n_uni = spec.n - n_log
    parts = []
    if n_log:
        parts.append(np.geomspace(spec.lam_min, lo_edge, n_log, endpoint=False))
    start = max(lo_edge, spec.lam_min)
    parts.append(np.linspace(start, spec.lam_max, n_uni))
    if spec.cluster:
        h = np.geomspace(spec.cluster_min, spec.cluster_max, spec.cluster)
        for b in (lo_edge, hi_edge):
            parts.append(np.concatenate([b * (1.0 - h), [b], b * (1.0 + h)]))
    grid = np.unique(np.concatenate(parts))
    grid = grid[(grid >= spec.lam_min) & (grid <= spec.lam_max)]
    if grid.size < 2:
        raise ConfigurationError("grid has fewer than 2 points inside the lambda range")
    return grid


def as_grid(params, grid) -> np.ndarray:
    if isinstance(grid, np.ndarray) or isinstance(grid, (list, tuple)):
        arr = np.unique(np.asarray(grid, dtype=float))
        if arr.size < 2:
            raise ConfigurationError("grid has fewer than 2 distinct points")
        if np.any(arr <= 0.0):
            raise ConfigurationError("grid points must be positive")
        return arr
    return build_lambda_grid(params, grid)
