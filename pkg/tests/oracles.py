"""Independent reference implementations used to freeze expected values.

Nothing here imports the package under test except where a structural input
(a matrix, a vector) has to be shared.  Filters are evaluated in 50-digit
mpmath using the cosine form of the transition branch.
"""
from __future__ import annotations

import mpmath as mp
import numpy as np

mp.mp.dps = 50


def f_g(kappa, lam):
    k, x = mp.mpf(kappa), mp.mpf(lam)
    if x >= 1 / k:
        return 1 / (2 * k * x), mp.mpf(0)
    if x >= 1 / (2 * k):
        u = mp.pi / 2 * (2 * k * x - 1)
        return mp.sin(u) / 2, mp.cos(u) / 2
    return mp.mpf(0), mp.mpf(1) / 2


def lipschitz_ratio(kappa, a, b):
    fa, ga = f_g(kappa, a)
    fb, gb = f_g(kappa, b)
    d = mp.mpf(kappa) * abs(mp.mpf(a) - mp.mpf(b))
    return max(abs(fa - fb), abs(ga - gb)) / d


def lemma2_ratio(kappa, a, b):
    fa, ga = f_g(kappa, a)
    fb, gb = f_g(kappa, b)
    num = (fa - fb) ** 2 + (ga - gb) ** 2
    return num / (mp.mpf(kappa) ** 2 * (mp.mpf(a) - mp.mpf(b)) ** 2 * (fa**2 + fb**2 + ga**2 + gb**2))


def lemma3_ratio(kappa, lam, lt):
    f, g = f_g(kappa, lam)
    ft, gt = f_g(kappa, lt)
    num = (f - ft) ** 2 + (g - gt) ** 2
    return num / (mp.mpf(kappa) ** 2 * (mp.mpf(lam) - mp.mpf(lt)) ** 2 * (f**2 + g**2))


def _f_g_float(kappa, lam):
    f, g = f_g(kappa, lam)
    return float(f), float(g)


def brute_overlap(eigvals, eigvecs, b, kappa, t0):
    """re <x|x~> by explicit summation over (j, k, flag) with a nearest-bin kernel.

    The nearest bin is found by scanning every k from 1 to a generous upper
    limit; ties go to the smaller k.
    """
    b = np.asarray(b, dtype=complex)
    b = b / np.linalg.norm(b)
    beta = eigvecs.conj().T @ b
    k_max = int(np.ceil(max(eigvals) * t0 / (2 * np.pi))) + 3
    x, xt = {}, {}
    for j, lam in enumerate(eigvals):
        best_k, best_d = None, None
        for k in range(1, k_max + 1):
            d = abs(lam - 2 * np.pi * k / t0)
            if best_d is None or d < best_d - 1e-15:
                best_k, best_d = k, d
        f, g = _f_g_float(kappa, lam)
        ft, gt = _f_g_float(kappa, 2 * np.pi * best_k / t0)
        for flag, (a, at) in enumerate(((f, ft), (g, gt))):
            x[(j, best_k, flag)] = beta[j] * a
            xt[(j, best_k, flag)] = beta[j] * at
    keys = sorted(set(x) | set(xt))
    p = sum(abs(x.get(q, 0)) ** 2 for q in keys)
    pt = sum(abs(xt.get(q, 0)) ** 2 for q in keys)
    inner = sum(np.conj(x.get(q, 0)) * xt.get(q, 0) for q in keys)
    return float(np.real(inner) / np.sqrt(p * pt)), float(p), float(pt)
