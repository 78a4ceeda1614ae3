"""Spectra of matrices on cycles."""

from __future__ import annotations

import numpy as np

from .. import symmat
from .._newton import ConvergenceError, newton_clustered
from ..certificate import CertificationError, certify
from ..graphcore import cycle, path
from ..ssp import ssp_check, ssp_edge_extend
from .jacobi import jacobi_from_spectrum


def cycle_spectrum_check(lambdas, tol: float | None = None) -> bool:
    """True iff the sorted list alternates weak/strict steps in one of the two
    admissible ways: l1 <= l2 < l3 <= l4 < ...  or  l1 < l2 <= l3 < l4 <= ...

    Values closer than ``tol`` count as equal.
    """
    s = np.sort(np.asarray(lambdas, dtype=float))
    n = s.size
    if n < 3:
        raise ValueError("cycles have at least 3 vertices")
    tol = symmat.default_gap_tol(s) if tol is None else tol
    strict = np.diff(s) > tol        # strict[k]: s[k] < s[k+1]
    first = all(strict[k] for k in range(1, n - 1, 2))
    second = all(strict[k] for k in range(0, n - 1, 2))
    return bool(first or second)


def circulant_seed(target) -> np.ndarray:
    """Symmetric circulant c0 I + c1 (shift + shift^T) whose cosine spectrum
    best fits ``target`` in least squares."""
    t = np.sort(np.asarray(target, dtype=float))
    n = t.size
    cos = np.sort(np.cos(2 * np.pi * np.arange(n) / n))
    (c0, c1), *_ = np.linalg.lstsq(np.stack([np.ones(n), 2 * cos], axis=1), t, rcond=None)
    if abs(c1) < 1e-3 * max(np.ptp(t), 1.0):
        c1 = 0.25 * max(np.ptp(t), 1.0)
    a = c0 * np.eye(n)
    for i in range(n):
        a[i, (i + 1) % n] = a[(i + 1) % n, i] = c1
    return a


def cycle_realize(lambdas, *, seed: int = 0, restarts: int = 20, gap_tol: float | None = None):
    """Matrix in S(C_n) with the given spectrum.  Returns (A, certificate).

    Simple spectra: tridiagonal reconstruction on the path, then SSP edge
    extension to close the cycle.  Repeated values: Newton on all 2n free
    entries with the multiplicity-enforcing residual, from the best-fitting
    circulant and then from seeded random perturbations of it.
    """
    lam = np.sort(np.asarray(lambdas, dtype=float))
    n = lam.size
    if not cycle_spectrum_check(lam, gap_tol):
        raise ValueError("spectrum is not realisable on a cycle")
    c = cycle(n)
    tol = symmat.default_gap_tol(lam) if gap_tol is None else gap_tol
    if np.all(np.diff(lam) > tol):
        j = jacobi_from_spectrum(lam)
        if not ssp_check(j).holds:
            raise ConvergenceError("tridiagonal seed lacks the SSP")
        a = ssp_edge_extend(j, path(n), c)
        return a, certify("cycle", a, c, lam, check_ssp=True,
                          params={"seed": seed, "route": "jacobi+ssp"})

    centre = float(np.mean(lam))
    h = max(float(np.ptp(lam)), 1e-300)
    lam_hat = (lam - centre) / h
    free = [(i, i) for i in range(n)] + sorted((min(i, (i + 1) % n), max(i, (i + 1) % n))
                                               for i in range(n))
    edges = free[n:]
    newton_tol = 1e-13 * (1.0 + float(np.max(np.abs(lam_hat))))
    seed_matrix = circulant_seed(lam_hat)
    best = np.inf
    for attempt in range(restarts + 1):
        a = seed_matrix.copy()
        if attempt:
            rng = np.random.default_rng([seed, attempt])
            scale = 0.5 / n
            for i, j in free:
                a[i, j] += scale * rng.standard_normal()
                a[j, i] = a[i, j]
            for i, j in edges:
                if rng.random() < 0.5:
                    a[i, j] = a[j, i] = -a[i, j]
        a, res, ok = newton_clustered(a, lam_hat, free, tol=newton_tol, cluster_tol=tol / h)
        best = min(best, res)
        if not ok or min(abs(a[i, j]) for i, j in edges) <= 1e-6:
            continue
        out = h * a + centre * np.eye(n)
        try:
            return out, certify("cycle", out, c, lam,
                                params={"seed": seed, "route": "clustered-newton", "attempt": attempt})
        except CertificationError:
            continue
    raise ConvergenceError(f"cycle_realize exhausted {restarts} restarts; best residual {best * h:.3g}",
                           best * h)
