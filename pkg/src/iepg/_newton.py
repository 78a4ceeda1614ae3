"""Newton-type corrections that drive a symmetric matrix onto a target spectrum.

Free entries are 0-based ``(i, j)`` pairs with ``i <= j``; a step on ``(i, j)``
with ``i < j`` moves both symmetric positions.
"""

from __future__ import annotations

import numpy as np


class ConvergenceError(RuntimeError):
    def __init__(self, msg, residual=float("nan")):
        super().__init__(msg)
        self.residual = residual


def _apply(a, free, dx):
    for (i, j), v in zip(free, dx):
        a[i, j] += v
        if i != j:
            a[j, i] += v


def eigen_jacobian(u: np.ndarray, free) -> np.ndarray:
    """d(lambda_k)/d(entry) for simple eigenvalues; rows k, columns free entries."""
    cols = []
    for i, j in free:
        cols.append(u[i, :] ** 2 if i == j else 2.0 * u[i, :] * u[j, :])
    return np.stack(cols, axis=1) if cols else np.zeros((u.shape[0], 0))


def newton_simple(a, target, free, *, tol, max_iter=50):
    """Least-norm Gauss-Newton on sorted eigenvalues.  Returns (a, residual, ok)."""
    a = np.array(a, dtype=float)
    target = np.sort(np.asarray(target, dtype=float))
    w, u = np.linalg.eigh(a)
    res = float(np.max(np.abs(w - target)))
    for _ in range(max_iter):
        if res <= tol:
            return a, res, True
        dx = np.linalg.lstsq(eigen_jacobian(u, free), target - w, rcond=None)[0]
        step = 1.0
        while step > 1e-3:
            trial = a.copy()
            _apply(trial, free, step * dx)
            w2, u2 = np.linalg.eigh(trial)
            r2 = float(np.max(np.abs(w2 - target)))
            if r2 < res:
                break
            step /= 2
        else:
            return a, res, False
        a, w, u, res = trial, w2, u2, r2
    return a, res, res <= tol


def clusters(target, tol):
    """Index ranges [a, b) of equal values in a sorted target."""
    out = []
    i = 0
    while i < len(target):
        j = i + 1
        while j < len(target) and target[j] - target[j - 1] <= tol:
            j += 1
        out.append((i, j))
        i = j
    return out


def newton_clustered(a, target, free, *, tol, cluster_tol, max_iter=100):
    """Newton for targets with repeated values.

    For every cluster of equal target values with current eigenvector block Q
    the linearised condition Q^T (A + dA) Q = lambda I is imposed, off-diagonal
    entries included, so multiplicities are enforced rather than approximated.
    """
    a = np.array(a, dtype=float)
    target = np.sort(np.asarray(target, dtype=float))
    blocks = clusters(target, cluster_tol)
    res = np.inf
    for _ in range(max_iter):
        w, u = np.linalg.eigh(a)
        res = float(np.max(np.abs(w - target)))
        if res <= tol:
            return a, res, True
        rows, rhs = [], []
        for lo, hi in blocks:
            q = u[:, lo:hi]
            lam = float(np.mean(target[lo:hi]))
            for p in range(hi - lo):
                for r in range(p, hi - lo):
                    rows.append([q[i, p] * q[i, r] if i == j else
                                 q[i, p] * q[j, r] + q[j, p] * q[i, r] for i, j in free])
                    rhs.append(lam - w[lo + p] if p == r else 0.0)
        dx = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)[0]
        if not np.all(np.isfinite(dx)):
            break
        _apply(a, free, dx)
    return a, res, res <= tol
