"""Strong Spectral Property: certification and spectrum-preserving edge addition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._newton import ConvergenceError, newton_simple
from .graphcore import Graph
from .symmat import default_gap_tol, default_zero_tol, in_pattern, spread, symmetric


@dataclass
class SspReport:
    holds: bool
    nullity: int
    smallest_singular_value: float
    threshold: float
    witness: np.ndarray | None = None

    def to_json(self) -> dict:
        return {"holds": self.holds, "nullity": self.nullity,
                "smallest_singular_value": self.smallest_singular_value,
                "threshold": self.threshold,
                "witness": None if self.witness is None else self.witness.tolist()}


def ssp_free_positions(a: np.ndarray, zero_tol: float) -> list[tuple[int, int]]:
    n = a.shape[0]
    return [(i, j) for i in range(n) for j in range(i + 1, n) if abs(a[i, j]) <= zero_tol]


def commutator_map(a: np.ndarray, free) -> np.ndarray:
    """Matrix of x -> strict upper triangle of AX - XA, X symmetric on ``free``."""
    n = a.shape[0]
    iu = np.triu_indices(n, 1)
    cols = []
    for i, j in free:
        x = np.zeros((n, n))
        x[i, j] = x[j, i] = 1.0
        cols.append((a @ x - x @ a)[iu])
    return np.stack(cols, axis=1) if cols else np.zeros((len(iu[0]), 0))


def ssp_check(a, tol: float = 1e-8, zero_tol: float | None = None) -> SspReport:
    """Decide the SSP by the smallest singular value of the commutator map.

    The threshold is ``tol`` times the 2-norm of ``a`` with its mean diagonal
    removed, which keeps the decision exactly invariant under ``a -> a + cI``.
    """
    a = symmetric(a)
    n = a.shape[0]
    zt = default_zero_tol(a) if zero_tol is None else zero_tol
    free = ssp_free_positions(a, zt)
    scale = float(np.linalg.norm(a - np.trace(a) / n * np.eye(n), 2)) if n else 0.0
    threshold = tol * scale
    if not free:
        return SspReport(True, 0, float("inf"), threshold)
    L = commutator_map(a, free)
    _, s, vt = np.linalg.svd(L)
    svals = np.zeros(len(free))
    svals[: len(s)] = s
    nullity = int(np.sum(svals <= threshold))
    smin = float(svals.min())
    if nullity == 0:
        return SspReport(True, 0, smin, threshold)
    coeffs = vt[-1]
    x = np.zeros((n, n))
    for (i, j), c in zip(free, coeffs):
        x[i, j] = x[j, i] = c
    x /= np.linalg.norm(x)
    if x.flat[np.argmax(np.abs(x))] < 0:
        x = -x
    return SspReport(False, nullity, smin, threshold, x)


def _check_spanning_subgraph(g_sub: Graph, g_super: Graph):
    if g_sub.n != g_super.n or not g_sub.edges <= g_super.edges:
        raise ValueError("g_sub must be a spanning subgraph of g_super")


def edge_extend(a, g_sub: Graph, g_super: Graph, eps: float | None = None, *,
                seed: int | None = None, zero_tol: float | None = None,
                gap_tol: float | None = None, max_halvings: int = 20,
                accept: Callable[[np.ndarray], bool] | None = None):
    """Like :func:`ssp_edge_extend` but also returns the eps that succeeded."""
    a = symmetric(a)
    _check_spanning_subgraph(g_sub, g_super)
    new = sorted(g_super.edges - g_sub.edges)
    zt = default_zero_tol(a) if zero_tol is None else zero_tol
    pat = in_pattern(a, g_sub, zt)
    if not pat.ok:
        raise ValueError(f"matrix is not in S(g_sub): {pat.violations[:3]}")
    if not new:
        return a.copy(), 0.0
    rep = ssp_check(a, zero_tol=zt)
    if not rep.holds:
        raise ValueError(f"matrix lacks the SSP (sigma_min={rep.smallest_singular_value:.3g})")
    w = np.linalg.eigvalsh(a)
    gt = default_gap_tol(w) if gap_tol is None else gap_tol
    if a.shape[0] > 1 and np.min(np.diff(w)) <= gt:
        raise ValueError("repeated eigenvalues: edge extension only handles simple spectra")

    sp = spread(w)
    if eps is None:
        eps = 0.05 * max(sp, 1.0)
    signs = np.ones(len(new))
    if seed is not None:
        signs = np.random.default_rng(seed).choice([-1.0, 1.0], size=len(new))
    free = [(i, i) for i in range(a.shape[0])] + [(i - 1, j - 1) for i, j in g_sub.sorted_edges()]
    newton_tol = 1e-13 * (1.0 + float(np.max(np.abs(w))))
    best = np.inf
    for k in range(max_halvings + 1):
        e = eps / 2 ** k
        if e / 4 <= zt:
            break
        b = a.copy()
        for (i, j), s in zip(new, signs):
            b[i - 1, j - 1] = b[j - 1, i - 1] = s * e / 2
        b, res, ok = newton_simple(b, w, free, tol=newton_tol)
        best = min(best, res)
        if not ok or res > 1e-9 * sp:
            continue
        if np.max(np.abs(b - a)) > e:
            continue
        if not in_pattern(b, g_super, zt).ok:
            continue
        if accept is not None and not accept(b):
            continue
        return b, e
    raise ConvergenceError(f"edge extension failed on every eps down to {e:.3g}; "
                           f"best spectral residual {best:.3g}", best)


def ssp_edge_extend(a, g_sub: Graph, g_super: Graph, eps: float | None = None, **kw) -> np.ndarray:
    """Add the edges of ``g_super`` missing from ``g_sub`` without moving the spectrum.

    New entries are set to ``eps/2`` (positive, or seeded random signs with
    ``seed``); a least-norm Newton correction on the diagonal and old edges
    restores the spectrum.  ``eps`` is halved until the result stays within
    ``eps`` of ``a`` entrywise and lies in S(g_super).
    """
    return edge_extend(a, g_sub, g_super, eps, **kw)[0]
