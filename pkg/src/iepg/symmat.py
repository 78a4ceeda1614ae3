"""Symmetric matrices, pattern membership and grouped spectra.

Matrices are plain ``numpy`` arrays.  ``symmetric`` is the single entry point
that enforces exact symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graphcore import Graph


def symmetric(m) -> np.ndarray:
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return (a + a.T) / 2


def default_zero_tol(m: np.ndarray) -> float:
    return 1e-8 * (1.0 + float(np.max(np.abs(m), initial=0.0)))


def default_gap_tol(values) -> float:
    values = np.asarray(values, dtype=float)
    spread = float(np.ptp(values)) if values.size else 0.0
    return 1e-6 * (spread + 1.0)


def spread(values) -> float:
    values = np.asarray(values, dtype=float)
    return float(np.ptp(values)) if values.size else 0.0


@dataclass
class PatternReport:
    ok: bool
    zero_tol: float
    edge_margin: float        # min |a(i,j)| over edges (inf if no edges)
    nonedge_max: float        # max |a(i,j)| over off-diagonal non-edges
    violations: list = field(default_factory=list)  # (i, j, kind, value), 1-based

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "zero_tol": self.zero_tol,
                "edge_margin": _finite(self.edge_margin),
                "nonedge_max": self.nonedge_max,
                "violations": [list(v) for v in self.violations]}


def _finite(x):
    return None if not np.isfinite(x) else float(x)


def in_pattern(m: np.ndarray, g: Graph, zero_tol: float | None = None) -> PatternReport:
    m = np.asarray(m, dtype=float)
    if m.shape != (g.n, g.n):
        raise ValueError(f"matrix is {m.shape}, graph has {g.n} vertices")
    tol = default_zero_tol(m) if zero_tol is None else float(zero_tol)
    if tol <= 0:
        raise ValueError("zero_tol must be positive")
    edge_min, nonedge_max = np.inf, 0.0
    bad = []
    for i in range(g.n):
        for j in range(i + 1, g.n):
            v = abs(m[i, j])
            if g.has_edge(i + 1, j + 1):
                edge_min = min(edge_min, v)
                if v <= tol:
                    bad.append((i + 1, j + 1, "zero-edge", float(m[i, j])))
            else:
                nonedge_max = max(nonedge_max, v)
                if v > tol:
                    bad.append((i + 1, j + 1, "nonzero-nonedge", float(m[i, j])))
    return PatternReport(not bad, tol, float(edge_min), float(nonedge_max), bad)


def project_to_pattern(m: np.ndarray, g: Graph) -> np.ndarray:
    """Zero every off-diagonal non-edge entry exactly."""
    out = symmetric(m)
    mask = np.eye(g.n, dtype=bool)
    for i, j in g.edges:
        mask[i - 1, j - 1] = mask[j - 1, i - 1] = True
    out[~mask] = 0.0
    return out


@dataclass
class Spectrum:
    groups: list  # [(value, multiplicity)] ascending
    gap_tol: float

    @property
    def values(self) -> list[float]:
        return [v for v, _ in self.groups]

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.groups]

    @property
    def q(self) -> int:
        return len(self.groups)

    def expanded(self) -> np.ndarray:
        return np.repeat(self.values, self.multiplicities)

    def to_json(self) -> list[dict]:
        return [{"value": float(v), "mult": int(m)} for v, m in self.groups]

    @classmethod
    def from_values(cls, values: Iterable[float], gap_tol: float | None = None) -> "Spectrum":
        return group_values(np.sort(np.asarray(list(values), dtype=float)), gap_tol)


def group_values(w: np.ndarray, gap_tol: float | None = None) -> Spectrum:
    """Greedy left-to-right clustering of ascending values."""
    w = np.asarray(w, dtype=float)
    tol = default_gap_tol(w) if gap_tol is None else float(gap_tol)
    if tol <= 0:
        raise ValueError("gap_tol must be positive")
    clusters: list[list[float]] = []
    for x in w:
        if clusters and x - clusters[-1][-1] <= tol:
            clusters[-1].append(float(x))
        else:
            clusters.append([float(x)])
    return Spectrum([(float(np.mean(c)), len(c)) for c in clusters], tol)


def spectrum_grouped(m: np.ndarray, gap_tol: float | None = None) -> Spectrum:
    return group_values(np.linalg.eigvalsh(symmetric(m)), gap_tol)


def spectral_residual(m: np.ndarray, target: Sequence[float]) -> float:
    """Largest deviation between sorted eigenvalues and the sorted target."""
    w = np.linalg.eigvalsh(symmetric(m))
    t = np.sort(np.asarray(target, dtype=float))
    if w.shape != t.shape:
        raise ValueError("target size does not match matrix dimension")
    return float(np.max(np.abs(w - t), initial=0.0))


def principal_submatrix(m: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Rows/columns ``keep`` (1-based), original order preserved."""
    idx = sorted(set(int(k) for k in keep))
    if not idx:
        raise ValueError("keep must be nonempty")
    m = np.asarray(m, dtype=float)
    if idx[0] < 1 or idx[-1] > m.shape[0]:
        raise ValueError("keep index out of range")
    z = np.array(idx) - 1
    return m[np.ix_(z, z)].copy()


def delete_index(m: np.ndarray, i: int) -> np.ndarray:
    """A(i): drop row and column i (1-based)."""
    n = np.asarray(m).shape[0]
    return principal_submatrix(m, [k for k in range(1, n + 1) if k != i])


def eigh_signed(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenpairs with column signs fixed so U[j, j] >= 0.

    A column whose diagonal entry is numerically zero is signed by its first
    entry of largest magnitude instead.
    """
    w, u = np.linalg.eigh(symmetric(m))
    for j in range(u.shape[1]):
        col = u[:, j]
        pivot = col[j] if abs(col[j]) > 1e-14 else col[np.argmax(np.abs(col))]
        if pivot < 0:
            u[:, j] = -col
    return w, u


def to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=float)
    return {"n": int(m.shape[0]), "rows": m.tolist()}


def from_json(data: dict) -> np.ndarray:
    if "rows" not in data:
        raise ValueError("matrix JSON missing field 'rows'")
    a = np.array(data["rows"], dtype=float)
    if "n" in data and a.shape != (int(data["n"]), int(data["n"])):
        raise ValueError(f"matrix field 'rows' has shape {a.shape}, expected n={data['n']}")
    return symmetric(a)
