"""Realisation certificates and their independent re-verification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import symmat
from .graphcore import Graph
from .ssp import SspReport, ssp_check


class CertificationError(RuntimeError):
    """A construction finished but its output failed a posteriori checks."""


def default_spectral_tol(target) -> float:
    return 1e-8 * max(symmat.spread(target), 1.0)


def nowhere_zero_margin(u: np.ndarray, test_vectors: Sequence) -> float:
    """min over y and i of |(U y)_i| / ||y||."""
    if not len(test_vectors):
        return float("inf")
    ys = np.array(test_vectors, dtype=float)
    norms = np.linalg.norm(ys, axis=1)
    if np.any(norms == 0):
        raise ValueError("test vectors must be nonzero")
    return float(np.min(np.abs(u @ (ys / norms[:, None]).T)))


@dataclass
class RealizationCertificate:
    kind: str
    matrix: np.ndarray
    graph: Graph
    target: list                  # prescribed spectrum with repeats, ascending
    spectral_tol: float
    spectral_residual: float
    pattern: symmat.PatternReport
    nowhere_zero_margin: float | None = None
    eigenbasis: np.ndarray | None = None      # columns match ``eigen_order``
    eigen_order: list | None = None
    test_vectors: list | None = None
    ssp: SspReport | None = None
    params: dict = field(default_factory=dict)

    @property
    def grouped(self) -> symmat.Spectrum:
        return symmat.spectrum_grouped(self.matrix)

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "kind": self.kind,
            "matrix": symmat.to_json(self.matrix),
            "graph": self.graph.to_json(),
            "target": [float(x) for x in self.target],
            "spectral_tol": float(self.spectral_tol),
            "spectral_residual": float(self.spectral_residual),
            "pattern": self.pattern.to_json(),
            "grouped_spectrum": self.grouped.to_json(),
            "nowhere_zero_margin": self.nowhere_zero_margin,
            "ssp": None if self.ssp is None else self.ssp.holds,
            "params": self.params,
        }
        if self.eigenbasis is not None:
            out["eigenbasis"] = np.asarray(self.eigenbasis).tolist()
            out["eigen_order"] = [float(x) for x in self.eigen_order]
        if self.test_vectors is not None:
            out["test_vectors"] = np.asarray(self.test_vectors, dtype=float).tolist()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def certify(kind: str, matrix, graph: Graph, target, *, spectral_tol: float | None = None,
            eigenbasis=None, eigen_order=None, test_vectors=None, check_ssp: bool = False,
            zero_tol: float | None = None, params: dict | None = None) -> RealizationCertificate:
    """Measure a candidate and return its certificate, or raise CertificationError."""
    m = symmat.symmetric(matrix)
    target = sorted(float(x) for x in target)
    tol = default_spectral_tol(target) if spectral_tol is None else spectral_tol
    res = symmat.spectral_residual(m, target)
    pat = symmat.in_pattern(m, graph, zero_tol)
    margin = None
    if eigenbasis is not None and test_vectors is not None:
        margin = nowhere_zero_margin(eigenbasis, test_vectors)
    rep = ssp_check(m) if check_ssp else None
    if res > tol:
        raise CertificationError(f"{kind}: spectral residual {res:.3g} exceeds {tol:.3g}")
    if not pat.ok:
        raise CertificationError(f"{kind}: pattern violations {pat.violations[:3]}")
    return RealizationCertificate(
        kind, m, graph, target, tol, res, pat, margin,
        None if eigenbasis is None else np.asarray(eigenbasis, dtype=float),
        None if eigen_order is None else [float(x) for x in eigen_order],
        None if test_vectors is None else [list(map(float, y)) for y in test_vectors],
        rep, dict(params or {}))


@dataclass
class VerifyReport:
    checks: dict

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks.values())

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": self.checks}


def verify(data: dict, *, spectral_tol: float | None = None, zero_tol: float | None = None,
           margin_floor: float = 0.0) -> VerifyReport:
    """Recompute every claim of a serialised certificate from its matrix.

    Stored residuals and margins are ignored; only the matrix, graph, target,
    tolerance, and (when present) eigenbasis and test vectors are read.
    """
    m = symmat.from_json(data["matrix"])
    g = Graph.from_json(data["graph"])
    target = np.sort(np.asarray(data["target"], dtype=float))
    tol = spectral_tol if spectral_tol is not None else float(data.get("spectral_tol") or
                                                              default_spectral_tol(target))
    checks: dict[str, dict] = {}
    pat = symmat.in_pattern(m, g, zero_tol)
    checks["pattern"] = {"ok": pat.ok, "edge_margin": symmat._finite(pat.edge_margin),
                         "violations": [list(v) for v in pat.violations[:10]]}
    res = symmat.spectral_residual(m, target)
    checks["spectrum"] = {"ok": bool(res <= tol), "residual": res, "tol": tol}
    grouped = symmat.spectrum_grouped(m)
    expected = symmat.Spectrum.from_values(target)
    checks["grouping"] = {"ok": grouped.multiplicities == expected.multiplicities,
                          "grouped": grouped.to_json()}
    if data.get("eigenbasis") is not None:
        u = np.asarray(data["eigenbasis"], dtype=float)
        lam = np.asarray(data["eigen_order"], dtype=float)
        n = m.shape[0]
        orth = float(np.max(np.abs(u.T @ u - np.eye(n))))
        diag = float(np.max(np.abs(m @ u - u * lam)))
        scale = max(1.0, float(np.max(np.abs(lam))))
        ok = orth <= 1e-8 and diag <= max(tol, 1e-8 * scale)
        checks["eigenbasis"] = {"ok": ok, "orthogonality": orth, "eigen_residual": diag}
        if data.get("test_vectors") is not None:
            margin = nowhere_zero_margin(u, data["test_vectors"])
            checks["nowhere_zero"] = {"ok": bool(margin > margin_floor), "margin": margin}
    if data.get("ssp"):
        rep = ssp_check(m)
        checks["ssp"] = {"ok": rep.holds, "smallest_singular_value": rep.smallest_singular_value}
    return VerifyReport(checks)
