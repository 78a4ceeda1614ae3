"""Homotopy on the manifolds of tree matrices with edge entries t**f(e).

The diagonal is solved by Newton so that the spectrum equals a prescribed
simple spectrum Lambda; as t -> 0 the solution tends to Lambda itself.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field

import numpy as np

from .._newton import ConvergenceError
from ..graphcore import Graph, GraphError, diameter, path_between

UNDERFLOW = 1e-300


@dataclass
class ExponentSchedule:
    tree: Graph
    mode: str
    g: dict            # edge -> positive int
    N0: int
    f: dict            # edge -> N0 + g(edge)
    s: dict = field(repr=False)   # (i, j), i <= j -> sum of f over the tree path

    @property
    def max_f(self) -> int:
        return max(self.f.values(), default=0)

    @property
    def max_s(self) -> int:
        return max(self.s.values(), default=0)

    @property
    def t_min(self) -> float:
        """Smallest t for which t**max_s stays above the underflow guard."""
        return UNDERFLOW ** (1.0 / self.max_s) if self.max_s else 0.0

    def s_of(self, i: int, j: int) -> int:
        return self.s[(min(i, j), max(i, j))]

    def c_matrix(self, lambdas) -> np.ndarray:
        """c(i, j) = prod over path vertices k != j of 1/(lambda_j - lambda_k)."""
        lam = np.asarray(lambdas, dtype=float)
        n = self.tree.n
        c = np.ones((n, n))
        for i, j in itertools.product(range(1, n + 1), repeat=2):
            for k in path_between(self.tree, i, j):
                if k != j:
                    c[i - 1, j - 1] /= lam[j - 1] - lam[k - 1]
        return c


def exponent_schedule(tree: Graph, mode: str = "uniform") -> ExponentSchedule:
    """Edge exponents for the tree homotopy.

    ``uniform``: g = 1 and N0 = diam + 1.  ``injective``: g(e_k) = 2**(k-1)
    over the sorted edge list and N0 = sum(g) * diam + 1, which makes s
    injective on unordered pairs (checked by enumeration).
    """
    if not tree.is_tree():
        raise GraphError("exponent schedules are defined on trees")
    edges = tree.sorted_edges()
    diam = diameter(tree)
    if mode == "uniform":
        g = {e: 1 for e in edges}
        N0 = diam + 1
    elif mode == "injective":
        g = {e: 2 ** k for k, e in enumerate(edges)}
        N0 = sum(g.values()) * diam + 1
    else:
        raise ValueError(f"unknown schedule mode {mode!r}")
    assert N0 > max(g.values(), default=0) * diam
    f = {e: N0 + g[e] for e in edges}
    s = {}
    for i in tree.vertices:
        for j in range(i, tree.n + 1):
            p = path_between(tree, i, j)
            s[(i, j)] = sum(f[(min(a, b), max(a, b))] for a, b in zip(p, p[1:]))
    sched = ExponentSchedule(tree, mode, g, N0, f, s)
    if mode == "injective":
        off = [v for (i, j), v in s.items() if i < j]
        if len(set(off)) != len(off):
            raise AssertionError("s is not injective")  # cannot happen with powers of two
        if sched.t_min > 0.1:
            raise ValueError(f"tree too large: t**{sched.max_s} underflows for every t <= 0.1; "
                             "shrink the instance")
    return sched


def homotopy_matrix(schedule: ExponentSchedule, diag, t: float) -> np.ndarray:
    a = np.diag(np.asarray(diag, dtype=float))
    for (i, j), fe in schedule.f.items():
        a[i - 1, j - 1] = a[j - 1, i - 1] = t ** fe
    return a


def tree_homotopy_solve(schedule: ExponentSchedule, target, t: float, *, d0=None,
                        max_iter: int = 60) -> np.ndarray:
    """Point of M_{f,T}(t) with spectrum ``target``; Newton on the diagonal.

    The Jacobian of the sorted eigenvalues with respect to the diagonal is
    the matrix of squared eigenvector entries u_k(i)**2.
    """
    lam = np.asarray(target, dtype=float)
    n = schedule.tree.n
    if lam.shape != (n,):
        raise ValueError(f"need {n} target values, got {lam.size}")
    if n > 1 and np.any(np.diff(lam) <= 0):
        raise ValueError("target must be strictly ascending")
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    if schedule.max_f and t ** schedule.max_f < UNDERFLOW:
        raise ValueError(f"t={t} underflows t**{schedule.max_f}")
    tol = 1e-13 * (1.0 + float(np.max(np.abs(lam))))
    d = lam.copy() if d0 is None else np.asarray(d0, dtype=float).copy()
    a = homotopy_matrix(schedule, d, t)
    w, u = np.linalg.eigh(a)
    res = float(np.max(np.abs(w - lam)))
    for _ in range(max_iter):
        if res <= tol:
            return a
        try:
            step = np.linalg.solve((u ** 2).T, lam - w)
        except np.linalg.LinAlgError:
            break
        scale = 1.0
        while scale > 1e-4:
            trial = d + scale * step
            np.fill_diagonal(a, trial)
            w2, u2 = np.linalg.eigh(a)
            r2 = float(np.max(np.abs(w2 - lam)))
            if r2 < res:
                break
            scale /= 2
        else:
            np.fill_diagonal(a, d)
            break
        d, w, u, res = trial, w2, u2, r2
    if res <= tol:
        return a
    raise ConvergenceError(f"homotopy Newton diverged at t={t}: residual {res:.3g}", res)


def tree_eigenvectors(a: np.ndarray, tree: Graph, lambdas) -> np.ndarray:
    """Eigenvector columns of a tree matrix with componentwise relative accuracy.

    Column j solves the eigen-equation rooted at vertex j with u(j, j) > 0,
    propagating x_i = a(i, parent) x_parent / phi(i) from the root, where
    phi(i) = lambda_j - a(i, i) - sum over children c of a(i, c)**2 / phi(c).
    Meant for matrices close to diag(lambdas), where phi(i) never vanishes.
    """
    n = tree.n
    lam = np.asarray(lambdas, dtype=float)
    adj = tree.adjacency()
    u = np.zeros((n, n))
    for root in range(1, n + 1):
        parent = {root: 0}
        order = [root]
        for v in order:
            for w in adj[v]:
                if w not in parent:
                    parent[w] = v
                    order.append(w)
        phi = {}
        for v in reversed(order[1:]):
            acc = lam[root - 1] - a[v - 1, v - 1]
            for c in adj[v]:
                if parent.get(c) == v:
                    acc -= a[v - 1, c - 1] ** 2 / phi[c]
            phi[v] = acc
        x = np.zeros(n)
        x[root - 1] = 1.0
        for v in order[1:]:
            p = parent[v]
            x[v - 1] = a[v - 1, p - 1] * x[p - 1] / phi[v]
        u[:, root - 1] = x / np.linalg.norm(x)
    return u


@dataclass
class DecayTable:
    t_values: list
    ratios: list        # per t: n x n array of u(i, j) / t**s(i, j)
    c: np.ndarray
    offdiag_max: list   # per t: max_{i != j} |u(i, j)|
    residuals: list

    def errors(self) -> np.ndarray:
        """|ratio - c| with shape (len(t_values), n, n)."""
        return np.array([np.abs(r - self.c) for r in self.ratios])

    def relative_errors(self) -> np.ndarray:
        return self.errors() / np.abs(self.c)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf)
        wr.writerow(["t", "i", "j", "ratio", "c", "abs_error", "offdiag_max"])
        n = self.c.shape[0]
        for t, r, om in zip(self.t_values, self.ratios, self.offdiag_max):
            for i in range(n):
                for j in range(n):
                    wr.writerow([repr(t), i + 1, j + 1, repr(float(r[i, j])),
                                 repr(float(self.c[i, j])), repr(float(abs(r[i, j] - self.c[i, j]))),
                                 repr(om)])
        return buf.getvalue()


DEFAULT_DECAY_TS = (1e-1, 1e-2, 1e-3)


def decay_ratio_table(schedule: ExponentSchedule, target, t_values=DEFAULT_DECAY_TS) -> DecayTable:
    """Ratios u(i, j)/t**s(i, j) along a decreasing sequence of t."""
    if schedule.tree.n > 6:
        raise ValueError("decay tables are limited to trees of order <= 6")
    t_values = [float(t) for t in t_values]
    if any(b >= a for a, b in zip(t_values, t_values[1:])):
        raise ValueError("t values must be decreasing")
    if t_values and t_values[-1] < schedule.t_min:
        raise ValueError(f"t={t_values[-1]} is below the underflow guard {schedule.t_min:.3g}")
    lam = np.asarray(target, dtype=float)
    n = schedule.tree.n
    ratios, offmax, residuals = [], [], []
    for t in t_values:
        a = tree_homotopy_solve(schedule, lam, t)
        u = tree_eigenvectors(a, schedule.tree, lam)
        scale = np.array([[t ** schedule.s_of(i + 1, j + 1) for j in range(n)] for i in range(n)])
        ratios.append(u / scale)
        off = np.abs(u - np.diag(np.diag(u)))
        offmax.append(float(off.max(initial=0.0)))
        residuals.append(float(np.max(np.abs(np.linalg.eigvalsh(a) - lam))))
    return DecayTable(t_values, ratios, schedule.c_matrix(lam), offmax, residuals)
