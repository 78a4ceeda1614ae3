"""Generic realisation: matrices in S(G) whose eigenbasis sends prescribed
vectors to nowhere-zero vectors."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .. import symmat
from .._newton import ConvergenceError, newton_simple
from ..certificate import CertificationError, RealizationCertificate, certify, nowhere_zero_margin
from ..graphcore import Graph, GraphError, components
from ..graphcore import spanning_tree as bfs_spanning_tree
from ..ssp import edge_extend, ssp_check
from .homotopy import exponent_schedule, tree_homotopy_solve

log = logging.getLogger(__name__)

DEFAULT_T_SCHEDULE = (0.2, 0.1, 0.05, 0.02, 0.01, 5e-3, 2e-3, 1e-3, 1e-4, 1e-5, 1e-6)
MARGIN_FLOOR = 1e-6


class RealizationError(RuntimeError):
    def __init__(self, msg, best_margin=None):
        super().__init__(msg)
        self.best_margin = best_margin


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def _check_test_vectors(test_vectors, n):
    if test_vectors is None:
        return [list(row) for row in np.eye(n)]
    ys = [list(map(float, y)) for y in test_vectors]
    for y in ys:
        if len(y) != n:
            raise ValueError(f"test vector of length {len(y)}, expected {n}")
        if not np.any(np.asarray(y)):
            raise ValueError("test vectors must be nonzero")
    return ys


def _user_basis(u_sorted: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Permute ascending-eigenvalue columns into the caller's target order."""
    rank = np.argsort(np.argsort(target, kind="stable"), kind="stable")
    return u_sorted[:, rank]


def _tree_candidates(tree: Graph, lam_hat: np.ndarray, t_schedule, seed: int, restarts: int):
    """Yield (normalised tree matrix, route info), homotopy points first.

    The homotopy runs down the t schedule from the largest t.  After it, seeded
    least-norm Newton solves from random points of S(tree) follow; those reach
    well-mixed eigenbases that the small-t regime cannot provide once the
    tree has diameter >= 3 (eigenvector entries decay like t**s(i, j)).
    """
    sched = exponent_schedule(tree, "uniform")
    for t in t_schedule:
        try:
            yield tree_homotopy_solve(sched, lam_hat, t), {"route": "homotopy", "t": t}
        except ConvergenceError as exc:
            log.debug("homotopy failed at t=%g: %s", t, exc)
    n = tree.n
    edges = [(i - 1, j - 1) for i, j in tree.sorted_edges()]
    free = [(i, i) for i in range(n)] + edges
    tol = 1e-13 * (1.0 + float(np.max(np.abs(lam_hat))))
    for attempt in range(restarts):
        rng = np.random.default_rng([seed, attempt])
        a = np.diag(rng.permutation(lam_hat))
        for i, j in edges:
            a[i, j] = a[j, i] = rng.uniform(0.5, 1.5) * rng.choice([-1.0, 1.0])
        a, res, ok = newton_simple(a, lam_hat, free, tol=tol, max_iter=80)
        if ok and min((abs(a[i, j]) for i, j in edges), default=1.0) > 1e-3:
            yield a, {"route": "newton-restart", "attempt": attempt}


def generic_realize(g: Graph, target, test_vectors=None, *, seed: int = 0,
                    margin_floor: float = MARGIN_FLOOR, t_schedule=DEFAULT_T_SCHEDULE,
                    restarts: int = 20, eps: float = 0.1):
    """A in S(g) with simple spectrum ``target``, the SSP, and U^T A U = diag(target)
    such that U y is nowhere-zero (margin > ``margin_floor`` * |y|) for each test vector.

    Columns of U follow the order of ``target``; test vectors are read in the
    same coordinates.  Returns (A, U, certificate).
    """
    if not g.is_connected():
        raise GraphError("generic realisation needs a connected graph")
    target = np.asarray(target, dtype=float)
    n = g.n
    if target.shape != (n,):
        raise ValueError(f"need {n} eigenvalues, got {target.size}")
    lam = np.sort(target)
    if n > 1 and np.min(np.diff(lam)) <= symmat.default_gap_tol(lam):
        raise ValueError("generic_realize needs distinct eigenvalues")
    ys = _check_test_vectors(test_vectors, n)

    if n == 1:
        a = lam.reshape(1, 1).copy()
        u = np.ones((1, 1))
        cert = certify("generic", a, g, lam, eigenbasis=u, eigen_order=target, test_vectors=ys,
                       check_ssp=True, params={"seed": seed, "route": "trivial"})
        return a, u, cert

    centre = float(np.mean(lam))
    h = float(np.ptp(lam)) / (n - 1)
    lam_hat = (lam - centre) / h
    tree = bfs_spanning_tree(g)
    best = -np.inf

    def margin_of(m_hat):
        _, u_s = symmat.eigh_signed(m_hat)
        return nowhere_zero_margin(_user_basis(u_s, target), ys)

    for a_hat, info in _tree_candidates(tree, lam_hat, t_schedule, seed, restarts):
        if not ssp_check(a_hat).holds:
            continue
        m0 = margin_of(a_hat)
        best = max(best, m0)
        if m0 <= margin_floor:
            continue
        try:
            b_hat, e_used = edge_extend(a_hat, tree, g, eps, accept=lambda b: margin_of(b) > margin_floor)
        except (ConvergenceError, ValueError) as exc:
            log.debug("edge extension failed: %s", exc)
            continue
        a = h * b_hat + centre * np.eye(n)
        _, u_s = symmat.eigh_signed(a)
        u = _user_basis(u_s, target)
        params = {"seed": seed, "eps": e_used, "spanning_tree": tree.to_json()["edges"], **info}
        try:
            cert = certify("generic", a, g, lam, eigenbasis=u, eigen_order=target, test_vectors=ys,
                           check_ssp=True, params=params)
        except CertificationError as exc:
            log.debug("candidate rejected: %s", exc)
            continue
        if cert.ssp.holds and cert.nowhere_zero_margin > margin_floor:
            return a, u, cert
    raise RealizationError(f"no certified realisation; best margin {best:.3g}", best)


def complete_realize(m: int, spectrum, test_vectors=None, *, seed: int = 0,
                     margin_floor: float = MARGIN_FLOOR, max_tries: int = 50):
    """A = Q diag(spectrum) Q^T in S(K_m) from seeded random orthogonal Q.

    ``spectrum`` is a list with repeats; columns of U follow its ascending order.
    """
    from ..graphcore import complete

    lam = np.sort(np.asarray(spectrum, dtype=float))
    if lam.shape != (m,):
        raise ValueError(f"need {m} eigenvalues, got {lam.size}")
    g = complete(m)
    ys = _check_test_vectors(test_vectors, m)
    if m == 1:
        a = lam.reshape(1, 1).copy()
        u = np.ones((1, 1))
        return a, u, certify("complete", a, g, lam, eigenbasis=u, eigen_order=lam,
                             test_vectors=ys, params={"seed": seed})
    if np.ptp(lam) <= symmat.default_gap_tol(lam):
        raise ValueError("a scalar spectrum is not realisable in S(K_m) for m >= 2")
    rng = np.random.default_rng(seed)
    for attempt in range(max_tries):
        q = random_orthogonal(m, rng)
        a = symmat.symmetric(q @ np.diag(lam) @ q.T)
        zt = symmat.default_zero_tol(a)
        off = np.abs(a[~np.eye(m, dtype=bool)])
        if off.min() <= zt or nowhere_zero_margin(q, ys) <= margin_floor:
            continue
        cert = certify("complete", a, g, lam, eigenbasis=q, eigen_order=lam, test_vectors=ys,
                       params={"seed": seed, "attempt": attempt})
        return a, q, cert
    raise RealizationError(f"complete_realize: no valid draw in {max_tries} tries")


class NowhereZeroError(RuntimeError):
    def __init__(self, msg, coordinate=None, eigenvalue=None):
        super().__init__(msg)
        self.coordinate = coordinate
        self.eigenvalue = eigenvalue


def nowhere_zero_eigenbasis(a, *, seed: int = 0, gap_tol: float | None = None,
                            zero_tol: float = 1e-8, max_mixes: int = 50):
    """Orthonormal eigenbasis with no entry of magnitude <= ``zero_tol``.

    Within every eigenspace of dimension >= 2 the basis is mixed by seeded
    random orthogonal matrices until nowhere-zero.  Returns (eigenvalues, U)
    ascending.
    """
    a = symmat.symmetric(a)
    w, u = np.linalg.eigh(a)
    grouped = symmat.group_values(w, gap_tol)
    rng = np.random.default_rng(seed)
    out = u.copy()
    lo = 0
    for value, mult in grouped.groups:
        hi = lo + mult
        block = u[:, lo:hi]
        for _ in range(max_mixes + 1):
            if np.min(np.abs(block)) > zero_tol:
                break
            if mult == 1:
                break
            block = u[:, lo:hi] @ random_orthogonal(mult, rng)
        bad = np.argwhere(np.abs(block) <= zero_tol)
        if bad.size:
            i = int(bad[0][0]) + 1
            raise NowhereZeroError(
                f"eigenspace of {value:.6g} (dim {mult}) vanishes at coordinate {i}",
                coordinate=i, eigenvalue=value)
        out[:, lo:hi] = block
        lo = hi
    return w, out


def eigenbasis_for_test_vectors(a, eigen_order, test_vectors, *, seed: int = 0,
                                gap_tol: float | None = None, margin_floor: float = MARGIN_FLOOR,
                                max_mixes: int = 50) -> np.ndarray:
    """Orthogonal U with U^T A U = diag(eigen_order) and U y nowhere-zero.

    Eigenspaces are mixed by seeded random orthogonal matrices; this is the
    argument that makes a spectrum with a nowhere-zero eigenbasis and no
    simple eigenvalues generically realisable.
    """
    a = symmat.symmetric(a)
    order = np.asarray(eigen_order, dtype=float)
    w, u = np.linalg.eigh(a)
    grouped = symmat.group_values(w, gap_tol)
    # positions in eigen_order belonging to each eigenvalue group
    slots = []
    lo = 0
    taken = np.zeros(order.size, dtype=bool)
    for value, mult in grouped.groups:
        idx = [k for k in np.argsort(np.abs(order - value), kind="stable") if not taken[k]][:mult]
        if len(idx) < mult or np.max(np.abs(order[idx] - value)) > 1e-6 * (1 + abs(value)):
            raise ValueError("eigen_order does not match the spectrum of the matrix")
        idx = sorted(idx)
        taken[idx] = True
        slots.append((lo, lo + mult, idx))
        lo += mult
    rng = np.random.default_rng(seed)
    best = -np.inf
    for attempt in range(max_mixes + 1):
        out = np.zeros_like(u)
        for lo, hi, idx in slots:
            block = u[:, lo:hi]
            if attempt and hi - lo > 1:
                block = block @ random_orthogonal(hi - lo, rng)
            out[:, idx] = block
        margin = nowhere_zero_margin(out, test_vectors)
        best = max(best, margin)
        if margin > margin_floor:
            return out
    raise NowhereZeroError(f"no eigenbasis mixing reached margin {margin_floor:g} "
                           f"(best {best:.3g})")


@dataclass
class BlockRealization:
    matrix: np.ndarray
    blocks: list          # (original vertex labels, eigenvalues in row order, U)
    certificate: RealizationCertificate


def realize_01_multiplicity(g: Graph, v, eigenvalues, test_vectors=None, *, seed: int = 0,
                            margin_floor: float = MARGIN_FLOOR) -> BlockRealization:
    """Block-diagonal realisation of a 0-1 multiplicity matrix that fits g."""
    from ..multiplicity import as_matrix, fits

    v = as_matrix(v)
    lam = np.asarray(eigenvalues, dtype=float)
    if not np.isin(v, (0, 1)).all():
        raise ValueError("multiplicity matrix must be 0-1")
    if lam.shape != (v.shape[0],):
        raise ValueError("need one eigenvalue per row")
    if np.any(np.diff(lam) <= 0):
        raise ValueError("eigenvalues must be strictly ascending")
    if not fits(v, g):
        raise ValueError("multiplicity matrix does not fit the graph")
    comps = components(g)
    a = np.zeros((g.n, g.n))
    blocks = []
    margins = []
    for col, (comp, relabel) in enumerate(comps):
        verts = sorted(relabel, key=relabel.get)
        vals = lam[v[:, col] == 1]
        tv = None if test_vectors is None else test_vectors[col]
        a_i, u_i, cert_i = generic_realize(comp, vals, tv, seed=seed, margin_floor=margin_floor)
        z = np.array(verts) - 1
        a[np.ix_(z, z)] = a_i
        blocks.append((verts, vals, u_i))
        margins.append(cert_i.nowhere_zero_margin)
    target = np.repeat(lam, v.sum(axis=1))
    cert = certify("multiplicity01", a, g, target,
                   params={"seed": seed, "component_margins": margins})
    return BlockRealization(a, blocks, cert)
