"""Matrices on joins and partial joins.

Two-eigenvalue join matrices come from pairing eigenvectors of A in S(G) and
C in S(H) through 2x2 blocks [[a, b], [b, mu + nu - a]], each of which has
eigenvalues exactly {mu, nu}.  Partial joins conjugate M (+) diag(sigma')
by an orthogonal matrix built from a generic realisation on H.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import symmat
from ._newton import ConvergenceError
from .certificate import CertificationError, certify
from .graphcore import (Graph, GraphError, classify, components, cycle, generalized_star,
                        join, make_family, partial_join, vertex_boundary)
from .multiplicity import as_matrix, compatible, construct_diff2, fits
from .realize.cycles import cycle_realize
from .realize.generic import (MARGIN_FLOOR, NowhereZeroError, RealizationError,
                              complete_realize, eigenbasis_for_test_vectors, generic_realize,
                              random_orthogonal)

log = logging.getLogger(__name__)

JOIN_ATTEMPTS = 20


class JoinError(RuntimeError):
    """Numeric construction failed after all retries."""


@dataclass
class JoinPlan:
    mu: float
    nu: float
    alphas: list       # G-side value for each interior row
    betas: list        # H-side value mu + nu - alpha
    couplings: list    # b_j = sqrt((alpha_j - mu)(nu - alpha_j))
    pairs: list        # per interior row: (G components, H components), 0-based, ascending

    def to_json(self) -> dict:
        return {"mu": self.mu, "nu": self.nu, "alphas": self.alphas, "betas": self.betas,
                "couplings": self.couplings,
                "pairs": [[list(a), list(b)] for a, b in self.pairs]}


def coupled_block(alpha: float, mu: float, nu: float) -> np.ndarray:
    """[[alpha, b], [b, mu + nu - alpha]] with eigenvalues mu and nu."""
    if not mu < alpha < nu:
        raise ValueError("alpha must lie strictly between mu and nu")
    b = np.sqrt((alpha - mu) * (nu - alpha))
    return np.array([[alpha, b], [b, mu + nu - alpha]])


def join_plan(v, w, mu: float, nu: float) -> JoinPlan:
    v, w = as_matrix(v), as_matrix(w)
    if not mu < nu:
        raise ValueError("need mu < nu")
    r = v.shape[0]
    alphas = [mu + j * (nu - mu) / (r - 1) for j in range(1, r - 1)]
    betas = [mu + nu - a for a in alphas]
    couplings = [float(np.sqrt((a - mu) * (nu - a))) for a in alphas]
    pairs = [(tuple(int(i) for i in np.flatnonzero(v[j])), tuple(int(i) for i in np.flatnonzero(w[j])))
             for j in range(1, r - 1)]
    return JoinPlan(float(mu), float(nu), alphas, betas, couplings, pairs)


def _check_side(mat: np.ndarray, g: Graph, name: str):
    if not fits(mat, g):
        raise ValueError(f"{name} does not fit its graph")
    comps = components(g)
    for i, (comp, _) in enumerate(comps):
        col = mat[:, i]
        if np.all(col <= 1):
            continue
        if classify(comp) == "complete" and np.all(col[1:-1] <= 1):
            if np.count_nonzero(col) < 2 and comp.n > 1:
                raise ValueError(f"{name}: column {i + 1} has a single eigenvalue on K_{comp.n}")
            continue
        raise ValueError(f"{name}: column {i + 1} is not a 0-1 column (only complete "
                         "components may carry larger border entries)")


def _realize_side(g: Graph, mat: np.ndarray, values, tests, seed: int, margin_floor: float):
    """Block-diagonal A in S(g) with column i of ``mat`` giving the spectrum of component i.

    ``values`` holds one eigenvalue per row (not necessarily ascending);
    ``tests[i]`` are test vectors for component i in the coordinates of its
    row-ordered eigenvalue list.  Returns (A, vecs) where vecs[(j, i)] is the
    unit eigenvector of A for interior row j on component i.
    """
    values = np.asarray(values, dtype=float)
    a = np.zeros((g.n, g.n))
    vecs = {}
    for i, (comp, relabel) in enumerate(components(g)):
        col = mat[:, i]
        vals_row = np.repeat(values, col)
        z = np.array(sorted(relabel, key=relabel.get)) - 1
        ys = None if tests is None else tests[i]
        if np.all(col <= 1):
            a_i, u_row, _ = generic_realize(comp, vals_row, ys, seed=seed, margin_floor=margin_floor)
        else:
            order = np.argsort(vals_row, kind="stable")
            ys_asc = None if ys is None else [np.asarray(y)[order] for y in ys]
            a_i, u_asc, _ = complete_realize(comp.n, vals_row, ys_asc, seed=seed,
                                             margin_floor=margin_floor)
            u_row = np.empty_like(u_asc)
            u_row[:, order] = u_asc
        a[np.ix_(z, z)] = a_i
        pos = np.concatenate([[0], np.cumsum(col)])
        for j in range(1, mat.shape[0] - 1):
            if col[j]:
                vec = np.zeros(g.n)
                vec[z] = u_row[:, pos[j]]
                vecs[(j, i)] = vec
    return a, vecs


def join_two_eigenvalues(g: Graph, h: Graph, v, w, mu: float, nu: float, *, seed: int = 0,
                         margin_floor: float = MARGIN_FLOOR, attempts: int = JOIN_ATTEMPTS):
    """Matrix in S(g v h) with exactly the two eigenvalues mu < nu.

    Row 1 of the multiplicity matrices goes to mu, row r to nu; interior row j
    carries alpha_j on the g side and mu + nu - alpha_j on the h side, and the
    matching eigenvectors are coupled with strength b_j through a seeded
    orthogonal mixing R_j.  h is realised first with standard-basis test
    vectors; g then uses the test vectors that make the cross block nowhere-zero.
    """
    v, w = as_matrix(v), as_matrix(w)
    rep = compatible(v, w)
    if not rep.compatible:
        raise ValueError(f"multiplicity matrices are not compatible: {rep.to_json()}")
    _check_side(v, g, "V")
    _check_side(w, h, "W")
    plan = join_plan(v, w, mu, nu)
    r = v.shape[0]
    vals_g = [mu] + plan.alphas + [nu]
    vals_h = [mu] + plan.betas + [nu]
    gh = join(g, h)
    target = [mu] * int(v[0].sum() + w[0].sum() + v[1:-1].sum()) + \
             [nu] * int(v[-1].sum() + w[-1].sum() + w[1:-1].sum())
    comps_g = components(g)
    last = None
    for attempt in range(attempts):
        s = int(np.random.default_rng([seed, attempt]).integers(2 ** 31))
        rng = np.random.default_rng([seed, attempt, 1])
        try:
            c, y_vecs = _realize_side(h, w, vals_h, None, s, margin_floor)
            mix = [random_orthogonal(len(pg), rng) if attempt else np.eye(len(pg))
                   for pg, _ in plan.pairs]
            # coefficient of the g eigenvector (j, i) in column q of B
            coef = {}
            for jj, (pg, ph) in enumerate(plan.pairs):
                yq = np.array([y_vecs[(jj + 1, i2)] for i2 in ph])      # d_j x |h|
                mixed = plan.couplings[jj] * mix[jj] @ yq
                for slot, i in enumerate(pg):
                    coef[(jj + 1, i)] = mixed[slot]
            tests = []
            for i, (comp, _) in enumerate(comps_g):
                col = v[:, i]
                pos = np.concatenate([[0], np.cumsum(col)])
                ys = np.zeros((h.n, int(col.sum())))
                for j in range(1, r - 1):
                    if col[j]:
                        ys[:, pos[j]] = coef[(j, i)]
                if np.any(np.all(ys == 0, axis=1)):
                    raise NowhereZeroError(f"component {i + 1} of G is not coupled to every vertex of H")
                tests.append(list(ys))
            a, x_vecs = _realize_side(g, v, vals_g, tests, s, margin_floor)
            b = np.zeros((g.n, h.n))
            for jj, (pg, ph) in enumerate(plan.pairs):
                xj = np.array([x_vecs[(jj + 1, i)] for i in pg]).T
                yj = np.array([y_vecs[(jj + 1, i2)] for i2 in ph]).T
                b += plan.couplings[jj] * xj @ mix[jj] @ yj.T
            m = np.block([[a, b], [b.T, c]])
            m = symmat.project_to_pattern(m, gh)
            two = np.linalg.norm((m - mu * np.eye(gh.n)) @ (m - nu * np.eye(gh.n)), 2)
            if two > 1e-7 * (nu - mu) ** 2:
                raise CertificationError(f"two-eigenvalue identity off by {two:.3g}")
            cert = certify("join2", m, gh, target,
                           params={"seed": seed, "attempt": attempt, "plan": plan.to_json(),
                                   "cross_margin": float(np.min(np.abs(b))),
                                   "two_eigenvalue_residual": float(two),
                                   "V": v.tolist(), "W": w.tolist()})
            return cert
        except (RealizationError, NowhereZeroError, CertificationError, ConvergenceError) as exc:
            log.debug("join attempt %d failed: %s", attempt, exc)
            last = exc
    raise JoinError(f"join_two_eigenvalues failed after {attempts} attempts: {last}")


def _split_matrix(m: np.ndarray, v1, v2):
    z1, z2 = np.array(v1) - 1, np.array(v2) - 1
    return m[np.ix_(z1, z1)], m[np.ix_(z1, z2)], m[np.ix_(z2, z2)]


def partial_join_extend(m, g: Graph, v1, v2, h: Graph, sigma_extra=(), *, seed: int = 0,
                        margin_floor: float = MARGIN_FLOOR, gap_tol: float | None = None):
    """N in S((g[V1], X) v h) with spectrum sigma(m) together with ``sigma_extra``.

    X is the vertex boundary of V2 in g.  The block m[V2] is replaced by a
    generic realisation on h whose eigenvectors carry the old coupling
    B0 to h nowhere-zero.  Repeated values in sigma(m[V2]) + sigma_extra are
    accepted only when h is a cycle.
    Returns (certificate, g_prime).
    """
    m = symmat.symmetric(m)
    v1, v2 = sorted(set(v1)), sorted(set(v2))
    if set(v1) & set(v2) or set(v1) | set(v2) != set(g.vertices):
        raise ValueError("V1 and V2 must partition the vertex set")
    if not h.is_connected():
        raise GraphError("h must be connected")
    pat = symmat.in_pattern(m, g)
    if not pat.ok:
        raise ValueError(f"m is not in S(g): {pat.violations[:3]}")
    x = vertex_boundary(g, v2)
    if not set(x) <= set(v1):
        raise ValueError("boundary of V2 must lie in V1")
    sigma_extra = [float(s) for s in sigma_extra]
    s, t = len(v2), len(sigma_extra)
    if h.n != s + t:
        raise ValueError(f"|h| = {h.n} must equal |V2| + |sigma'| = {s + t}")
    g1 = g.induced(v1)
    pos1 = {u: k + 1 for k, u in enumerate(v1)}
    gp = partial_join(g1, [pos1[u] for u in x], h, h.vertices)

    m1, b0, c = _split_matrix(m, v1, v2)
    lam0, q = np.linalg.eigh(c)
    order = np.concatenate([lam0, sigma_extra])
    y_cols = np.vstack([q.T @ b0.T, np.zeros((t, len(v1)))])        # |h| x |V1|
    ys = [y_cols[:, k] for k in range(len(v1)) if np.any(b0[k] != 0)]
    srt = np.sort(order)
    tol = symmat.default_gap_tol(srt) if gap_tol is None else gap_tol
    distinct = h.n == 1 or np.min(np.diff(srt)) > tol
    if distinct:
        c_new, u, sub = generic_realize(h, order, ys or None, seed=seed, margin_floor=margin_floor)
        route = "generic"
    elif classify(h) == "cycle":
        c_new, sub = cycle_realize(order, seed=seed, gap_tol=gap_tol)
        u = eigenbasis_for_test_vectors(c_new, order, ys or [np.ones(h.n)], seed=seed,
                                        gap_tol=tol, margin_floor=margin_floor)
        route = "cycle"
    else:
        raise ValueError("repeated values in sigma(m[V2]) + sigma' are only supported when h is a cycle")

    # conjugate M (+) diag(sigma') by I (+) U (Q^T (+) I)
    n1 = len(v1)
    big = np.zeros((n1 + h.n, n1 + h.n))
    big[:n1, :n1] = m1
    big[:n1, n1:n1 + s] = b0
    big[n1:n1 + s, :n1] = b0.T
    big[n1:n1 + s, n1:n1 + s] = c
    big[n1 + s:, n1 + s:] = np.diag(sigma_extra)
    rot = np.zeros((h.n, h.n))
    rot[:s, :s] = q.T
    rot[s:, s:] = np.eye(t)
    w_tot = np.eye(n1 + h.n)
    w_tot[n1:, n1:] = u @ rot
    n_mat = symmat.project_to_pattern(w_tot @ big @ w_tot.T, gp)
    target = np.concatenate([np.linalg.eigvalsh(m), sigma_extra])
    cross = n_mat[np.ix_(np.array([pos1[u_] for u_ in x], dtype=int) - 1, np.arange(n1, n1 + h.n))]
    cert = certify("partial_join", n_mat, gp, target,
                   params={"seed": seed, "route": route, "V1": v1, "V2": v2, "X": x,
                           "sigma_extra": sigma_extra,
                           "cross_margin": float(np.min(np.abs(cross))) if cross.size else None,
                           "h_margin": sub.nowhere_zero_margin})
    return cert, gp


def extra_values(lambdas, t: int) -> list:
    """t values avoiding ``lambdas``: midpoints of the t largest gaps of the
    sorted list padded by one unit beyond each end, then greedy bisection of
    the largest remaining gap if more are needed."""
    lam = np.sort(np.asarray(lambdas, dtype=float))
    if t <= 0:
        return []
    if lam.size == 0:
        return [float(k) for k in range(t)]
    pts = np.concatenate([[lam[0] - 1.0], lam, [lam[-1] + 1.0]])
    gaps = np.diff(pts)
    first = np.argsort(-gaps, kind="stable")[:t]
    out = sorted(float((pts[k] + pts[k + 1]) / 2) for k in first)
    while len(out) < t:
        pts = np.sort(np.concatenate([pts, out]))
        k = int(np.argmax(np.diff(pts)))
        out = sorted(out + [float((pts[k] + pts[k + 1]) / 2)])
    return out


def partial_join_distinct(m, g: Graph, v1, v2, h: Graph, t: int | None = None, *, seed: int = 0,
                          margin_floor: float = MARGIN_FLOOR, gap_tol: float | None = None):
    """Partial join with t fresh values chosen away from sigma(m[V2]).

    t defaults to |h| - |V2|.  Returns (certificate, g_prime).
    """
    v2s = sorted(set(v2))
    t = h.n - len(v2s) if t is None else t
    lam = np.linalg.eigvalsh(symmat.principal_submatrix(symmat.symmetric(m), v2s))
    tol = symmat.default_gap_tol(lam) if gap_tol is None else gap_tol
    if lam.size > 1 and np.min(np.diff(lam)) <= tol:
        raise ValueError("m[V2] has repeated eigenvalues")
    return partial_join_extend(m, g, v1, v2, h, extra_values(lam, t), seed=seed,
                               margin_floor=margin_floor, gap_tol=gap_tol)


def q_join_upper_bound(g: Graph, h: Graph) -> int:
    if not (g.is_connected() and h.is_connected()):
        raise GraphError("both graphs must be connected")
    return max(2, abs(g.n - h.n))


def q_join_path_bound(q_g_path: int, n: int, h: Graph) -> int:
    """Bound for q(G v H) from a known q(G v P_n) with n <= |H|."""
    if not h.is_connected():
        raise GraphError("h must be connected")
    if n > h.n:
        raise ValueError("need n <= |H|")
    return q_g_path + h.n - n


def triple_parity_ok(multiplicities) -> bool:
    """Between any two eigenvalues of multiplicity 3 lies an odd number of
    eigenvalues, counted with multiplicity."""
    mult = list(multiplicities)
    triples = [k for k, x in enumerate(mult) if x == 3]
    return all(sum(mult[a + 1:b]) % 2 == 1 for a, b in zip(triples, triples[1:]))


# scenarios -----------------------------------------------------------------

def _default_lambdas(count: int, seed: int) -> list:
    rng = np.random.default_rng(seed)
    steps = rng.uniform(1.0, 2.0, size=count)
    return list(np.cumsum(steps) - steps[0])


def _doubled_cycle_matrix(lambdas, seed: int):
    vals = np.repeat(np.asarray(lambdas, dtype=float), 2)
    a, _ = cycle_realize(vals, seed=seed)
    return a


def scenario_wheel(m: int = 2, *, seed: int = 0, lambdas=None):
    """Ordered multiplicities (3, 1, 3, ..., 3) on K_1 v C_{4m-2}."""
    if m < 2:
        raise ValueError("wheel scenario needs m >= 2")
    lam = _default_lambdas(m, seed) if lambdas is None else list(lambdas)
    if len(lam) != m:
        raise ValueError(f"need {m} values")
    mat = _doubled_cycle_matrix(lam, seed)
    g = cycle(2 * m)
    v1, v2 = [2 * m], list(range(1, 2 * m))
    sigma = list(np.linalg.eigvalsh(mat[:-1, :-1]))
    h = cycle(4 * m - 2)
    cert, _ = partial_join_extend(mat, g, v1, v2, h, sigma, seed=seed)
    cert.params["scenario"] = {"name": "wheel", "m": m, "lambdas": [float(x) for x in lam]}
    mults = cert.grouped.multiplicities
    if not triple_parity_ok(mults):
        raise AssertionError(f"parity property violated: {mults}")
    return cert


def scenario_k2join(m: int = 2, family: str = "path", params=None, *, seed: int = 0, lambdas=None):
    """Spectrum {l_1^(3), ..., l_m^(3)} on K_2 v H with |H| = 3m - 2."""
    if m < 2:
        raise ValueError("k2join scenario needs m >= 2")
    h = make_family(family, params if params is not None else [3 * m - 2])
    if h.n != 3 * m - 2 or not h.is_connected():
        raise ValueError(f"h must be connected of order {3 * m - 2}")
    lam = _default_lambdas(m, seed) if lambdas is None else list(lambdas)
    mat = _doubled_cycle_matrix(lam, seed)
    g = cycle(2 * m)
    cert, _ = partial_join_extend(mat, g, [2 * m - 1, 2 * m], list(range(1, 2 * m - 1)), h,
                                  lam, seed=seed)
    cert.params["scenario"] = {"name": "k2join", "m": m, "family": family,
                               "lambdas": [float(x) for x in lam]}
    return cert


def scenario_diff2(orders_g, orders_h, *, mu: float = 0.0, nu: float = 2.0, seed: int = 0):
    """Two-eigenvalue matrix on (union of paths) v (union of paths)."""
    g = make_family("union", orders_g)
    h = make_family("union", orders_h)
    v, w = construct_diff2(orders_g, orders_h)
    cert = join_two_eigenvalues(g, h, v, w, mu, nu, seed=seed)
    cert.params["scenario"] = {"name": "diff2", "orders_g": list(orders_g),
                               "orders_h": list(orders_h)}
    return cert


def scenario_star(k: int = 3, family: str = "path", params=None, *, seed: int = 0):
    """Carry the spectrum of a matrix on a generalized star with k unit arms
    and one long arm over to K_1 v (k K_1 u H)."""
    if k < 1:
        raise ValueError("need k >= 1")
    h = make_family(family, params if params is not None else [4])
    if not h.is_connected():
        raise GraphError("h must be connected")
    g = generalized_star([1] * k + [h.n])
    rng = np.random.default_rng(seed)
    mat = np.zeros((g.n, g.n))
    for i, j in g.edges:
        mat[i - 1, j - 1] = mat[j - 1, i - 1] = rng.uniform(0.5, 1.5)
    # equal leaf diagonals give an eigenvalue of multiplicity k - 1
    for i in range(2, g.n + 1):
        mat[i - 1, i - 1] = 0.0 if i <= k + 1 else rng.uniform(-1, 1)
    mat[0, 0] = rng.uniform(-1, 1)
    v1 = list(range(1, k + 2))
    v2 = list(range(k + 2, g.n + 1))
    cert, _ = partial_join_extend(mat, g, v1, v2, h, (), seed=seed)
    before = symmat.spectrum_grouped(mat).multiplicities
    cert.params["scenario"] = {"name": "star", "k": k, "family": family,
                               "source_multiplicities": before}
    if sorted(before) != sorted(cert.grouped.multiplicities):
        raise AssertionError("unordered multiplicity list changed")
    return cert


SCENARIOS = {"wheel": scenario_wheel, "k2join": scenario_k2join,
             "diff2": scenario_diff2, "star": scenario_star}
