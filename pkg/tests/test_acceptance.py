"""Acceptance suite: one test per criterion, one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""

import copy
import functools
import itertools
import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import compositions, cycle_pattern_oracle, oracle_exists  # noqa: E402

from iepg import symmat  # noqa: E402
from iepg.certificate import verify  # noqa: E402
from iepg.graphcore import Graph, complete, cycle, disjoint_union, make_family, path, star  # noqa: E402
from iepg.joinbuild import (join_two_eigenvalues, partial_join_distinct, scenario_k2join,  # noqa: E402
                            scenario_wheel, triple_parity_ok)
from iepg.multiplicity import compatible, construct_diff2, fits, search_compatible_01  # noqa: E402
from iepg.realize import (cycle_realize, cycle_spectrum_check, decay_ratio_table,  # noqa: E402
                          exponent_schedule, generic_realize, jacobi_from_spectrum,
                          tree_homotopy_solve)
from iepg.ssp import ssp_check  # noqa: E402

RESULTS = {}


def record(number, ok, detail):
    RESULTS[number] = (bool(ok), detail)
    return ok


def distinct_spectrum(rng, n, lo=0.5, hi=2.0):
    return np.cumsum(rng.uniform(lo, hi, n)) - 3.0


# 1 ------------------------------------------------------------------------

def criterion_1():
    worst = 0.0
    positive = True
    for seed in range(100):
        rng = np.random.default_rng([1, seed])
        n = int(rng.integers(2, 11))
        lam = np.sort(rng.uniform(-10, 10, n))
        while np.min(np.diff(lam)) <= 1e-6:
            lam = np.sort(rng.uniform(-10, 10, n))
        j = jacobi_from_spectrum(lam)
        worst = max(worst, symmat.spectral_residual(j, lam) / np.ptp(lam))
        positive &= bool(np.all(np.diag(j, 1) > 0))
    return worst <= 1e-10 and positive, f"worst residual/spread {worst:.2e}, off-diagonals positive {positive}"


# 2 ------------------------------------------------------------------------

def _witness_ok(a, x, zt=1e-12):
    support = (np.abs(a) > zt) | np.eye(a.shape[0], dtype=bool)
    return (np.allclose(x, x.T) and np.all(np.abs(x[support]) <= zt)
            and np.linalg.norm(x) > 0.5 and np.allclose(a @ x, x @ a, atol=1e-10))


def criterion_2():
    ok_diag = ssp_check(np.diag([1.0, 2.0])).holds
    rep = ssp_check(np.eye(2))
    ok_id = (not rep.holds) and _witness_ok(np.eye(2), rep.witness)
    tri_ok = True
    shift_ok = True
    for seed in range(20):
        rng = np.random.default_rng([2, seed])
        n = int(rng.integers(2, 9))
        lam = distinct_spectrum(rng, n)
        a = jacobi_from_spectrum(lam)
        tri_ok &= ssp_check(a).holds
        if seed < 10:
            for c in rng.uniform(-100, 100, 10):
                shift_ok &= ssp_check(a + c * np.eye(n)).holds == ssp_check(a).holds
    ok = ok_diag and ok_id and tri_ok and shift_ok
    return ok, f"diag(1,2) {ok_diag}, I2 witness {ok_id}, tridiagonals {tri_ok}, shifts {shift_ok}"


# 3 ------------------------------------------------------------------------

def criterion_3():
    trees = {"P3": path(3), "P4": path(4), "P5": path(5), "K13": star(3), "K14": star(4)}
    t = 0.05
    worst_res, worst_diag, failures = 0.0, 0.0, 0
    for name, tree in trees.items():
        sched = exponent_schedule(tree, "uniform")
        for seed in range(10):
            lam = distinct_spectrum(np.random.default_rng([3, seed, tree.n]), tree.n)
            try:
                a = tree_homotopy_solve(sched, lam, t)
            except Exception:
                failures += 1
                continue
            worst_res = max(worst_res, symmat.spectral_residual(a, lam) / np.ptp(lam))
            worst_diag = max(worst_diag, float(np.max(np.abs(np.diag(a) - lam))))
    ok = failures == 0 and worst_res <= 1e-10 and worst_diag <= 10 * t
    return ok, f"50 solves, failures {failures}, residual/spread {worst_res:.2e}, |diag - lambda| {worst_diag:.2e}"


# 4 ------------------------------------------------------------------------

def criterion_4():
    eps = np.finfo(float).eps
    details = []
    ok = True
    for name, tree, lam in [("P3", path(3), [0.0, 1.0, 3.0]), ("K13", star(3), [0.0, 1.0, 2.5, 4.0])]:
        table = decay_ratio_table(exponent_schedule(tree, "injective"), lam, (1e-1, 1e-2, 1e-3))
        err = table.errors()
        # rounding in u(i, j) / t**s can only be resolved to a few ulps of c
        slack = 64 * eps * np.abs(table.c)
        monotone = bool(np.all(err[1:] <= err[:-1] + slack))
        rel = float(table.relative_errors()[-1].max())
        off = table.offdiag_max
        shrinking = all(b < a for a, b in zip(off, off[1:]))
        ok &= monotone and rel <= 0.05 and shrinking
        details.append(f"{name}: non-increasing {monotone}, final rel {rel:.1e}, off-diag shrinking {shrinking}")
    return ok, "; ".join(details)


# 5 ------------------------------------------------------------------------

def _random_connected(rng, n):
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    while True:
        keep = [p for p in pairs if rng.random() < 0.45]
        g = Graph.from_edges(n, keep)
        if g.is_connected():
            return g


def catalog():
    graphs = {}
    for n in range(1, 7):
        graphs[f"P{n}"] = path(n)
        graphs[f"K{n}"] = complete(n)
    for n in range(3, 7):
        graphs[f"C{n}"] = cycle(n)
    for k in range(1, 6):
        graphs[f"K1,{k}"] = star(k)
    rng = np.random.default_rng(55)
    for idx in range(10):
        graphs[f"R{idx}"] = _random_connected(rng, int(rng.integers(3, 7)))
    return graphs


@functools.lru_cache(maxsize=None)
def criterion_5_run():
    certs, failures = [], []
    worst = {"residual": 0.0, "margin": np.inf}
    for idx, (name, g) in enumerate(catalog().items()):
        rng = np.random.default_rng([5, idx])
        lam = distinct_spectrum(rng, g.n)
        ys = list(np.eye(g.n)) + list(rng.standard_normal((5, g.n)))
        try:
            a, u, cert = generic_realize(g, lam, ys, seed=idx)
        except Exception as exc:  # recorded as a failure
            failures.append(f"{name}: {exc}")
            continue
        spread = max(np.ptp(lam), 1.0)
        ok = (symmat.in_pattern(a, g).ok and cert.spectral_residual <= 1e-8 * spread
              and cert.ssp.holds and cert.nowhere_zero_margin > 1e-6)
        if not ok:
            failures.append(name)
        worst["residual"] = max(worst["residual"], cert.spectral_residual / spread)
        worst["margin"] = min(worst["margin"], cert.nowhere_zero_margin)
        certs.append(cert)
    return certs, failures, worst, len(catalog())


def criterion_5():
    certs, failures, worst, total = criterion_5_run()
    return not failures, (f"{total - len(failures)}/{total} graphs certified, residual/spread "
                          f"{worst['residual']:.1e}, min margin {worst['margin']:.1e}"
                          + (f"; failures {failures}" if failures else ""))


# 6 ------------------------------------------------------------------------

def _orders(k, top):
    return itertools.product(range(1, top + 1), repeat=k)


def criterion_6():
    diff_ok, count = True, 0
    for k in (1, 2, 3):
        for og in _orders(k, 6):
            for oh in _orders(k, 6):
                if any(abs(a - b) > 2 for a, b in zip(og, oh)):
                    continue
                v, w = construct_diff2(og, oh)
                diff_ok &= (fits(v, make_family("union", og)) and fits(w, make_family("union", oh))
                            and compatible(v, w).compatible)
                count += 1
    none_ok = all(not search_compatible_01([n], [n - 3]).found for n in range(5, 9))
    agree, instances = True, 0
    sorted_lists = [list(o) for k in (1, 2, 3) for o in itertools.product(range(1, 10), repeat=k)
                    if list(o) == sorted(o) and sum(o) <= 9]
    for og in sorted_lists:
        for oh in sorted_lists:
            if sum(og) + sum(oh) > 10:
                continue
            agree &= search_compatible_01(og, oh).found == oracle_exists(og, oh)
            instances += 1
    ok = diff_ok and none_ok and agree
    return ok, (f"construct_diff2 {count} pairs ok {diff_ok}; (n) vs (n-3) none {none_ok}; "
                f"oracle agreement on {instances} instances {agree}")


# 7 ------------------------------------------------------------------------

JOIN_CASES = [
    ("P4 v P4", path(4), path(4), [4], [4]),
    ("P3 v P5", path(3), path(5), [3], [5]),
    ("(P2 u P3) v (P3 u P4)", make_family("union", [2, 3]), make_family("union", [3, 4]), [2, 3], [3, 4]),
    ("K3 v P5", complete(3), path(5), [3], [5]),
    ("(K2 u K2) v (P2 u P4)", disjoint_union(complete(2), complete(2)), make_family("union", [2, 4]),
     [2, 2], [2, 4]),
]


@functools.lru_cache(maxsize=None)
def criterion_7_run():
    mu, nu = 0.0, 2.0
    certs, lines, ok = [], [], True
    for name, g, h, og, oh in JOIN_CASES:
        v, w = construct_diff2(og, oh)
        try:
            cert = join_two_eigenvalues(g, h, v, w, mu, nu)
        except Exception as exc:
            ok = False
            lines.append(f"{name}: {exc}")
            continue
        m = cert.matrix
        two = np.linalg.norm((m - mu * np.eye(m.shape[0])) @ (m - nu * np.eye(m.shape[0])), 2)
        good = two <= 1e-7 * (nu - mu) ** 2 and cert.grouped.q == 2
        ok &= good
        lines.append(f"{name} q={cert.grouped.q} |(M-mu)(M-nu)|={two:.1e}")
        certs.append(cert)
    return ok, certs, lines


def criterion_7():
    ok, _, lines = criterion_7_run()
    return ok, "; ".join(lines)


# 8 ------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def criterion_8_run():
    lam = np.array([0.0, 1.0, 2.5, 3.0, 4.2, 5.0, 6.1, 7.5])
    m, _ = cycle_realize(lam)
    certs, lines, ok = [], [], True
    for name, h in [("K4", complete(4)), ("C5", cycle(5)), ("P6", path(6))]:
        cert, gp = partial_join_distinct(m, cycle(8), [5, 6, 7, 8], [1, 2, 3, 4], h)
        expected = np.sort(np.concatenate([lam, cert.params["sigma_extra"]]))
        err = float(np.max(np.abs(np.linalg.eigvalsh(cert.matrix) - expected)))
        good = err <= 1e-8 * np.ptp(expected) and symmat.in_pattern(cert.matrix, gp).ok
        ok &= good
        lines.append(f"h={name}: per-value error {err:.1e}, pattern {symmat.in_pattern(cert.matrix, gp).ok}")
        certs.append(cert)
    return ok, certs, lines


def criterion_8():
    ok, _, lines = criterion_8_run()
    return ok, "; ".join(lines)


# 9 ------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def criterion_9_run():
    cert = scenario_wheel(2, seed=0)
    mults = cert.grouped.multiplicities
    wheel = Graph.from_edges(7, [(1, j) for j in range(2, 8)] + [(i, i + 1) for i in range(2, 7)] + [(2, 7)])
    ok = mults == [3, 1, 3] and triple_parity_ok(mults) and cert.grouped.q == 3 and cert.graph == wheel
    return ok, cert, f"grouped multiplicities {tuple(mults)}, parity {triple_parity_ok(mults)}, q {cert.grouped.q}"


def criterion_9():
    ok, _, detail = criterion_9_run()
    return ok, detail


# 10 -----------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def criterion_10_run():
    certs, lines, ok = [], [], True
    for seed in (0, 1):
        cert = scenario_k2join(2, "path", [4], seed=seed)
        grouped = cert.grouped
        good = grouped.multiplicities == [3, 3] and cert.graph.n == 6 and len(cert.graph.edges) == 12
        ok &= good
        lines.append(f"seed {seed}: lambdas {[round(x, 3) for x in grouped.values]} multiplicities "
                     f"{grouped.multiplicities}")
        certs.append(cert)
    return ok, certs, lines


def criterion_10():
    ok, _, lines = criterion_10_run()
    return ok, "; ".join(lines)


# 11 -----------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def criterion_11_run():
    agree, patterns = True, 0
    for n in range(3, 7):
        for mults in compositions(n):
            vals = np.repeat(np.arange(len(mults), dtype=float), mults)
            agree &= cycle_spectrum_check(vals) == cycle_pattern_oracle(mults)
            patterns += 1
    certs, worst, ok_real = [], 0.0, True
    for seed in range(20):
        rng = np.random.default_rng([11, seed])
        n = int(rng.integers(3, 9))
        base = distinct_spectrum(rng, n)
        if seed % 2:
            # doubles at positions 0, 2, 4, ...: one parity, so accepted
            k = n // 2
            vals = np.concatenate([np.repeat(base[:k], 2), base[k:k + n - 2 * k]])
        else:
            vals = base
        assert cycle_spectrum_check(vals)
        try:
            a, cert = cycle_realize(vals, seed=seed)
        except Exception:
            ok_real = False
            continue
        spread = max(np.ptp(vals), 1.0)
        worst = max(worst, cert.spectral_residual / spread)
        ok_real &= cert.spectral_residual <= 1e-8 * spread and symmat.in_pattern(a, cycle(n)).ok
        certs.append(cert)
    doubled = sum(1 for c in certs if c.grouped.q < c.graph.n)
    ok = agree and ok_real and len(certs) == 20 and doubled >= 10
    return ok, certs, (f"{patterns} patterns agree {agree}; {len(certs)}/20 certified "
                       f"({doubled} with doubled values), residual/spread {worst:.1e}")


def criterion_11():
    ok, _, detail = criterion_11_run()
    return ok, detail


# 12 -----------------------------------------------------------------------

def _tamper_edge(data):
    g = Graph.from_json(data["graph"])
    i, j = g.sorted_edges()[0] if g.edges else (1, 1)
    rows = data["matrix"]["rows"]
    if g.edges:
        rows[i - 1][j - 1] = rows[j - 1][i - 1] = 0.0
    else:
        rows[0][0] += 1e-3 * (1 + abs(rows[0][0]))
    return data


def _tamper_diagonal(data):
    rows = data["matrix"]["rows"]
    scale = max(1.0, max(abs(x) for row in rows for x in row))
    rows[0][0] += 1e-3 * scale
    return data


def all_certificates():
    certs = list(criterion_5_run()[0])
    certs += criterion_7_run()[1] + criterion_8_run()[1] + [criterion_9_run()[1]]
    certs += criterion_10_run()[1] + criterion_11_run()[1]
    return certs


def criterion_12():
    certs = all_certificates()
    passed = caught_edge = caught_diag = 0
    for cert in certs:
        data = json.loads(cert.dumps())
        passed += verify(data).ok
        caught_edge += not verify(_tamper_edge(copy.deepcopy(data))).ok
        caught_diag += not verify(_tamper_diagonal(copy.deepcopy(data))).ok
    n = len(certs)
    ok = passed == caught_edge == caught_diag == n
    return ok, f"{n} certificates: verified {passed}, edge tampering caught {caught_edge}, entry tampering caught {caught_diag}"


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
            11: criterion_11, 12: criterion_12}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok, detail = CRITERIA[number]()
    record(number, ok, detail)
    assert ok, detail


def report_lines():
    return [f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}" for k, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for number, fn in CRITERIA.items():
        try:
            record(number, *fn())
        except Exception as exc:
            record(number, False, f"error: {exc}")
    print("\n".join(report_lines()))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
