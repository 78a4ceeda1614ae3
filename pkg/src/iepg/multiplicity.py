"""Multiplicity matrices: fitting, per-family realisability, compatibility.

A multiplicity matrix is a non-negative integer array of shape (r, k); column
i lists the ordered multiplicities of the eigenvalues on component i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .graphcore import Graph, classify, components
from .realize.cycles import cycle_spectrum_check

EXHAUSTIVE_LIMIT = 16


def as_matrix(v) -> np.ndarray:
    a = np.array(v, dtype=int)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"multiplicity matrix must be r x k with r, k >= 1, got {a.shape}")
    if np.any(a < 0):
        raise ValueError("multiplicities must be non-negative")
    return a


def trimmed(v) -> np.ndarray:
    v = as_matrix(v)
    if v.shape[0] < 3:
        raise ValueError("trimming needs at least 3 rows")
    return v[1:-1]


def fits(v, g: Graph) -> bool:
    v = as_matrix(v)
    orders = [c.n for c, _ in components(g)]
    return v.shape[1] == len(orders) and list(v.sum(axis=0)) == orders


class UnsupportedFamily(ValueError):
    pass


def _cycle_column_ok(col) -> bool:
    col = [int(x) for x in col if x]
    if any(x > 2 for x in col):
        return False
    values = np.repeat(np.arange(len(col), dtype=float), col)
    return cycle_spectrum_check(values, tol=0.5)


def column_realizable(col, comp: Graph) -> bool:
    col = np.asarray(col, dtype=int)
    family = classify(comp)
    if family == "path":
        return bool(np.all(col <= 1))
    if family == "complete":
        return comp.n == 1 or int(np.count_nonzero(col)) >= 2
    if family == "cycle":
        return _cycle_column_ok(col)
    raise UnsupportedFamily(f"no multiplicity criterion for component {comp!r}")


def is_multiplicity_matrix(v, g: Graph) -> bool:
    """Every column is an ordered multiplicity list of its component.

    Components must be paths, cycles, or complete graphs; anything else
    raises UnsupportedFamily.
    """
    v = as_matrix(v)
    if not fits(v, g):
        return False
    comps = components(g)
    for comp, _ in comps:
        if classify(comp) is None:
            raise UnsupportedFamily(f"no multiplicity criterion for component {comp!r}")
    return all(column_realizable(v[:, i], comp) for i, (comp, _) in enumerate(comps))


@dataclass
class CompatibilityReport:
    compatible: bool
    row_sum_check: bool
    nowhere_zero_check: bool
    first_zero: tuple | None = None   # 1-based (i, j) of the first zero of V~^T W~

    def to_json(self) -> dict:
        return {"compatible": self.compatible, "row_sum_check": self.row_sum_check,
                "nowhere_zero_check": self.nowhere_zero_check,
                "first_zero": None if self.first_zero is None else list(self.first_zero)}


def compatible(v, w) -> CompatibilityReport:
    v, w = as_matrix(v), as_matrix(w)
    if v.shape[0] != w.shape[0]:
        raise ValueError(f"row counts differ: {v.shape[0]} vs {w.shape[0]}")
    if v.shape[0] < 3:
        raise ValueError("compatibility needs at least 3 rows")
    tv, tw = v[1:-1], w[1:-1]
    rows_ok = bool(np.array_equal(tv.sum(axis=1), tw.sum(axis=1)))
    prod = tv.T @ tw
    zeros = np.argwhere(prod == 0)
    first = None if zeros.size == 0 else (int(zeros[0][0]) + 1, int(zeros[0][1]) + 1)
    return CompatibilityReport(rows_ok and first is None, rows_ok, first is None, first)


@dataclass
class SearchResult:
    found: bool
    v: np.ndarray | None
    w: np.ndarray | None
    exhaustive: bool
    rows_searched: int

    def to_json(self) -> dict:
        out = {"found": self.found, "exhaustive": self.exhaustive,
               "rows_searched": self.rows_searched}
        if self.found:
            out["V"] = self.v.tolist()
            out["W"] = self.w.tolist()
        return out


def _rows01(k: int):
    """All 0-1 rows of length k in lexicographic order (0 < 1)."""
    return [np.array(r, dtype=int) for r in itertools.product((0, 1), repeat=k)]


def _search_r(og, oh, r):
    """Lexicographically first compatible pair with exactly r rows, or None.

    Rows are chosen top to bottom as (V row, W row) pairs; interior rows must
    be nonzero on both sides with equal sums, since a zero interior row can be
    deleted without affecting compatibility.
    """
    kg, kh = len(og), len(oh)
    rows_g, rows_h = _rows01(kg), _rows01(kh)
    need_g0, need_h0 = np.array(og), np.array(oh)
    vrows, wrows = [], []

    def feasible(need_g, need_h, left):
        return (need_g >= 0).all() and (need_h >= 0).all() and \
            (need_g <= left).all() and (need_h <= left).all()

    def cover_ok():
        # every (i, j) pair still coverable is checked only at the end
        tv = np.array(vrows[1:-1])
        tw = np.array(wrows[1:-1])
        return (tv.T @ tw > 0).all()

    def rec(row, need_g, need_h):
        left = r - row
        if row == r:
            return (need_g == 0).all() and (need_h == 0).all() and cover_ok()
        interior = 0 < row < r - 1
        for a in rows_g:
            ng = need_g - a
            if (ng < 0).any() or (ng > left - 1).any():
                continue
            for b in rows_h:
                if interior and (not a.any() or a.sum() != b.sum()):
                    continue
                nh = need_h - b
                if not feasible(ng, nh, left - 1):
                    continue
                vrows.append(a)
                wrows.append(b)
                if rec(row + 1, ng, nh):
                    return True
                vrows.pop()
                wrows.pop()
        return False

    if rec(0, need_g0, need_h0):
        return np.array(vrows), np.array(wrows)
    return None


def search_compatible_01(orders_g, orders_h, r_max: int | None = None) -> SearchResult:
    """Backtracking search for compatible 0-1 matrices with the given column sums.

    Tries r = 3, 4, ... and returns the first pair found, ordered
    lexicographically over the row sequence (v_1, w_1, v_2, w_2, ...).  Rows
    beyond min(sum G, sum H) + 2 are never needed, because zero interior rows
    can be deleted.
    """
    og, oh = [int(x) for x in orders_g], [int(x) for x in orders_h]
    if not og or not oh or min(og + oh) < 1:
        raise ValueError("orders must be positive and nonempty")
    if r_max is None:
        r_max = 2 * max(sum(og), sum(oh)) + 2
    if r_max < 3:
        raise ValueError("r_max must be at least 3")
    exhaustive = sum(og) + sum(oh) <= EXHAUSTIVE_LIMIT
    r_top = min(r_max, min(sum(og), sum(oh)) + 2)
    for r in range(3, r_top + 1):
        hit = _search_r(og, oh, r)
        if hit is not None:
            return SearchResult(True, hit[0], hit[1], exhaustive, r)
    return SearchResult(False, None, None, exhaustive, r_top)


def construct_diff2(orders_g, orders_h, *, g_complete: bool = False):
    """Compatible 0-1 pair sharing the interior block E with columns 1_{p_i}.

    p_i = min(|G_i|, |H_i|); border rows make up the difference, top row
    first.  With ``g_complete`` the G side may carry larger integer borders
    (complete components), which lifts the difference bound on that side.
    """
    og, oh = [int(x) for x in orders_g], [int(x) for x in orders_h]
    if len(og) != len(oh) or not og:
        raise ValueError("both sides need the same positive number of components")
    p_i = [min(a, b) for a, b in zip(og, oh)]
    p = max(p_i)
    e = np.zeros((p, len(og)), dtype=int)
    for i, pi in enumerate(p_i):
        e[:pi, i] = 1

    def borders(orders, allow_big):
        top = np.zeros(len(orders), dtype=int)
        bot = np.zeros(len(orders), dtype=int)
        for i, (o, pi) in enumerate(zip(orders, p_i)):
            d = o - pi
            if d > 2 and not allow_big:
                raise ValueError(f"component {i + 1}: order difference {d} exceeds 2")
            top[i] = min(d, 1) if not allow_big else (d + 1) // 2
            bot[i] = d - top[i]
        return top, bot

    vt, vb = borders(og, g_complete)
    wt, wb = borders(oh, False)
    v = np.vstack([vt, e, vb])
    w = np.vstack([wt, e, wb])
    return v, w


def enumerate_01(orders, r):
    """All 0-1 r x k matrices with the given column sums (generate-and-test oracle)."""
    cols = [list(itertools.combinations(range(r), o)) for o in orders]
    for pick in itertools.product(*cols):
        m = np.zeros((r, len(orders)), dtype=int)
        for i, ones in enumerate(pick):
            m[list(ones), i] = 1
        yield m
