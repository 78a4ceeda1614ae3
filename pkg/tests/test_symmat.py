import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from iepg import symmat
from iepg.graphcore import complete, empty, path


def test_in_pattern():
    assert symmat.in_pattern(np.array([[5.0, 1], [1, -2]]), complete(2)).ok
    rep = symmat.in_pattern(np.array([[5.0, 0], [0, -2]]), complete(2))
    assert not rep.ok and rep.violations[0][:3] == (1, 2, "zero-edge")
    t = np.diag([1.0, 2, 3, 4]) + np.diag(np.ones(3), 1) + np.diag(np.ones(3), -1)
    assert symmat.in_pattern(t, path(4)).ok
    assert not symmat.in_pattern(t, empty(4)).ok


def test_spectrum_grouped():
    s = symmat.spectrum_grouped(np.array([[0.0, 1], [1, 0]]))
    assert s.multiplicities == [1, 1] and s.q == 2
    assert np.allclose(s.values, [-1, 1])
    assert symmat.spectrum_grouped(np.eye(3)).groups == [(1.0, 3)]
    s = symmat.spectrum_grouped(np.diag([0, 1e-12, 1]), gap_tol=1e-9)
    assert s.multiplicities == [2, 1]


def test_principal_submatrix():
    m = np.arange(9.0).reshape(3, 3)
    m = m + m.T
    assert np.array_equal(symmat.delete_index(m, 3), m[:2, :2])
    assert np.array_equal(symmat.principal_submatrix(np.diag([1.0, 2, 3]), [1, 3]), np.diag([1.0, 3]))


def test_eigh_signed():
    rng = np.random.default_rng(3)
    a = symmat.symmetric(rng.standard_normal((5, 5)))
    w, u = symmat.eigh_signed(a)
    assert np.all(np.diag(u) >= 0)
    assert np.allclose(a @ u, u * w)


def test_json_round_trip():
    m = np.array([[1.5, -2.0], [-2.0, 0.25]])
    assert np.array_equal(symmat.from_json(symmat.to_json(m)), m)


sym5 = arrays(np.float64, (5, 5), elements=st.floats(-10, 10)).map(symmat.symmetric)


@settings(max_examples=50, deadline=None)
@given(sym5)
def test_grouping_sums_to_n(m):
    assert sum(symmat.spectrum_grouped(m).multiplicities) == 5


@settings(max_examples=50, deadline=None)
@given(sym5, st.integers(0, 2 ** 32 - 1))
def test_grouping_orthogonal_invariance(m, seed):
    q, _ = np.linalg.qr(np.random.default_rng(seed).standard_normal((5, 5)))
    a = symmat.spectrum_grouped(m, gap_tol=1e-6 * (1 + np.abs(m).max()))
    b = symmat.spectrum_grouped(q @ m @ q.T, gap_tol=1e-6 * (1 + np.abs(m).max()))
    assert a.multiplicities == b.multiplicities
    assert np.allclose(a.values, b.values, atol=1e-10 * (1 + np.linalg.norm(m, 2)))


@settings(max_examples=50, deadline=None)
@given(sym5, st.integers(1, 5))
def test_interlacing(m, i):
    w = np.linalg.eigvalsh(m)
    v = np.linalg.eigvalsh(symmat.delete_index(m, i))
    tol = 1e-9 * max(symmat.spread(w), 1.0)
    assert np.all(w[:-1] <= v + tol) and np.all(v <= w[1:] + tol)


def test_symmetric_rejects_nonsquare():
    with pytest.raises(ValueError):
        symmat.symmetric(np.zeros((2, 3)))
