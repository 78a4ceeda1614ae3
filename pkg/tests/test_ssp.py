import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from iepg import symmat
from iepg._newton import eigen_jacobian
from iepg.graphcore import complete, cycle, empty, path
from iepg.realize import jacobi_from_spectrum
from iepg.ssp import commutator_map, ssp_check, ssp_edge_extend


def test_distinct_diagonal_holds():
    assert ssp_check(np.diag([1.0, 2.0])).holds


def test_identity_fails_with_witness():
    rep = ssp_check(np.eye(2))
    assert not rep.holds and rep.nullity == 1
    x = rep.witness
    assert np.allclose(x / x[0, 1], [[0, 1], [1, 0]])
    assert np.allclose(np.eye(2) @ x - x @ np.eye(2), 0)


def test_no_free_entries_holds():
    assert ssp_check(np.array([[0.0, 1], [1, 0]])).holds


def test_commutator_map_shape():
    a = np.diag([1.0, 2, 3])
    free = [(0, 1), (0, 2), (1, 2)]
    assert commutator_map(a, free).shape == (3, 3)


def test_extend_identity_case():
    a = jacobi_from_spectrum([0, 1, 2])
    assert np.array_equal(ssp_edge_extend(a, path(3), path(3)), a)


@pytest.mark.parametrize("lam,sup", [([0, 1, 2, 3], cycle(4)), ([0, 1, 3], complete(3))])
def test_extend_preserves_spectrum(lam, sup):
    a = jacobi_from_spectrum(lam)
    b = ssp_edge_extend(a, path(len(lam)), sup)
    assert symmat.in_pattern(b, sup).ok
    assert symmat.spectral_residual(b, lam) <= 1e-9 * np.ptp(lam)


def test_extend_requires_ssp():
    with pytest.raises(ValueError):
        ssp_edge_extend(np.eye(3), empty(3), cycle(3))


def test_eigen_jacobian_matches_finite_differences():
    rng = np.random.default_rng(0)
    a = jacobi_from_spectrum(np.sort(rng.uniform(0, 5, 5)))
    free = [(i, i) for i in range(5)] + [(i, i + 1) for i in range(4)]
    _, u = np.linalg.eigh(a)
    jac = eigen_jacobian(u, free)
    h = 1e-6
    for col, (i, j) in enumerate(free):
        b = a.copy()
        b[i, j] += h
        b[j, i] = b[i, j]
        fd = (np.linalg.eigvalsh(b) - np.linalg.eigvalsh(a)) / h
        assert np.allclose(jac[:, col], fd, atol=1e-5)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.integers(0, 1000), st.floats(-50, 50))
def test_shift_invariance(n, seed, c):
    lam = np.sort(np.random.default_rng(seed).uniform(-3, 3, n))
    if np.min(np.diff(lam)) < 1e-3:
        return
    a = jacobi_from_spectrum(lam)
    assert ssp_check(a).holds == ssp_check(a + c * np.eye(n)).holds


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(0, 1000))
def test_permutation_invariance(n, seed):
    rng = np.random.default_rng(seed)
    a = np.diag(rng.integers(0, 3, n).astype(float))
    p = np.eye(n)[rng.permutation(n)]
    assert ssp_check(a).holds == ssp_check(p @ a @ p.T).holds
