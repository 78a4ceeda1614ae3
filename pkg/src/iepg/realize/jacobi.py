import numpy as np


def jacobi_from_spectrum(lambdas, weights=None) -> np.ndarray:
    """Irreducible tridiagonal matrix with the given simple spectrum.

    Three-term recurrence of the polynomials orthonormal for the discrete
    measure sum_k w_k delta(lambda_k), computed as Lanczos on diag(lambda) with
    full reorthogonalisation.  Weights default to 1/n; off-diagonals come out
    positive.
    """
    lam = np.asarray(lambdas, dtype=float)
    n = lam.size
    if n == 0:
        raise ValueError("empty spectrum")
    if n > 1 and np.any(np.diff(lam) <= 0):
        raise ValueError("eigenvalues must be strictly ascending (no duplicates)")
    w = np.full(n, 1.0 / n) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != (n,) or np.any(w <= 0):
        raise ValueError("weights must be positive, one per eigenvalue")
    q = np.sqrt(w / w.sum())
    basis = [q]
    alpha = np.zeros(n)
    beta = np.zeros(max(n - 1, 0))
    for k in range(n):
        v = lam * basis[k]
        alpha[k] = basis[k] @ v
        if k == n - 1:
            break
        for _ in range(2):
            for b in basis:
                v = v - (b @ v) * b
        beta[k] = np.linalg.norm(v)
        basis.append(v / beta[k])
    return np.diag(alpha) + np.diag(beta, 1) + np.diag(beta, -1)
