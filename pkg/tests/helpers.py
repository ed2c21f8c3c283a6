"""
Helpers for building test networks
"""

import numpy as np


def random_stable(rng, n, spread=1.0):
    """Random real matrix with distinct eigenvalues in the open left half-plane"""
    values = -np.sort(rng.uniform(0.5, 0.5 + 3.0 * spread, n))
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    T = np.triu(rng.uniform(-0.5, 0.5, (n, n)), 1) + np.diag(values)
    return Q @ T @ Q.T


def polynomial_in(A, coefficients):
    """c_0 I + c_1 A + ... evaluated by Horner's rule"""
    n = A.shape[0]
    B = np.zeros((n, n))
    for c in reversed(coefficients):
        B = B @ A + c * np.eye(n)
    return B
