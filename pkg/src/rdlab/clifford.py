"""Dirac-representation Clifford algebra.

Pauli matrices, the alpha/beta pair, gamma matrices, gamma5 and the spin
matrices Sigma, all with entries exact in {0, +-1, +-i} so algebraic
identities hold to machine exactness (== comparisons, not approximate).
"""
from __future__ import annotations

import numpy as np

# Minkowski metric, signature (+, -, -, -).
ETA = np.diag([1.0, -1.0, -1.0, -1.0])


def pauli(k: int) -> np.ndarray:
    """Pauli matrix sigma^k for k in {1, 2, 3}."""
    if k == 1:
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if k == 2:
        return np.array([[0, -1j], [1j, 0]], dtype=complex)
    if k == 3:
        return np.array([[1, 0], [0, -1]], dtype=complex)
    raise ValueError(f"pauli index must be 1, 2 or 3, got {k!r}")


def _build():
    z = np.zeros((2, 2), dtype=complex)
    alpha = np.array([np.block([[z, pauli(k)], [pauli(k), z]]) for k in (1, 2, 3)])
    beta = np.block([[np.eye(2, dtype=complex), z], [z, -np.eye(2, dtype=complex)]])
    # gamma^0 = beta, gamma^k = gamma^0 alpha^k; products of {0,+-1,+-i} entries stay exact.
    gamma = np.concatenate([beta[None], np.einsum("ab,kbc->kac", beta, alpha)])
    gamma5 = 1j * gamma[0] @ gamma[1] @ gamma[2] @ gamma[3]
    sigma = np.array([np.block([[pauli(k), z], [z, pauli(k)]]) for k in (1, 2, 3)])
    return alpha, beta, gamma, gamma5, sigma


# ALPHA[k-1] = alpha^k, GAMMA[mu] = gamma^mu (mu = 0..3), SIGMA[k-1] = Sigma^k.
ALPHA, BETA, GAMMA, GAMMA5, SIGMA = _build()


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutation_defect(gamma: np.ndarray = GAMMA, eta: np.ndarray = ETA) -> np.ndarray:
    """Max-abs entry of {gamma^mu, gamma^nu} - 2 eta^{mu nu} 1, per (mu, nu).

    Identically zero for the built-in set; nonzero entries flag a corrupted input.
    """
    out = np.zeros((4, 4))
    eye = np.eye(4)
    for mu in range(4):
        for nu in range(4):
            d = anticommutator(gamma[mu], gamma[nu]) - 2.0 * eta[mu, nu] * eye
            out[mu, nu] = np.max(np.abs(d))
    return out
