"""Shared test helpers: independent numerical oracles.

The oracles here deliberately avoid the code paths they are used to check:
the Jacobi eigensolver never calls numpy.linalg.eigh, and the state-vector
propagator integrates the Schrodinger equation directly rather than the
vectorized master equation.
"""

from __future__ import annotations

import numpy as np
import pytest
from scipy.integrate import solve_ivp


def jacobi_eigenvalues(matrix: np.ndarray, tol: float = 1e-13, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a complex Hermitian matrix by cyclic Jacobi rotations.

    Each pivot (p, q) is zeroed by the exact unitary that diagonalizes the
    2x2 Hermitian sub-block: a phase pulling the pivot onto the real axis
    followed by a real Givens rotation.
    """
    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = np.abs(a - np.diag(np.diag(a)))
        if off.max() <= tol * max(1.0, np.abs(np.diag(a)).max()):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                alpha = a[p, p].real
                gamma = a[q, q].real
                phi = np.angle(apq)
                two_psi = np.arctan2(2.0 * abs(apq), alpha - gamma)
                psi = 0.5 * two_psi
                c, s = np.cos(psi), np.sin(psi)
                # columns of the pivot unitary
                jp = np.zeros(n, dtype=complex)
                jq = np.zeros(n, dtype=complex)
                jp[p], jp[q] = c, np.exp(-1j * phi) * s
                jq[p], jq[q] = -s, np.exp(-1j * phi) * c
                col_p = a @ jp
                col_q = a @ jq
                a[:, p] = col_p
                a[:, q] = col_q
                a[p, :], a[q, :] = jp.conj() @ a, jq.conj() @ a
    return np.sort(np.diag(a).real)


def schrodinger_propagate(h_of_t, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Closed-system state-vector trajectory (rows psi(t)) by direct RK."""
    psi0 = np.asarray(psi0, dtype=complex)

    def rhs(t, y):
        return -1j * (h_of_t(t) @ y)

    sol = solve_ivp(
        rhs,
        (times[0], times[-1]),
        psi0,
        t_eval=times,
        rtol=1e-10,
        atol=1e-12,
        method="DOP853",
    )
    assert sol.success
    return sol.y.T


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (m + m.conj().T)


def random_density_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
