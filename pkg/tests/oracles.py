"""Independent reference computations used only by the tests."""
import numpy as np


def leverrier(A):
    """Characteristic polynomial coefficients (highest first) by
    Faddeev-LeVerrier; no eigenvalues involved."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    coeffs = [1.0]
    M = np.zeros_like(A)
    c = 1.0
    for k in range(1, n + 1):
        M = A @ M + c * np.eye(n)
        c = -np.trace(A @ M) / k
        coeffs.append(c)
    return np.array(coeffs)


def stacked_lqr(A, B, R1, R, P1, x0, horizon):
    """Optimal cost and input sequence by writing J as one quadratic in the
    stacked inputs and solving the normal equations."""
    n, m = B.shape
    N = horizon
    Phi = np.vstack([np.linalg.matrix_power(A, k + 1) for k in range(N)])
    Gam = np.zeros((N * n, N * m))
    for row in range(N):
        for col in range(row + 1):
            Gam[row * n:(row + 1) * n, col * m:(col + 1) * m] = np.linalg.matrix_power(A, row - col) @ B
    Q = np.kron(np.eye(N), R1)
    Q[-n:, -n:] += P1
    Rb = np.kron(np.eye(N), R)
    free = Phi @ x0
    H = Gam.T @ Q @ Gam + Rb
    g = Gam.T @ Q @ free
    U = -np.linalg.solve(H, g)
    cost = free @ Q @ free + 2 * g @ U + U @ H @ U
    return cost, U.reshape(N, m), (Phi, Gam, Q, Rb)


def stacked_cost(U, x0, parts):
    Phi, Gam, Q, Rb = parts
    X = Phi @ x0 + Gam @ U.reshape(-1)
    u = U.reshape(-1)
    return X @ Q @ X + u @ Rb @ u


def random_stable_ish(rng, n, scale=1.0):
    return rng.standard_normal((n, n)) * scale / np.sqrt(n)


def random_controllable(rng, n, m=1, discrete=False, max_cond=1e6):
    from ltikit import StateSpaceModel
    while True:
        A = rng.standard_normal((n, n)) / np.sqrt(n)
        if discrete:
            A *= 0.9 / max(1e-9, max(abs(np.linalg.eigvals(A))))
            A *= rng.uniform(0.7, 1.2)
        B = rng.standard_normal((n, m))
        C = rng.standard_normal((rng.integers(1, n + 1), n))
        ctrb = np.hstack([np.linalg.matrix_power(A, k) @ B for k in range(n)])
        obsv = np.vstack([C @ np.linalg.matrix_power(A, k) for k in range(n)])
        if np.linalg.cond(ctrb) < max_cond and np.linalg.cond(obsv) < max_cond:
            make = StateSpaceModel.discrete if discrete else StateSpaceModel.continuous
            return make(A, B, C)
