"""Consensus-splitting solvers for the discrete least-squares problem.

These three variants exist to exhibit the documented failure modes of dual
ascent on a projection-constrained nonconvex problem: the plain method
oscillates, the damped one stalls on plateaus, and the dual-free one freezes
in a poor local optimum after a few updates.  None of them is expected to
converge to a good point; they are the baselines the estimation-projection
solvers are compared against.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .validation import as_channel_matrix, as_complex_vector, check_dims


@dataclass
class IterationTrace:
    """Per-iteration residuals ||s - H~ x^t||^2 and the final iterate."""

    iui: np.ndarray
    x: np.ndarray
    iterations: int


def _ridge_solver(Ht, gamma):
    """Apply (H~^H H~ + gamma I)^-1 through the K x K factorization."""
    K = Ht.shape[0]
    c = cho_factor(Ht @ Ht.conj().T + gamma * np.eye(K), check_finite=False)
    Hh = Ht.conj().T

    def solve(v):
        return (v - Hh @ cho_solve(c, Ht @ v, check_finite=False)) / gamma

    return solve


def _checked(Ht, s, gamma, n_iter, alpha=0.0):
    Ht = as_channel_matrix(Ht, "H_tilde")
    s = as_complex_vector(s, "s")
    check_dims(Ht, s=s)
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if n_iter < 1:
        raise ValueError("n_iter must be >= 1")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    return Ht, s


def run_admm(H_tilde, s, alphabet, gamma=1.0, n_iter=100):
    """Plain consensus splitting with dual updates; oscillates by design."""
    Ht, s = _checked(H_tilde, s, gamma, n_iter)
    N = Ht.shape[1]
    solve = _ridge_solver(Ht, gamma)
    Hs = Ht.conj().T @ s
    x = np.zeros(N, dtype=np.complex128)
    u = np.zeros(N, dtype=np.complex128)
    trace = np.empty(n_iter)
    for t in range(n_iter):
        x1 = solve(Hs + gamma * x - u)
        x = alphabet.project(x1 + u / (2.0 * gamma))
        u = u + gamma * (x1 - x)
        r = s - Ht @ x
        trace[t] = np.real(np.vdot(r, r))
    return IterationTrace(iui=trace, x=x, iterations=n_iter)


def run_admm2(H_tilde, s, alphabet, gamma=1.0, alpha=0.95, n_iter=100):
    """Damped variant: shadow averages replace x in the estimation step and
    u in the dual step; the projection step keeps the undamped dual."""
    Ht, s = _checked(H_tilde, s, gamma, n_iter, alpha)
    N = Ht.shape[1]
    solve = _ridge_solver(Ht, gamma)
    Hs = Ht.conj().T @ s
    x_d = np.zeros(N, dtype=np.complex128)
    u_d = np.zeros(N, dtype=np.complex128)
    u = np.zeros(N, dtype=np.complex128)
    x = np.zeros(N, dtype=np.complex128)
    trace = np.empty(n_iter)
    for t in range(n_iter):
        x1 = solve(Hs + gamma * x_d - u)
        x = alphabet.project(x1 + u / (2.0 * gamma))
        u = u_d + gamma * (x1 - x)
        x_d = alpha * x_d + (1.0 - alpha) * x
        u_d = alpha * u_d + (1.0 - alpha) * u
        r = s - Ht @ x
        trace[t] = np.real(np.vdot(r, r))
    return IterationTrace(iui=trace, x=x, iterations=n_iter)


def run_admm3(H_tilde, s, alphabet, gamma=1.0, alpha=0.95, n_iter=100):
    """Dual-free variant: alternate a ridge-regularized estimate with a
    projection; tends to freeze after very few updates."""
    Ht, s = _checked(H_tilde, s, gamma, n_iter, alpha)
    N = Ht.shape[1]
    solve = _ridge_solver(Ht, gamma)
    Hs = Ht.conj().T @ s
    x_d = np.zeros(N, dtype=np.complex128)
    x = np.zeros(N, dtype=np.complex128)
    trace = np.empty(n_iter)
    for t in range(n_iter):
        x1 = solve(Hs + gamma * x_d)
        x = alphabet.project(x1)
        x_d = alpha * x_d + (1.0 - alpha) * x
        r = s - Ht @ x
        trace[t] = np.real(np.vdot(r, r))
    return IterationTrace(iui=trace, x=x, iterations=n_iter)
