"""Iterative discrete estimation solvers.

Each iteration performs an unbiased linear estimation step followed by an
entrywise projection onto the finite alphabet, with damping on the iterate.
The full solver (``ide_run``) recomputes a regularized LMMSE filter with an
adaptive penalty every iteration; the low-complexity variant (``ide2_run``)
replaces the filter by its large-penalty limit, a diagonally normalized
matched filter, and needs no matrix inversion.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .complexity import predicted_multiplications
from .exceptions import DegenerateChannelError
from .validation import (
    as_channel_matrix,
    as_complex_vector,
    check_dims,
    check_nonnegative,
)

# residual below this is treated as an exact solution; the adaptive penalty
# would diverge otherwise
ZERO_RESIDUAL = 1e-15


@dataclass(frozen=True)
class IdeConfig:
    """Solver settings shared by the full and low-complexity variants."""

    n_iter: int = 100
    alpha: float = 0.95
    gamma0: float = 1.0
    beta_mode: str = "fixed"  # "fixed" or "adaptive"
    beta_value: float = 1.0
    beta_update_period: int = 10
    beta_min: float = 1e-6
    gamma_source: str = "damped"  # "damped" or "raw"

    def __post_init__(self):
        if self.n_iter < 1:
            raise ValueError("n_iter must be >= 1")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if not self.gamma0 > 0:
            raise ValueError("gamma0 must be positive")
        if self.beta_mode not in ("fixed", "adaptive"):
            raise ValueError("beta_mode must be 'fixed' or 'adaptive'")
        if self.beta_update_period < 1:
            raise ValueError("beta_update_period must be >= 1")
        if not self.beta_min > 0:
            raise ValueError("beta_min must be positive")
        if self.gamma_source not in ("damped", "raw"):
            raise ValueError("gamma_source must be 'damped' or 'raw'")
        if self.beta_mode == "fixed" and not self.beta_value > 0:
            raise ValueError("beta_value must be positive")


@dataclass
class PrecodeResult:
    """Outcome of one solver run."""

    x: np.ndarray
    beta: float
    iui_trace: np.ndarray
    iterations: int
    mult_count: float | None = None


def lmmse_matrix(H_tilde, gamma, gram=None):
    """Regularized LMMSE filter W = (H~^H H~ + gamma I)^-1 H~^H.

    Computed through the K x K system (H~ H~^H + gamma I), never forming the
    N x N Gram.  Pass `gram` = H~ H~^H to reuse a cached Gram matrix.
    """
    Ht = as_channel_matrix(H_tilde, "H_tilde")
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    K = Ht.shape[0]
    G = Ht @ Ht.conj().T if gram is None else gram
    c = cho_factor(G + gamma * np.eye(K), check_finite=False)
    # W = (1/gamma) * (H~^H - H~^H (G + gamma I)^-1 G)
    return (Ht.conj().T - Ht.conj().T @ cho_solve(c, G, check_finite=False)) / gamma


def unbiasing_matrix(W, H_tilde):
    """Diagonal of D = [diag(W H~)]^-1, returned as a length-N vector.

    Only the N diagonal entries of W H~ are formed.  Scaling rows of W by D
    makes diag(D W H~) exactly one, which removes the estimation bias.
    """
    d = np.einsum("nk,kn->n", W, H_tilde)
    if np.any(d == 0):
        raise DegenerateChannelError("diag(W H~) has a zero entry")
    return 1.0 / np.real(d)


def update_beta(H, s, x, sigma2, beta_min=1e-6):
    """Closed-form precoding factor Re{s^H H x} / (||Hx||^2 + K sigma2).

    The result is floored at beta_min; a nonpositive correlation would
    otherwise drive the constrained optimum to zero.
    """
    H = as_channel_matrix(H)
    s = as_complex_vector(s, "s")
    x = as_complex_vector(x, "x")
    K, _ = check_dims(H, s=s, x=x)
    check_nonnegative(sigma2, "sigma2")
    Hx = H @ x
    denom = float(np.real(np.vdot(Hx, Hx))) + K * sigma2
    if denom == 0.0:
        raise DegenerateChannelError("Hx is zero and sigma2 = 0: beta is undefined")
    return max(float(np.real(np.vdot(s, Hx))) / denom, beta_min)


def _beta_refresh(H, s, x, sigma2, beta_min):
    # same closed form as update_beta, without revalidating inputs
    Hx = H @ x
    denom = float(np.real(np.vdot(Hx, Hx))) + H.shape[0] * sigma2
    if denom == 0.0:
        raise DegenerateChannelError("Hx is zero and sigma2 = 0: beta is undefined")
    return max(float(np.real(np.vdot(s, Hx))) / denom, beta_min)


def _validated(H, s, alphabet, config, sigma2):
    H = as_channel_matrix(H)
    s = as_complex_vector(s, "s")
    check_dims(H, s=s)
    check_nonnegative(sigma2, "sigma2")
    if config.beta_mode == "adaptive":
        beta = 1.0
    else:
        beta = config.beta_value
    return H, s, beta


def ide_run(H, s, alphabet, config, sigma2=0.0):
    """Full solver: adaptive-penalty LMMSE estimation + projection + damping.

    The penalty fed to the filter is the damped estimate by default
    (config.gamma_source = "damped"); "raw" uses the undamped update.  In
    adaptive beta mode the precoding factor is refreshed by the closed form
    every `beta_update_period` iterations starting from 1.
    """
    H, s, beta = _validated(H, s, alphabet, config, sigma2)
    K, N = H.shape
    eye = np.eye(K)
    Hh = H.conj().T
    G0 = H @ Hh  # unscaled user-side Gram, reused across beta refreshes
    g0 = np.einsum("kn,kn->n", H.conj(), H).real  # column norms of H
    tr_g0 = float(g0.sum())
    if np.any(g0 == 0):
        raise DegenerateChannelError("H has a zero column")

    x = np.zeros(N, dtype=np.complex128)
    x_d = np.zeros(N, dtype=np.complex128)
    gamma_raw = config.gamma0
    gamma_d = config.gamma0
    trace = []
    iterations = 0
    for t in range(config.n_iter):
        gamma = gamma_d if config.gamma_source == "damped" else gamma_raw
        b2 = beta * beta
        c = cho_factor(b2 * G0 + gamma * eye, check_finite=False)
        r = s - beta * (H @ x_d)
        # push-through form: W r = H~^H M^-1 r and diag(W H~)_n = h~_n^H M^-1 h~_n
        # with M = H~ H~^H + gamma I; the common beta/gamma factors cancel in D W r
        sol = cho_solve(c, np.concatenate((r[:, None], H), axis=1), check_finite=False)
        num = Hh @ sol[:, 0]
        denom = beta * np.einsum("kn,kn->n", H.conj(), sol[:, 1:]).real
        if np.any(denom == 0):
            raise DegenerateChannelError("diag(W H~) has a zero entry")
        x = alphabet.project(x_d + num / denom)
        res = s - beta * (H @ x)
        res2 = float(np.real(np.vdot(res, res)))
        trace.append(res2)
        iterations = t + 1
        if res2 < ZERO_RESIDUAL:
            break
        gamma_raw = b2 * tr_g0 / res2
        x_d = config.alpha * x_d + (1.0 - config.alpha) * x
        gamma_d = config.alpha * gamma_d + (1.0 - config.alpha) * gamma_raw
        if config.beta_mode == "adaptive" and (t + 1) % config.beta_update_period == 0:
            beta = _beta_refresh(H, s, x, sigma2, config.beta_min)
    return PrecodeResult(
        x=x,
        beta=beta,
        iui_trace=np.asarray(trace),
        iterations=iterations,
        mult_count=predicted_multiplications("IDE", N, K, iterations),
    )


def ide2_run(H, s, alphabet, config, sigma2=0.0):
    """Inversion-free variant: diagonally normalized matched filter."""
    H, s, beta = _validated(H, s, alphabet, config, sigma2)
    K, N = H.shape
    Hh = H.conj().T
    g0 = np.einsum("kn,kn->n", H.conj(), H).real
    if np.any(g0 == 0):
        raise DegenerateChannelError("H has a zero column (zero Gram diagonal)")

    x = np.zeros(N, dtype=np.complex128)
    x_d = np.zeros(N, dtype=np.complex128)
    trace = []
    iterations = 0
    for t in range(config.n_iter):
        r = s - beta * (H @ x_d)
        # W_u r = [diag(H~^H H~)]^-1 H~^H r = H^H r / (beta * g0)
        x = alphabet.project(x_d + (Hh @ r) / (beta * g0))
        res = s - beta * (H @ x)
        res2 = float(np.real(np.vdot(res, res)))
        trace.append(res2)
        iterations = t + 1
        if res2 < ZERO_RESIDUAL:
            break
        x_d = config.alpha * x_d + (1.0 - config.alpha) * x
        if config.beta_mode == "adaptive" and (t + 1) % config.beta_update_period == 0:
            beta = _beta_refresh(H, s, x, sigma2, config.beta_min)
    return PrecodeResult(
        x=x,
        beta=beta,
        iui_trace=np.asarray(trace),
        iterations=iterations,
        mult_count=predicted_multiplications("IDE2", N, K, iterations),
    )
