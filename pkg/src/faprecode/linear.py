"""Infinite-resolution linear baselines and the directly quantized variant."""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .exceptions import SingularChannelError
from .ide import update_beta
from .model import iui
from .validation import (
    as_channel_matrix,
    as_complex_vector,
    check_dims,
    check_nonnegative,
    check_positive,
)

# channels whose user-side Gram exceeds this condition number are rejected
CONDITION_LIMIT = 1e12


@dataclass
class LinearPrecodeResult:
    x: np.ndarray
    beta: float
    residual: float


def _checked(H, s, p_tx):
    H = as_channel_matrix(H)
    s = as_complex_vector(s, "s")
    check_dims(H, s=s)
    check_positive(p_tx, "p_tx")
    K, N = H.shape
    if K > N:
        raise ValueError(f"need K <= N for a full-row-rank channel, got {K} x {N}")
    return H, s


def _gram_factor(G):
    if np.linalg.cond(G) > CONDITION_LIMIT:
        raise SingularChannelError("channel Gram matrix is ill conditioned")
    try:
        return cho_factor(G, check_finite=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - cond guard first
        raise SingularChannelError("channel Gram matrix is not positive definite") from exc


def zf_precode(H, s, p_tx):
    """Zero-forcing precoder: x = H^H (H H^H)^-1 s / beta, zero residual IUI."""
    H, s = _checked(H, s, p_tx)
    K, N = H.shape
    c = _gram_factor(H @ H.conj().T)
    trace_inv = float(np.trace(cho_solve(c, np.eye(K), check_finite=False)).real)
    beta = np.sqrt(trace_inv / (N * p_tx))
    x = H.conj().T @ cho_solve(c, s, check_finite=False) / beta
    return LinearPrecodeResult(x=x, beta=beta, residual=iui(s, beta, H, x))


def wf_precode(H, s, p_tx, sigma2):
    """Regularized (Wiener) precoder, the unconstrained-MSE optimum.

    Reduces to zero forcing as sigma2 -> 0.
    """
    H, s = _checked(H, s, p_tx)
    check_nonnegative(sigma2, "sigma2")
    K, N = H.shape
    G = H @ H.conj().T
    if sigma2 == 0.0 and np.linalg.cond(G) > CONDITION_LIMIT:
        raise SingularChannelError("sigma2 = 0 with an ill-conditioned channel")
    c = cho_factor(G + (K * sigma2 / (N * p_tx)) * np.eye(K), check_finite=False)
    W = cho_solve(c, H, check_finite=False).conj().T  # N x K
    beta = np.sqrt(float(np.sum(np.abs(W) ** 2)) / (N * p_tx))
    x = W @ s / beta
    return LinearPrecodeResult(x=x, beta=beta, residual=iui(s, beta, H, x))


def quantized_wf(H, s, p_tx, sigma2, alphabet, beta_min=1e-6):
    """Entrywise projection of the Wiener output onto the alphabet.

    The precoding factor is recomputed for the quantized vector by the
    closed form, matching how the adaptive-factor baselines are evaluated.
    """
    wf = wf_precode(H, s, p_tx, sigma2)
    x = alphabet.project(wf.x)
    beta = update_beta(H, s, x, sigma2, beta_min=beta_min)
    return LinearPrecodeResult(x=x, beta=beta, residual=iui(s, beta, H, x))
