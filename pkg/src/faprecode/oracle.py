"""Exhaustive-search ground truth for small instances.

Candidates are enumerated in lexicographic (mixed-radix) order over the
alphabet's point indices and scanned in vectorized chunks; objective ties are
broken toward the earliest candidate in that order.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import CandidateBudgetError, DegenerateChannelError
from .validation import (
    as_channel_matrix,
    as_complex_vector,
    check_dims,
    check_nonnegative,
)

DEFAULT_CAP = 10_000_000
_CHUNK = 1 << 16
# full candidate matrices are memoized up to this many entries
_CACHE_LIMIT = 1 << 20
_candidate_cache: dict = {}


def candidate_count(alphabet, n_antennas):
    """Number of points in the feasible set X^N."""
    return alphabet.size**n_antennas


def _decode(ids, points, n):
    m = len(points)
    digits = (ids[:, None] // (m ** np.arange(n - 1, -1, -1))[None, :]) % m
    return points[digits]


def iter_candidates(alphabet, n_antennas, chunk=_CHUNK):
    """Yield (start_id, candidates) blocks covering X^N in enumeration order."""
    points = alphabet.points
    total = candidate_count(alphabet, n_antennas)
    if total <= _CACHE_LIMIT:
        key = (alphabet.cache_key(), n_antennas)
        if key not in _candidate_cache:
            _candidate_cache[key] = _decode(
                np.arange(total, dtype=np.int64), points, n_antennas
            )
        yield 0, _candidate_cache[key]
        return
    for start in range(0, total, chunk):
        ids = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield start, _decode(ids, points, n_antennas)


@dataclass
class OracleResult:
    x_star: np.ndarray
    objective: float
    candidates_evaluated: int
    beta_star: float | None = None


def _check_cap(alphabet, n, cap):
    total = candidate_count(alphabet, n)
    if total > cap:
        raise CandidateBudgetError(total, cap)
    return total


def score_fixed_beta(P, s):
    """Residuals ||s - Hx||^2 from precomputed products P (rows are Hx)."""
    resid = s[None, :] - P
    return np.einsum("bk,bk->b", resid.conj(), resid).real


def score_joint_beta(P, q, s, n_users, sigma2, beta_min):
    """Joint objective and closed-form betas from precomputed P and per-row
    ||Hx||^2; the inner minimizer over beta > 0 is exact, floored at beta_min."""
    s2 = float(np.real(np.vdot(s, s)))
    a = (P @ s.conj()).real  # Re{s^H H x} per candidate
    denom = q + n_users * sigma2
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = np.where(denom > 0.0, a / denom, beta_min)
    beta = np.maximum(beta, beta_min)
    obj = s2 - 2.0 * beta * a + beta * beta * denom
    return obj, beta


def exhaustive_precode(H_tilde, s, alphabet, cap=DEFAULT_CAP):
    """Exact minimizer of ||s - H~ x||^2 over x in X^N by full enumeration."""
    Ht = as_channel_matrix(H_tilde, "H_tilde")
    s = as_complex_vector(s, "s")
    check_dims(Ht, s=s)
    N = Ht.shape[1]
    total = _check_cap(alphabet, N, cap)
    best = np.inf
    best_x = None
    for _, cand in iter_candidates(alphabet, N):
        obj = score_fixed_beta(cand @ Ht.T, s)
        i = int(np.argmin(obj))
        if obj[i] < best:
            best = float(obj[i])
            best_x = cand[i].copy()
    return OracleResult(x_star=best_x, objective=best, candidates_evaluated=total)


def exhaustive_with_beta(H, s, alphabet, sigma2, cap=DEFAULT_CAP, beta_min=1e-6):
    """Joint minimizer of ||s - beta H x||^2 + beta^2 K sigma2 over X^N.

    For each candidate the inner problem over beta > 0 is solved exactly by
    the closed form Re{s^H H x} / (||Hx||^2 + K sigma2), floored at beta_min.
    """
    H = as_channel_matrix(H)
    s = as_complex_vector(s, "s")
    check_dims(H, s=s)
    check_nonnegative(sigma2, "sigma2")
    K, N = H.shape
    total = _check_cap(alphabet, N, cap)
    best = np.inf
    best_x = None
    best_beta = beta_min
    for _, cand in iter_candidates(alphabet, N):
        P = cand @ H.T  # row b is H @ cand[b]
        q = np.einsum("bk,bk->b", P.conj(), P).real
        if sigma2 == 0.0 and np.all(q == 0.0):
            raise DegenerateChannelError("all candidates give Hx = 0 with sigma2 = 0")
        obj, beta = score_joint_beta(P, q, s, K, sigma2, beta_min)
        i = int(np.argmin(obj))
        if obj[i] < best:
            best = float(obj[i])
            best_x = cand[i].copy()
            best_beta = float(beta[i])
    return OracleResult(
        x_star=best_x,
        objective=best,
        candidates_evaluated=total,
        beta_star=best_beta,
    )
