"""Closed-form multiplication counts for the compared precoding algorithms.

All formulas count real multiplications for the real-valued problem in the
dimensions (N, K, T); TB-CEP additionally depends on the output PSK order M
and the trellis memory length L and is not iterative.
"""

from dataclasses import dataclass

ALGORITHMS = ("SQUID", "C1PO", "IDE", "IDE2", "TB-CEP")


@dataclass(frozen=True)
class ComplexityModel:
    """First-iteration, per-iteration and T-iteration multiplication counts."""

    algorithm: str

    def first_iteration(self, n_antennas, n_users):
        N, K = n_antennas, n_users
        return {
            "SQUID": 2 * N * K**2 + K**3 / 3 + 4 * N * K + K**2 + N,
            "C1PO": N * K**2 + K**3 / 3 + 2 * N * K + K**2 + 2 * N,
            "IDE": 2 * N * K**2 + 4 * K**3 / 3 + 5 * N * K + 3 * N + K,
            "IDE2": 4 * N * K + 3 * N,
        }[self.algorithm]

    def per_iteration(self, n_antennas, n_users):
        N, K = n_antennas, n_users
        return {
            "SQUID": 2 * N * K + N,
            "C1PO": 2 * N * K + K**2 + N,
            "IDE": N * K**2 + 4 * K**3 / 3 + 5 * N * K + 3 * N + K,
            "IDE2": 2 * N * K + N,
        }[self.algorithm]

    def total(self, n_antennas, n_users, n_iter):
        N, K, T = n_antennas, n_users, n_iter
        return {
            "SQUID": T * (2 * N * K + N) + K**3 / 3 + 2 * N * K**2 + 2 * N * K + K**2,
            "C1PO": T * (2 * N * K + K**2 + N) + K**3 / 3 + N * K**2,
            "IDE": T * (N * K**2 + 4 * K**3 / 3 + 5 * N * K + 3 * N + K) + N * K**2,
            "IDE2": T * (2 * N * K + N) + 2 * N * K + 2 * N,
        }[self.algorithm]


COMPLEXITY_MODELS = {tag: ComplexityModel(tag) for tag in ALGORITHMS if tag != "TB-CEP"}


def tbcep_multiplications(n_antennas, n_users, psk_order, memory_length):
    """Trellis search cost N^2 * K * M^(L+1) (single pass, not iterative)."""
    return n_antennas**2 * n_users * float(psk_order) ** (memory_length + 1)


def predicted_multiplications(
    algorithm, n_antennas, n_users, n_iter, psk_order=None, memory_length=None
):
    """Total real multiplications predicted for `n_iter` iterations.

    For "TB-CEP" the PSK order M and memory length L must be supplied and
    `n_iter` is ignored.
    """
    if min(n_antennas, n_users, n_iter) < 1:
        raise ValueError("n_antennas, n_users and n_iter must all be >= 1")
    if algorithm == "TB-CEP":
        if psk_order is None or memory_length is None:
            raise ValueError("TB-CEP requires psk_order and memory_length")
        return tbcep_multiplications(n_antennas, n_users, psk_order, memory_length)
    try:
        model = COMPLEXITY_MODELS[algorithm]
    except KeyError:
        raise ValueError(
            f"unknown algorithm {algorithm!r}, expected one of {ALGORITHMS}"
        ) from None
    return model.total(n_antennas, n_users, n_iter)
