"""System model primitives: channel generation, transmission and error metrics.

Conventions: H is K x N (users x antennas) with i.i.d. CN(0,1) entries, the
SNR is defined as N * P_tx / sigma^2 (received SNR including array gain), and
the default per-antenna power budget P_tx = 1/N gives unit total transmit
power so that SNR = 1/sigma^2.
"""

from dataclasses import dataclass

import numpy as np

from .validation import (
    as_channel_matrix,
    as_complex_vector,
    check_dims,
    check_nonnegative,
    check_positive,
    check_rng,
    check_unit_interval,
)


@dataclass(frozen=True)
class SystemConfig:
    """Static description of one downlink instance."""

    n_antennas: int
    n_users: int
    p_tx: float
    sigma2: float = 0.0

    def __post_init__(self):
        if self.n_users < 1 or self.n_antennas < self.n_users:
            raise ValueError(
                f"need N >= K >= 1, got N={self.n_antennas}, K={self.n_users}"
            )
        check_positive(self.p_tx, "p_tx")
        check_nonnegative(self.sigma2, "sigma2")

    @property
    def load_factor(self) -> float:
        """Antenna-to-user ratio R = N/K."""
        return self.n_antennas / self.n_users


def sample_cn(rng, shape, var=1.0):
    """Draw i.i.d. circularly symmetric CN(0, var) samples.

    Real and imaginary parts are independent N(0, var/2).
    """
    check_rng(rng)
    scale = np.sqrt(var / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def generate_channel(n_users, n_antennas, rng):
    """Draw a K x N channel with i.i.d. CN(0,1) entries."""
    if n_users < 1 or n_antennas < 1:
        raise ValueError("channel dimensions must be >= 1")
    return sample_cn(rng, (n_users, n_antennas))


def perturb_channel(H, epsilon, rng):
    """Return sqrt(1-eps)*H + sqrt(eps)*E with E i.i.d. CN(0,1).

    epsilon = 0 reproduces H exactly (perfect CSI), epsilon = 1 yields a
    channel independent of H (no CSI); entry variance is preserved for
    every epsilon in between.
    """
    H = as_channel_matrix(H)
    epsilon = check_unit_interval(epsilon, "epsilon")
    E = sample_cn(rng, H.shape)
    return np.sqrt(1.0 - epsilon) * H + np.sqrt(epsilon) * E


def transmit(H, x, sigma2, rng):
    """Propagate x through H and add CN(0, sigma2 I) noise: y = Hx + z."""
    H = as_channel_matrix(H)
    x = as_complex_vector(x, "x")
    check_dims(H, x=x)
    check_nonnegative(sigma2, "sigma2")
    y = H @ x
    if sigma2 > 0.0:
        y = y + sample_cn(rng, H.shape[0], var=sigma2)
    return y


def iui(s, beta, H, x):
    """Residual inter-user interference ||s - beta*H*x||^2 for one realization."""
    s = as_complex_vector(s, "s")
    x = as_complex_vector(x, "x")
    H = as_channel_matrix(H)
    check_dims(H, s=s, x=x)
    r = s - beta * (H @ x)
    return float(np.real(np.vdot(r, r)))


def mse_objective(s, beta, H, x, sigma2):
    """Symbol-estimate MSE: ||s - beta*H*x||^2 + beta^2 * K * sigma2."""
    check_nonnegative(sigma2, "sigma2")
    return iui(s, beta, H, x) + beta * beta * len(s) * sigma2


def snr_to_sigma2(snr_db, n_antennas, p_tx):
    """Noise variance realizing a target SNR under SNR = N*P_tx/sigma^2."""
    if n_antennas < 1:
        raise ValueError("n_antennas must be >= 1")
    check_positive(p_tx, "p_tx")
    return n_antennas * p_tx / (10.0 ** (snr_db / 10.0))
