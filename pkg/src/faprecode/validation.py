"""Input validation helpers shared by the solver and estimator layers."""

import numpy as np


def as_complex_vector(v, name="vector"):
    """Coerce to a finite 1-D complex128 array."""
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {v.shape}")
    if not np.all(np.isfinite(v.view(np.float64))):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return v


def as_channel_matrix(H, name="H"):
    """Coerce to a finite 2-D complex128 channel matrix (users x antennas)."""
    H = np.asarray(H, dtype=np.complex128)
    if H.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {H.shape}")
    if H.shape[0] < 1 or H.shape[1] < 1:
        raise ValueError(f"{name} must be nonempty, got shape {H.shape}")
    if not np.all(np.isfinite(H.view(np.float64))):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return H


def check_dims(H, s=None, x=None):
    """Check that symbol/transmit vectors are consistent with H (K x N)."""
    K, N = H.shape
    if s is not None and s.shape != (K,):
        raise ValueError(f"symbol vector has length {s.shape[0]}, expected K={K}")
    if x is not None and x.shape != (N,):
        raise ValueError(f"transmit vector has length {x.shape[0]}, expected N={N}")
    return K, N


def check_positive(value, name):
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return float(value)


def check_nonnegative(value, name):
    if value < 0:
        raise ValueError(f"{name} must be nonnegative, got {value}")
    return float(value)


def check_unit_interval(value, name):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return float(value)


def check_rng(rng):
    if not isinstance(rng, np.random.Generator):
        raise TypeError("rng must be a numpy.random.Generator")
    return rng
