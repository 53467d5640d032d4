"""Finite transmit alphabets and the entrywise nearest-point projection.

Three kinds are supported:

* ``PerDimensionLevels`` -- real and imaginary parts quantized independently
  to a symmetric sorted level set (low-resolution DACs).
* ``PskPhases`` -- constant-envelope points sqrt(P_tx) * exp(2j*pi*k/M)
  (low-resolution phase shifters).
* ``ExplicitSet`` -- an arbitrary finite complex point set (hybrid
  architectures).

Projection ties are broken deterministically toward the point with the larger
real part, then the larger imaginary part; per-dimension projection breaks a
midpoint tie toward the upper level, which is the same rule.
"""

from abc import ABC, abstractmethod

import numpy as np

from .validation import as_complex_vector, check_positive

# guard against combinatorial blow-up when building hybrid sum sets
DEFAULT_HYBRID_CAP = 1_000_000


class FiniteAlphabet(ABC):
    """A finite set of complex transmit values with a projection operator."""

    #: average power of one complex alphabet point
    p_tx: float

    @property
    @abstractmethod
    def points(self):
        """The full complex point set, deduplicated, as a 1-D array."""

    @abstractmethod
    def project(self, v):
        """Entrywise nearest-point projection of a complex vector onto the set."""

    @abstractmethod
    def cache_key(self):
        """Hashable identity used to memoize per-alphabet precomputations."""

    @property
    def size(self):
        return len(self.points)


def _as_complex(v):
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1:
        raise ValueError(f"projection input must be 1-D, got shape {v.shape}")
    return v


def _project_levels(values, levels, midpoints):
    # midpoint ties go to the upper level ('right' side of searchsorted)
    idx = np.searchsorted(midpoints, values, side="right")
    return levels[idx]


class PerDimensionLevels(FiniteAlphabet):
    """Independent per-dimension quantization to a symmetric level set."""

    def __init__(self, levels, p_tx):
        levels = np.asarray(levels, dtype=np.float64)
        if levels.ndim != 1 or len(levels) < 2:
            raise ValueError("need at least two real levels")
        if np.any(np.diff(levels) <= 0):
            raise ValueError("levels must be strictly ascending")
        if not np.array_equal(levels, -levels[::-1]):
            raise ValueError("levels must be symmetric about zero")
        self.levels = levels
        self.p_tx = check_positive(p_tx, "p_tx")
        self._midpoints = (levels[:-1] + levels[1:]) / 2.0
        re, im = np.meshgrid(levels, levels, indexing="ij")
        self._points = (re + 1j * im).ravel()

    @property
    def points(self):
        return self._points

    @property
    def levels_per_dim(self):
        return len(self.levels)

    @property
    def bits_per_dim(self):
        return int(np.log2(len(self.levels)))

    def project(self, v):
        v = _as_complex(v)
        re = _project_levels(v.real, self.levels, self._midpoints)
        im = _project_levels(v.imag, self.levels, self._midpoints)
        return re + 1j * im

    def cache_key(self):
        return ("levels", self.levels.tobytes(), self.p_tx)


class PskPhases(FiniteAlphabet):
    """Constant-envelope set sqrt(P_tx) * exp(2j*pi*k/M), k = 0..M-1."""

    def __init__(self, order, p_tx):
        order = int(order)
        if order < 2:
            raise ValueError(f"PSK order must be >= 2, got {order}")
        self.order = order
        self.p_tx = check_positive(p_tx, "p_tx")
        k = np.arange(order)
        self._points = np.sqrt(p_tx) * np.exp(2j * np.pi * k / order)

    @property
    def points(self):
        return self._points

    def project(self, v):
        v = _as_complex(v)
        m = self.order
        kf = np.angle(v) * (m / (2.0 * np.pi))
        k0 = np.floor(kf)
        frac = kf - k0
        k = np.where(frac > 0.5, k0 + 1.0, k0).astype(np.int64) % m
        if np.any(frac == 0.5):
            # exact midpoints: keep the lexicographically larger of the two points
            for i in np.nonzero(frac == 0.5)[0]:
                a = int(k0[i]) % m
                b = (a + 1) % m
                pa, pb = self._points[a], self._points[b]
                k[i] = b if (pb.real, pb.imag) > (pa.real, pa.imag) else a
        if np.any(v == 0):
            # the origin is equidistant from all points; k=0 has the largest real part
            k[v == 0] = 0
        return self._points[k]

    def cache_key(self):
        return ("psk", self.order, self.p_tx)


class ExplicitSet(FiniteAlphabet):
    """An arbitrary finite point set, scanned exhaustively on projection.

    Points are stored sorted by descending (real, imag) so that argmin over
    the stored order resolves distance ties by the documented rule.
    """

    def __init__(self, points, p_tx=None):
        points = as_complex_vector(np.asarray(points), "points")
        if len(points) == 0:
            raise ValueError("point set must be nonempty")
        order = np.lexsort((-points.imag, -points.real))
        points = points[order]
        if np.any(points[1:] == points[:-1]):
            raise ValueError("points must be distinct")
        self._points = points
        self.p_tx = float(np.mean(np.abs(points) ** 2)) if p_tx is None else float(p_tx)

    @property
    def points(self):
        return self._points

    def project(self, v):
        v = _as_complex(v)
        d2 = np.abs(v[:, None] - self._points[None, :]) ** 2
        return self._points[np.argmin(d2, axis=1)]

    def cache_key(self):
        return ("explicit", self._points.tobytes())


def one_bit(p_tx):
    """1-bit DAC alphabet sqrt(P_tx/2) * (+-1 +-1j); |point|^2 = P_tx."""
    return uniform_dac(1, p_tx)


def psk(order, p_tx):
    """Constant-envelope M-PSK alphabet at per-antenna power P_tx."""
    return PskPhases(order, p_tx)


def uniform_dac(bits, p_tx):
    """Symmetric uniform mid-rise DAC with 2**bits levels per dimension.

    The step is chosen so the average complex point power under uniform
    level usage equals P_tx.
    """
    bits = int(bits)
    if bits < 1:
        raise ValueError(f"bits must be >= 1, got {bits}")
    check_positive(p_tx, "p_tx")
    m = 2 ** (bits - 1)
    # complex power under uniform use: delta^2 * (4m^2 - 1) / 6 = P_tx
    delta = np.sqrt(6.0 * p_tx / (4 * m * m - 1))
    half = (2 * np.arange(1, m + 1) - 1) * (delta / 2.0)
    levels = np.concatenate([-half[::-1], half])
    return PerDimensionLevels(levels, p_tx)


def hybrid_sumset(dac, psk_alphabet, n_rf, cap=DEFAULT_HYBRID_CAP):
    """Alphabet of an n_rf-chain hybrid: sums of n_rf (DAC point x PSK phase)
    products, deduplicated and renormalized to the DAC's average power.
    """
    if n_rf < 1:
        raise ValueError(f"n_rf must be >= 1, got {n_rf}")
    products = np.multiply.outer(dac.points, psk_alphabet.points).ravel()
    combos = len(products) ** n_rf
    if combos > cap:
        raise ValueError(
            f"hybrid sum set would enumerate {combos} combinations, cap is {cap}"
        )
    sums = _dedup(products)
    for _ in range(n_rf - 1):
        sums = _dedup((sums[:, None] + products[None, :]).ravel())
    power = np.mean(np.abs(sums) ** 2)
    if power == 0.0:
        raise ValueError("hybrid sum set collapsed to the origin")
    sums = sums * np.sqrt(dac.p_tx / power)
    return ExplicitSet(sums, p_tx=dac.p_tx)


def _dedup(points, rel_tol=1e-9):
    # quantize to a relative grid so reassociated floating sums collapse
    scale = np.max(np.abs(points))
    if scale == 0.0:
        return np.zeros(1, dtype=np.complex128)
    q = np.round(points / (scale * rel_tol))
    _, idx = np.unique(q, return_index=True)
    return points[np.sort(idx)]


def project(alphabet, v):
    """Entrywise projection of v onto the alphabet (function-style wrapper)."""
    return alphabet.project(v)
