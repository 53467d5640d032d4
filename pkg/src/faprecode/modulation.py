"""Square-QAM constellations with per-axis reflected Gray labels.

Bit convention (documented, the labels are otherwise arbitrary): a symbol of
2*b bits is split as [I bits | Q bits], MSB first.  On each axis the b-bit
group is read as a binary-reflected Gray code g; with i = gray_inverse(g) the
axis amplitude is (L - 1 - 2*i) * d where L = 2**b and d normalizes the
constellation to unit average energy.  All-zero bits therefore map to the
largest positive amplitude, e.g. QPSK "00" -> (1+1j)/sqrt(2), and adjacent
amplitudes differ in exactly one bit.
"""

import numpy as np

from .validation import as_complex_vector


def _gray(i):
    return i ^ (i >> 1)


def _gray_inverse(g):
    i = g
    while g:
        g >>= 1
        i ^= g
    return i


class Constellation:
    """Unit-average-energy symbol set with Gray-coded bit labels."""

    def __init__(self, name, points, labels, bits_per_symbol):
        self.name = name
        self.points = np.asarray(points, dtype=np.complex128)
        self.labels = np.asarray(labels, dtype=np.int64)
        self.bits_per_symbol = int(bits_per_symbol)
        m = len(self.points)
        if m != 2**self.bits_per_symbol:
            raise ValueError("constellation size must be 2**bits_per_symbol")
        if sorted(self.labels.tolist()) != list(range(m)):
            raise ValueError("labels must be a bijection onto 0..M-1")
        energy = np.mean(np.abs(self.points) ** 2)
        if abs(energy - 1.0) > 1e-12:
            raise ValueError(f"average symbol energy is {energy}, expected 1")
        # label value -> point index
        self._index_of_label = np.empty(m, dtype=np.int64)
        self._index_of_label[self.labels] = np.arange(m)

    @property
    def size(self):
        return len(self.points)

    def label_bits(self, index):
        """Bit array (MSB first) of the point at `index`."""
        label = int(self.labels[index])
        b = self.bits_per_symbol
        return np.array([(label >> (b - 1 - i)) & 1 for i in range(b)], dtype=np.int64)


def square_qam(order, name=None):
    """Gray-labeled square QAM of the given order (4, 16, 64, ...)."""
    L = int(round(np.sqrt(order)))
    if L * L != order or L < 2 or (L & (L - 1)):
        raise ValueError("order must be an even power of two (4, 16, 64, ...)")
    bits_axis = int(np.log2(L))
    # unit average energy: E|s|^2 = 2 * (L^2 - 1)/3 * d^2 = 1
    d = np.sqrt(3.0 / (2.0 * (L * L - 1)))
    amps = np.array([(L - 1 - 2 * i) * d for i in range(L)])
    points, labels = [], []
    for i_i in range(L):
        for i_q in range(L):
            points.append(amps[i_i] + 1j * amps[i_q])
            labels.append((_gray(i_i) << bits_axis) | _gray(i_q))
    return Constellation(name or f"{order}qam", points, labels, 2 * bits_axis)


_CONSTELLATIONS = {
    "qpsk": lambda: square_qam(4, name="qpsk"),
    "16qam": lambda: square_qam(16),
    "64qam": lambda: square_qam(64),
}


def get_constellation(name):
    try:
        return _CONSTELLATIONS[name.lower()]()
    except KeyError:
        raise ValueError(
            f"unknown constellation {name!r}, expected one of {sorted(_CONSTELLATIONS)}"
        ) from None


def modulate(bits, constellation):
    """Map a bit stream onto constellation points, one symbol per bit group."""
    bits = np.asarray(bits, dtype=np.int64)
    if bits.ndim != 1:
        raise ValueError("bits must be a 1-D array")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must contain only 0s and 1s")
    b = constellation.bits_per_symbol
    if len(bits) % b:
        raise ValueError(f"bit count {len(bits)} is not a multiple of {b}")
    groups = bits.reshape(-1, b)
    weights = 1 << np.arange(b - 1, -1, -1)
    label_values = groups @ weights
    return constellation.points[constellation._index_of_label[label_values]]


def detect(y, beta, constellation):
    """Rescale y by beta and slice each entry to the nearest constellation point.

    Ties are broken toward the lowest point index.  Returns the detected
    symbols and their concatenated bit labels.
    """
    y = as_complex_vector(y, "y")
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    z = beta * y
    dist = np.abs(z[:, None] - constellation.points[None, :])
    idx = np.argmin(dist, axis=1)
    symbols = constellation.points[idx]
    b = constellation.bits_per_symbol
    labels = constellation.labels[idx]
    bits = ((labels[:, None] >> np.arange(b - 1, -1, -1)[None, :]) & 1).ravel()
    return symbols, bits.astype(np.int64)
