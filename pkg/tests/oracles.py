"""Slow, independent reference computations used to check the fast paths.

Nothing here imports the package's transform code.
"""

import math

import numpy as np

LOW = np.array([1.0, 1.0]) / math.sqrt(2.0)
HIGH = np.array([1.0, -1.0]) / math.sqrt(2.0)


def filter_decimate(x, taps):
    """Full convolution with the time-reversed taps, keep every second sample."""
    x = np.asarray(x, dtype=float)
    full = np.convolve(x, taps[::-1])
    return full[1::2][: len(x) // 2]


def naive_dwt2(img):
    """Rows then columns, one np.convolve call per line."""
    img = np.asarray(img, dtype=float)
    rows, cols = img.shape
    lo = np.zeros((rows, cols // 2))
    hi = np.zeros((rows, cols // 2))
    for r in range(rows):
        lo[r] = filter_decimate(img[r], LOW)
        hi[r] = filter_decimate(img[r], HIGH)
    out = {}
    for name, band in (("l", lo), ("h", hi)):
        col_lo = np.zeros((rows // 2, cols // 2))
        col_hi = np.zeros((rows // 2, cols // 2))
        for c in range(cols // 2):
            col_lo[:, c] = filter_decimate(band[:, c], LOW)
            col_hi[:, c] = filter_decimate(band[:, c], HIGH)
        # first letter: column filter, second: row filter
        out["l" + name] = col_lo
        out["h" + name] = col_hi
    return out["ll"], out["lh"], out["hl"], out["hh"]


def block_approximation(img, levels):
    """LL_k straight from pixel block sums: each coefficient is sum / 2**k."""
    img = np.asarray(img, dtype=float)
    b = 2 ** levels
    rows, cols = img.shape
    out = np.zeros((rows // b, cols // b))
    for i in range(rows // b):
        for j in range(cols // b):
            out[i, j] = img[i * b:(i + 1) * b, j * b:(j + 1) * b].sum() / b
    return out


def pipeline_distance(ref, test, levels):
    """Brute-force approximation distance: block sums and an explicit loop."""
    a = block_approximation(ref, levels)
    t = block_approximation(test, levels)
    total = 0.0
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            total += (a[i, j] - t[i, j]) ** 2
    return math.sqrt(total)
