"""Numpy implementations of the hot loops.

These define the semantics; ``_ckernels`` must agree with them (decoding
bit-exactly, pair statistics to rounding).
"""
import numpy as np

_CHUNK = 1 << 15


def ml_decode(y: np.ndarray, h: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Index of the point minimising ``sum_j (y_j - h_j p_j)^2``; ties go to the lowest index."""
    n = y.shape[0]
    out = np.empty(n, dtype=np.int64)
    p0, p1 = points[:, 0], points[:, 1]
    for lo in range(0, n, _CHUNK):
        sl = slice(lo, lo + _CHUNK)
        d0 = y[sl, 0:1] - h[sl, 0:1] * p0
        d1 = y[sl, 1:2] - h[sl, 1:2] * p1
        out[sl] = np.argmin(d0 * d0 + d1 * d1, axis=1)
    return out


def pair_stats(points: np.ndarray, snr: float) -> tuple[float, float]:
    """Sum of ``s`` over ordered distinct pairs and the minimum ``P_L``."""
    q = points.shape[0]
    a, b = np.triu_indices(q, k=1)
    g = snr * (points[a] - points[b]) ** 2
    s = 1.0 / ((1.0 + g[:, 0]) * (1.0 + g[:, 1]))
    dl = np.sqrt(np.max(g / (1.0 + g), axis=1))
    pl = 0.25 * (1.0 / (1.0 + dl) + 1.0 / (1.0 + dl) ** 2) * s
    return 2.0 * float(np.sum(s)), float(np.min(pl))
