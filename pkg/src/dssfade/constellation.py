"""Gray-labeled square QAM and the lift from GF(q) onto it.

Points live on the odd-integer grid ``{+-1, +-3, ...}^2`` (spacing 2). The
high ``m/2`` bits of a label pick the in-phase level and the low ``m/2`` bits
the quadrature level, each through a binary-reflected Gray code. ``points``
is indexed by label, so the point index *is* the field element value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gf import FieldElement, FieldParams
from .gf import field as gf_field

SUPPORTED_Q = (4, 16, 64)


def gray(k: int) -> int:
    return k ^ (k >> 1)


def gray_inverse(g: int) -> int:
    k = 0
    while g:
        k ^= g
        g >>= 1
    return k


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True, eq=False)
class Constellation:
    q: int
    theta: float
    points: np.ndarray = field(repr=False)
    base_points: np.ndarray = field(repr=False)

    @property
    def m(self) -> int:
        return self.q.bit_length() - 1

    @property
    def field(self) -> FieldParams:
        return gf_field(self.m)

    @property
    def E_s(self) -> float:
        return float(np.mean(np.sum(self.points**2, axis=1)))

    @property
    def E_b(self) -> float:
        return energy_per_bit(self)

    @property
    def complex_points(self) -> np.ndarray:
        return self.points[:, 0] + 1j * self.points[:, 1]

    def rotated(self, theta: float) -> Constellation:
        return build_qam(self.q, theta)


def build_qam(q: int, theta: float = 0.0) -> Constellation:
    """Gray-labeled ``q``-QAM rotated counter-clockwise by ``theta``."""
    if q not in SUPPORTED_Q:
        raise ValueError(f"unsupported q={q}; choose from {set(SUPPORTED_Q)}")
    if not 0.0 <= theta <= math.pi / 2 + 1e-12:
        raise ValueError(f"theta={theta} outside [0, pi/2]")
    m = q.bit_length() - 1
    half = m // 2
    side = 1 << half
    mask = side - 1
    base = np.empty((q, 2))
    for label in range(q):
        ki = gray_inverse(label >> half)
        kq = gray_inverse(label & mask)
        base[label] = (2 * ki - (side - 1), 2 * kq - (side - 1))
    pts = base @ rotation_matrix(theta).T
    base.setflags(write=False)
    pts.setflags(write=False)
    return Constellation(q, float(theta), pts, base)


def energy_per_bit(c: Constellation) -> float:
    """Average symbol energy divided by bits per symbol."""
    return float(np.sum(c.points**2) / c.q / math.log2(c.q))


def lift(c: Constellation, w: FieldElement | int) -> np.ndarray:
    v = int(w)
    if not 0 <= v < c.q:
        raise ValueError(f"{v} is not a label of {c.q}-QAM")
    return c.points[v]


def unlift(c: Constellation, index: int) -> FieldElement:
    if not 0 <= index < c.q:
        raise ValueError(f"point index {index} out of range for {c.q}-QAM")
    return c.field(int(index))


def grid_neighbors(c: Constellation) -> list[tuple[int, int]]:
    """Label pairs that are horizontal/vertical neighbours on the unrotated grid."""
    pos = {tuple(p): lab for lab, p in enumerate(c.base_points.astype(int).tolist())}
    out = []
    for (x, y), lab in pos.items():
        for dx, dy in ((2, 0), (0, 2)):
            other = pos.get((x + dx, y + dy))
            if other is not None:
                out.append((lab, other))
    return out


def min_distance(c: Constellation) -> float:
    d = c.points[:, None, :] - c.points[None, :, :]
    dist = np.sqrt(np.sum(d**2, axis=-1))
    return float(dist[~np.eye(c.q, dtype=bool)].min())


def min_product_distance(c: Constellation) -> float:
    d = np.abs(c.points[:, None, :] - c.points[None, :, :])
    prod = d[..., 0] * d[..., 1]
    return float(prod[~np.eye(c.q, dtype=bool)].min())
