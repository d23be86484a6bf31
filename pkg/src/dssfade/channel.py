"""Component-wise fading channel and ML symbol detection.

Each real component of a transmitted point sees its own fade and noise::

    y_j = h_j * x_j + z_j,   z_j ~ N(0, N0/2),   j = 1, 2

AWGN is the special case ``h_j = 1``. For Rayleigh fading the ``h_j`` are
independent with ``E[h_j^2] = 1``. The receiver knows ``h`` exactly.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .constellation import Constellation
from .gf import FieldElement


class ChannelKind(str, enum.Enum):
    AWGN = "awgn"
    RAYLEIGH = "rayleigh"


@dataclass(frozen=True)
class ChannelConfig:
    """Channel kind and noise spectral density.

    ``n0 == 0`` is allowed and means a noiseless link.
    """

    kind: ChannelKind
    n0: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ChannelKind(self.kind))
        if not (self.n0 >= 0.0 and math.isfinite(self.n0)):
            raise ValueError(f"N0 must be finite and >= 0, got {self.n0}")

    @classmethod
    def from_ebn0(cls, kind: ChannelKind | str, ebn0_db: float, eb: float) -> ChannelConfig:
        if math.isinf(ebn0_db) and ebn0_db > 0:
            return cls(ChannelKind(kind), 0.0)
        return cls(ChannelKind(kind), eb / 10.0 ** (ebn0_db / 10.0))

    @property
    def noise_std(self) -> float:
        return math.sqrt(self.n0 / 2.0)


@dataclass(frozen=True, eq=False)
class ChannelObservation:
    """Received components ``y`` and the fades ``h`` that produced them.

    Both have trailing dimension 2; leading dimensions are batch axes.
    """

    y: np.ndarray
    h: np.ndarray


def draw_fades(kind: ChannelKind, shape: tuple[int, ...], rng: np.random.Generator) -> np.ndarray:
    if ChannelKind(kind) is ChannelKind.AWGN:
        return np.ones(shape)
    g = rng.standard_normal(shape + (2,))
    return np.sqrt(g[..., 0] ** 2 + g[..., 1] ** 2) / math.sqrt(2.0)


def transmit(x: np.ndarray, cfg: ChannelConfig, rng: np.random.Generator) -> ChannelObservation:
    """Send one point (shape ``(2,)``) or a batch (shape ``(..., 2)``)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != 2:
        raise ValueError(f"points must have trailing dimension 2, got shape {x.shape}")
    h = draw_fades(cfg.kind, x.shape, rng)
    z = rng.standard_normal(x.shape) * cfg.noise_std
    return ChannelObservation(h * x + z, h)


def ml_decode_indices(obs: ChannelObservation, c: Constellation) -> np.ndarray:
    shape = obs.y.shape[:-1]
    idx = kernels.ml_decode(obs.y.reshape(-1, 2), obs.h.reshape(-1, 2), c.points)
    return idx.reshape(shape)


def ml_decode(obs: ChannelObservation, c: Constellation) -> FieldElement:
    """ML estimate of a single transmitted symbol, as a field element."""
    if obs.y.shape != (2,):
        raise ValueError("ml_decode takes a single observation; use ml_decode_indices for batches")
    return c.field(int(ml_decode_indices(obs, c)))


@dataclass(frozen=True)
class RateEstimate:
    errors: int
    trials: int

    @property
    def p(self) -> float:
        return self.errors / self.trials

    @property
    def stderr(self) -> float:
        p = self.p
        return math.sqrt(p * (1.0 - p) / self.trials)

    @property
    def upper_95(self) -> float:
        """Rule of three when no errors were seen, normal approximation otherwise."""
        if self.errors == 0:
            return 3.0 / self.trials
        return self.p + 1.96 * self.stderr


def symbol_error_rate(
    cfg: ChannelConfig, c: Constellation, trials: int, rng: np.random.Generator
) -> RateEstimate:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sent = rng.integers(0, c.q, size=trials)
    obs = transmit(c.points[sent], cfg, rng)
    got = ml_decode_indices(obs, c)
    return RateEstimate(int(np.count_nonzero(got != sent)), trials)
