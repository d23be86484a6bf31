"""Rotation design for square QAM over component-fading channels.

For a pair of points the Chernoff-type factor is

    s(x, y) = prod_i 1 / (1 + snr |x_i - y_i|^2),      snr = E_s / (4 N0)

and

    P_L(x, y) = (1/4) (1/(1+delta) + 1/(1+delta)^2) s(x, y)

with ``delta = max_i sqrt(snr g_i / (1 + snr g_i))``, ``g_i = |x_i - y_i|^2``.
The objectives are

    f2(theta) = sum_{x != y} s(x, y)
    f1(theta) = f2(theta) * (1 - min_{x != y} P_L(x, y))^(r - 1)

summed over ordered pairs of the unit-average-energy constellation, so that
``snr`` carries the whole signal-to-noise ratio.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .constellation import Constellation, build_qam

HALF_PI = math.pi / 2
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class Objective(str, enum.Enum):
    F1 = "f1"
    F2 = "f2"


def s_factor(x, y, es_over_4n0: float):
    g = es_over_4n0 * (np.asarray(x, dtype=float) - np.asarray(y, dtype=float)) ** 2
    return 1.0 / ((1.0 + g[..., 0]) * (1.0 + g[..., 1]))


def delta(x, y, es_over_4n0: float):
    g = es_over_4n0 * (np.asarray(x, dtype=float) - np.asarray(y, dtype=float)) ** 2
    return np.sqrt(np.max(g / (1.0 + g), axis=-1))


def p_lower(x, y, es_over_4n0: float):
    d = delta(x, y, es_over_4n0)
    return 0.25 * (1.0 / (1.0 + d) + 1.0 / (1.0 + d) ** 2) * s_factor(x, y, es_over_4n0)


def normalized_points(c: Constellation) -> np.ndarray:
    return c.points / math.sqrt(c.E_s)


def pair_stats(c: Constellation, es_over_4n0: float) -> tuple[float, float]:
    """``(f2, min P_L)`` for constellation ``c``."""
    return kernels.pair_stats(normalized_points(c), es_over_4n0)


def f2(c: Constellation, es_over_4n0: float) -> float:
    return pair_stats(c, es_over_4n0)[0]


def f1(c: Constellation, es_over_4n0: float, r: int) -> float:
    if r < 1:
        raise ValueError("r must be >= 1")
    total, min_pl = pair_stats(c, es_over_4n0)
    return total * (1.0 - min_pl) ** (r - 1)


def es_over_4n0_from_ebn0(ebn0_db: float, q: int) -> float:
    """``E_s/(4 N0)`` with ``E_s = log2(q) E_b``."""
    return math.log2(q) * 10.0 ** (ebn0_db / 10.0) / 4.0


@dataclass(frozen=True)
class RotationObjectiveConfig:
    q: int
    r: int
    es_over_4n0: float
    grid: int = 1024
    refine_tol: float = 1e-5

    def __post_init__(self) -> None:
        if not self.es_over_4n0 > 0:
            raise ValueError("es_over_4n0 must be > 0")
        if self.grid < 2:
            raise ValueError("grid must be >= 2")
        if self.r < 1:
            raise ValueError("r must be >= 1")


@dataclass
class RotationResult:
    theta_star: float
    objective_value: float
    objective_kind: Objective
    grid_theta: float
    grid_value: float
    full_profile: list[tuple[float, float]] = field(repr=False, default_factory=list)


def objective_function(cfg: RotationObjectiveConfig, objective: Objective | str) -> Callable[[float], float]:
    objective = Objective(objective)
    snr = cfg.es_over_4n0

    def fn(theta: float) -> float:
        c = build_qam(cfg.q, min(max(theta, 0.0), HALF_PI))
        if objective is Objective.F2:
            return f2(c, snr)
        return f1(c, snr, cfg.r)

    return fn


def golden_section(fn: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Minimise a unimodal ``fn`` on ``[lo, hi]`` to bracket width ``tol``."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def fold(theta: float) -> float:
    """Map ``theta`` to ``[0, pi/4]`` using the ``theta -> pi/2 - theta`` symmetry of square QAM."""
    return float(min(theta, HALF_PI - theta))


def optimize_rotation(cfg: RotationObjectiveConfig, objective: Objective | str) -> RotationResult:
    """Grid search over ``[0, pi/2]`` followed by golden-section refinement.

    Square QAM profiles are mirror-symmetric about ``pi/4``, so the two
    mirrored minima are equivalent; the one in ``[0, pi/4]`` is returned.
    """
    objective = Objective(objective)
    fn = objective_function(cfg, objective)
    thetas = np.linspace(0.0, HALF_PI, cfg.grid)
    values = np.array([fn(t) for t in thetas])
    k = int(np.argmin(values))
    lo = thetas[max(k - 1, 0)]
    hi = thetas[min(k + 1, cfg.grid - 1)]
    theta, value = golden_section(fn, lo, hi, cfg.refine_tol)
    if values[k] < value:
        theta, value = float(thetas[k]), float(values[k])
    return RotationResult(
        theta_star=fold(theta),
        objective_value=float(value),
        objective_kind=objective,
        grid_theta=float(thetas[k]),
        grid_value=float(values[k]),
        full_profile=list(zip(thetas.tolist(), values.tolist())),
    )
