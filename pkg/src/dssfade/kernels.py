"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when importable. Setting
``DSSFADE_KERNELS=python`` forces the numpy fallback.
"""
import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("DSSFADE_KERNELS", "").lower() != "python":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        _impl = _pykernels


def _c(a: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def ml_decode(y: np.ndarray, h: np.ndarray, points: np.ndarray, impl=None) -> np.ndarray:
    return (impl or _impl).ml_decode(_c(y), _c(h), _c(points))


def pair_stats(points: np.ndarray, snr: float, impl=None) -> tuple[float, float]:
    return (impl or _impl).pair_stats(_c(points), float(snr))
