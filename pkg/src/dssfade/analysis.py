"""Closed-form subpacket error probabilities.

With ``r`` helpers each wrong independently with probability ``ps``, a
repair fails only if the weighted helper errors do not cancel. One wrong
helper can never cancel, which gives

    r ps (1 - ps)^(r-1)  <=  P_sub  <=  1 - (1 - ps)^r

and both sides are asymptotic to ``r ps`` as ``ps -> 0``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gf import FieldParams
from .gf import field as gf_field

ENUMERATION_LIMIT = 10**7


@dataclass(frozen=True)
class PsubEstimates:
    ps: float
    r: int
    lower: float
    upper: float
    approx_simple: float
    ratio: float


def _check(ps: float, r: int) -> None:
    if not 0.0 <= ps <= 1.0:
        raise ValueError(f"ps must lie in [0, 1], got {ps}")
    if r < 1 or int(r) != r:
        raise ValueError(f"r must be a positive integer, got {r}")


def lower_bound(ps: float, r: int) -> float:
    return r * ps * (1.0 - ps) ** (r - 1)


def upper_bound(ps: float, r: int) -> float:
    # 1 - (1-p)^r without cancellation at small p.
    return -math.expm1(r * math.log1p(-ps)) if ps < 1.0 else 1.0


def bounds(ps: float, r: int) -> PsubEstimates:
    _check(ps, r)
    lo = lower_bound(ps, r)
    hi = upper_bound(ps, r)
    ratio = hi / lo if lo > 0 else (1.0 if hi == 0 else math.inf)
    return PsubEstimates(ps, r, lo, hi, r * ps, ratio)


def lower_bound_stderr(ps: float, ps_stderr: float, r: int) -> float:
    """Delta-method standard error of ``lower_bound`` at an estimated ``ps``."""
    slope = r * (1.0 - ps) ** (r - 2) * (1.0 - r * ps) if r >= 2 else 1.0
    return abs(slope) * ps_stderr


def upper_bound_stderr(ps: float, ps_stderr: float, r: int) -> float:
    return r * (1.0 - ps) ** (r - 1) * ps_stderr


def ratio_convergence(r: int, ps_sequence: Sequence[float]) -> list[float]:
    """``upper / lower`` for each ``ps``; tends to 1 as ``ps -> 0``."""
    out = []
    prev = math.inf
    for ps in ps_sequence:
        if not 0.0 < ps < 1.0:
            raise ValueError(f"ps must lie in (0, 1), got {ps}")
        if ps >= prev:
            raise ValueError("ps_sequence must be strictly decreasing")
        prev = ps
        out.append(bounds(ps, r).ratio)
    return out


def term_ratio(r: int, j: int, ps: float) -> float:
    """Ratio of the ``j``-error binomial term to the single-error term."""
    return math.comb(r, j) * ps ** (j - 1) * (1.0 - ps) ** (1 - j) / r


# Cancellation counts ------------------------------------------------------


def enumerate_zero_sums(q: int, j: int) -> int:
    """Number of ``j``-tuples of nonzero GF(q) elements whose sum is zero, by enumeration."""
    if (q - 1) ** j > ENUMERATION_LIMIT:
        raise ValueError(f"(q-1)^j = {(q - 1) ** j} exceeds enumeration limit")
    nz = np.arange(1, q, dtype=np.int32)
    sums = nz.copy()
    for _ in range(j - 1):
        sums = np.bitwise_xor.outer(sums, nz).ravel()
    return int(np.count_nonzero(sums == 0))


def _recurrence(q: int, j: int) -> int:
    n = 0
    for k in range(2, j + 1):
        n = (q - 1) ** (k - 1) - n
    return n


@functools.lru_cache(maxsize=None)
def _recurrence_validated(q: int) -> bool:
    # Check every j whose enumeration is affordable; needs at least j = 1..3.
    checked = 0
    for j in range(1, 25):
        if (q - 1) ** j > ENUMERATION_LIMIT:
            break
        if enumerate_zero_sums(q, j) != _recurrence(q, j):
            return False
        checked += 1
    return checked >= 3 or q <= 2


@functools.lru_cache(maxsize=None)
def zero_sum_count(q: int, j: int) -> int:
    if j < 1:
        raise ValueError("j must be >= 1")
    if (q - 1) ** j <= ENUMERATION_LIMIT:
        return enumerate_zero_sums(q, j)
    if not _recurrence_validated(q):
        raise RuntimeError(f"zero-sum recurrence failed validation for q={q}")
    return _recurrence(q, j)


def cancellation_probability(q: int, j: int) -> float:
    """Chance that ``j`` independent uniform nonzero errors sum to zero."""
    return zero_sum_count(q, j) / (q - 1) ** j


def exact_psub_uniform(ps: float, r: int, q: int) -> float:
    """Exact P_sub when each helper error is uniform over the nonzero elements."""
    _check(ps, r)
    total = 0.0
    for j in range(1, r + 1):
        total += math.comb(r, j) * ps**j * (1.0 - ps) ** (r - j) * (1.0 - cancellation_probability(q, j))
    return total


# Monte Carlo bridge -------------------------------------------------------


@dataclass
class OracleCheck:
    q: int
    r: int
    ps: float
    trials: int
    failures: int
    exact: float
    lower: float
    upper: float
    # per j >= 2: (trials with exactly j wrong helpers, of those how many cancelled)
    cancellations: dict[int, tuple[int, int]] = field(default_factory=dict)
    tolerance_sigmas: float = 4.0

    @property
    def estimate(self) -> float:
        return self.failures / self.trials

    @property
    def stderr(self) -> float:
        # Binomial error at the exact value so ps = 0 gives a well-defined zero.
        return math.sqrt(self.exact * (1.0 - self.exact) / self.trials)

    @property
    def z(self) -> float:
        if self.stderr == 0:
            return 0.0 if self.failures == 0 else math.inf
        return (self.estimate - self.exact) / self.stderr

    @property
    def passed(self) -> bool:
        return abs(self.z) <= self.tolerance_sigmas

    def cancellation_z(self, j: int) -> float:
        n, c = self.cancellations[j]
        p = cancellation_probability(self.q, j)
        if n == 0:
            return 0.0
        se = math.sqrt(p * (1.0 - p) / n)
        return (c / n - p) / se if se > 0 else (0.0 if c / n == p else math.inf)


def simulate_uniform_errors(
    q: int,
    r: int,
    ps: float,
    trials: int,
    rng: np.random.Generator,
    alphas: Sequence[int] | None = None,
    params: FieldParams | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Weighted error sums and wrong-helper counts on the synthetic channel.

    Each helper is independently corrupted with probability ``ps`` by an
    error drawn uniformly from the nonzero elements.
    """
    params = params or gf_field(q.bit_length() - 1)
    if params.q != q:
        raise ValueError("field does not match q")
    alphas = list(alphas) if alphas is not None else [1] * r
    if len(alphas) != r or any(a == 0 for a in alphas):
        raise ValueError("need r nonzero coefficients")
    wrong = rng.random((trials, r)) < ps
    errs = rng.integers(1, q, size=(trials, r)) * wrong
    acc = np.zeros(trials, dtype=np.int64)
    for i, a in enumerate(alphas):
        acc ^= params.mul_row(a)[errs[:, i]]
    return acc, wrong.sum(axis=1)


def empirical_psub_matches_oracle(
    q: int,
    r: int,
    ps: float,
    trials: int,
    rng: np.random.Generator,
    alphas: Sequence[int] | None = None,
    tolerance_sigmas: float = 4.0,
) -> OracleCheck:
    acc, nwrong = simulate_uniform_errors(q, r, ps, trials, rng, alphas)
    failed = acc != 0
    canc = {}
    for j in range(2, r + 1):
        sel = nwrong == j
        canc[j] = (int(np.count_nonzero(sel)), int(np.count_nonzero(sel & ~failed)))
    if not failed[nwrong == 1].all():
        raise AssertionError("a single helper error cancelled")
    b = bounds(ps, r)
    return OracleCheck(
        q, r, ps, trials, int(np.count_nonzero(failed)), exact_psub_uniform(ps, r, q),
        b.lower, b.upper, canc, tolerance_sigmas,
    )
