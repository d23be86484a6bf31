import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dssfade import analysis
from dssfade.analysis import (
    bounds,
    cancellation_probability,
    empirical_psub_matches_oracle,
    enumerate_zero_sums,
    exact_psub_uniform,
    ratio_convergence,
    term_ratio,
    zero_sum_count,
)
from dssfade.gf import field


def psub_by_pattern_enumeration(ps, r, q, alphas=None, m=None):
    """Sum the probability of every helper error pattern whose weighted sum is nonzero."""
    f = field(m or q.bit_length() - 1)
    alphas = alphas or [1] * r
    total = 0.0
    for pattern in itertools.product(range(q), repeat=r):
        prob = 1.0
        acc = 0
        for a, e in zip(alphas, pattern):
            prob *= (1 - ps) if e == 0 else ps / (q - 1)
            acc ^= f.mul_int(a, e)
        if acc:
            total += prob
    return total


def test_bounds_examples():
    b = bounds(0.1, 2)
    assert b.lower == pytest.approx(0.18, abs=1e-15)
    assert b.upper == pytest.approx(0.19, abs=1e-15)
    for r in (1, 3, 10):
        z = bounds(0.0, r)
        assert z.lower == z.upper == 0.0
    for ps in (0.0, 0.2, 0.9):
        one = bounds(ps, 1)
        assert one.lower == pytest.approx(ps) and one.upper == pytest.approx(ps)


def test_bounds_domain():
    with pytest.raises(ValueError):
        bounds(1.5, 2)
    with pytest.raises(ValueError):
        bounds(0.1, 0)


def test_upper_bound_stable_small_p():
    assert bounds(1e-12, 6).upper == pytest.approx(6e-12, rel=1e-9)


@settings(max_examples=300, deadline=None)
@given(st.floats(0.0, 0.999), st.integers(1, 30))
def test_bounds_ordered(ps, r):
    b = bounds(ps, r)
    assert 0.0 <= b.lower <= b.upper * (1 + 1e-12) <= 1.0 + 1e-12
    if ps > 0:
        assert b.lower / (r * ps) == pytest.approx((1 - ps) ** (r - 1), rel=1e-12)


def test_ratio_convergence():
    ps = [10.0**-k for k in range(1, 7)]
    rs = ratio_convergence(6, ps)
    assert all(a > b for a, b in zip(rs, rs[1:]))
    assert abs(rs[2] - 1) < 5e-3
    direct = (1 - (1 - 1e-3) ** 6) / (6 * 1e-3 * (1 - 1e-3) ** 5)
    assert rs[2] == pytest.approx(direct, rel=1e-12)
    assert ratio_convergence(1, ps) == pytest.approx([1.0] * 6)
    with pytest.raises(ValueError):
        ratio_convergence(2, [0.1, 0.2])


def test_term_ratio_vanishes():
    for j in (2, 3, 6):
        vals = [term_ratio(6, j, 10.0**-k) for k in range(1, 8)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-5
    assert term_ratio(6, 1, 0.3) == 1.0


def test_zero_sum_counts():
    assert zero_sum_count(4, 1) == 0
    assert zero_sum_count(4, 2) == 3
    assert zero_sum_count(16, 2) == 15
    for q in (4, 16):
        for j in range(1, 5):
            brute = sum(
                1 for t in itertools.product(range(1, q), repeat=j) if np.bitwise_xor.reduce(t) == 0
            )
            assert enumerate_zero_sums(q, j) == brute == analysis._recurrence(q, j)


def test_recurrence_used_beyond_limit():
    assert analysis._recurrence_validated(16)
    # 15^6 > 1e7: comes from the validated recurrence
    n6 = zero_sum_count(16, 6)
    assert n6 == 15**5 - zero_sum_count(16, 5)
    # The count equals ((q-1)^j + (-1)^j (q-1)) / q for the uniform nonzero model.
    assert n6 == (15**6 + 15) // 16


def test_exact_psub_q4_r2():
    # 9 equally likely error pairs, 3 of them (a, a) cancel.
    assert exact_psub_uniform(0.1, 2, 4) == pytest.approx(0.18 + 0.01 * (1 - 3 / 9), abs=1e-15)
    assert round(exact_psub_uniform(0.1, 2, 4), 7) == 0.1866667


@pytest.mark.parametrize("q,r", [(4, 1), (4, 2), (4, 3), (4, 5), (16, 2), (16, 3)])
@pytest.mark.parametrize("ps", [0.01, 0.1, 0.3])
def test_exact_matches_pattern_enumeration(q, r, ps):
    assert exact_psub_uniform(ps, r, q) == pytest.approx(psub_by_pattern_enumeration(ps, r, q), rel=1e-12)


def test_alpha_independence():
    assert psub_by_pattern_enumeration(0.2, 3, 16, [3, 7, 11]) == pytest.approx(exact_psub_uniform(0.2, 3, 16))


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 1.0), st.integers(1, 8), st.sampled_from([2, 4, 16, 64]))
def test_exact_within_bounds(ps, r, q):
    b = bounds(ps, r)
    e = exact_psub_uniform(ps, r, q)
    assert b.lower - 1e-12 <= e <= b.upper + 1e-12


@pytest.mark.parametrize("q", [4, 16])
def test_exact_increasing_in_r(q):
    for ps in (0.01, 0.1, 0.3, 0.45):
        vals = [exact_psub_uniform(ps, r, q) for r in range(1, 9)]
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_empirical_oracle_small():
    chk = empirical_psub_matches_oracle(4, 2, 0.1, 200_000, np.random.default_rng(5))
    assert chk.passed
    assert chk.exact == pytest.approx(0.1866667, abs=1e-7)
    nz = empirical_psub_matches_oracle(16, 6, 0.0, 10_000, np.random.default_rng(0))
    assert nz.failures == 0 and nz.passed


def test_empirical_oracle_general_alphas():
    chk = empirical_psub_matches_oracle(16, 4, 0.2, 200_000, np.random.default_rng(8), alphas=[2, 9, 5, 13])
    assert chk.passed


def test_conditional_cancellation_frequency():
    chk = empirical_psub_matches_oracle(4, 4, 0.3, 400_000, np.random.default_rng(11))
    for j in (2, 3, 4):
        assert chk.cancellations[j][0] > 1000
        assert abs(chk.cancellation_z(j)) < 4
    assert cancellation_probability(4, 2) == pytest.approx(1 / 3)
