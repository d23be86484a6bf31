import itertools
import math

import numpy as np
import pytest

from dssfade import _pykernels, kernels
from dssfade.constellation import build_qam
from dssfade.rotation_opt import (
    Objective,
    RotationObjectiveConfig,
    delta,
    es_over_4n0_from_ebn0,
    f1,
    f2,
    golden_section,
    optimize_rotation,
    p_lower,
    s_factor,
)


def naive_f1_f2(c, snr, r):
    pts = c.points / math.sqrt(np.mean(np.sum(c.points**2, axis=1)))
    total, min_pl = 0.0, math.inf
    for i, j in itertools.permutations(range(c.q), 2):
        x, y = pts[i], pts[j]
        g = [snr * (x[k] - y[k]) ** 2 for k in range(2)]
        s = 1.0
        for gk in g:
            s /= 1.0 + gk
        d = max(math.sqrt(gk / (1.0 + gk)) for gk in g)
        pl = 0.25 * (1 / (1 + d) + 1 / (1 + d) ** 2) * s
        total += s
        min_pl = min(min_pl, pl)
    return total * (1 - min_pl) ** (r - 1), total


def test_pairwise_examples():
    x, y = np.array([0.0, 0.0]), np.array([1.0, 1.0])
    assert s_factor(x, y, 1.0) == pytest.approx(0.25)
    assert s_factor(x, y, 0.0) == 1.0
    assert delta(x, y, 1.0) == pytest.approx(math.sqrt(0.5))
    assert delta(x, y, 0.0) == 0.0
    d = math.sqrt(0.5)
    assert p_lower(x, y, 1.0) == pytest.approx(0.25 * (1 / (1 + d) + 1 / (1 + d) ** 2) * 0.25)
    assert p_lower(x, y, 1.0) == pytest.approx(0.0580583, abs=5e-8)
    assert p_lower(x, y, 0.0) == pytest.approx(s_factor(x, y, 0.0) / 2)
    # one shared coordinate: only the other gap matters
    assert s_factor(x, np.array([0.0, 2.0]), 1.0) == pytest.approx(1 / 5)


def test_delta_range():
    rng = np.random.default_rng(0)
    x, y = rng.normal(size=(1000, 2)), rng.normal(size=(1000, 2))
    for snr in (0.1, 10.0, 1e6):
        d = delta(x, y, snr)
        assert np.all((d >= 0) & (d < 1))
        assert np.all(p_lower(x, y, snr) <= s_factor(x, y, snr) / 2 + 1e-15)


def test_f2_zero_snr_counts_pairs():
    for q in (4, 16):
        assert f2(build_qam(q, 0.3), 0.0) == pytest.approx(q * (q - 1))


@pytest.mark.parametrize("q", [4, 16])
def test_objectives_match_naive(q):
    for theta, snr, r in [(0.4, 1.0, 3), (0.1, 5.0, 6), (1.2, 0.3, 2)]:
        c = build_qam(q, theta)
        nf1, nf2 = naive_f1_f2(c, snr, r)
        assert f1(c, snr, r) == pytest.approx(nf1, rel=1e-12)
        assert f2(c, snr) == pytest.approx(nf2, rel=1e-12)
        assert f1(c, snr, 1) == f2(c, snr)


def test_backends_agree():
    c = build_qam(64, 0.37)
    a = kernels.pair_stats(c.points / 10, 3.0)
    b = kernels.pair_stats(c.points / 10, 3.0, impl=_pykernels)
    assert a == pytest.approx(b, rel=1e-12)


def test_f1_le_f2_and_symmetry():
    snr = es_over_4n0_from_ebn0(15, 4)
    for theta in np.linspace(0, math.pi / 2, 65):
        c = build_qam(4, theta)
        assert f1(c, snr, 4) <= f2(c, snr)
        mirror = build_qam(4, math.pi / 2 - theta)
        assert f2(mirror, snr) == pytest.approx(f2(c, snr), rel=1e-10)
        assert f1(mirror, snr, 4) == pytest.approx(f1(c, snr, 4), rel=1e-10)


def test_f1_tends_to_f2_at_high_snr():
    c = build_qam(4, 0.5)
    ratios = [f1(c, s, 3) / f2(c, s) for s in (1.0, 1e2, 1e4, 1e6)]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] > 1 - 1e-9


def test_rotation_beats_unrotated():
    snr = es_over_4n0_from_ebn0(20, 4)
    res = optimize_rotation(RotationObjectiveConfig(4, 2, snr, grid=1024), "f2")
    assert f2(build_qam(4, 0.0), snr) > 10 * res.objective_value
    assert 0 < res.theta_star < math.pi / 4
    assert res.objective_value <= res.grid_value


def test_golden_section():
    x, fx = golden_section(lambda t: (t - 0.3) ** 2 + 1, 0.0, 1.0, 1e-8)
    assert x == pytest.approx(0.3, abs=1e-7) and fx == pytest.approx(1.0)


def test_refinement_stable_under_grid_doubling():
    snr = es_over_4n0_from_ebn0(20, 4)
    for kind in ("f1", "f2"):
        a = optimize_rotation(RotationObjectiveConfig(4, 3, snr, grid=512), kind)
        b = optimize_rotation(RotationObjectiveConfig(4, 3, snr, grid=1024), kind)
        assert abs(a.theta_star - b.theta_star) < 1e-3


def test_r1_identical_profiles():
    cfg = RotationObjectiveConfig(16, 1, es_over_4n0_from_ebn0(18, 16), grid=256)
    a, b = optimize_rotation(cfg, Objective.F1), optimize_rotation(cfg, Objective.F2)
    assert a.theta_star == b.theta_star
    assert a.full_profile == b.full_profile


def test_config_validation():
    with pytest.raises(ValueError):
        RotationObjectiveConfig(4, 2, 0.0)
    with pytest.raises(ValueError):
        RotationObjectiveConfig(4, 2, 1.0, grid=1)
