import math

import numpy as np
import pytest

from pullstream.errors import ConfigError
from pullstream.policy import (
    PolicyParams,
    UtilityFunction,
    choose_auxiliary,
    make_utility,
    select_quality,
)
from pullstream.video import QualityBounds


def random_profile(rng, levels=4):
    b = np.sort(rng.uniform(0.02, 1.0, levels))
    d = np.sort(rng.uniform(0.2, 1.0, levels))
    return [(m + 1, float(b[m]), float(d[m])) for m in range(levels)]


def test_zero_virtual_queue_picks_lowest():
    prof = [(1, 0.05, 0.8), (2, 0.1, 0.9), (3, 0.2, 0.95)]
    assert select_quality(1e4, 0.0, prof, 10**6) == 1


def test_zero_backlog_picks_highest():
    prof = [(1, 0.05, 0.8), (2, 0.1, 0.9), (3, 0.2, 0.95)]
    assert select_quality(0.0, 1e10, prof, 10**6) == 3


def test_three_level_hand_case():
    # objectives: -7.5e9, -8e9, -7.5e9 -> level 2
    prof = [(1, 0.05, 0.80), (2, 0.10, 0.90), (3, 0.20, 0.95)]
    assert select_quality(1e4, 1e10, prof, 10**6) == 2


def test_tie_breaks_to_smallest_level():
    prof = [(1, 0.1, 0.9), (2, 0.1, 0.9), (3, 0.1, 0.9)]
    assert select_quality(5.0, 3.0, prof, 10) == 1


def test_quality_nonincreasing_in_backlog():
    rng = np.random.default_rng(42)
    for _ in range(50):
        prof = random_profile(rng)
        theta = rng.uniform(0, 1e8)
        levels = [select_quality(q, theta, prof, 1000) for q in np.linspace(0, 1e6, 100)]
        assert all(a >= b for a, b in zip(levels, levels[1:]))


def test_quality_nondecreasing_in_theta():
    rng = np.random.default_rng(43)
    for _ in range(50):
        prof = random_profile(rng)
        q = rng.uniform(0, 1e6)
        levels = [select_quality(q, th, prof, 1000) for th in np.linspace(0, 1e9, 100)]
        assert all(a <= b for a, b in zip(levels, levels[1:]))


def test_scaling_invariance():
    rng = np.random.default_rng(44)
    for _ in range(100):
        prof = random_profile(rng)
        q, theta = rng.uniform(1, 1e6), rng.uniform(1, 1e9)
        base = select_quality(q, theta, prof, 1000)
        for c in (0.5, 2.0, 8.0):
            assert select_quality(c * q, c * theta, prof, 1000) == base


def test_empty_profile_rejected():
    with pytest.raises(ValueError):
        select_quality(1.0, 1.0, [], 1)


def test_aux_log_zero_theta_hits_upper_bound():
    b = QualityBounds(0.3, 1.0)
    assert choose_auxiliary(0.0, 100.0, b, UtilityFunction.log()) == 1.0


def test_aux_log_large_theta_hits_lower_bound():
    b = QualityBounds(0.3, 1.0)
    assert choose_auxiliary(1e6, 1.0, b, UtilityFunction.log()) == 0.3


def test_aux_log_interior_stationary_point():
    b = QualityBounds(0.3, 1.0)
    assert choose_auxiliary(125.0, 100.0, b, UtilityFunction.log()) == pytest.approx(0.8)


def test_aux_log_matches_grid_search():
    rng = np.random.default_rng(7)
    for _ in range(50):
        lo = rng.uniform(0.05, 0.5)
        hi = rng.uniform(lo + 0.05, 1.0)
        V = 10 ** rng.uniform(-2, 4)
        theta = 10 ** rng.uniform(-2, 6)
        b = QualityBounds(lo, hi)
        got = choose_auxiliary(theta, V, b, UtilityFunction.log())
        grid = np.linspace(lo, hi, 100_001)
        best = grid[np.argmax(V * np.log(grid) - theta * grid)]
        assert got == pytest.approx(best, abs=1e-4)
        assert lo <= got <= hi


def test_aux_linear_is_bang_bang():
    b = QualityBounds(0.2, 0.9)
    lin = UtilityFunction.linear()
    assert choose_auxiliary(1.0, 2.0, b, lin) == 0.9
    assert choose_auxiliary(2.0, 1.0, b, lin) == 0.2


def test_aux_custom_concave_matches_log_closed_form():
    b = QualityBounds(0.3, 1.0)
    custom = UtilityFunction.of(math.log)
    for theta, V in ((125.0, 100.0), (0.5, 1.0), (1e5, 1.0)):
        closed = choose_auxiliary(theta, V, b, UtilityFunction.log())
        searched = choose_auxiliary(theta, V, b, custom)
        assert searched == pytest.approx(closed, abs=1e-6)


def test_aux_always_in_box():
    rng = np.random.default_rng(8)
    b = QualityBounds(0.4, 0.95)
    for _ in range(200):
        g = choose_auxiliary(10 ** rng.uniform(-3, 8), 10 ** rng.uniform(-3, 8), b, UtilityFunction.log())
        assert 0.4 <= g <= 0.95


def test_policy_params_validation():
    PolicyParams(1.0, 1, 1)
    with pytest.raises(ConfigError):
        PolicyParams(0.0, 1, 1)
    with pytest.raises(ConfigError):
        PolicyParams(1.0, 0, 1)
    with pytest.raises(ConfigError):
        PolicyParams(1.0, 1, 0)


def test_make_utility_rejects_unknown():
    assert make_utility("log").kind == "log"
    with pytest.raises(ConfigError):
        make_utility("quadratic")
