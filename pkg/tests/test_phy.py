import math
import time

import numpy as np
import pytest

from pullstream.errors import ConfigError
from pullstream.phy import (
    RateParams,
    brute_force_schedule,
    interference_at,
    schedule_helper_phyA,
    schedule_helper_phyB,
    zf_rate,
)

from conftest import make_net


def test_interference_single_helper_is_zero():
    topo, state = make_net([[0.5, 0.2]])
    assert interference_at(0, 0, state, topo) == 0.0


def test_interference_two_helpers_hand_sum():
    topo, state = make_net([[0.5], [0.25]], powers=[1.0, 1.0])
    assert interference_at(0, 0, state, topo) == pytest.approx(0.25)


def test_interference_zero_gains():
    topo, state = make_net([[0.5], [0.0]], powers=[1.0, 5.0])
    assert interference_at(0, 0, state, topo) == 0.0


def test_interference_scales_with_power():
    topo, state = make_net([[0.5], [0.25]], powers=[1.0, 4.0])
    assert interference_at(0, 0, state, topo) == pytest.approx(1.0)


def test_zf_rate_nonmember_is_zero():
    assert zf_rate(1.0, 10, 5, 1.0, 0.0, member=False) == 0.0


def test_zf_rate_hand_values():
    assert zf_rate(1.0, 10, 5, 1.0, 0.0) == pytest.approx(math.log2(2.2), rel=1e-12)
    assert zf_rate(1.0, 4, 4, 4.0, 0.0) == pytest.approx(1.0)


def test_zf_rate_rejects_oversized_subset():
    with pytest.raises(ValueError):
        zf_rate(1.0, 4, 5, 1.0, 0.0)
    with pytest.raises(ValueError):
        zf_rate(1.0, 4, 0, 1.0, 0.0)


def test_zf_rate_monotonicity_random():
    rng = np.random.default_rng(0)
    for _ in range(2000):
        g = rng.uniform(0.01, 2.0)
        M = int(rng.integers(2, 30))
        S = int(rng.integers(1, M))
        P = rng.uniform(0.1, 20.0)
        I = rng.uniform(0.0, 5.0)
        r = zf_rate(g, M, S, P, I)
        assert zf_rate(g, M, S + 1, P, I) <= r          # larger subset
        assert zf_rate(g, M + 1, S, P, I) >= r          # more antennas
        assert zf_rate(g * 1.1, M, S, P, I) >= r        # better gain
        assert zf_rate(g, M, S, P, I + 0.5) <= r        # more interference
        assert zf_rate(g, M, S, P * 1.5, I) >= r        # more power


def test_rate_params_validation():
    RateParams(10, 5, 1.0)
    with pytest.raises(ConfigError):
        RateParams(4, 5, 1.0)
    with pytest.raises(ConfigError):
        RateParams(4, 0, 1.0)


def test_greedy_singleton():
    topo, state = make_net([[0.9]], antennas=[10])
    dec = schedule_helper_phyB(0, np.array([100.0]), state, topo, RateParams(10, 5, 1.0))
    assert dec.subset == (0,)
    assert dec.mu[0] > 0


def test_greedy_all_zero_weights_idles():
    topo, state = make_net([[0.9, 0.8]], antennas=[10])
    dec = schedule_helper_phyB(0, np.zeros(2), state, topo, RateParams(10, 5, 1.0))
    assert dec.subset == ()
    assert dec.score == 0.0
    assert np.all(dec.mu == 0)


def test_equal_gains_equal_weights_score_table():
    # one helper, 20 identical users, g=1, Q=1, M=10, S_max=5, P=1, I=0:
    # score(S) = S*log2(1 + (11-S)/S), maximal at S=4
    topo, state = make_net([np.ones(20)], antennas=[10])
    params = RateParams(10, 5, 1.0)
    dec = schedule_helper_phyB(0, np.ones(20), state, topo, params)
    expected = {S: S * math.log2(1 + (11 - S) / S) for S in range(1, 6)}
    assert expected[1] == pytest.approx(3.4594316186372973)
    assert expected[2] == pytest.approx(4.918863237274595)
    assert expected[3] == pytest.approx(5.623407353748423)
    assert expected[4] == pytest.approx(5.837726474549189)
    assert expected[5] == pytest.approx(5.687517618749675)
    assert len(dec.subset) == 4
    assert dec.score == pytest.approx(expected[4], rel=1e-12)
    # identical users: tie-break keeps the lowest ids
    assert dec.subset == (0, 1, 2, 3)


def test_brute_force_excludes_zero_weight_partner():
    topo, state = make_net([[0.9, 0.9]], antennas=[10])
    dec = brute_force_schedule(0, np.array([1.0, 0.0]), state, topo, RateParams(10, 5, 1.0))
    assert dec.subset == (0,)


def test_brute_force_refuses_large_neighborhoods():
    topo, state = make_net([np.ones(21)], antennas=[32])
    with pytest.raises(ValueError, match="refused"):
        brute_force_schedule(0, np.ones(21), state, topo, RateParams(32, 10, 1.0))


def test_oracle_equivalence_quick():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(2, 9))
        M = int(rng.integers(4, 25))
        gains = np.vstack([rng.uniform(0.01, 1.0, n), rng.uniform(0.0, 0.5, n)])
        topo, state = make_net(gains, powers=rng.uniform(0.5, 10.0, 2), antennas=[M, M])
        params = RateParams(M, (M + 1) // 2, float(topo.powers[0]))
        w = rng.uniform(0.0, 1e6, n)
        fast = schedule_helper_phyB(0, w, state, topo, params)
        slow = brute_force_schedule(0, w, state, topo, params)
        assert fast.score == pytest.approx(slow.score, rel=1e-9)
        assert fast.subset == slow.subset
        assert np.allclose(fast.mu, slow.mu)


def test_decision_is_polytope_vertex():
    # rates of chosen members equal the subset-size rate formula exactly,
    # zero elsewhere
    rng = np.random.default_rng(3)
    gains = np.vstack([rng.uniform(0.05, 1.0, 8), rng.uniform(0.0, 0.3, 8)])
    topo, state = make_net(gains, powers=[2.0, 1.0], antennas=[12, 12])
    params = RateParams(12, 6, 2.0)
    w = rng.uniform(0.1, 10.0, 8)
    dec = schedule_helper_phyB(0, w, state, topo, params)
    S = len(dec.subset)
    assert S >= 1
    for i, u in enumerate(dec.users):
        I = interference_at(u, 0, state, topo)
        expect = zf_rate(state.gains[0, u], 12, S, 2.0, I, member=u in dec.subset)
        assert dec.mu[i] == pytest.approx(expect, rel=1e-12)


def test_phya_single_user():
    topo, state = make_net([[0.9]])
    dec = schedule_helper_phyA(0, np.array([5.0]), state, topo)
    assert dec.subset == (0,)
    assert dec.mu[0] == pytest.approx(math.log2(1 + 0.9))


def test_phya_dominant_weight_wins():
    topo, state = make_net([[0.5, 0.5]])
    dec = schedule_helper_phyA(0, np.array([10.0, 1.0]), state, topo)
    assert dec.subset == (0,)


def test_phya_weighted_rate_comparison():
    # weights (5, 8), rates (2, 1): products (10, 8) -> first user
    g1 = 2.0**2 - 1.0   # rate exactly 2 bits/symbol
    g2 = 2.0**1 - 1.0   # rate exactly 1
    topo, state = make_net([[g1, g2]])
    dec = schedule_helper_phyA(0, np.array([5.0, 8.0]), state, topo)
    assert dec.subset == (0,)
    assert dec.score == pytest.approx(10.0)


def test_phya_idles_on_zero_weights():
    topo, state = make_net([[0.5, 0.5]])
    dec = schedule_helper_phyA(0, np.zeros(2), state, topo)
    assert dec.subset == ()


def test_greedy_runtime_growth():
    # cost model is quadratic-times-log in the neighborhood size; allow wide
    # slack since this asserts growth rate, not absolute time
    def measure(n):
        rng = np.random.default_rng(0)
        gains = rng.uniform(0.01, 1.0, (1, n))
        topo, state = make_net(gains, antennas=[n])
        params = RateParams(n, n // 2, 1.0)
        w = rng.uniform(0.0, 1.0, n)
        best = math.inf
        for _ in range(3):
            t0 = time.perf_counter()
            schedule_helper_phyB(0, w, state, topo, params)
            best = min(best, time.perf_counter() - t0)
        return best

    measure(64)  # warm-up
    t64, t256 = measure(64), measure(256)
    theoretical = (256 / 64) ** 2 * (math.log(256) / math.log(64))
    assert t256 / t64 < 6 * theoretical
