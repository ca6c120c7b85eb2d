"""Achievable rates and per-helper max-weight transmission scheduling.

Two physical layers:
  * multi-antenna helpers beamform to an active user subset; with many
    antennas the per-user rate hardens to a function of the large-scale
    gain and the subset size only, which makes the weighted-sum-rate
    maximization solvable exactly by a per-size sort + greedy pass;
  * single-antenna helpers time-share, so the max-weight decision is to
    serve the single best user for the whole slot.

Rates are base-2 logarithms, i.e. bits per channel symbol. Interference is
the full-power sum over all other helpers, which keeps the per-helper
problems decoupled.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .scenario import NetworkState, Topology


@dataclass(frozen=True)
class RateParams:
    M: int           # antennas at the helper
    S_max: int       # cap on the active subset size
    P: float         # helper transmit power, linear

    def __post_init__(self):
        if not 1 <= self.S_max <= self.M:
            raise ConfigError(f"policy.s_max: need 1 <= S_max <= M, got S_max={self.S_max}, M={self.M}")
        if self.P <= 0:
            raise ConfigError("policy.power must be positive")


@dataclass
class ScheduleDecision:
    """One helper's slot decision: active subset and per-neighbor rates."""

    helper: int
    users: np.ndarray        # neighbor user ids, ascending
    mu: np.ndarray           # bits/channel symbol per neighbor; zero outside subset
    subset: tuple            # active user ids, ascending
    score: float             # achieved weighted sum rate


def interference_at(u: int, h: int, state: NetworkState, topo: Topology) -> float:
    """Total received power at user u from every helper other than h.

    All helpers are assumed transmitting at full power every slot, so the
    sum runs over all pairs, not just graph edges.
    """
    total = float(np.dot(topo.powers, state.gains[:, u]))
    return total - float(topo.powers[h] * state.gains[h, u])


def zf_rate(g: float, M: int, S: int, P: float, I: float, member: bool = True) -> float:
    """Hardened zero-forcing rate of one user when the helper serves an
    active subset of size S with power split equally across streams."""
    if not 1 <= S <= M:
        raise ValueError(f"subset size {S} outside [1, M={M}]")
    if not member:
        return 0.0
    return math.log2(1.0 + g * (M - S + 1) * P / (S * (1.0 + I)))


def _helper_arrays(h, weights, state, topo):
    neigh = topo.helper_neighbors[h]
    g = state.gains[h, neigh]
    totals = topo.powers @ state.gains[:, neigh]
    interference = totals - topo.powers[h] * g
    w = np.asarray(weights, float)[neigh]
    return neigh, g, interference, w


def _empty_decision(h, neigh):
    return ScheduleDecision(h, neigh, np.zeros(len(neigh)), (), 0.0)


def schedule_helper_phyB(h, weights, state, topo, params: RateParams) -> ScheduleDecision:
    """Max-weight subset selection for a multi-antenna helper.

    Because the rate of a served user depends on the subset only through its
    size, the best subset of each size S is the top S users by weighted
    rate; one sort per size finds the overall maximizer. Ties break toward
    the smaller size, then the lexicographically smallest user set. An empty
    subset (score 0) is allowed, so a helper with all-zero weights idles.
    """
    neigh, g, interference, w_user = _helper_arrays(h, weights, state, topo)
    if len(neigh) == 0:
        return _empty_decision(h, neigh)
    cap = min(params.S_max, params.M, len(neigh))
    best_score = 0.0
    best_members = None
    best_rates = None
    for S in range(1, cap + 1):
        coeff = (params.M - S + 1) * params.P / S
        rates = np.log2(1.0 + coeff * g / (1.0 + interference))
        w = w_user * rates
        order = np.argsort(-w, kind="stable")[:S]
        members = np.sort(order)
        score = float(sum(w[i] for i in members))
        if score > best_score:
            best_score = score
            best_members = members
            best_rates = rates
    mu = np.zeros(len(neigh))
    if best_members is None:
        return ScheduleDecision(h, neigh, mu, (), 0.0)
    mu[best_members] = best_rates[best_members]
    subset = tuple(int(neigh[i]) for i in best_members)
    return ScheduleDecision(h, neigh, mu, subset, best_score)


def brute_force_schedule(h, weights, state, topo, params: RateParams) -> ScheduleDecision:
    """Exhaustive max-weight oracle: enumerate every subset up to the size
    cap and keep the best, with the same tie-break as the greedy. Refuses
    neighborhoods larger than 20 users."""
    neigh, g, interference, w_user = _helper_arrays(h, weights, state, topo)
    if len(neigh) > 20:
        raise ValueError(f"brute force search refused for |N(h)|={len(neigh)} > 20")
    if len(neigh) == 0:
        return _empty_decision(h, neigh)
    cap = min(params.S_max, params.M, len(neigh))
    best_score = 0.0
    best_members = None
    best_rates = None
    for S in range(1, cap + 1):
        coeff = (params.M - S + 1) * params.P / S
        rates = np.log2(1.0 + coeff * g / (1.0 + interference))
        w = (w_user * rates).tolist()
        for combo in itertools.combinations(range(len(neigh)), S):
            score = float(sum(w[i] for i in combo))
            if score > best_score:
                best_score = score
                best_members = combo
                best_rates = rates
    mu = np.zeros(len(neigh))
    if best_members is None:
        return ScheduleDecision(h, neigh, mu, (), 0.0)
    members = np.array(best_members)
    mu[members] = best_rates[members]
    subset = tuple(int(neigh[i]) for i in best_members)
    return ScheduleDecision(h, neigh, mu, subset, best_score)


def schedule_helper_phyA(h, weights, state, topo) -> ScheduleDecision:
    """Max-weight slot decision for a single-antenna helper.

    The weighted sum rate over the time-sharing simplex is maximized at a
    vertex, so the helper serves only the user with the largest weighted
    single-user rate for the whole slot.
    """
    neigh = topo.helper_neighbors[h]
    if len(neigh) == 0:
        return _empty_decision(h, neigh)
    g = state.gains[h, neigh]
    totals = topo.powers @ state.gains[:, neigh]
    interference = totals - topo.powers[h] * g
    rates = np.log2(1.0 + g * topo.powers[h] / (1.0 + interference))
    w = np.asarray(weights, float)[neigh] * rates
    i = int(np.argmax(w))
    mu = np.zeros(len(neigh))
    if w[i] <= 0.0:
        return ScheduleDecision(h, neigh, mu, (), 0.0)
    mu[i] = rates[i]
    return ScheduleDecision(h, neigh, mu, (int(neigh[i]),), float(w[i]))
