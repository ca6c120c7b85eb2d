"""User-side control decisions of the drift-plus-penalty decomposition.

Two per-user, per-slot decisions:
  * quality selection: pick the level minimizing
        k * Q * B(m) - Theta * D(m)
    over the chunk's profile, trading queue growth against quality credit;
  * auxiliary quality target: maximize V * phi(gamma) - Theta * gamma over
    the box [d_min, d_max], closed-form for log/linear utilities and
    golden-section search for any other concave utility.
"""

import math
from dataclasses import dataclass

from .errors import ConfigError
from .video import QualityBounds


@dataclass(frozen=True)
class PolicyParams:
    V: float                  # utility weight; larger favors quality over backlog
    k: int                    # pixels per chunk
    n: int                    # channel symbols per slot

    def __post_init__(self):
        if self.V <= 0:
            raise ConfigError("policy.V must be positive")
        if self.k < 1:
            raise ConfigError("policy: pixels per chunk must be >= 1")
        if self.n < 1:
            raise ConfigError("policy.symbols_per_slot must be >= 1")


class UtilityFunction:
    """Concave, nondecreasing utility of video quality."""

    def __init__(self, kind: str, fn):
        self.kind = kind
        self._fn = fn

    def __call__(self, x: float) -> float:
        return self._fn(x)

    @classmethod
    def log(cls) -> "UtilityFunction":
        return cls("log", math.log)

    @classmethod
    def linear(cls) -> "UtilityFunction":
        return cls("linear", lambda x: x)

    @classmethod
    def of(cls, fn) -> "UtilityFunction":
        """Wrap an arbitrary concave callable; optimized by search, not form."""
        return cls("custom", fn)


def make_utility(kind: str) -> UtilityFunction:
    if kind == "log":
        return UtilityFunction.log()
    if kind == "linear":
        return UtilityFunction.linear()
    raise ConfigError(f"policy.utility: unknown kind {kind!r}")


def select_quality(q_bits: float, theta: float, profile, k: int) -> int:
    """Quality level for the next chunk given backlog and virtual queue.

    `profile` lists (level, bits_per_pixel, quality) rows, level ascending.
    Ties break toward the smallest level.
    """
    if not profile:
        raise ValueError("chunk profile is empty")
    best_level = profile[0][0]
    best = math.inf
    kq = k * q_bits
    for level, bpp, quality in profile:
        objective = kq * bpp - theta * quality
        if objective < best:
            best = objective
            best_level = level
    return best_level


def choose_auxiliary(
    theta: float,
    V: float,
    bounds: QualityBounds,
    utility: UtilityFunction,
    tol: float = 1e-9,
) -> float:
    """Auxiliary quality target maximizing V*phi(gamma) - theta*gamma on the box."""
    lo, hi = bounds.d_min, bounds.d_max
    if utility.kind == "log":
        if theta <= 0:
            return hi
        return min(max(V / theta, lo), hi)
    if utility.kind == "linear":
        return hi if V >= theta else lo
    return _golden_max(lambda g: V * utility(g) - theta * g, lo, hi, tol)


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    """Golden-section maximization of a unimodal (concave) f on [lo, hi]."""
    a, b = lo, hi
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
    return 0.5 * (a + b)
