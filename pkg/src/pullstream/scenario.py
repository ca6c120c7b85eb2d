"""Network geometry and the slowly varying path-gain process.

Helpers (small-cell base stations) and users form a bipartite graph.
Path gains are large-scale only: 1 / (1 + (d/d0)^beta), bounded at d=0.
Gains are defined for every helper-user pair, edge or not, because the
interference sum at a user runs over all other helpers.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class PathLossParams:
    d0_m: float = 40.0
    beta: float = 3.5


@dataclass(frozen=True)
class MobilityParams:
    mode: str = "static"        # "static" | "waypoint"
    speed_mps: float = 1.0      # walking speed
    slot_seconds: float = 0.5   # slot duration, sets meters moved per slot
    area_m: tuple = (100.0, 100.0)  # waypoints are drawn inside this box

    @property
    def step_m(self) -> float:
        return self.speed_mps * self.slot_seconds


def path_gain(d, params: PathLossParams = PathLossParams()):
    """Linear gain at distance d (meters); accepts scalars or arrays."""
    d = np.asarray(d, dtype=float)
    g = 1.0 / (1.0 + (d / params.d0_m) ** params.beta)
    return float(g) if g.ndim == 0 else g


@dataclass
class Topology:
    """Bipartite helper-user graph with per-helper power and antenna counts."""

    helper_pos: np.ndarray          # (H, 2) meters
    user_pos: np.ndarray            # (U, 2) meters
    powers: np.ndarray              # (H,) linear transmit power
    antennas: np.ndarray            # (H,) antennas per helper
    edges: np.ndarray               # (H, U) bool adjacency
    helper_neighbors: list = field(default_factory=list)  # user ids per helper
    user_neighbors: list = field(default_factory=list)    # helper ids per user

    def __post_init__(self):
        self.helper_pos = np.atleast_2d(np.asarray(self.helper_pos, float))
        self.user_pos = np.atleast_2d(np.asarray(self.user_pos, float))
        self.powers = np.asarray(self.powers, float)
        self.antennas = np.asarray(self.antennas, int)
        self.edges = np.asarray(self.edges, bool)
        if self.edges.shape != (self.n_helpers, self.n_users):
            raise ConfigError("scenario.edges shape does not match helper/user counts")
        if np.any(self.antennas < 1):
            raise ConfigError("scenario.helpers: antennas must be >= 1 for every helper")
        if np.any(self.powers <= 0):
            raise ConfigError("scenario.helpers: power must be positive for every helper")
        self.helper_neighbors = [np.flatnonzero(self.edges[h]) for h in range(self.n_helpers)]
        self.user_neighbors = [np.flatnonzero(self.edges[:, u]) for u in range(self.n_users)]
        for u, hs in enumerate(self.user_neighbors):
            if hs.size == 0:
                raise ConfigError(f"scenario: user {u} has no reachable helper (empty neighborhood)")

    @property
    def n_helpers(self) -> int:
        return self.helper_pos.shape[0]

    @property
    def n_users(self) -> int:
        return self.user_pos.shape[0]

    @property
    def n_edges(self) -> int:
        return int(self.edges.sum())


@dataclass
class NetworkState:
    """Per-slot network state: path gains (and user positions under mobility).

    Per-chunk quality/size profiles, the other slowly varying input, live in
    the video library and are indexed by the same slot counter.
    """

    t: int
    gains: np.ndarray               # (H, U) linear path gains
    user_pos: np.ndarray            # (U, 2) current positions
    waypoints: np.ndarray | None = None


def _gain_matrix(helper_pos, user_pos, params: PathLossParams) -> np.ndarray:
    d = np.linalg.norm(helper_pos[:, None, :] - user_pos[None, :, :], axis=2)
    return path_gain(d, params)


def build_topology(scn, rng: np.random.Generator) -> Topology:
    """Realize a Topology from a scenario section (see config.ScenarioSection).

    User placement draws from the supplied RNG stream, so a fixed seed gives
    the same topology on every call.
    """
    helper_pos = np.array([h.pos for h in scn.helpers], float)
    powers = np.array([h.power for h in scn.helpers], float)
    antennas = np.array([h.antennas for h in scn.helpers], int)

    if scn.user_positions is not None:
        user_pos = np.array(scn.user_positions, float)
    else:
        area = np.asarray(scn.area_m, float)
        user_pos = rng.uniform(low=[0.0, 0.0], high=area, size=(scn.n_users, 2))

    H, U = helper_pos.shape[0], user_pos.shape[0]
    if scn.edge_rule == "all":
        edges = np.ones((H, U), bool)
    elif scn.edge_rule == "threshold":
        d = np.linalg.norm(helper_pos[:, None, :] - user_pos[None, :, :], axis=2)
        edges = d <= scn.edge_threshold_m
    elif scn.edge_rule == "explicit":
        edges = np.zeros((H, U), bool)
        for h, u in scn.edge_list:
            if not (0 <= h < H and 0 <= u < U):
                raise ConfigError(f"scenario.edges: pair ({h}, {u}) out of range")
            edges[h, u] = True
    else:
        raise ConfigError(f"scenario.edge_rule: unknown rule {scn.edge_rule!r}")

    return Topology(helper_pos, user_pos, powers, antennas, edges)


def initial_state(topo: Topology, path_loss: PathLossParams) -> NetworkState:
    gains = _gain_matrix(topo.helper_pos, topo.user_pos, path_loss)
    return NetworkState(t=0, gains=gains, user_pos=topo.user_pos.copy())


def advance_state(
    state: NetworkState,
    topo: Topology,
    mobility: MobilityParams,
    path_loss: PathLossParams,
    rng: np.random.Generator,
) -> NetworkState:
    """Advance one slot. Static mode keeps gains bit-identical; waypoint mode
    moves each user toward a random waypoint at walking speed and recomputes
    gains from the new positions."""
    if mobility.mode == "static":
        return NetworkState(state.t + 1, state.gains, state.user_pos, state.waypoints)
    if mobility.mode != "waypoint":
        raise ConfigError(f"scenario.mobility.mode: unknown mode {mobility.mode!r}")

    area = np.asarray(mobility.area_m, float)
    waypoints = state.waypoints
    if waypoints is None:
        waypoints = rng.uniform(low=[0.0, 0.0], high=area, size=state.user_pos.shape)
    pos = state.user_pos.copy()
    step = mobility.step_m
    for u in range(pos.shape[0]):
        delta = waypoints[u] - pos[u]
        dist = float(np.hypot(*delta))
        if dist <= step:
            pos[u] = waypoints[u]
            waypoints[u] = rng.uniform(low=[0.0, 0.0], high=area)
        elif dist > 0:
            pos[u] += delta * (step / dist)
    gains = _gain_matrix(topo.helper_pos, pos, path_loss)
    return NetworkState(state.t + 1, gains, pos, waypoints)
