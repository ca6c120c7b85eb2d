import numpy as np
import pytest

from pullstream.scenario import NetworkState, Topology


def make_net(gains, powers=None, antennas=None, edges=None):
    """Topology + state with explicit gains; positions are placeholders."""
    gains = np.asarray(gains, float)
    H, U = gains.shape
    powers = np.ones(H) if powers is None else np.asarray(powers, float)
    antennas = np.full(H, 8) if antennas is None else np.asarray(antennas, int)
    edges = np.ones((H, U), bool) if edges is None else np.asarray(edges, bool)
    topo = Topology(
        helper_pos=np.zeros((H, 2)),
        user_pos=np.zeros((U, 2)),
        powers=powers,
        antennas=antennas,
        edges=edges,
    )
    state = NetworkState(t=1, gains=gains, user_pos=topo.user_pos)
    return topo, state


@pytest.fixture
def net_factory():
    return make_net
