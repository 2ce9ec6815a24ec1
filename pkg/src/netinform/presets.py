"""Example systems shipped with the package.

Three families: a four-input one-output open-loop system with a structured
input network, a two-node feedback network with correlated disturbances, and
a six-node network with target entry (1,2).  Helpers accept source toggles so
tests and the CLI can reproduce every excitation scenario.
"""

from __future__ import annotations

import numpy as np

from .model import Network, OpenLoopSystem, PredictorModel, SourceSpec
from .tf import OrderSpec, Status, TFMatrix, tf

P = Status.PARAMETRIZED
K = Status.KNOWN


def _p(num, den=(1.0,), orders: OrderSpec | None = None):
    return tf(num, den, P, orders)


def four_input_system(active=(1, 2, 3, 4), variant: str = "all_param",
                      coeffs: dict | None = None) -> OpenLoopSystem:
    """Four-input one-output open-loop system with input-network coupling.

    Input graph: u1 -> u2, u2 -> u3, u3 -> u2, u4 -> u3; external signal x_k
    enters u_k.  ``active`` lists the 1-based x signals that are present and
    persistently exciting.  ``variant`` fixes which plant entries are known a
    priori: "all_param", "known_g2" or "known_g4".
    """
    c = {
        "g21": 0.5, "g23": 0.4, "g32": 0.6, "g34": 0.5,
        "b": (0.8, -0.6, 0.7, 0.5), "a": (-0.3, 0.2, -0.25, 0.35),
        "h_c": 0.3, "h_d": -0.5,
    }
    if coeffs:
        c.update(coeffs)

    Gu = TFMatrix.zeros(4, 4)
    Gu.entries[1][0] = _p([0.0, c["g21"]])
    Gu.entries[1][2] = _p([0.0, c["g23"]])
    Gu.entries[2][1] = _p([0.0, c["g32"]])
    Gu.entries[2][3] = _p([0.0, c["g34"]])

    G = TFMatrix.zeros(1, 4)
    for k in range(4):
        status = P
        if variant == "known_g2" and k == 1:
            status = K
        if variant == "known_g4" and k == 3:
            status = K
        G.entries[0][k] = tf([0.0, c["b"][k]], [1.0, c["a"][k]], status,
                             OrderSpec(1, 1) if status is P else None)

    H = TFMatrix.zeros(1, 1)
    H.entries[0][0] = tf([1.0, c["h_c"]], [1.0, c["h_d"]], P, OrderSpec(1, 1, 0))

    active = tuple(active)
    specs = tuple(SourceSpec("white", 1.0 if k + 1 in active else 0.0)
                  for k in range(4))
    pe = tuple(k + 1 in active for k in range(4))
    return OpenLoopSystem(G, H, Gu, np.eye(4), [[0.5]], specs, pe)


def two_node_network(u1: bool = True, u2: bool = True) -> tuple[Network, PredictorModel]:
    """Two-node feedback loop with correlated disturbances, target entry (2,1).

    Predictor: inputs {w1}, outputs {w1, w2}.
    """
    G = TFMatrix.zeros(2, 2)
    G.entries[0][1] = _p([0.0, 0.4], orders=OrderSpec(1, 1))  # w2 -> w1
    G.entries[1][0] = _p([0.0, 0.5], orders=OrderSpec(1, 1))  # w1 -> w2, target
    H = TFMatrix.identity(2)
    H.entries[0][0] = _p([1.0], orders=OrderSpec(2, 2, 0))
    H.entries[1][1] = _p([1.0], orders=OrderSpec(2, 2, 0))
    H.entries[0][1] = _p([0.0, 0.4], orders=OrderSpec(2, 2))  # correlation v1~v2
    cov = np.diag([1.0, 0.8])

    cols = []
    if u1:
        cols.append(0)
    if u2:
        cols.append(1)
    R = np.zeros((2, len(cols)))
    for k, node in enumerate(cols):
        R[node, k] = 1.0

    net = Network(G, H, R, cov)
    pred = PredictorModel(D=(0,), Y=(0, 1), target=(1, 0)).ensure_param_map(net)
    return net, pred


SIX_NODE_SOURCES = ("u5", "u3", "u6", "e3", "e6", "e4")


def six_node_network(sources=("u5", "e3")) -> tuple[Network, PredictorModel]:
    """Six-node network with target entry (1,2) and correlated v1, v2.

    Edges: w2->w1 (target), w2->w3, w3->w1, w5->w2, w1->w5, w6->w3, w6->w4,
    w4->w1.  ``sources`` selects optional excitations (u3, u5, u6 entering w3,
    w5, w6) and disturbances (e3, e4, e6) on top of the always-present
    correlated disturbances on w1 and w2.  Predictor: (w2, w3) -> (w1, w2).
    """
    sources = tuple(sources)
    bad = [s for s in sources if s not in SIX_NODE_SOURCES]
    if bad:
        raise ValueError(f"unknown sources {bad}; choose from {SIX_NODE_SOURCES}")

    G = TFMatrix.zeros(6, 6)
    G.entries[0][1] = _p([0.0, 0.5], [1.0, -0.6], OrderSpec(1, 1))  # target G_12
    G.entries[2][1] = _p([0.0, 0.6])   # w2 -> w3
    G.entries[0][2] = _p([0.0, 0.4])   # w3 -> w1
    G.entries[1][4] = _p([0.0, 0.5])   # w5 -> w2
    G.entries[4][0] = _p([0.0, 0.4])   # w1 -> w5
    G.entries[2][5] = _p([0.0, 0.5])   # w6 -> w3
    G.entries[3][5] = _p([0.0, 0.6])   # w6 -> w4
    G.entries[0][3] = _p([0.0, 0.5])   # w4 -> w1

    H = TFMatrix.identity(6)
    H.entries[0][0] = _p([1.0], orders=OrderSpec(1, 1, 0))
    H.entries[1][1] = _p([1.0], orders=OrderSpec(1, 1, 0))
    H.entries[0][1] = _p([0.0, 0.4], orders=OrderSpec(1, 1))  # v1 ~ v2
    cov = np.zeros((6, 6))
    cov[0, 0] = 0.3
    cov[1, 1] = 0.3
    for s in sources:
        if s.startswith("e"):
            n = int(s[1:]) - 1
            cov[n, n] = 0.5
            H.entries[n][n] = _p([1.0], orders=OrderSpec(1, 1, 0))

    u_nodes = [int(s[1:]) - 1 for s in sources if s.startswith("u")]
    R = np.zeros((6, len(u_nodes)))
    for k, node in enumerate(sorted(u_nodes)):
        R[node, k] = 1.0

    net = Network(G, H, R, cov)
    pred = PredictorModel(D=(1, 2), Y=(0, 1), target=(0, 1),
                          G_map=_six_node_g_map(), H_map=_six_node_h_map(),
                          T_map=_six_node_t_map(net))
    return net, pred


def _six_node_g_map() -> TFMatrix:
    g = TFMatrix.zeros(2, 2)
    # rows: (w1, w2); cols: (w2, w3)
    g.entries[0][0] = _p([0.0, 0.0], orders=OrderSpec(1, 1))        # target
    g.entries[0][1] = _p([0.0, 0.0], orders=OrderSpec(1, 1))
    g.entries[1][1] = _p([0.0, 0.0, 0.0, 0.0], orders=OrderSpec(4, 3, 3))
    return g


def _six_node_h_map() -> TFMatrix:
    h = TFMatrix.zeros(2, 2)
    h.entries[0][0] = _p([1.0], orders=OrderSpec(1, 1, 0))
    h.entries[0][1] = _p([0.0, 0.0], orders=OrderSpec(1, 1))
    h.entries[1][0] = _p([0.0, 0.0], orders=OrderSpec(3, 3, 2))
    h.entries[1][1] = _p([1.0], orders=OrderSpec(4, 3, 0))
    return h


def _six_node_t_map(net: Network) -> TFMatrix:
    t = TFMatrix.zeros(2, net.K)
    for k in range(net.K):
        node = net.excitation_nodes(k)[0]
        if node == 4:  # u5: unknown dynamic term into w2 only
            t.entries[1][k] = _p([0.0, 0.0], orders=OrderSpec(2, 3))
        elif node == 5:  # u6: unknown dynamic terms into w1 and (via w1) w2
            t.entries[0][k] = _p([0.0, 0.0], orders=OrderSpec(3, 3, 2))
            t.entries[1][k] = _p([0.0, 0.0], orders=OrderSpec(5, 4, 4))
        # u3 enters the measured input w3: no separate predictor column.
    return t
