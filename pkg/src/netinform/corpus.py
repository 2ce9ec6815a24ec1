"""Seeded random networks and predictor cases for cross-checking suites."""

from __future__ import annotations

import numpy as np

from .graph import find_confounders
from .model import Network, PredictorModel, SourceSpec, validate
from .tf import OrderSpec, Status, TFMatrix, tf


def random_network(rng: np.random.Generator, n_nodes: int | None = None,
                   p_edge: float = 0.3, p_known: float = 0.2,
                   p_noise: float = 0.5, p_exc: float = 0.4,
                   max_nodes: int = 8) -> Network:
    """Sparse stable random network with mixed known/parametrized modules."""
    L = int(n_nodes) if n_nodes else int(rng.integers(3, max_nodes + 1))
    for attempt in range(60):
        shrink = 0.75 ** (attempt // 6)
        G = TFMatrix.zeros(L, L)
        n_edges = 0
        for r in range(L):
            for c in range(L):
                if r == c or rng.random() > p_edge:
                    continue
                b = shrink * rng.uniform(0.2, 0.7) * rng.choice([-1.0, 1.0])
                a = rng.uniform(-0.4, 0.4)
                status = Status.KNOWN if rng.random() < p_known else Status.PARAMETRIZED
                G.entries[r][c] = tf([0.0, b], [1.0, a], status,
                                     OrderSpec(1, 1) if status is Status.PARAMETRIZED
                                     else None)
                n_edges += 1
        if n_edges == 0:
            continue
        H = TFMatrix.identity(L)
        cov = np.zeros((L, L))
        for k in range(L):
            if rng.random() < p_noise:
                cov[k, k] = rng.uniform(0.3, 1.0)
                H.entries[k][k] = tf([1.0], [1.0], Status.PARAMETRIZED,
                                     OrderSpec(1, 1, 0))
        placements = [k for k in range(L) if rng.random() < p_exc]
        R = np.zeros((L, len(placements)))
        for idx, node in enumerate(placements):
            R[node, idx] = 1.0
        net = Network(G, H, R, cov,
                      r_specs=tuple(SourceSpec() for _ in placements))
        if validate(net).ok:
            return net
    raise RuntimeError("failed to draw a stable random network")


def random_miso_case(rng: np.random.Generator,
                     max_nodes: int = 8) -> tuple[Network, PredictorModel] | None:
    """Single-output predictor case with a parametrized target entry.

    The predictor inputs are all in-neighbors of the output node, which keeps
    module invariance; confounding noise sources are deactivated so that the
    predictor premises hold.  Returns None when the draw has no usable target.
    """
    net = random_network(rng, max_nodes=max_nodes)
    targets = [(r, c) for r in range(net.L) for c in range(net.L)
               if net.G.entries[r][c].status is Status.PARAMETRIZED]
    if not targets:
        return None
    j, i = targets[rng.integers(len(targets))]
    D = tuple(sorted(c for c in range(net.L)
                     if net.G.entries[j][c].status is not Status.ZERO))
    if i not in D:
        return None
    pred = PredictorModel(D=D, Y=(j,), target=(j, i)).ensure_param_map(net)
    for _ in range(net.L + 1):
        conf = find_confounders(net, pred)
        if not conf:
            break
        k = conf[0].index
        net.noise_cov[k, k] = 0.0
        net.H.entries[k][k] = tf([1.0], [1.0], Status.KNOWN)
        pred = PredictorModel(D=D, Y=(j,), target=(j, i)).ensure_param_map(net)
    if find_confounders(net, pred):
        return None
    tgt = pred.G_map.entries[pred.j_row][pred.i_col]
    if tgt.status is not Status.PARAMETRIZED:
        return None
    return net, pred


def random_graph_case(rng: np.random.Generator, n_nodes: int = 8,
                      p_edge: float = 0.3):
    """Plain directed graph (adjacency + vertex list) for cut/path oracles."""
    from .graph import NetGraph, Vertex
    from .tf import Status as S

    verts = [Vertex("w", k) for k in range(n_nodes)]
    edges = {v: [] for v in verts}
    status = {}
    for a in range(n_nodes):
        for b in range(n_nodes):
            if a != b and rng.random() < p_edge:
                edges[Vertex("w", a)].append(Vertex("w", b))
                status[(Vertex("w", a), Vertex("w", b))] = S.PARAMETRIZED
    return NetGraph(tuple(verts),
                    {v: tuple(sorted(t, key=lambda x: x.rank)) for v, t in edges.items()},
                    status)
