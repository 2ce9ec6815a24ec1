"""Graph construction, disconnecting sets, vertex-disjoint paths, signal sets.

Vertices are tagged pairs: node signals ("w"), excitations ("r"), noise
sources ("e") for networks; inputs ("u"), external signals ("x"), outputs
("y") for open-loop systems.  Every operation is deterministic: adjacency is
sorted, minimum cuts are tie-broken lexicographically, and derived signal
selections preserve a documented order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import NoCutExists
from .model import Network, OpenLoopSystem, PredictorModel
from .tf import OrderSpec, Status, TFMatrix, tf

_KIND_RANK = {"w": 0, "u": 1, "y": 2, "r": 3, "x": 4, "e": 5}
_INF = 1 << 30


class Vertex(NamedTuple):
    kind: str
    index: int

    def __str__(self) -> str:
        return f"{self.kind}{self.index + 1}"

    @property
    def rank(self) -> tuple[int, int]:
        return (_KIND_RANK[self.kind], self.index)


def vkey(v: Vertex) -> tuple[int, int]:
    return v.rank


def parse_vertex(s: str) -> Vertex:
    kind = s[0]
    if kind not in _KIND_RANK or not s[1:].isdigit():
        raise ValueError(f"bad vertex literal {s!r}")
    return Vertex(kind, int(s[1:]) - 1)


@dataclass
class NetGraph:
    """Directed graph over tagged signal vertices with per-edge status."""

    vertices: tuple[Vertex, ...]
    edges: dict[Vertex, tuple[Vertex, ...]]
    edge_status: dict[tuple[Vertex, Vertex], Status]

    def out(self, v: Vertex) -> tuple[Vertex, ...]:
        return self.edges.get(v, ())

    def has_vertex(self, v: Vertex) -> bool:
        return v in self.edges

    def of_kind(self, kind: str) -> list[Vertex]:
        return [v for v in self.vertices if v.kind == kind]

    def edge_count(self) -> int:
        return sum(len(t) for t in self.edges.values())


def _finish(vertices: list[Vertex],
            raw_edges: dict[Vertex, list[Vertex]],
            status: dict[tuple[Vertex, Vertex], Status]) -> NetGraph:
    vs = tuple(sorted(vertices, key=vkey))
    edges = {v: tuple(sorted(raw_edges.get(v, []), key=vkey)) for v in vs}
    return NetGraph(vs, edges, status)


def build_graph(sys: Network | OpenLoopSystem) -> NetGraph:
    """Vertex/edge sets from the nonzero-entry rules of the module matrices."""
    if isinstance(sys, OpenLoopSystem):
        return _build_open_loop_graph(sys)
    net = sys
    vertices: list[Vertex] = [Vertex("w", k) for k in range(net.L)]
    raw: dict[Vertex, list[Vertex]] = {v: [] for v in vertices}
    status: dict[tuple[Vertex, Vertex], Status] = {}
    for src in range(net.L):
        for dst in range(net.L):
            e = net.G.entries[dst][src]
            if e.status is not Status.ZERO:
                a, b = Vertex("w", src), Vertex("w", dst)
                raw[a].append(b)
                status[(a, b)] = e.status
    for k in range(net.K):
        v = Vertex("r", k)
        vertices.append(v)
        raw[v] = []
        for node in net.excitation_nodes(k):
            b = Vertex("w", node)
            raw[v].append(b)
            status[(v, b)] = Status.KNOWN  # R is a known binary matrix
    for k in net.active_noise():
        v = Vertex("e", k)
        vertices.append(v)
        raw[v] = []
        for node in net.noise_entry_nodes(k):
            b = Vertex("w", node)
            raw[v].append(b)
            status[(v, b)] = net.H.entries[node][k].status
    return _finish(vertices, raw, status)


def _build_open_loop_graph(ols: OpenLoopSystem) -> NetGraph:
    vertices = [Vertex("u", k) for k in range(ols.m)]
    raw: dict[Vertex, list[Vertex]] = {v: [] for v in vertices}
    status: dict[tuple[Vertex, Vertex], Status] = {}
    for src in range(ols.m):
        for dst in range(ols.m):
            e = ols.Gu.entries[dst][src]
            if e.status is not Status.ZERO:
                a, b = Vertex("u", src), Vertex("u", dst)
                raw[a].append(b)
                status[(a, b)] = e.status
    for k in range(ols.p):
        vertices.append(Vertex("y", k))
        raw[Vertex("y", k)] = []
    for src in range(ols.m):
        for dst in range(ols.p):
            e = ols.G.entries[dst][src]
            if e.status is not Status.ZERO:
                a, b = Vertex("u", src), Vertex("y", dst)
                raw[a].append(b)
                status[(a, b)] = e.status
    for k in range(ols.n_x):
        v = Vertex("x", k)
        vertices.append(v)
        raw[v] = []
        b = Vertex("u", ols.x_entry_input(k))
        raw[v].append(b)
        status[(v, b)] = Status.KNOWN
    cov = ols.noise_cov
    for k in range(ols.p):
        if cov[k, k] > 0.0:
            v = Vertex("e", k)
            vertices.append(v)
            raw[v] = []
            for dst in range(ols.p):
                e = ols.H.entries[dst][k]
                if e.status is not Status.ZERO:
                    b = Vertex("y", dst)
                    raw[v].append(b)
                    status[(v, b)] = e.status
    return _finish(vertices, raw, status)


def reachable(g: NetGraph, froms: Iterable[Vertex], avoiding: Iterable[Vertex] = ()) -> frozenset[Vertex]:
    """Descendants of ``froms``, never entering ``avoiding`` vertices."""
    banned = set(avoiding)
    seen: set[Vertex] = set()
    queue = deque(v for v in froms if v not in banned and g.has_vertex(v))
    while queue:
        v = queue.popleft()
        for w in g.out(v):
            if w in banned or w in seen:
                continue
            seen.add(w)
            queue.append(w)
    return frozenset(seen)


# --------------------------------------------------------------------------
# Vertex-capacity max flow (Ford-Fulkerson with BFS augmentation) on a split
# graph: every vertex v becomes v_in -> v_out with capacity 1 unless the
# vertex is not allowed in a cut, in which case the capacity is infinite.
# --------------------------------------------------------------------------

class _FlowNet:
    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, cap: int):
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s: int, t: int, limit: int = _INF) -> int:
        flow = 0
        while flow < limit:
            prev_edge = [-1] * self.n
            prev_edge[s] = -2
            queue = deque([s])
            while queue and prev_edge[t] == -1:
                u = queue.popleft()
                for eid in self.head[u]:
                    v = self.to[eid]
                    if self.cap[eid] > 0 and prev_edge[v] == -1:
                        prev_edge[v] = eid
                        queue.append(v)
            if prev_edge[t] == -1:
                break
            bott = _INF
            v = t
            while v != s:
                eid = prev_edge[v]
                bott = min(bott, self.cap[eid])
                v = self.to[eid ^ 1]
            v = t
            while v != s:
                eid = prev_edge[v]
                self.cap[eid] -= bott
                self.cap[eid ^ 1] += bott
                v = self.to[eid ^ 1]
            flow += bott
        return flow

    def min_cut_side(self, s: int) -> list[bool]:
        side = [False] * self.n
        side[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for eid in self.head[u]:
                v = self.to[eid]
                if self.cap[eid] > 0 and not side[v]:
                    side[v] = True
                    queue.append(v)
        return side


def _split_flow(g: NetGraph, removed: set[Vertex], uncuttable: set[Vertex],
                sources: Sequence[Vertex], sinks: Sequence[Vertex],
                charge_sources: bool) -> tuple[_FlowNet, dict[Vertex, int], int, int]:
    """Build the vertex-split unit-capacity flow network.

    Sink vertices are always charged (a sink consumed as an endpoint cannot be
    reused as an intermediate).  Sources are charged for disjoint-path counts
    and left uncharged for disconnecting-set computations.
    """
    alive = [v for v in g.vertices if v not in removed]
    idx = {v: 2 * k for k, v in enumerate(alive)}
    S = 2 * len(alive)
    T = S + 1
    net = _FlowNet(T + 1)
    for v in alive:
        cap = _INF if v in uncuttable else 1
        net.add_edge(idx[v], idx[v] + 1, cap)
    for a in alive:
        for b in g.out(a):
            if b in removed:
                continue
            net.add_edge(idx[a] + 1, idx[b], _INF)
    for s in sources:
        if s in removed or s not in idx:
            continue
        if charge_sources:
            net.add_edge(S, idx[s], _INF)
        else:
            net.add_edge(S, idx[s] + 1, _INF)
    for t in sinks:
        if t in removed or t not in idx:
            continue
        net.add_edge(idx[t] + 1, T, _INF)
    return net, idx, S, T


def _min_cut_value(g: NetGraph, sources: Sequence[Vertex], sinks: Sequence[Vertex],
                   removed: set[Vertex], uncuttable: set[Vertex]) -> int:
    net, _, S, T = _split_flow(g, removed, uncuttable, sources, sinks,
                               charge_sources=False)
    return net.max_flow(S, T)


def min_disconnecting_set(g: NetGraph, from_v: Vertex | Iterable[Vertex],
                          to: Iterable[Vertex],
                          excluded: Iterable[Vertex] = ()) -> tuple[Vertex, ...]:
    """Minimum vertex set whose removal breaks every directed from->to path.

    Members of ``to`` may appear in the cut; ``from`` vertices and ``excluded``
    never do.  Ties between minimum cuts are broken by the smallest
    lexicographic vertex sequence.  Raises NoCutExists when separation is
    impossible with the allowed vertices.
    """
    sources = [from_v] if isinstance(from_v, Vertex) else sorted(set(from_v), key=vkey)
    sinks = sorted(set(to), key=vkey)
    if not sinks:
        return ()
    uncut = set(sources) | set(excluded)
    k = _min_cut_value(g, sources, sinks, set(), uncut)
    if k >= _INF:
        raise NoCutExists(
            f"cannot disconnect {[str(s) for s in sources]} from "
            f"{[str(t) for t in sinks]} with allowed vertices")
    if k == 0:
        return ()
    cut: list[Vertex] = []
    removed: set[Vertex] = set()
    need = k
    for v in sorted(g.vertices, key=vkey):
        if need == 0:
            break
        if v in uncut or v in removed or v.kind not in ("w", "u"):
            continue
        rest = _min_cut_value(g, sources, sinks, removed | {v}, uncut)
        if rest == need - 1:
            cut.append(v)
            removed.add(v)
            need -= 1
    return tuple(sorted(cut, key=vkey))


def is_disconnecting(g: NetGraph, cut: Iterable[Vertex], froms: Iterable[Vertex],
                     tos: Iterable[Vertex]) -> bool:
    cut = set(cut)
    targets = {t for t in tos if t not in cut}
    return not (reachable(g, [f for f in froms if f not in cut], cut) & targets
                or {t for t in froms if t in targets})


def enumerate_disconnecting_sets(g: NetGraph, froms: Iterable[Vertex],
                                 tos: Iterable[Vertex],
                                 excluded: Iterable[Vertex] = (),
                                 max_card: int = 6,
                                 cut_kinds: tuple[str, ...] = ("w", "u")) -> tuple[list[tuple[Vertex, ...]], bool]:
    """All inclusion-minimal disconnecting sets up to ``max_card``.

    Returns (sets, truncated).  ``truncated`` is True when the cardinality
    bound pruned at least one branch, in which case the list may be partial.
    """
    froms = sorted(set(froms), key=vkey)
    tos = sorted(set(tos), key=vkey)
    banned = set(excluded) | set(froms)
    found: set[frozenset[Vertex]] = set()
    seen_states: set[frozenset[Vertex]] = set()
    truncated = [False]

    def find_path(removed: frozenset[Vertex]) -> list[Vertex] | None:
        prev: dict[Vertex, Vertex | None] = {}
        queue = deque()
        for f in froms:
            if f not in removed and g.has_vertex(f):
                if f in tos:
                    return [f]
                prev[f] = None
                queue.append(f)
        while queue:
            v = queue.popleft()
            for w in g.out(v):
                if w in removed or w in prev:
                    continue
                prev[w] = v
                if w in tos:
                    path = [w]
                    p = v
                    while p is not None:
                        path.append(p)
                        p = prev[p]
                    return list(reversed(path))
                queue.append(w)
        return None

    def rec(removed: frozenset[Vertex]):
        if removed in seen_states:
            return
        seen_states.add(removed)
        path = find_path(removed)
        if path is None:
            found.add(removed)
            return
        if len(removed) >= max_card:
            truncated[0] = True
            return
        for v in path:
            if v in banned or v.kind not in cut_kinds:
                continue
            rec(removed | {v})

    rec(frozenset())
    minimal = [s for s in found
               if not any(o < s for o in found)]
    out = sorted((tuple(sorted(s, key=vkey)) for s in minimal),
                 key=lambda t: (len(t), [vkey(v) for v in t]))
    return out, truncated[0]


@dataclass
class PathWitness:
    count: int
    paths: list[tuple[Vertex, ...]]

    def path_strings(self) -> list[list[str]]:
        return [[str(v) for v in p] for p in self.paths]


def max_vertex_disjoint_paths(g: NetGraph, sources: Iterable[Vertex],
                              sinks: Iterable[Vertex],
                              forbidden: Iterable[Vertex] = ()) -> PathWitness:
    """Menger count of vertex-disjoint paths (endpoints included) + witnesses."""
    sources = sorted(set(sources), key=vkey)
    sinks = sorted(set(sinks), key=vkey)
    removed = set(forbidden)
    if not sources or not sinks:
        return PathWitness(0, [])
    net, idx, S, T = _split_flow(g, removed, set(), sources, sinks,
                                 charge_sources=True)
    count = net.max_flow(S, T)

    # Decompose the integral flow into vertex paths.
    succ_of: dict[int, list[int]] = {}
    for u in range(net.n):
        for eid in net.head[u]:
            if eid % 2 == 0 and net.cap[eid ^ 1] > 0:  # forward edge with flow
                succ_of.setdefault(u, []).append(eid)
    node_of = {pos: v for v, pos in idx.items()}  # v_in position -> vertex
    paths = []
    for _ in range(count):
        trail = []
        u = S
        while u != T:
            eids = succ_of.get(u, [])
            while eids and net.cap[eids[-1] ^ 1] <= 0:
                eids.pop()
            if not eids:
                break
            eid = eids[-1]
            net.cap[eid ^ 1] -= 1
            v = net.to[eid]
            if v in node_of:
                trail.append(node_of[v])
            u = v
        if trail:
            paths.append(tuple(trail))
    paths.sort(key=lambda p: [vkey(v) for v in p])
    return PathWitness(count, paths)


# --------------------------------------------------------------------------
# Signal selections.
# --------------------------------------------------------------------------

@dataclass
class SignalSelection:
    """A named, ordered signal subset with a derivation trace per member.

    Members are signal references: vertex literals such as ``"w3"``/``"r1"``/
    ``"e2"``, innovation components ``"xi1"``, or projected signals such as
    ``"w2|chi"`` (w2 projected onto the orthogonal complement of chi).
    """

    name: str
    members: tuple[str, ...]
    derivation: tuple[dict, ...] = ()

    def __contains__(self, ref) -> bool:
        return str(ref) in self.members

    def vertices(self) -> list[Vertex]:
        """Members that are plain graph vertices."""
        out = []
        for m in self.members:
            try:
                out.append(parse_vertex(m))
            except ValueError:
                continue
        return out

    def to_dict(self) -> dict:
        return {"name": self.name, "members": list(self.members),
                "derivation": list(self.derivation)}


def _selection(name: str, members: Iterable[Vertex], rule: str) -> SignalSelection:
    ordered = sorted(set(members), key=vkey)
    deriv = tuple({"member": str(v), "rule": rule} for v in ordered)
    return SignalSelection(name, tuple(str(v) for v in ordered), deriv)


def _unknown_path_exists(g: NetGraph, src: Vertex, targets: set[Vertex],
                         blocked: set[Vertex]) -> bool:
    """Path from ``src`` to a target carrying at least one non-Known edge.

    Vertices in ``blocked`` may terminate a path (if they are targets) but are
    never traversed, mirroring mediation by measured predictor inputs.
    """
    # State: (vertex, has unknown edge so far).  Search is over w-vertices
    # after leaving the source.
    start_states = []
    for b in g.out(src):
        flag = g.edge_status[(src, b)] is not Status.KNOWN
        start_states.append((b, flag))
    seen: set[tuple[Vertex, bool]] = set()
    stack = list(start_states)
    while stack:
        v, flag = stack.pop()
        if (v, flag) in seen:
            continue
        seen.add((v, flag))
        if v in targets and flag:
            return True
        if v in blocked:
            continue
        for w in g.out(v):
            nf = flag or g.edge_status[(v, w)] is not Status.KNOWN
            stack.append((w, nf))
    return False


def _w(indices: Iterable[int]) -> list[Vertex]:
    return [Vertex("w", k) for k in indices]


@dataclass
class SelectionBundle:
    """Every signal set the informativity conditions consume, with provenance."""

    sets: dict[str, SignalSelection]
    cut_alternatives: list[tuple[Vertex, ...]] = field(default_factory=list)
    cut_enumeration_truncated: bool = False
    u_perp_disagreement: tuple[str, ...] = ()

    def __getitem__(self, name: str) -> SignalSelection:
        return self.sets[name]

    def to_dict(self) -> dict:
        return {
            "sets": {k: v.to_dict() for k, v in self.sets.items()},
            "cut_alternatives": [[str(v) for v in c] for c in self.cut_alternatives],
            "cut_enumeration_truncated": self.cut_enumeration_truncated,
            "u_perp_disagreement": list(self.u_perp_disagreement),
        }


def correlated_outputs(pred: PredictorModel, j_row: int) -> list[int]:
    """Output rows whose noise shares a xi component with the target row."""
    hm = pred.H_map
    ny = len(pred.Y)
    out = []
    for a in range(ny):
        shares = any(
            hm.entries[j_row][c].status is not Status.ZERO
            and hm.entries[a][c].status is not Status.ZERO
            for c in range(ny)
        )
        if shares:
            out.append(a)
    return out


def derive_sets(net: Network, pred: PredictorModel,
                g: NetGraph | None = None,
                enumerate_cuts: bool = True,
                max_card: int = 6) -> SelectionBundle:
    """Derive every named signal set for the target entry of a predictor.

    Order of computation: the parametrized columns of the target row give
    kappa; a minimum disconnecting set from w_i to the remaining parametrized
    inputs gives D^c; the remainder is w_T; sources reaching w_T around D^c
    give x_T*; noise sources without an unknown measured-input-avoiding path
    to the outputs give e_perp_Y; excitations without a parametrized column in
    the target row give u_perp_j; chi stacks x_T* with u^[j].
    """
    pred = pred.ensure_param_map(net)
    if g is None:
        g = build_graph(net)
    j, i = pred.target
    jr = pred.j_row
    D, Y = pred.D, pred.Y

    w_D_j = [d for b, d in enumerate(pred.D)
             if pred.G_map.entries[jr][b].status is Status.PARAMETRIZED]
    w_F_j = [d for b, d in enumerate(pred.D)
             if pred.G_map.entries[jr][b].status is Status.KNOWN]
    xi_j = [c for c in range(len(Y))
            if pred.H_map.entries[jr][c].status is Status.PARAMETRIZED]
    u_j = [k for k in range(net.K)
           if pred.T_map.entries[jr][k].status is Status.PARAMETRIZED]

    xi_refs = [f"xi{c + 1}" for c in xi_j]
    kappa = SignalSelection(
        "kappa_j",
        tuple(str(v) for v in sorted(_w(w_D_j), key=vkey)) + tuple(xi_refs)
        + tuple(str(Vertex("r", k)) for k in u_j),
        tuple({"member": m, "rule": "parametrized column in target row"}
              for m in [str(v) for v in sorted(_w(w_D_j), key=vkey)] + xi_refs
              + [str(Vertex("r", k)) for k in u_j]),
    )
    kappa_w = _selection("kappa_w_j", _w(w_D_j), "parametrized G column in target row")
    kappa_xi = SignalSelection(
        "xi_j", tuple(xi_refs),
        tuple({"member": m, "rule": "parametrized H column in target row"}
              for m in xi_refs))

    targets = [Vertex("w", d) for d in w_D_j if d != i]
    cut = min_disconnecting_set(g, Vertex("w", i), targets,
                                excluded=[Vertex("w", i)]) if targets else ()
    d_c = _selection("D_c", cut, "minimum disconnecting set from w_i to kappa_w \\ {w_i}")

    cut_set = set(cut)
    w_T = [d for d in w_D_j if d != i and Vertex("w", d) not in cut_set]
    w_T_sel = _selection("w_T", _w(w_T), "remainder of kappa_w after removing w_i and D_c")
    w_F_sel = _selection("w_F_j", _w(w_F_j), "input to known module in target row")

    sources = ([Vertex("r", k) for k in range(net.K)]
               + [Vertex("e", k) for k in net.active_noise()])
    w_T_verts = set(_w(w_T))
    x_T_star = [s for s in sources
                if reachable(g, [s], cut_set) & w_T_verts]
    x_T_sel = _selection("x_Tstar", x_T_star,
                         "path to w_T avoiding D_c")

    # Noise sources with an unknown path to an output correlated with row j,
    # not mediated by a measured predictor input.
    corr_rows = correlated_outputs(pred, jr)
    y_targets = {Vertex("w", Y[a]) for a in corr_rows}
    blocked = set(_w(D))
    e_Y, e_perp = [], []
    for k in net.active_noise():
        v = Vertex("e", k)
        if _unknown_path_exists(g, v, y_targets, blocked):
            e_Y.append(v)
        else:
            e_perp.append(v)
    e_perp_sel = _selection("e_perp_Y", e_perp,
                            "no unknown path to w_Y avoiding measured inputs")
    e_Y_sel = _selection("e_Y", e_Y, "unknown path to w_Y avoiding measured inputs")

    u_perp = [Vertex("r", k) for k in range(net.K) if k not in u_j]
    u_perp_sel = _selection("u_perp_j", u_perp,
                            "target-row T column not parametrized")

    # Alternative path-based reading of u_perp_j, reported as a cross-check.
    alt_targets = set(_w(w_D_j)) | set(_w(w_F_j))
    u_perp_alt = []
    for k in range(net.K):
        v = Vertex("r", k)
        enters_j = j in net.excitation_nodes(k)
        if enters_j or (reachable(g, [v], {Vertex("w", j)}) & alt_targets):
            u_perp_alt.append(v)
    disagreement = sorted({str(v) for v in u_perp} ^ {str(v) for v in u_perp_alt})

    chi = _selection("chi", x_T_star + [Vertex("r", k) for k in u_j],
                     "x_Tstar joined with u^[j]")
    u_j_sel = _selection("u_j", [Vertex("r", k) for k in u_j],
                         "parametrized T column in target row")

    # Thm-3 style source set: no unknown path to w_j itself around measured
    # inputs (noise), plus the excitations of u_perp_j.
    x_cal = list(u_perp)
    for k in net.active_noise():
        v = Vertex("e", k)
        if not _unknown_path_exists(g, v, {Vertex("w", j)}, blocked):
            x_cal.append(v)
    x_cal_sel = _selection("X_j", x_cal, "no parametrized link to w_j")

    # Display selections for the spectra entering the positive-definiteness
    # conditions: projected target-row inputs stacked with the xi components.
    w_idc = sorted({i} | {v.index for v in cut}, )
    eta = SignalSelection(
        "eta_j",
        tuple(f"w{k + 1}|chi" for k in w_idc) + tuple(xi_refs),
        tuple({"member": f"w{k + 1}|chi",
               "rule": "w_{i u D_c} projected off chi"} for k in w_idc)
        + tuple({"member": m, "rule": "xi components of target row"} for m in xi_refs),
    )
    mu = SignalSelection(
        "mu_j",
        tuple(f"w{k + 1}|x_Tstar" for k in w_idc) + tuple(xi_refs),
        tuple({"member": f"w{k + 1}|x_Tstar",
               "rule": "inputs i u D_c projected off x_Tstar"} for k in w_idc)
        + tuple({"member": m, "rule": "noise components of target row"} for m in xi_refs),
    )

    alternatives: list[tuple[Vertex, ...]] = []
    truncated = False
    if enumerate_cuts and targets:
        alternatives, truncated = enumerate_disconnecting_sets(
            g, [Vertex("w", i)], targets, excluded=[Vertex("w", i)],
            max_card=max_card)

    sets = {
        s.name: s
        for s in [kappa, kappa_w, kappa_xi, d_c, w_T_sel, w_F_sel, x_T_sel,
                  e_perp_sel, e_Y_sel, u_perp_sel, u_j_sel, chi, x_cal_sel,
                  eta, mu]
    }
    return SelectionBundle(sets, alternatives, truncated, tuple(disagreement))


def find_confounders(net: Network, pred: PredictorModel,
                     g: NetGraph | None = None) -> list[Vertex]:
    """Active noise sources confounding a pure input with an output.

    A source is flagged when it reaches some output in Y and some input in
    D \\ Y along paths whose intermediate vertices avoid all measured nodes
    (D and Y).  Disturbances entering measured outputs, or inputs that are
    outputs themselves, are modeled by the joint noise model and do not
    count.  Such a source invalidates the predictor-model premises.
    """
    if g is None:
        g = build_graph(net)
    measured = set(_w(pred.D)) | set(_w(pred.Y))
    y_targets = set(_w(pred.Y))
    d_pure = set(_w([d for d in pred.D if d not in pred.Y]))
    out: list[Vertex] = []
    for k in net.active_noise():
        reach = _absorbing_reach(g, [Vertex("e", k)], measured)
        if (reach & y_targets) and (reach & d_pure):
            out.append(Vertex("e", k))
    return sorted(out, key=vkey)


def _absorbing_reach(g: NetGraph, starts: Iterable[Vertex],
                     absorbing: set[Vertex]) -> frozenset[Vertex]:
    """Descendants where absorbing vertices can be reached but not crossed."""
    seen: set[Vertex] = set()
    stack = [v for v in starts if g.has_vertex(v)]
    while stack:
        v = stack.pop()
        for w in g.out(v):
            if w in seen:
                continue
            seen.add(w)
            if w not in absorbing:
                stack.append(w)
    return frozenset(seen)


# --------------------------------------------------------------------------
# Structurally derived default parametrization map.
# --------------------------------------------------------------------------

def _has_path_avoiding(g: NetGraph, start: Vertex, goals: set[Vertex],
                       blocked: set[Vertex]) -> bool:
    """Directed path start -> goal whose intermediate vertices avoid blocked."""
    seen = set()
    stack = [w for w in g.out(start)]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        if v in goals:
            return True
        if v in blocked:
            continue
        stack.extend(g.out(v))
    return False


def default_param_map(net: Network, D: Sequence[int], Y: Sequence[int],
                      default_orders: OrderSpec = OrderSpec(2, 2)) -> tuple[TFMatrix, TFMatrix, TFMatrix]:
    """Structural [G | H | T] statuses induced by a choice of D and Y.

    An entry is nonzero exactly when the driving signal reaches the output
    without being mediated by a measured predictor input; it is Known only
    when that influence reduces to a single a-priori-known module edge.
    """
    g = build_graph(net)
    ny, nd = len(Y), len(D)
    blocked = set(_w(D))
    g_map = TFMatrix.zeros(ny, nd)
    h_map = TFMatrix.zeros(ny, ny)
    t_map = TFMatrix.zeros(ny, net.K)

    def unmeasured_cycle(y: int) -> bool:
        yv = Vertex("w", y)
        return any(
            w == yv or (w not in blocked and _has_path_avoiding(g, w, {yv}, blocked))
            for w in g.out(yv) if w.kind == "w"
        )

    for a, y in enumerate(Y):
        yv = Vertex("w", y)
        for b, d in enumerate(D):
            if d == y:
                continue  # hollow
            dv = Vertex("w", d)
            if not _has_path_avoiding(g, dv, {yv}, blocked):
                continue
            direct = net.G.entries[y][d]
            only_direct = (
                direct.status is Status.KNOWN
                and not unmeasured_cycle(y)
                and not any(
                    w not in blocked and w != yv
                    and _has_path_avoiding(g, w, {yv}, blocked)
                    for w in g.out(dv) if w.kind == "w")
            )
            if only_direct:
                g_map.entries[a][b] = direct
            else:
                g_map.entries[a][b] = tf([0.0, 0.0], [1.0], Status.PARAMETRIZED,
                                         default_orders)
        for k in range(net.K):
            nodes = net.excitation_nodes(k)
            if not nodes:
                continue
            indirect = any(
                n not in D and n != y
                and _has_path_avoiding(g, Vertex("w", n), {yv}, blocked)
                for n in nodes)
            if y in nodes and not unmeasured_cycle(y) and not indirect:
                t_map.entries[a][k] = tf([1.0], [1.0], Status.KNOWN)
            elif y in nodes:
                t_map.entries[a][k] = tf([1.0], [1.0], Status.PARAMETRIZED,
                                         OrderSpec(default_orders.num,
                                                   default_orders.den, 0))
            elif indirect:
                t_map.entries[a][k] = tf([0.0, 0.0], [1.0], Status.PARAMETRIZED,
                                         default_orders)

    # Noise structure: outputs that share a noise source reaching them around
    # measured inputs are modeled jointly; components come one per output.
    reach_noise: list[set[int]] = []
    for a, y in enumerate(Y):
        yv = Vertex("w", y)
        srcs = set()
        for k in net.active_noise():
            ev = Vertex("e", k)
            entries = g.out(ev)
            if yv in entries or any(
                    w not in blocked and _has_path_avoiding(g, w, {yv}, blocked)
                    for w in entries):
                srcs.add(k)
        reach_noise.append(srcs)
    for a in range(ny):
        for b in range(ny):
            joint = bool(reach_noise[a] & reach_noise[b])
            if a == b:
                if reach_noise[a]:
                    h_map.entries[a][a] = tf([1.0], [1.0], Status.PARAMETRIZED,
                                             OrderSpec(default_orders.num,
                                                       default_orders.den, 0))
                else:
                    h_map.entries[a][a] = tf([1.0], [1.0], Status.KNOWN)
            elif joint:
                h_map.entries[a][b] = tf([0.0, 0.0], [1.0], Status.PARAMETRIZED,
                                         default_orders)
    return g_map, h_map, t_map
