"""Network and predictor-model data model, validation, and file format.

A network is ``w(t) = G(q) w(t) + H(q) e(t) + R r(t)`` with hollow strictly
proper G, monic stable and stably invertible H, binary R and white noise e
with covariance ``noise_cov``.  A predictor model selects input nodes D,
output nodes Y and a target entry (j, i), and records per-entry model-set
knowledge over the reduced maps [G | H | T].
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import SchemaError, UnknownLabel
from .tf import (
    OrderSpec,
    RationalTF,
    Status,
    TFMatrix,
    feedback_unity,
    inverse_monic,
    realize,
    tf,
    zero_tf,
)

STABILITY_TOL = 1e-8


@dataclass(frozen=True)
class SourceSpec:
    """Scalar excitation spectrum: white noise or a first-order AR shape."""

    kind: str = "white"  # "white" | "ar1"
    variance: float = 1.0
    pole: float = 0.0

    def spectrum(self, omega: np.ndarray) -> np.ndarray:
        """Power spectral density on a frequency grid."""
        if self.kind == "white":
            return np.full_like(omega, self.variance, dtype=float)
        z = np.exp(-1j * omega)
        return self.variance / np.abs(1.0 - self.pole * z) ** 2


@dataclass
class Network:
    """Module representation of a dynamic network."""

    G: TFMatrix
    H: TFMatrix
    R: np.ndarray
    noise_cov: np.ndarray
    w_labels: tuple[str, ...] = ()
    r_specs: tuple[SourceSpec, ...] = ()

    def __post_init__(self):
        L = self.G.rows
        self.R = np.atleast_2d(np.asarray(self.R, dtype=float))
        if self.R.size == 0:
            self.R = np.zeros((L, 0))
        self.noise_cov = np.atleast_2d(np.asarray(self.noise_cov, dtype=float))
        if not self.w_labels:
            self.w_labels = tuple(f"w{k + 1}" for k in range(L))
        if not self.r_specs:
            self.r_specs = tuple(SourceSpec() for _ in range(self.R.shape[1]))

    @property
    def L(self) -> int:
        return self.G.rows

    @property
    def K(self) -> int:
        return self.R.shape[1]

    def active_noise(self) -> list[int]:
        """Noise channels with nonzero variance."""
        return [k for k in range(self.L) if self.noise_cov[k, k] > 0.0]

    def excitation_nodes(self, k: int) -> list[int]:
        return [n for n in range(self.L) if self.R[n, k] != 0.0]

    def noise_entry_nodes(self, k: int) -> list[int]:
        """Nodes that noise source e_k enters, along nonzero H column k."""
        return [n for n in range(self.L) if not self.H.entries[n][k].is_zero]


@dataclass
class PredictorModel:
    """Predictor inputs D, outputs Y, target (j, i) and parametrization map."""

    D: tuple[int, ...]
    Y: tuple[int, ...]
    target: tuple[int, int]  # (j, i) as node indices
    G_map: TFMatrix | None = None  # |Y| x |D|
    H_map: TFMatrix | None = None  # |Y| x |Y|
    T_map: TFMatrix | None = None  # |Y| x K
    rows_independent: bool = True
    target_block_independent: bool = True

    @property
    def j(self) -> int:
        return self.target[0]

    @property
    def i(self) -> int:
        return self.target[1]

    @property
    def j_row(self) -> int:
        return self.Y.index(self.j)

    @property
    def i_col(self) -> int:
        return self.D.index(self.i)

    def has_param_map(self) -> bool:
        return self.G_map is not None

    def ensure_param_map(self, net: Network) -> "PredictorModel":
        """Fill a structurally derived param map if none was supplied."""
        if self.has_param_map():
            return self
        from .graph import default_param_map

        g_map, h_map, t_map = default_param_map(net, self.D, self.Y)
        return PredictorModel(self.D, self.Y, self.target, g_map, h_map, t_map,
                              self.rows_independent, self.target_block_independent)


@dataclass
class OpenLoopSystem:
    """Open-loop structured system: y = G u + H e with u = G_u u + R_u x."""

    G: TFMatrix  # p x m plant
    H: TFMatrix  # p x p noise model
    Gu: TFMatrix  # m x m hollow input network
    Ru: np.ndarray  # m x n_x, columns of the identity
    noise_cov: np.ndarray  # p x p
    x_specs: tuple[SourceSpec, ...] = ()
    x_pe: tuple[bool, ...] = ()  # per-x persistence-of-excitation declaration

    def __post_init__(self):
        self.Ru = np.atleast_2d(np.asarray(self.Ru, dtype=float))
        self.noise_cov = np.atleast_2d(np.asarray(self.noise_cov, dtype=float))
        if not self.x_specs:
            self.x_specs = tuple(SourceSpec() for _ in range(self.n_x))
        if not self.x_pe:
            self.x_pe = tuple(True for _ in range(self.n_x))

    @property
    def p(self) -> int:
        return self.G.rows

    @property
    def m(self) -> int:
        return self.G.cols

    @property
    def n_x(self) -> int:
        return self.Ru.shape[1]

    def x_entry_input(self, k: int) -> int:
        """Input index that external signal x_k drives."""
        rows = [n for n in range(self.m) if self.Ru[n, k] != 0.0]
        if len(rows) != 1:
            raise ValueError("Ru columns must be columns of the identity")
        return rows[0]

    def to_network(self) -> tuple[Network, PredictorModel]:
        """Embed as a network with nodes (u_1..u_m, y_1..y_p).

        Excitations become r-signals on the u-nodes; plant noise stays on the
        y-nodes.  The returned predictor has D = u-nodes and Y = y-nodes.
        """
        L = self.m + self.p
        G = TFMatrix.zeros(L, L)
        for a in range(self.m):
            for b in range(self.m):
                G.entries[a][b] = self.Gu.entries[a][b]
        for a in range(self.p):
            for b in range(self.m):
                G.entries[self.m + a][b] = self.G.entries[a][b]
        H = TFMatrix.identity(L)
        for a in range(self.p):
            for b in range(self.p):
                if a == b:
                    H.entries[self.m + a][self.m + b] = self.H.entries[a][b]
                elif not self.H.entries[a][b].is_zero:
                    H.entries[self.m + a][self.m + b] = self.H.entries[a][b]
        R = np.zeros((L, self.n_x))
        for k in range(self.n_x):
            R[self.x_entry_input(k), k] = 1.0
        cov = np.zeros((L, L))
        cov[self.m:, self.m:] = self.noise_cov
        labels = tuple(f"u{k + 1}" for k in range(self.m)) + tuple(
            f"y{k + 1}" for k in range(self.p))
        net = Network(G, H, R, cov, w_labels=labels, r_specs=self.x_specs)
        return net, self.predictor()

    def predictor(self, j_out: int = 0, i_in: int = 0) -> PredictorModel:
        """Predictor over the embedded network: all inputs in, all outputs out.

        The reduced maps coincide with the plant: excitations enter measured
        input nodes, noise enters the outputs directly.
        """
        g_map = TFMatrix([[self.G.entries[a][b] for b in range(self.m)]
                          for a in range(self.p)])
        h_map = TFMatrix([[self.H.entries[a][b] for b in range(self.p)]
                          for a in range(self.p)])
        t_map = TFMatrix.zeros(self.p, self.n_x)
        return PredictorModel(
            D=tuple(range(self.m)),
            Y=tuple(range(self.m, self.m + self.p)),
            target=(self.m + j_out, i_in),
            G_map=g_map, H_map=h_map, T_map=t_map,
        )


@dataclass
class ValidationItem:
    check: str
    ok: bool
    location: str = ""
    detail: str = ""


@dataclass
class ValidationReport:
    items: list[ValidationItem] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(it.ok for it in self.items)

    def add(self, check: str, ok: bool, location: str = "", detail: str = ""):
        self.items.append(ValidationItem(check, ok, location, detail))

    def failures(self) -> list[ValidationItem]:
        return [it for it in self.items if not it.ok]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "items": [
                {"check": it.check, "ok": it.ok, "location": it.location, "detail": it.detail}
                for it in self.items
            ],
        }


def validate(net: Network) -> ValidationReport:
    """Check every structural invariant of a network; never raises."""
    rep = ValidationReport()
    L = net.L

    rep.add("dims", net.G.rows == net.G.cols == net.H.rows == net.H.cols == L
            and net.R.shape[0] == L and net.noise_cov.shape == (L, L),
            detail=f"L={L}, R={net.R.shape}, cov={net.noise_cov.shape}")

    hollow_bad = [k for k in range(L) if net.G.entries[k][k].status is not Status.ZERO]
    rep.add("G_hollow", not hollow_bad,
            location=",".join(f"G[{k + 1},{k + 1}]" for k in hollow_bad))

    sp_bad = [(r, c) for r in range(L) for c in range(L)
              if not (net.G.entries[r][c].is_zero or net.G.entries[r][c].strictly_proper)]
    rep.add("G_strictly_proper", not sp_bad,
            location=",".join(f"G[{r + 1},{c + 1}]" for r, c in sp_bad))

    rep.add("H_monic", net.H.is_monic())

    try:
        ss_h = realize(net.H)
        rho = ss_h.spectral_radius()
        rep.add("H_stable", rho < 1.0 - STABILITY_TOL, detail=f"spectral radius {rho:.6g}")
        rho_inv = inverse_monic(ss_h).spectral_radius() if net.H.is_monic() else np.inf
        rep.add("H_stably_invertible", rho_inv < 1.0 - STABILITY_TOL,
                detail=f"inverse spectral radius {rho_inv:.6g}")
    except Exception as exc:  # realization failure is itself a finding
        rep.add("H_stable", False, detail=str(exc))
        rep.add("H_stably_invertible", False, detail=str(exc))

    rep.add("R_binary", bool(np.isin(net.R, (0.0, 1.0)).all()))

    # Well-posedness: G strictly proper makes det(I - G(infinity)) = 1, but a
    # malformed document may carry direct terms; check explicitly.
    try:
        direct = net.G.direct_matrix()
        wp = abs(np.linalg.det(np.eye(L) - direct)) > 1e-12
    except Exception:
        wp = False
    rep.add("well_posed", wp)

    try:
        cl = feedback_unity(realize(net.G))
        rho_cl = cl.spectral_radius()
        rep.add("network_stable", rho_cl < 1.0 - STABILITY_TOL,
                detail=f"closed-loop spectral radius {rho_cl:.6g}")
    except Exception as exc:
        rep.add("network_stable", False, detail=str(exc))

    cov = net.noise_cov
    sym = np.allclose(cov, cov.T, atol=1e-12)
    eigs = np.linalg.eigvalsh((cov + cov.T) / 2.0) if sym else np.array([-1.0])
    rep.add("noise_cov_psd", sym and eigs.min() >= -1e-10,
            detail=f"min eigenvalue {eigs.min():.3g}" if sym else "not symmetric")

    zero_rows = [k for k in range(L) if cov[k, k] == 0.0]
    cross = [k for k in zero_rows if np.any(cov[k, :] != 0.0) or np.any(cov[:, k] != 0.0)]
    rep.add("noise_free_rows_clean", not cross,
            location=",".join(str(k + 1) for k in cross),
            detail="zero-variance channels must have zero covariance rows/cols")
    return rep


def validate_predictor(net: Network, pred: PredictorModel) -> ValidationReport:
    rep = ValidationReport()
    L = net.L
    rep.add("D_in_range", all(0 <= d < L for d in pred.D))
    rep.add("Y_in_range", all(0 <= y < L for y in pred.Y))
    rep.add("target_in_sets", pred.j in pred.Y and pred.i in pred.D,
            detail=f"j={pred.j + 1}, i={pred.i + 1}")
    rep.add("D_unique", len(set(pred.D)) == len(pred.D))
    rep.add("Y_unique", len(set(pred.Y)) == len(pred.Y))
    if pred.has_param_map():
        ny, nd = len(pred.Y), len(pred.D)
        rep.add("map_dims",
                pred.G_map.rows == ny and pred.G_map.cols == nd
                and pred.H_map.rows == ny and pred.H_map.cols == ny
                and pred.T_map.rows == ny and pred.T_map.cols == net.K)
        # Monic structure of the noise map: nonzero diagonal with unit direct
        # term, strictly proper off-diagonal entries.
        monic_ok = True
        for a in range(ny):
            for b in range(ny):
                e = pred.H_map.entries[a][b]
                if a == b:
                    if e.status is Status.ZERO:
                        monic_ok = False
                    elif e.status is Status.KNOWN and abs(e.direct_term - 1.0) > 0:
                        monic_ok = False
                elif e.status is not Status.ZERO and not e.strictly_proper:
                    if e.status is Status.KNOWN:
                        monic_ok = False
        rep.add("H_map_monic_structure", monic_ok)
        tgt = pred.G_map.entries[pred.j_row][pred.i_col]
        rep.add("target_parametrized", tgt.status is Status.PARAMETRIZED)
    return rep


# --------------------------------------------------------------------------
# Document format.  UTF-8 JSON; node ids and r/xi indices are 1-based on the
# wire.  Field names are part of the contract.
# --------------------------------------------------------------------------

def _expect(cond: bool, pointer: str, msg: str):
    if not cond:
        raise SchemaError(pointer, msg)


def _coeffs(doc: Any, pointer: str) -> tuple[float, ...]:
    _expect(isinstance(doc, list) and doc, pointer, "expected nonempty coefficient array")
    out = []
    for k, v in enumerate(doc):
        _expect(isinstance(v, (int, float)) and not isinstance(v, bool),
                f"{pointer}/{k}", "expected number")
        out.append(float(v))
    return tuple(out)


_STATUS_NAMES = {s.value: s for s in Status}


def _entry_from_doc(doc: dict, pointer: str, default_status: Status) -> RationalTF:
    _expect(isinstance(doc, dict), pointer, "expected object")
    status_name = doc.get("status", default_status.value)
    _expect(status_name in _STATUS_NAMES, f"{pointer}/status",
            f"unknown status {status_name!r}")
    status = _STATUS_NAMES[status_name]
    if status is Status.ZERO:
        return zero_tf()
    num = _coeffs(doc.get("num", [0.0]), f"{pointer}/num")
    den = _coeffs(doc.get("den", [1.0]), f"{pointer}/den")
    orders = None
    if "orders" in doc:
        o = doc["orders"]
        _expect(isinstance(o, dict), f"{pointer}/orders", "expected object")
        orders = OrderSpec(int(o.get("num", 1)), int(o.get("den", 0)),
                           int(o.get("delay", 1)))
    try:
        return tf(num, den, status, orders)
    except Exception as exc:
        raise SchemaError(pointer, str(exc)) from None


def _node_id(doc: Any, pointer: str, L: int) -> int:
    _expect(isinstance(doc, int) and not isinstance(doc, bool), pointer, "expected node id")
    if not 1 <= doc <= L:
        raise UnknownLabel(pointer, f"node {doc} outside 1..{L}")
    return doc - 1


def load(doc: dict | str | bytes) -> tuple[Network, PredictorModel | None]:
    """Parse a network document; returns the network and optional predictor."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError("/", f"invalid JSON: {exc}") from None
    _expect(isinstance(doc, dict), "/", "expected top-level object")

    nodes = doc.get("nodes")
    if isinstance(nodes, int):
        labels = tuple(f"w{k + 1}" for k in range(nodes))
    elif isinstance(nodes, list) and all(isinstance(s, str) for s in nodes):
        labels = tuple(nodes)
    else:
        raise SchemaError("/nodes", "expected node count or list of labels")
    L = len(labels)

    G = TFMatrix.zeros(L, L)
    for k, m in enumerate(doc.get("modules", [])):
        p = f"/modules/{k}"
        _expect(isinstance(m, dict), p, "expected object")
        src = _node_id(m.get("from"), f"{p}/from", L)
        dst = _node_id(m.get("to"), f"{p}/to", L)
        G.entries[dst][src] = _entry_from_doc(m, p, Status.PARAMETRIZED)

    H = TFMatrix.identity(L)
    cov = np.zeros((L, L))
    noise = doc.get("noise")
    if noise is not None:
        _expect(isinstance(noise, dict), "/noise", "expected object")
        for k, m in enumerate(noise.get("H_entries", [])):
            p = f"/noise/H_entries/{k}"
            _expect(isinstance(m, dict), p, "expected object")
            r = _node_id(m.get("row"), f"{p}/row", L)
            c = _node_id(m.get("col"), f"{p}/col", L)
            H.entries[r][c] = _entry_from_doc(m, p, Status.PARAMETRIZED)
        cv = noise.get("cov")
        if cv is not None:
            _expect(isinstance(cv, list) and len(cv) == L, "/noise/cov",
                    f"expected {L}x{L} matrix")
            for r, row in enumerate(cv):
                _expect(isinstance(row, list) and len(row) == L,
                        f"/noise/cov/{r}", f"expected {L} values")
                cov[r, :] = [float(v) for v in row]

    exc_docs = doc.get("excitations", [])
    _expect(isinstance(exc_docs, list), "/excitations", "expected array")
    K = 0
    placements: list[tuple[int, int, SourceSpec]] = []
    for k, m in enumerate(exc_docs):
        p = f"/excitations/{k}"
        _expect(isinstance(m, dict), p, "expected object")
        ri = m.get("r_index")
        _expect(isinstance(ri, int) and ri >= 1, f"{p}/r_index", "expected 1-based index")
        node = _node_id(m.get("node"), f"{p}/node", L)
        spec_doc = m.get("spec", {})
        spec = SourceSpec(
            kind=spec_doc.get("kind", "white"),
            variance=float(spec_doc.get("variance", 1.0)),
            pole=float(spec_doc.get("pole", 0.0)),
        )
        _expect(spec.kind in ("white", "ar1"), f"{p}/spec/kind", "white or ar1")
        placements.append((ri - 1, node, spec))
        K = max(K, ri)
    R = np.zeros((L, K))
    r_specs: list[SourceSpec] = [SourceSpec() for _ in range(K)]
    for ri, node, spec in placements:
        R[node, ri] = 1.0
        r_specs[ri] = spec

    net = Network(G, H, R, cov, w_labels=labels, r_specs=tuple(r_specs))

    pred = None
    pdoc = doc.get("predictor")
    if pdoc is not None:
        _expect(isinstance(pdoc, dict), "/predictor", "expected object")
        D = tuple(_node_id(v, f"/predictor/D/{k}", L)
                  for k, v in enumerate(pdoc.get("D", [])))
        Y = tuple(_node_id(v, f"/predictor/Y/{k}", L)
                  for k, v in enumerate(pdoc.get("Y", [])))
        tgt = pdoc.get("target")
        _expect(isinstance(tgt, dict), "/predictor/target", "expected object")
        j = _node_id(tgt.get("j"), "/predictor/target/j", L)
        i = _node_id(tgt.get("i"), "/predictor/target/i", L)
        _expect(j in Y, "/predictor/target/j", "target output must be in Y")
        _expect(i in D, "/predictor/target/i", "target input must be in D")
        g_map = h_map = t_map = None
        pm = pdoc.get("param_map")
        if pm is not None:
            _expect(isinstance(pm, dict), "/predictor/param_map", "expected object")
            ny, nd = len(Y), len(D)
            g_map = TFMatrix.zeros(ny, nd)
            h_map = TFMatrix.zeros(ny, ny)
            t_map = TFMatrix.zeros(ny, net.K)
            for k, m in enumerate(pm.get("G", [])):
                p = f"/predictor/param_map/G/{k}"
                y = _node_id(m.get("row"), f"{p}/row", L)
                d = _node_id(m.get("col"), f"{p}/col", L)
                _expect(y in Y, f"{p}/row", "row must be a Y node")
                _expect(d in D, f"{p}/col", "col must be a D node")
                g_map.entries[Y.index(y)][D.index(d)] = _entry_from_doc(
                    m, p, Status.PARAMETRIZED)
            for k, m in enumerate(pm.get("H", [])):
                p = f"/predictor/param_map/H/{k}"
                y = _node_id(m.get("row"), f"{p}/row", L)
                c = m.get("col")
                _expect(isinstance(c, int) and 1 <= c <= ny, f"{p}/col",
                        f"xi index outside 1..{ny}")
                _expect(y in Y, f"{p}/row", "row must be a Y node")
                h_map.entries[Y.index(y)][c - 1] = _entry_from_doc(
                    m, p, Status.PARAMETRIZED)
            for k, m in enumerate(pm.get("T", [])):
                p = f"/predictor/param_map/T/{k}"
                y = _node_id(m.get("row"), f"{p}/row", L)
                c = m.get("col")
                _expect(isinstance(c, int) and 1 <= c <= net.K, f"{p}/col",
                        f"r index outside 1..{net.K}")
                _expect(y in Y, f"{p}/row", "row must be a Y node")
                t_map.entries[Y.index(y)][c - 1] = _entry_from_doc(
                    m, p, Status.PARAMETRIZED)
        pred = PredictorModel(
            D, Y, (j, i), g_map, h_map, t_map,
            rows_independent=bool(pdoc.get("rows_independent", True)),
            target_block_independent=bool(pdoc.get("target_block_independent", True)),
        )
    return net, pred


def _entry_to_doc(e: RationalTF, **pos) -> dict:
    out = dict(pos)
    out["status"] = e.status.value
    if e.status is not Status.ZERO:
        out["num"] = list(e.num.coeffs)
        out["den"] = list(e.den.coeffs)
    if e.status is Status.PARAMETRIZED and e.orders is not None:
        out["orders"] = {"num": e.orders.num, "den": e.orders.den, "delay": e.orders.delay}
    return out


def save(net: Network, pred: PredictorModel | None = None) -> dict:
    """Canonical document for a network (and optional predictor)."""
    doc: dict[str, Any] = {"nodes": list(net.w_labels)}
    modules = []
    for r in range(net.L):
        for c in range(net.L):
            e = net.G.entries[r][c]
            if e.status is not Status.ZERO:
                modules.append(_entry_to_doc(e, **{"from": c + 1, "to": r + 1}))
    doc["modules"] = modules

    h_entries = []
    for r in range(net.L):
        for c in range(net.L):
            e = net.H.entries[r][c]
            default_diag = (r == c and e.status is Status.KNOWN
                            and e.num.coeffs == (1.0,) and e.den.coeffs == (1.0,))
            if e.status is Status.ZERO or default_diag:
                continue
            h_entries.append(_entry_to_doc(e, row=r + 1, col=c + 1))
    doc["noise"] = {
        "H_entries": h_entries,
        "cov": [[float(v) for v in row] for row in net.noise_cov],
    }

    excitations = []
    for k in range(net.K):
        for node in net.excitation_nodes(k):
            item = {"r_index": k + 1, "node": node + 1}
            spec = net.r_specs[k]
            if spec != SourceSpec():
                item["spec"] = {"kind": spec.kind, "variance": spec.variance,
                                "pole": spec.pole}
            excitations.append(item)
    doc["excitations"] = excitations

    if pred is not None:
        pdoc: dict[str, Any] = {
            "D": [d + 1 for d in pred.D],
            "Y": [y + 1 for y in pred.Y],
            "target": {"j": pred.j + 1, "i": pred.i + 1},
            "rows_independent": pred.rows_independent,
            "target_block_independent": pred.target_block_independent,
        }
        if pred.has_param_map():
            pm: dict[str, list] = {"G": [], "H": [], "T": []}
            for a, y in enumerate(pred.Y):
                for b, d in enumerate(pred.D):
                    e = pred.G_map.entries[a][b]
                    if e.status is not Status.ZERO:
                        pm["G"].append(_entry_to_doc(e, row=y + 1, col=d + 1))
                for b in range(len(pred.Y)):
                    e = pred.H_map.entries[a][b]
                    if e.status is not Status.ZERO:
                        pm["H"].append(_entry_to_doc(e, row=y + 1, col=b + 1))
                for b in range(net.K):
                    e = pred.T_map.entries[a][b]
                    if e.status is not Status.ZERO:
                        pm["T"].append(_entry_to_doc(e, row=y + 1, col=b + 1))
            pdoc["param_map"] = pm
        doc["predictor"] = pdoc
    return doc


def dumps(net: Network, pred: PredictorModel | None = None) -> str:
    return json.dumps(save(net, pred), indent=2, sort_keys=True)


def load_file(path) -> tuple[Network, PredictorModel | None]:
    with open(path, "r", encoding="utf-8") as fh:
        return load(fh.read())


def save_file(path, net: Network, pred: PredictorModel | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(net, pred))
        fh.write("\n")
