"""Node elimination by Gaussian elimination, pointwise on a frequency grid.

Eliminating a node set F from ``w = T(q) w + S(q) s`` yields, at each grid
point, ``T~ = T_rr + T_rf (I - T_ff)^{-1} T_fr`` and the induced source map
``S~ = S_r + T_rf (I - T_ff)^{-1} S_f``.  Downstream consumers only ever need
values on a grid, so no symbolic rational arithmetic is performed here.

The same elimination, done exactly on state-space realizations, produces the
reduced predictor maps (inputs D to outputs Y, plus noise and excitation
columns) used by the innovation factorization and the estimation harness.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularAtFrequency, StructuralViolation
from .freqgrid import zvals
from .graph import SelectionBundle
from .model import Network, OpenLoopSystem
from .tf import (
    StateSpace,
    Status,
    TFMatrix,
    feedback_unity,
    realize,
    series,
)

ILL_CONDITIONED = 1e10


def _eval_matrix(m: TFMatrix, z: complex) -> np.ndarray:
    return m(z)


def immerse(T: TFMatrix, S: TFMatrix | None, remove: list[int],
            omega: np.ndarray) -> tuple[np.ndarray, np.ndarray | None, list[int], np.ndarray]:
    """Eliminate the listed coordinates from ``w = T w + S s`` pointwise.

    Returns (T_tilde, S_tilde, retained, condition_numbers) with value arrays
    indexed [row, col, grid_point].
    """
    n = T.rows
    rem = sorted(set(remove))
    ret = [k for k in range(n) if k not in rem]
    zs = zvals(omega)
    nt = len(ret)
    ns = S.cols if S is not None else 0
    T_out = np.empty((nt, nt, len(zs)), dtype=complex)
    S_out = np.empty((nt, ns, len(zs)), dtype=complex) if S is not None else None
    conds = np.empty(len(zs))
    for g, z in enumerate(zs):
        Tz = _eval_matrix(T, z)
        Sz = _eval_matrix(S, z) if S is not None else None
        Trr = Tz[np.ix_(ret, ret)]
        if rem:
            Tff = Tz[np.ix_(rem, rem)]
            Trf = Tz[np.ix_(ret, rem)]
            Tfr = Tz[np.ix_(rem, ret)]
            M = np.eye(len(rem)) - Tff
            conds[g] = np.linalg.cond(M)
            if not np.isfinite(conds[g]) or conds[g] > 1e14:
                raise SingularAtFrequency(float(omega[g]), "(I - T_ff)")
            Minv = np.linalg.inv(M)
            T_out[:, :, g] = Trr + Trf @ Minv @ Tfr
            if Sz is not None:
                S_out[:, :, g] = Sz[ret, :] + Trf @ Minv @ Sz[rem, :]
        else:
            conds[g] = 1.0
            T_out[:, :, g] = Trr
            if Sz is not None:
                S_out[:, :, g] = Sz[ret, :]
    if np.any(conds > ILL_CONDITIONED):
        warnings.warn("ill-conditioned immersion: condition number above 1e10",
                      RuntimeWarning, stacklevel=2)
    return T_out, S_out, ret, conds


def _node_matrices(sys: Network | OpenLoopSystem) -> tuple[TFMatrix, TFMatrix, int, int]:
    """Node-coupling matrix T and source matrix S = [R | H] for either form."""
    if isinstance(sys, OpenLoopSystem):
        m = sys.m
        S = TFMatrix.zeros(m, sys.n_x)
        for k in range(sys.n_x):
            S.entries[sys.x_entry_input(k)][k] = TFMatrix.identity(1).entries[0][0]
        return sys.Gu, S, sys.n_x, 0
    net = sys
    L = net.L
    S = TFMatrix.zeros(L, net.K + L)
    one = TFMatrix.identity(1).entries[0][0]
    for k in range(net.K):
        for node in net.excitation_nodes(k):
            S.entries[node][k] = one
    for k in range(L):
        for node in range(L):
            e = net.H.entries[node][k]
            if e.status is not Status.ZERO:
                S.entries[node][net.K + k] = e
    return net.G, S, net.K, L


@dataclass
class ImmersionResult:
    """T_s / R_s decomposition values on a grid."""

    retained: list[str]
    cut: list[str]
    omega: np.ndarray
    T_s: np.ndarray  # |w_T| x |D_c| x n_grid
    R_s: np.ndarray  # |w_T| x |x_T*| x n_grid
    x_labels: list[str]
    structural_zero_max: float = 0.0
    conds: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def to_dict(self) -> dict:
        return {
            "retained": self.retained,
            "cut": self.cut,
            "x_labels": self.x_labels,
            "structural_zero_max": self.structural_zero_max,
            "grid_points": int(len(self.omega)),
        }


def decompose_Ts_Rs(sys: Network | OpenLoopSystem, bundle: SelectionBundle,
                    omega: np.ndarray,
                    zero_tol: float = 1e-8) -> ImmersionResult:
    """Express w_T through w_{D^c} and the external signals x_T*.

    Asserts that the block mapping w_i into w_T vanishes after immersion; a
    violation means the disconnecting set handed in was not one.
    """
    T, S, n_r, _ = _node_matrices(sys)
    kind = "u" if isinstance(sys, OpenLoopSystem) else "w"
    w_T = [v.index for v in bundle["w_T"].vertices()]
    d_c = [v.index for v in bundle["D_c"].vertices()]
    i_idx = [v.index for v in bundle["kappa_w_j"].vertices()
             if v.index not in w_T and v.index not in d_c]
    if not w_T:
        return ImmersionResult([], [str(v) for v in bundle["D_c"].vertices()],
                               omega, np.zeros((0, len(d_c), len(omega))),
                               np.zeros((0, 0, len(omega))), [])

    order = i_idx + d_c + w_T
    remove = [k for k in range(T.rows) if k not in order]
    T_t, S_t, ret, conds = immerse(T, S, remove, omega)
    pos = {node: ret.index(node) for node in order}
    bi = [pos[k] for k in i_idx]
    bc = [pos[k] for k in d_c]
    bt = [pos[k] for k in w_T]

    # Source columns for x_T*: excitations first, then noise channels.
    x_members = bundle["x_Tstar"].vertices()
    cols = []
    for v in x_members:
        if v.kind in ("r", "x"):
            cols.append(v.index)
        elif v.kind == "e":
            cols.append(n_r + v.index)
    nz = len(omega)
    T_s = np.empty((len(bt), len(bc), nz), dtype=complex)
    R_s = np.empty((len(bt), len(cols), nz), dtype=complex)
    zero_max = 0.0
    for g in range(nz):
        Ttt = T_t[np.ix_(bt, bt)][:, :, g]
        M = np.linalg.inv(np.eye(len(bt)) - Ttt)
        T31 = T_t[np.ix_(bt, bi)][:, :, g]
        if bi:
            zero_max = max(zero_max, float(np.max(np.abs(T31))))
        T_s[:, :, g] = M @ T_t[np.ix_(bt, bc)][:, :, g]
        if cols:
            R_s[:, :, g] = M @ S_t[np.ix_(bt, cols)][:, :, g]
    if zero_max > zero_tol:
        raise StructuralViolation(
            f"block w_i -> w_T reaches {zero_max:.3e}; the supplied "
            f"disconnecting set does not separate")
    return ImmersionResult(
        [f"{kind}{k + 1}" for k in w_T],
        [f"{kind}{k + 1}" for k in d_c],
        omega, T_s, R_s,
        [str(v) for v in x_members],
        zero_max, conds)


# --------------------------------------------------------------------------
# Reduced predictor maps.
# --------------------------------------------------------------------------

@dataclass
class PredictorMaps:
    """Pointwise true reduced maps of a predictor on a grid.

    G_bar maps measured inputs D to outputs Y (self columns removed), T_bar
    maps excitation signals, V maps the white noise vector e; all after
    removal of self-loops created by eliminating unmeasured nodes.
    """

    D: tuple[int, ...]
    Y: tuple[int, ...]
    omega: np.ndarray
    G_bar: np.ndarray  # |Y| x |D| x n
    T_bar: np.ndarray  # |Y| x K x n
    V: np.ndarray      # |Y| x L x n


def predictor_maps(net: Network, D: tuple[int, ...], Y: tuple[int, ...],
                   omega: np.ndarray) -> PredictorMaps:
    """Eliminate all nodes outside D and solve per-row self dependencies."""
    T, S, n_r, n_e = _node_matrices(net)
    zs = zvals(omega)
    dd = list(D)
    zc = [k for k in range(net.L) if k not in D]
    ny, nd = len(Y), len(D)
    G_out = np.empty((ny, nd, len(zs)), dtype=complex)
    T_out = np.empty((ny, n_r, len(zs)), dtype=complex)
    V_out = np.empty((ny, n_e, len(zs)), dtype=complex)
    for g, z in enumerate(zs):
        Tz = T(z)
        Sz = S(z)
        if zc:
            M = np.eye(len(zc)) - Tz[np.ix_(zc, zc)]
            if abs(np.linalg.det(M)) < 1e-14:
                raise SingularAtFrequency(float(omega[g]), "(I - G_ZZ)")
            Minv = np.linalg.inv(M)
            Gam = Tz[np.ix_(Y, zc)] @ Minv @ Tz[np.ix_(zc, dd)] + Tz[np.ix_(Y, dd)]
            Src = Tz[np.ix_(Y, zc)] @ Minv @ Sz[zc, :] + Sz[Y, :]
        else:
            Gam = Tz[np.ix_(Y, dd)]
            Src = Sz[Y, :]
        # Per-row self-loop removal for outputs that are also inputs.
        for a, y in enumerate(Y):
            if y in D:
                b = dd.index(y)
                gamma = Gam[a, b]
                scale = 1.0 / (1.0 - gamma)
                Gam[a, :] *= scale
                Src[a, :] *= scale
                Gam[a, b] = 0.0
        G_out[:, :, g] = Gam
        T_out[:, :, g] = Src[:, :n_r]
        V_out[:, :, g] = Src[:, n_r:]
    return PredictorMaps(tuple(D), tuple(Y), omega, G_out, T_out, V_out)


def _submatrix(m: TFMatrix, rows: list[int], cols: list[int]) -> TFMatrix:
    return TFMatrix([[m.entries[r][c] for c in cols] for r in rows])


def _parallel(a: StateSpace, b: StateSpace) -> StateSpace:
    """Same inputs, summed outputs."""
    na, nb = a.n_states, b.n_states
    A = np.zeros((na + nb, na + nb))
    A[:na, :na] = a.A
    A[na:, na:] = b.A
    B = np.vstack([a.B, b.B])
    C = np.hstack([a.C, b.C])
    return StateSpace(A, B, C, a.D + b.D)


def predictor_noise_ss(net: Network, D: tuple[int, ...], Y: tuple[int, ...]) -> StateSpace:
    """Exact state-space realization of the noise map e -> v_Y.

    v_Y is the disturbance left on the outputs once measured inputs are
    regressors: unmeasured nodes are eliminated and each output row's own
    feedback (loops not passing through a measured input) is solved out.
    """
    L = net.L
    dd = list(D)
    zc = [k for k in range(L) if k not in D]
    h_full = realize(net.H)  # e (L channels) -> node disturbances

    # Stage 1: w_Zc = (I - G_ZcZc)^{-1} (G_ZcD w_D + [H e]_Zc)
    # Inputs of every stage are (w_D, e).
    nd = len(dd)
    if zc:
        g_zz = realize(_submatrix(net.G, zc, zc))
        g_zd = realize(_submatrix(net.G, zc, dd))
        h_z = _select_outputs(h_full, zc)
        inner = _parallel(_pad_inputs(g_zd, 0, L), _pad_inputs(h_z, nd, 0))
        stage1 = series(feedback_unity(g_zz), inner)  # (w_D, e) -> w_Zc
    else:
        stage1 = StateSpace(np.zeros((0, 0)), np.zeros((0, nd + L)),
                            np.zeros((0, 0)), np.zeros((0, nd + L)))

    # Stage 2: w_Y = G_YZc w_Zc + G_YD w_D + [H e]_Y
    g_yd = realize(_submatrix(net.G, list(Y), dd))
    h_y = _select_outputs(h_full, list(Y))
    direct = _parallel(_pad_inputs(g_yd, 0, L), _pad_inputs(h_y, nd, 0))
    if zc:
        g_yz = realize(_submatrix(net.G, list(Y), zc))
        sys2 = _parallel(series(g_yz, stage1), direct)  # (w_D, e) -> w_Y
    else:
        sys2 = direct

    # Stage 3: close each output row on its own input column.
    diag_parts = []
    for a, y in enumerate(Y):
        if y not in D:
            continue
        b = dd.index(y)
        siso = StateSpace(sys2.A, sys2.B[:, [b]], sys2.C[[a], :], sys2.D[[a], [b]])
        diag_parts.append((a, siso))
    ny = len(Y)
    if diag_parts:
        n_tot = sum(s.n_states for _, s in diag_parts)
        A = np.zeros((n_tot, n_tot))
        B = np.zeros((n_tot, ny))
        C = np.zeros((ny, n_tot))
        Dm = np.zeros((ny, ny))
        at = 0
        for a, s in diag_parts:
            k = s.n_states
            A[at:at + k, at:at + k] = s.A
            B[at:at + k, a] = s.B[:, 0]
            C[a, at:at + k] = s.C[0, :]
            Dm[a, a] = s.D[0, 0]
            at += k
        gamma_diag = StateSpace(A, B, C, Dm)  # w_Y -> diagonal feedback
        loop = feedback_unity(gamma_diag)      # v -> w_Y for w_Y = diag w_Y + v
        v_sys = series(loop, sys2)
    else:
        v_sys = sys2

    # Restrict inputs to the noise channels.
    sel = np.zeros((nd + L, L))
    sel[nd:, :] = np.eye(L)
    return StateSpace(v_sys.A, v_sys.B @ sel, v_sys.C, v_sys.D @ sel)


def _select_outputs(s: StateSpace, rows: list[int]) -> StateSpace:
    return StateSpace(s.A, s.B, s.C[rows, :], s.D[rows, :])


def _pad_inputs(s: StateSpace, before: int, after: int) -> StateSpace:
    m = s.n_inputs
    sel = np.zeros((m, before + m + after))
    sel[:, before:before + m] = np.eye(m)
    return StateSpace(s.A, s.B @ sel, s.C, s.D @ sel)
