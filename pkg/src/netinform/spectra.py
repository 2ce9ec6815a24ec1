"""Model-based signal spectra, projections, PD verdicts and innovation forms.

All spectra are Hermitian matrices on a frequency grid, built from the
closed-loop maps of a network driven by excitation signals with diagonal
spectra and white noise with covariance Lambda.  Positive definiteness "for
almost all" frequencies tolerates a bounded number of isolated grid points.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import RiccatiDivergence, SingularAtFrequency
from .freqgrid import zvals
from .graph import Vertex
from .model import Network
from .tf import StateSpace

PD_REL_TOL = 1e-8
PD_ALLOWED_EXCEPTIONS = 2
RIDGE = 1e-12


@dataclass
class SpectrumGrid:
    """Hermitian spectral-density values on a frequency grid."""

    signals: tuple[str, ...]
    omega: np.ndarray
    values: np.ndarray  # (n, n, n_grid)

    def __post_init__(self):
        v = self.values
        herm_err = np.max(np.abs(v - v.conj().transpose(1, 0, 2))) if v.size else 0.0
        if herm_err > 1e-9:
            raise ValueError(f"spectrum not Hermitian: asymmetry {herm_err:.3e}")
        self.values = (v + v.conj().transpose(1, 0, 2)) / 2.0

    @property
    def n(self) -> int:
        return len(self.signals)

    def min_eigs(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros(len(self.omega))
        return np.array([np.linalg.eigvalsh(self.values[:, :, g])[0]
                         for g in range(len(self.omega))])

    def restrict(self, idx: list[int]) -> "SpectrumGrid":
        sig = tuple(self.signals[k] for k in idx)
        return SpectrumGrid(sig, self.omega, self.values[np.ix_(idx, idx)])


@dataclass
class PDVerdict:
    satisfied: bool
    tol: float
    offending: list[float] = field(default_factory=list)
    min_rel_eig: float = 0.0

    def to_dict(self) -> dict:
        return {"satisfied": self.satisfied, "tol": self.tol,
                "offending_frequencies": self.offending,
                "min_relative_eigenvalue": self.min_rel_eig}


def pd_almost_all(spec: SpectrumGrid, tol: float = PD_REL_TOL,
                  allowed_exceptions: int = PD_ALLOWED_EXCEPTIONS) -> PDVerdict:
    """PD at every grid point up to a few isolated exceptions.

    The eigenvalue threshold is relative to trace/n per frequency, which makes
    the verdict invariant under uniform positive scaling of the spectrum.
    """
    if spec.n == 0:
        return PDVerdict(False, tol, [], 0.0)
    bad: list[float] = []
    min_rel = np.inf
    for g in range(len(spec.omega)):
        m = spec.values[:, :, g]
        scale = max(np.real(np.trace(m)) / spec.n, 1e-300)
        rel = np.linalg.eigvalsh(m)[0] / scale
        min_rel = min(min_rel, rel)
        if rel < tol:
            bad.append(float(spec.omega[g]))
    ok = len(bad) <= allowed_exceptions
    return PDVerdict(ok, tol, bad[:16], float(min_rel))


def closed_loop_map(net: Network, omega: np.ndarray) -> np.ndarray:
    """Per-frequency map (I - G)^{-1} [R, H] from (r, e) to the node signals."""
    zs = zvals(omega)
    L, K = net.L, net.K
    out = np.empty((L, K + L, len(zs)), dtype=complex)
    for g, z in enumerate(zs):
        M = np.eye(L) - net.G(z)
        if abs(np.linalg.det(M)) < 1e-14:
            raise SingularAtFrequency(float(omega[g]), "(I - G)")
        Minv = np.linalg.inv(M)
        out[:, :K, g] = Minv @ net.R
        out[:, K:, g] = Minv @ net.H(z)
    return out


def source_spectrum(net: Network, omega: np.ndarray) -> np.ndarray:
    """Block-diagonal spectrum of (r, e): diagonal shaped r, constant Lambda."""
    K, L = net.K, net.L
    n = K + L
    out = np.zeros((n, n, len(omega)), dtype=complex)
    for k, spec in enumerate(net.r_specs):
        out[k, k, :] = spec.spectrum(np.asarray(omega))
    out[K:, K:, :] = net.noise_cov[:, :, None]
    return out


def signal_spectrum(net: Network, signals: list[Vertex | str],
                    omega: np.ndarray,
                    rows: np.ndarray | None = None) -> SpectrumGrid:
    """Joint spectrum of node signals and/or raw sources.

    ``signals`` may mix node vertices ("w3"), excitations ("r1") and noise
    sources ("e2").  Extra caller-supplied rows (maps from (r, e) to further
    signals) can be appended via ``rows`` with shape (n_extra, K+L, n_grid).
    """
    from .graph import parse_vertex

    F = closed_loop_map(net, omega)
    K, L = net.K, net.L
    nsrc = K + L
    sel_rows = []
    names = []
    for s in signals:
        v = parse_vertex(s) if isinstance(s, str) else s
        names.append(str(v))
        if v.kind == "w":
            sel_rows.append(F[v.index])
        elif v.kind == "r":
            row = np.zeros((nsrc, len(omega)), dtype=complex)
            row[v.index, :] = 1.0
            sel_rows.append(row)
        elif v.kind == "e":
            row = np.zeros((nsrc, len(omega)), dtype=complex)
            row[K + v.index, :] = 1.0
            sel_rows.append(row)
        else:
            raise ValueError(f"cannot form spectrum row for {v}")
    if rows is not None:
        for k in range(rows.shape[0]):
            sel_rows.append(rows[k])
            names.append(f"row{k}")
    phi_s = source_spectrum(net, omega)
    n = len(sel_rows)
    vals = np.empty((n, n, len(omega)), dtype=complex)
    for g in range(len(omega)):
        Fg = np.array([r[:, g] for r in sel_rows])
        vals[:, :, g] = Fg @ phi_s[:, :, g] @ Fg.conj().T
    return SpectrumGrid(tuple(names), np.asarray(omega), vals)


def spectrum_from_rows(names: tuple[str, ...], rows: np.ndarray,
                       phi_s: np.ndarray, omega: np.ndarray) -> SpectrumGrid:
    """Spectrum of signals given their rows over a common source vector."""
    n = rows.shape[0]
    vals = np.empty((n, n, len(omega)), dtype=complex)
    for g in range(len(omega)):
        Fg = rows[:, :, g]
        vals[:, :, g] = Fg @ phi_s[:, :, g] @ Fg.conj().T
    return SpectrumGrid(names, np.asarray(omega), vals)


def project_out(joint: SpectrumGrid, keep: list[int], against: list[int],
                warn_threshold: float = 1e12) -> SpectrumGrid:
    """Schur complement: spectrum of the kept signals orthogonal to the rest.

    A ridge of 1e-12 * trace is added when the conditioning block is singular;
    the event is reported as a DegenerateConditioning warning.
    """
    if not against:
        return joint.restrict(keep)
    nz = len(joint.omega)
    nk = len(keep)
    vals = np.empty((nk, nk, nz), dtype=complex)
    degenerate = False
    for g in range(nz):
        m = joint.values[:, :, g]
        A = m[np.ix_(keep, keep)]
        B = m[np.ix_(keep, against)]
        Cm = m[np.ix_(against, against)]
        tr = max(np.real(np.trace(Cm)), 1e-300)
        try:
            X = np.linalg.solve(Cm, B.conj().T)
            if np.linalg.cond(Cm) > warn_threshold:
                raise np.linalg.LinAlgError
        except np.linalg.LinAlgError:
            degenerate = True
            X = np.linalg.solve(Cm + RIDGE * tr * np.eye(len(against)), B.conj().T)
        vals[:, :, g] = A - B @ X
    if degenerate:
        warnings.warn("DegenerateConditioning: singular conditioning block, "
                      "ridge regularization applied", RuntimeWarning, stacklevel=2)
    names = tuple(f"{joint.signals[k]}|perp" for k in keep)
    return SpectrumGrid(names, joint.omega, vals)


def partial_project(joint: SpectrumGrid, keep: list[int], passthrough: list[int],
                    against: list[int]) -> SpectrumGrid:
    """Project the ``keep`` block off ``against``; carry ``passthrough`` as is.

    Returns the joint spectrum of (keep|perp-against, passthrough), including
    the cross terms between the projected block and the untouched one.
    """
    nz = len(joint.omega)
    nk, np_ = len(keep), len(passthrough)
    n = nk + np_
    vals = np.empty((n, n, nz), dtype=complex)
    for g in range(nz):
        m = joint.values[:, :, g]
        if against:
            Cm = m[np.ix_(against, against)]
            tr = max(np.real(np.trace(Cm)), 1e-300)
            Cm = Cm + RIDGE * tr * np.eye(len(against))
            W = np.linalg.solve(Cm, m[np.ix_(against, keep + passthrough)])
            red = m[np.ix_(keep + passthrough, keep + passthrough)].copy()
            cross = m[np.ix_(keep + passthrough, against)]
            corr = cross @ W
            # The keep block and its cross terms lose their against-component;
            # the passthrough block itself is untouched.
            red[:nk, :] -= corr[:nk, :]
            red[nk:, :nk] -= corr[nk:, :nk]
            vals[:, :, g] = (red + red.conj().T) / 2.0
        else:
            vals[:, :, g] = m[np.ix_(keep + passthrough, keep + passthrough)]
    names = tuple([f"{joint.signals[k]}|perp" for k in keep]
                  + [joint.signals[k] for k in passthrough])
    return SpectrumGrid(names, joint.omega, vals)


# --------------------------------------------------------------------------
# Innovation factorization via the steady-state Riccati fixed point.
# --------------------------------------------------------------------------

@dataclass
class InnovationModel:
    """Monic innovation filter H(q) and innovation covariance.

    ``filter_ss`` realizes H with identity direct term; ``cov`` is the
    innovation covariance; the inverse filter is (A - K C, K, -C, I).
    """

    filter_ss: StateSpace
    gain: np.ndarray
    cov: np.ndarray

    def response(self, omega: np.ndarray) -> np.ndarray:
        zs = zvals(omega)
        p = self.filter_ss.n_outputs
        out = np.empty((p, p, len(zs)), dtype=complex)
        for g, z in enumerate(zs):
            out[:, :, g] = self.filter_ss.response(z)
        return out

    def inverse_response(self, omega: np.ndarray) -> np.ndarray:
        ss = self.filter_ss
        inv = StateSpace(ss.A - ss.B @ ss.C, ss.B, -ss.C, np.eye(ss.n_outputs))
        zs = zvals(omega)
        p = ss.n_outputs
        out = np.empty((p, p, len(zs)), dtype=complex)
        for g, z in enumerate(zs):
            out[:, :, g] = inv.response(z)
        return out

    def is_minimum_phase(self, tol: float = 1e-8) -> bool:
        ss = self.filter_ss
        if ss.n_states == 0:
            return True
        eig = np.max(np.abs(np.linalg.eigvals(ss.A - ss.B @ ss.C)))
        return eig < 1.0 - tol


def innovation_factorization(noise_ss: StateSpace, lam: np.ndarray,
                             max_iter: int = 10_000,
                             tol: float = 1e-12) -> InnovationModel:
    """Steady-state one-step predictor of ``v = noise_ss(e)``, cov(e) = lam.

    Iterates the filtering Riccati fixed point; returns the monic innovation
    filter and covariance so that H Lambda_xi H^* reproduces the spectrum of v.
    """
    A, B, C, D = noise_ss.A, noise_ss.B, noise_ss.C, noise_ss.D
    lam = np.atleast_2d(np.asarray(lam, dtype=float))
    n = A.shape[0]
    Q = B @ lam @ B.T
    Rm = D @ lam @ D.T
    Sm = B @ lam @ D.T
    P = np.eye(n) * 0.0
    for it in range(max_iter):
        Spp = C @ P @ C.T + Rm
        try:
            gain_t = np.linalg.solve(Spp, (A @ P @ C.T + Sm).T)
        except np.linalg.LinAlgError as exc:
            raise RiccatiDivergence(f"singular innovation covariance: {exc}") from None
        K = gain_t.T
        P_next = A @ P @ A.T + Q - K @ Spp @ K.T
        P_next = (P_next + P_next.T) / 2.0
        delta = np.max(np.abs(P_next - P)) if n else 0.0
        P = P_next
        if delta < tol:
            break
    else:
        raise RiccatiDivergence(f"no convergence after {max_iter} iterations")
    S = C @ P @ C.T + Rm
    S = (S + S.T) / 2.0
    K = np.linalg.solve(S, (A @ P @ C.T + Sm).T).T if n else np.zeros((C.shape[0], 0)).T
    if n == 0:
        filt = StateSpace(np.zeros((0, 0)), np.zeros((0, C.shape[0])),
                          np.zeros((C.shape[0], 0)), np.eye(C.shape[0]))
        return InnovationModel(filt, np.zeros((0, C.shape[0])), S)
    filt = StateSpace(A, K, C, np.eye(C.shape[0]))
    return InnovationModel(filt, K, S)


def noise_spectrum_from_ss(noise_ss: StateSpace, lam: np.ndarray,
                           omega: np.ndarray) -> np.ndarray:
    """Spectrum of v = noise_ss(e) with white e, cov lam: F lam F^*."""
    zs = zvals(omega)
    p = noise_ss.n_outputs
    out = np.empty((p, p, len(zs)), dtype=complex)
    for g, z in enumerate(zs):
        F = noise_ss.response(z)
        out[:, :, g] = F @ lam @ F.conj().T
    return out
