"""Rational transfer-function arithmetic in the backward shift operator.

Coefficient convention: index ``k`` of a coefficient list multiplies the k-th
power of the unit delay, and frequency evaluation substitutes ``z = e^{-i w}``
for the delay variable.  With this convention strict properness is a
constant-term check and a monic filter has unit direct term.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegreeOverflow, NotProper, PoleOnGrid

DEGREE_CAP = 64
_POLE_TOL = 1e-12


def _trim(coeffs: Iterable[float]) -> tuple[float, ...]:
    c = [float(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    return tuple(c) if c else (0.0,)


@dataclass(frozen=True)
class Poly:
    """Polynomial in the unit delay, ascending powers, trailing zeros trimmed."""

    coeffs: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    def __call__(self, z: complex) -> complex:
        # Horner in the delay variable.
        acc = 0.0 + 0.0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0.0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0.0] * (n - len(other.coeffs))
        return Poly(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scale(-1.0)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return Poly((0.0,))
        out = [0.0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0.0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out))

    def scale(self, s: float) -> "Poly":
        return Poly(tuple(s * c for c in self.coeffs))

    def shifted(self, k: int) -> "Poly":
        """Multiply by the k-th power of the delay."""
        return Poly((0.0,) * k + self.coeffs)


class Status(enum.Enum):
    """Model-set knowledge about one rational entry."""

    ZERO = "zero"
    KNOWN = "known"
    PARAMETRIZED = "parametrized"


@dataclass(frozen=True)
class OrderSpec:
    """Numerator/denominator orders of a parametrized entry.

    ``delay`` is the number of leading numerator coefficients pinned to zero;
    strictly proper entries have ``delay >= 1``.
    """

    num: int
    den: int
    delay: int = 1

    @property
    def n_params(self) -> int:
        return (self.num - self.delay + 1) + self.den


@dataclass(frozen=True)
class RationalTF:
    """Scalar rational transfer function with parametrization status."""

    num: Poly
    den: Poly = Poly((1.0,))
    status: Status = Status.KNOWN
    orders: OrderSpec | None = None

    def __post_init__(self):
        if self.den.coeffs[0] == 0.0:
            raise NotProper("denominator must have nonzero constant term")
        if self.status is Status.ZERO and not self.num.is_zero:
            raise ValueError("StructuralZero entry with nonzero numerator")
        # Canonical form: unit constant term in the denominator.
        d0 = self.den.coeffs[0]
        if d0 != 1.0:
            object.__setattr__(self, "num", self.num.scale(1.0 / d0))
            object.__setattr__(self, "den", self.den.scale(1.0 / d0))
        if self.status is Status.PARAMETRIZED and self.orders is None:
            delay = 0
            for c in self.num.coeffs:
                if c == 0.0:
                    delay += 1
                else:
                    break
            if self.num.is_zero:
                delay = 1
            object.__setattr__(
                self,
                "orders",
                OrderSpec(max(self.num.degree, delay), self.den.degree, delay),
            )

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def strictly_proper(self) -> bool:
        return self.num.coeffs[0] == 0.0

    @property
    def direct_term(self) -> float:
        return self.num.coeffs[0] / self.den.coeffs[0]

    def with_status(self, status: Status, orders: OrderSpec | None = None) -> "RationalTF":
        return RationalTF(self.num, self.den, status, orders)


def tf(num: Sequence[float], den: Sequence[float] = (1.0,), status: Status = Status.KNOWN,
       orders: OrderSpec | None = None) -> RationalTF:
    return RationalTF(Poly(tuple(num)), Poly(tuple(den)), status, orders)


def zero_tf() -> RationalTF:
    return RationalTF(Poly((0.0,)), Poly((1.0,)), Status.ZERO)


def unit_tf() -> RationalTF:
    return tf([1.0])


def eval_tf(f: RationalTF, z: complex) -> complex:
    """Evaluate at a point of the unit circle, ``z = e^{-i w}``."""
    d = f.den(z)
    if abs(d) < _POLE_TOL:
        raise PoleOnGrid(z, abs(d))
    return f.num(z) / d


def _check_cap(p: Poly, cap: int) -> Poly:
    if p.degree > cap:
        raise DegreeOverflow(f"degree {p.degree} exceeds cap {cap}")
    return p


def tf_add(a: RationalTF, b: RationalTF, cap: int = DEGREE_CAP) -> RationalTF:
    if a.is_zero:
        return RationalTF(b.num, b.den)
    if b.is_zero:
        return RationalTF(a.num, a.den)
    num = _check_cap(a.num * b.den + b.num * a.den, cap)
    den = _check_cap(a.den * b.den, cap)
    return RationalTF(num, den)


def tf_sub(a: RationalTF, b: RationalTF, cap: int = DEGREE_CAP) -> RationalTF:
    return tf_add(a, RationalTF(b.num.scale(-1.0), b.den), cap)


def tf_mul(a: RationalTF, b: RationalTF, cap: int = DEGREE_CAP) -> RationalTF:
    if a.is_zero or b.is_zero:
        return zero_tf()
    num = _check_cap(a.num * b.num, cap)
    den = _check_cap(a.den * b.den, cap)
    return RationalTF(num, den)


def tf_inv(a: RationalTF) -> RationalTF:
    """Invert a biproper transfer function (nonzero direct term)."""
    if a.num.coeffs[0] == 0.0:
        raise NotProper("inverse of a strictly proper function is not proper")
    return RationalTF(a.den, a.num)


@dataclass
class TFMatrix:
    """Dense matrix of rational transfer functions."""

    entries: list[list[RationalTF]]

    def __post_init__(self):
        if self.entries:
            w = len(self.entries[0])
            if any(len(r) != w for r in self.entries):
                raise ValueError("ragged TFMatrix")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, rc: tuple[int, int]) -> RationalTF:
        return self.entries[rc[0]][rc[1]]

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "TFMatrix":
        return cls([[zero_tf() for _ in range(cols)] for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "TFMatrix":
        m = cls.zeros(n, n)
        for k in range(n):
            m.entries[k][k] = unit_tf()
        return m

    def is_hollow(self) -> bool:
        """All diagonal entries structurally zero."""
        n = min(self.rows, self.cols)
        return all(self.entries[k][k].status is Status.ZERO for k in range(n))

    def is_monic(self) -> bool:
        """Square, unit direct term on the diagonal, strictly proper off it."""
        if self.rows != self.cols:
            return False
        for r in range(self.rows):
            for c in range(self.cols):
                e = self.entries[r][c]
                if r == c:
                    if e.is_zero or abs(e.direct_term - 1.0) > 0.0:
                        return False
                elif not (e.is_zero or e.strictly_proper):
                    return False
        return True

    def all_strictly_proper(self) -> bool:
        return all(e.is_zero or e.strictly_proper for row in self.entries for e in row)

    def all_proper(self) -> bool:
        # Properness is enforced per entry at construction time.
        return True

    def direct_matrix(self) -> np.ndarray:
        return np.array([[e.direct_term for e in row] for row in self.entries])

    def __call__(self, z: complex) -> np.ndarray:
        out = np.empty((self.rows, self.cols), dtype=complex)
        for r in range(self.rows):
            for c in range(self.cols):
                e = self.entries[r][c]
                out[r, c] = 0.0 if e.is_zero else eval_tf(e, z)
        return out


@dataclass
class StateSpace:
    """Discrete state-space quadruple, forward-time convention."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.B = np.atleast_2d(np.asarray(self.B, dtype=float))
        self.C = np.atleast_2d(np.asarray(self.C, dtype=float))
        self.D = np.atleast_2d(np.asarray(self.D, dtype=float))
        n = self.A.shape[0]
        if self.A.shape != (n, n) or self.B.shape[0] != n or self.C.shape[1] != n:
            if n == 0:
                self.A = np.zeros((0, 0))
                self.B = np.zeros((0, self.D.shape[1]))
                self.C = np.zeros((self.D.shape[0], 0))
            else:
                raise ValueError("non-conformable state-space dimensions")
        if self.D.shape != (self.C.shape[0], self.B.shape[1]):
            raise ValueError("non-conformable D")

    @property
    def n_states(self) -> int:
        return self.A.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.B.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.C.shape[0]

    def spectral_radius(self) -> float:
        if self.n_states == 0:
            return 0.0
        return float(np.max(np.abs(np.linalg.eigvals(self.A))))

    def is_stable(self, tol: float = 1e-8) -> bool:
        return self.spectral_radius() < 1.0 - tol

    def response(self, z: complex) -> np.ndarray:
        """Frequency response at the delay-variable point ``z = e^{-i w}``."""
        if self.n_states == 0:
            return self.D.astype(complex)
        lam = 1.0 / z  # forward z-variable
        n = self.n_states
        x = np.linalg.solve(lam * np.eye(n) - self.A, self.B)
        return self.C @ x + self.D


def tf2ss(num: Sequence[float], den: Sequence[float]) -> StateSpace:
    """Controllable-canonical realization of a scalar rational function.

    ``num``/``den`` are ascending delay powers with ``den[0] != 0``.
    """
    num = list(_trim(num))
    den = list(_trim(den))
    if den[0] == 0.0:
        raise NotProper("denominator constant term is zero")
    d0 = den[0]
    num = [c / d0 for c in num]
    den = [c / d0 for c in den]
    # Properness in the delay convention only needs den[0] != 0; the numerator
    # degree may exceed the denominator degree (pure delays are causal FIR).
    n = max(len(den), len(num)) - 1
    num = num + [0.0] * (n + 1 - len(num))
    den = den + [0.0] * (n + 1 - len(den))
    d = num[0]
    if n == 0:
        return StateSpace(np.zeros((0, 0)), np.zeros((0, 1)), np.zeros((1, 0)), [[d]])
    a = den[1:]
    # Strictly proper part coefficients: b_k - d * a_k for k = 1..n.
    b = [num[k] - d * a[k - 1] for k in range(1, n + 1)]
    A = np.zeros((n, n))
    A[0, :] = [-ak for ak in a]
    for k in range(1, n):
        A[k, k - 1] = 1.0
    B = np.zeros((n, 1))
    B[0, 0] = 1.0
    C = np.array([b])
    return StateSpace(A, B, C, [[d]])


def realize(m: TFMatrix) -> StateSpace:
    """Block-diagonal realization of a TFMatrix, one SISO block per entry."""
    blocks: list[StateSpace] = []
    places: list[tuple[int, int]] = []
    D = np.zeros((m.rows, m.cols))
    for r in range(m.rows):
        for c in range(m.cols):
            e = m.entries[r][c]
            if e.is_zero:
                continue
            ss = tf2ss(e.num.coeffs, e.den.coeffs)
            D[r, c] += ss.D[0, 0]
            if ss.n_states:
                blocks.append(ss)
                places.append((r, c))
    n = sum(b.n_states for b in blocks)
    A = np.zeros((n, n))
    B = np.zeros((n, m.cols))
    C = np.zeros((m.rows, n))
    at = 0
    for ss, (r, c) in zip(blocks, places):
        k = ss.n_states
        A[at:at + k, at:at + k] = ss.A
        B[at:at + k, c] = ss.B[:, 0]
        C[r, at:at + k] = ss.C[0, :]
        at += k
    return StateSpace(A, B, C, D)


def series(g: StateSpace, h: StateSpace) -> StateSpace:
    """Cascade h followed by g: output = g(h(input))."""
    if g.n_inputs != h.n_outputs:
        raise ValueError("series dimension mismatch")
    ng, nh = g.n_states, h.n_states
    A = np.zeros((ng + nh, ng + nh))
    A[:ng, :ng] = g.A
    A[:ng, ng:] = g.B @ h.C
    A[ng:, ng:] = h.A
    B = np.vstack([g.B @ h.D, h.B])
    C = np.hstack([g.C, g.D @ h.C])
    return StateSpace(A, B, C, g.D @ h.D)


def hstack_ss(systems: list[StateSpace]) -> StateSpace:
    """Horizontal concatenation [G1 G2 ...]: inputs stacked, outputs summed."""
    n = sum(s.n_states for s in systems)
    p = systems[0].n_outputs
    m = sum(s.n_inputs for s in systems)
    A = np.zeros((n, n))
    B = np.zeros((n, m))
    C = np.zeros((p, n))
    D = np.zeros((p, m))
    at, col = 0, 0
    for s in systems:
        k, mi = s.n_states, s.n_inputs
        A[at:at + k, at:at + k] = s.A
        B[at:at + k, col:col + mi] = s.B
        C[:, at:at + k] = s.C
        D[:, col:col + mi] = s.D
        at += k
        col += mi
    return StateSpace(A, B, C, D)


def feedback_unity(g: StateSpace) -> StateSpace:
    """Closed loop of ``y = g(y) + v`` for square g with nilpotent direct term.

    Requires ``I - D`` invertible; returns the map from v to y.
    """
    p = g.n_outputs
    if g.n_inputs != p:
        raise ValueError("unity feedback needs a square system")
    M = np.eye(p) - g.D
    try:
        Minv = np.linalg.inv(M)
    except np.linalg.LinAlgError as exc:
        raise NotProper("algebraic loop: I - D singular") from exc
    # y = C x + D y + v  =>  y = Minv (C x + v)
    A = g.A + g.B @ Minv @ g.C
    B = g.B @ Minv
    C = Minv @ g.C
    D = Minv
    return StateSpace(A, B, C, D)


def inverse_monic(h: StateSpace) -> StateSpace:
    """Inverse of a system with identity direct term."""
    if not np.allclose(h.D, np.eye(h.n_outputs)):
        raise ValueError("inverse_monic expects D = I")
    return StateSpace(h.A - h.B @ h.C, h.B, -h.C, np.eye(h.n_outputs))
