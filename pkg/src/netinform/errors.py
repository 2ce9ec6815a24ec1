"""Exception types shared across the package."""


class NetinformError(Exception):
    """Base class for all package errors."""


class DegreeOverflow(NetinformError):
    """Polynomial arithmetic exceeded the configured degree cap.

    Callers should switch to pointwise frequency-domain arithmetic.
    """


class NotProper(NetinformError):
    """A transfer function or matrix is not proper in the unit delay."""


class PoleOnGrid(NetinformError):
    """A denominator vanishes at a requested frequency point."""

    def __init__(self, z: complex, magnitude: float):
        super().__init__(f"denominator magnitude {magnitude:.3e} at z={z}")
        self.z = z
        self.magnitude = magnitude


class SingularAtFrequency(NetinformError):
    """A matrix inversion failed at a specific grid frequency."""

    def __init__(self, omega: float, detail: str = ""):
        super().__init__(f"singular matrix at omega={omega:.6g} {detail}".rstrip())
        self.omega = omega


class StructuralViolation(NetinformError):
    """A block that must vanish by disconnecting-set structure did not."""


class SchemaError(NetinformError):
    """Malformed network / predictor document."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer


class UnknownLabel(SchemaError):
    """A document references a signal or node that does not exist."""


class NoCutExists(NetinformError):
    """Separation impossible with the vertices that are allowed in the cut."""


class CardinalityBoundExceeded(NetinformError):
    """Disconnecting-set enumeration hit its cardinality bound."""


class HypothesisViolation(NetinformError):
    """A parametrization-independence hypothesis required by a result fails."""


class RiccatiDivergence(NetinformError):
    """The Riccati fixed-point iteration did not converge."""


class NumericalBlowup(NetinformError):
    """Simulated signals escaped the stability guard."""


class NonConvergence(NetinformError):
    """Optimizer stopped without meeting its tolerance (best iterate kept)."""


class OrderMismatch(NetinformError):
    """Estimation orders inconsistent with the predictor parametrization."""
