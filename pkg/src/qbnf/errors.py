"""Exception types shared across the toolkit.

Every domain failure derives from :class:`QbnfError` so callers can trap
model-level conditions (a pole hit, an infeasible synthesis) separately
from programming errors, which surface as plain ``ValueError``.
"""

from __future__ import annotations

__all__ = [
    "QbnfError",
    "PoleSingularityError",
    "UnboundedImpedanceError",
    "ShortCircuitError",
    "SingularConversionError",
    "StopbandPhaseError",
    "LossyCellError",
    "InfeasibleTargetsError",
    "NonphysicalSolutionError",
    "ConvergenceFailureError",
    "DegeneratePlanError",
    "ConfigError",
]


class QbnfError(Exception):
    """Base class for all domain errors raised by this package."""


class PoleSingularityError(QbnfError):
    """Evaluation requested exactly at a lossless immittance pole."""

    def __init__(self, frequency: float, pole: float, branch: str):
        self.frequency = frequency
        self.pole = pole
        self.branch = branch
        super().__init__(
            f"{branch} is singular: {frequency} Hz is within the guard band "
            f"of the lossless pole at {pole} Hz"
        )


class UnboundedImpedanceError(QbnfError):
    """An input impedance is infinite rather than merely large."""


class ShortCircuitError(QbnfError):
    """An ideal short sits across the line; no finite chain matrix exists."""

    def __init__(self, frequency: float):
        self.frequency = frequency
        super().__init__(
            f"stub presents an exact short at {frequency} Hz; the composite "
            "has a transmission zero and no finite chain matrix"
        )


class SingularConversionError(QbnfError):
    """The ABCD-to-S conversion denominator vanished."""


class StopbandPhaseError(QbnfError):
    """Per-cell phase requested in a stopband where no pure phase exists."""

    def __init__(self, frequency: float, cos_value: float):
        self.frequency = frequency
        self.cos_value = cos_value
        super().__init__(
            f"{frequency} Hz lies in a stopband (|1 + ZY| = {abs(cos_value):.6g} > 1); "
            "the per-cell shift is not a pure phase there"
        )


class LossyCellError(QbnfError):
    """Operation defined only for lossless cells was given a lossy one."""


class InfeasibleTargetsError(QbnfError):
    """No branch immittance of the required form can meet the samples."""


class NonphysicalSolutionError(QbnfError):
    """A fit solved the equations but produced a non-positive element."""

    def __init__(self, element: str, value: float):
        self.element = element
        self.value = value
        super().__init__(f"fitted {element} = {value:.6g} is not a positive element value")


class ConvergenceFailureError(QbnfError):
    """Synthesis finished but the residual stayed above tolerance."""

    def __init__(self, message: str, diagnostics=None):
        self.diagnostics = diagnostics
        super().__init__(message)


class DegeneratePlanError(QbnfError):
    """RF and LO coincide; the homodyne case has no image frequency."""


class ConfigError(QbnfError):
    """Configuration file is missing, malformed, or fails validation."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"config field '{field}': {message}")
