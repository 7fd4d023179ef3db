"""Two-port chain-matrix algebra and S-parameter conversion.

Chain (ABCD) matrices are the internal currency for all network math:
cascading sections is an exact matrix product, and conversion to
S-parameters happens once, at the analysis boundary, against a real
reference impedance.  Open-circuit terminations are a distinct marker
value (:data:`OPEN`) rather than a large surrogate resistance, so that
open-ended input-impedance transforms stay exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import SingularConversionError, UnboundedImpedanceError

__all__ = [
    "OPEN",
    "IDENTITY",
    "TwoPortMatrix",
    "SParameterPoint",
    "series_element",
    "shunt_element",
    "tline_section",
    "cascade",
    "abcd_to_s",
    "input_impedance",
]


class _OpenCircuit:
    """Singleton marker for an open-circuit load."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "OPEN"


OPEN = _OpenCircuit()


def _as_finite_complex(value, name: str) -> complex:
    try:
        value = complex(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} must be a complex number, got {value!r}") from exc
    if not cmath.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class TwoPortMatrix:
    """Chain matrix [[a, b], [c, d]] of a two-port.

    ``a`` and ``d`` are dimensionless, ``b`` is in ohm and ``c`` in
    siemens.  Matrices built by this module's constructors, and any
    cascade of them, are reciprocal: a*d - b*c == 1 up to rounding.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, _as_finite_complex(getattr(self, name), name))

    @property
    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "TwoPortMatrix") -> "TwoPortMatrix":
        return cascade(self, other)


IDENTITY = TwoPortMatrix(1.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class SParameterPoint:
    """Complex S-parameters at one frequency against a real reference.

    ``pole_adjusted`` marks sweep points that were nudged off an exact
    lossless pole before evaluation (the stored frequency is the one
    actually evaluated).
    """

    frequency: float
    s11: complex
    s21: complex
    s12: complex
    s22: complex
    z_ref: float
    pole_adjusted: bool = False

    def __post_init__(self) -> None:
        if not (isinstance(self.frequency, (int, float)) and math.isfinite(self.frequency) and self.frequency > 0):
            raise ValueError(f"frequency must be positive and finite, got {self.frequency!r}")
        if not (isinstance(self.z_ref, (int, float)) and math.isfinite(self.z_ref) and self.z_ref > 0):
            raise ValueError(f"z_ref must be positive and finite, got {self.z_ref!r}")
        object.__setattr__(self, "frequency", float(self.frequency))
        object.__setattr__(self, "z_ref", float(self.z_ref))
        for name in ("s11", "s21", "s12", "s22"):
            object.__setattr__(self, name, _as_finite_complex(getattr(self, name), name))


def series_element(z) -> TwoPortMatrix:
    """Series impedance ``z``: [[1, z], [0, 1]]."""
    z = _as_finite_complex(z, "z")
    return TwoPortMatrix(1.0, z, 0.0, 1.0)


def shunt_element(y) -> TwoPortMatrix:
    """Shunt admittance ``y`` to ground: [[1, 0], [y, 1]]."""
    y = _as_finite_complex(y, "y")
    return TwoPortMatrix(1.0, 0.0, y, 1.0)


def tline_section(z0: float, theta: float) -> TwoPortMatrix:
    """Ideal lossless line: characteristic impedance ``z0``, electrical length ``theta`` [rad]."""
    if not (isinstance(z0, (int, float)) and math.isfinite(z0) and z0 > 0):
        raise ValueError(f"z0 must be positive and finite, got {z0!r}")
    if not (isinstance(theta, (int, float)) and math.isfinite(theta)):
        raise ValueError(f"theta must be finite, got {theta!r}")
    c = math.cos(theta)
    s = math.sin(theta)
    return TwoPortMatrix(c, complex(0.0, z0 * s), complex(0.0, s / z0), c)


def cascade(first: TwoPortMatrix, *rest: TwoPortMatrix) -> TwoPortMatrix:
    """Chain two-ports left to right (matrix product; associative)."""
    m = first
    for n in rest:
        m = TwoPortMatrix(
            m.a * n.a + m.b * n.c,
            m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c,
            m.c * n.b + m.d * n.d,
        )
    return m


def abcd_to_s(m: TwoPortMatrix, z_ref: float, frequency: float) -> SParameterPoint:
    """Convert a chain matrix to S-parameters against a real ``z_ref``.

    Uses the standard conversion; for reciprocal matrices (det == 1)
    s21 reduces to 2 / (a + b/z_ref + c*z_ref + d).  A vanishing
    denominator (impossible for passive networks) raises
    :class:`SingularConversionError`.
    """
    if not (isinstance(z_ref, (int, float)) and math.isfinite(z_ref) and z_ref > 0):
        raise ValueError(f"z_ref must be positive and finite, got {z_ref!r}")
    bz = m.b / z_ref
    cz = m.c * z_ref
    den = m.a + bz + cz + m.d
    if den == 0:
        raise SingularConversionError(f"ABCD->S denominator vanished at {frequency} Hz")
    return SParameterPoint(
        frequency=frequency,
        s11=(m.a + bz - cz - m.d) / den,
        s21=2.0 / den,
        s12=2.0 * m.determinant / den,
        s22=(-m.a + bz - cz + m.d) / den,
        z_ref=z_ref,
    )


def input_impedance(m: TwoPortMatrix, z_load) -> complex:
    """Impedance seen at port 1 with port 2 terminated in ``z_load``.

    ``z_load`` may be :data:`OPEN`, in which case the exact open-circuit
    limit a/c is returned.  A termination that makes the input impedance
    infinite raises :class:`UnboundedImpedanceError` (distinct from any
    numeric overflow).
    """
    if z_load is OPEN:
        if m.c == 0:
            raise UnboundedImpedanceError(
                "open-circuited network with c == 0 has unbounded input impedance"
            )
        return m.a / m.c
    z_load = _as_finite_complex(z_load, "z_load")
    den = m.c * z_load + m.d
    if den == 0:
        raise UnboundedImpedanceError(
            f"termination {z_load!r} makes the input impedance unbounded"
        )
    return (m.a * z_load + m.b) / den
