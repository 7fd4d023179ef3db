"""Extended-CRLH (E-CRLH) unit cell: immittances, resonances, Bloch dispersion.

The unit cell merges a conventional CRLH half with its dual.  The
series branch is a series L-C leg (l_r_c, c_l_c) in series with a
parallel tank (l_r_d || c_l_d); the shunt branch is a parallel tank
(c_r_c || l_l_c) in parallel with a series L-C leg (l_l_d, c_r_d).
Each branch is a lossless Foster immittance with one internal pole, so
the structure supports four independent operating frequencies.

The cell is modeled as the symmetric T  series(Z) - shunt(Y) - series(Z).
That construction makes the chain-matrix entry a equal to 1 + Z*Y, so
the per-cell dispersion relation is cos(gamma*p) = 1 + Z*Y and the
Bloch impedance is sqrt(Z/Y) * sqrt(2 + Z*Y) = sqrt(b/c).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import PoleSingularityError, UnboundedImpedanceError
from .twoport import OPEN, TwoPortMatrix, cascade, input_impedance, series_element, shunt_element

__all__ = [
    "POLE_GUARD_REL",
    "ElementSet",
    "UnitCell",
    "ResonanceSet",
    "DispersionPoint",
    "resonant_frequencies",
    "series_impedance",
    "shunt_admittance",
    "unit_cell_abcd",
    "bloch_gamma",
    "bloch_impedance",
    "bloch_impedance_approx",
    "stub_input_impedance",
]

TWO_PI = 2.0 * math.pi

# Lossless evaluation closer than this (relative) to a branch pole raises
# PoleSingularityError instead of returning an overflowed number.
POLE_GUARD_REL = 1e-12


@dataclass(frozen=True)
class ElementSet:
    """The eight lumped values of the E-CRLH equivalent circuit, in SI units.

    Series branch: ``l_r_c`` in series with ``c_l_c``, in series with the
    tank ``l_r_d || c_l_d``.  Shunt branch: tank ``c_r_c || l_l_c`` in
    parallel with the leg ``l_l_d`` - ``c_r_d``.  All values must be
    strictly positive and finite.
    """

    c_r_c: float
    l_l_c: float
    l_l_d: float
    c_r_d: float
    l_r_c: float
    c_l_c: float
    c_l_d: float
    l_r_d: float

    def __post_init__(self) -> None:
        for name in self.__dataclass_fields__:
            raw = getattr(self, name)
            try:
                value = float(raw)
            except (TypeError, ValueError) as exc:
                raise ValueError(f"element {name} must be a number, got {raw!r}") from exc
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"element {name} must be positive and finite, got {value!r}")
            object.__setattr__(self, name, value)

    def scaled(self, k: float) -> "ElementSet":
        """Impedance-scaled copy: every L -> k*L, every C -> C/k."""
        if not (k > 0 and math.isfinite(k)):
            raise ValueError(f"scale factor must be positive and finite, got {k!r}")
        return ElementSet(
            c_r_c=self.c_r_c / k,
            l_l_c=self.l_l_c * k,
            l_l_d=self.l_l_d * k,
            c_r_d=self.c_r_d / k,
            l_r_c=self.l_r_c * k,
            c_l_c=self.c_l_c / k,
            c_l_d=self.c_l_d / k,
            l_r_d=self.l_r_d * k,
        )


@dataclass(frozen=True)
class UnitCell:
    """An :class:`ElementSet` plus the modeling conventions applied to it.

    half_series_convention
        When True, the series-branch formula uses l_r_c/2 and c_l_d/2 in
        its amplitude factors (the branch resonances are unchanged).
        Element values are used exactly as given when False (default).
    q_factor
        Optional uniform quality factor applied to every L and C:
        inductors gain the series resistance w*L/Q, capacitors the
        parallel conductance w*C/Q.  Absent means lossless.
    cell_length_p
        Physical cell length in meters; informational only (all phase
        quantities here are per cell).
    """

    elements: ElementSet
    half_series_convention: bool = False
    q_factor: float | None = None
    cell_length_p: float = 1.0e-3

    def __post_init__(self) -> None:
        if self.q_factor is not None:
            q = float(self.q_factor)
            if not (math.isfinite(q) and q > 0):
                raise ValueError(f"q_factor must be positive and finite, got {self.q_factor!r}")
            object.__setattr__(self, "q_factor", q)
        p = float(self.cell_length_p)
        if not (math.isfinite(p) and p > 0):
            raise ValueError(f"cell_length_p must be positive and finite, got {self.cell_length_p!r}")
        object.__setattr__(self, "cell_length_p", p)


@dataclass(frozen=True)
class ResonanceSet:
    """The four branch resonances in hertz.

    f_cs: series-leg resonance (l_r_c, c_l_c) -- zero of the series leg.
    f_dp: series-tank resonance (l_r_d, c_l_d) -- pole of Z.
    f_cp: shunt-tank resonance (l_l_c, c_r_c) -- zero of the tank admittance.
    f_ds: shunt-leg resonance (l_l_d, c_r_d) -- pole of Y.
    """

    f_cs: float
    f_dp: float
    f_cp: float
    f_ds: float


@dataclass(frozen=True)
class DispersionPoint:
    """Per-cell propagation constant and Bloch impedance at one frequency.

    gamma_p carries attenuation [nepers/cell] in its real part and phase
    [rad/cell] in its imaginary part; Re >= 0 and Im in [0, pi].
    """

    frequency: float
    gamma_p: complex
    z_bloch: complex


def _lc_resonance_hz(inductance: float, capacitance: float) -> float:
    return 1.0 / (TWO_PI * math.sqrt(inductance * capacitance))


def resonant_frequencies(elements: ElementSet) -> ResonanceSet:
    """The four L-C resonances of the branch legs and tanks, in hertz."""
    return ResonanceSet(
        f_cs=_lc_resonance_hz(elements.l_r_c, elements.c_l_c),
        f_dp=_lc_resonance_hz(elements.l_r_d, elements.c_l_d),
        f_cp=_lc_resonance_hz(elements.l_l_c, elements.c_r_c),
        f_ds=_lc_resonance_hz(elements.l_l_d, elements.c_r_d),
    )


def _series_branch(cell: UnitCell) -> tuple[float, float, float, float]:
    """Effective (leg L, leg C, tank L, tank C) of the series branch.

    The half-series convention halves the leg inductance and the tank
    capacitance; the complementary elements double so both resonances
    stay where the as-given values put them.
    """
    e = cell.elements
    if cell.half_series_convention:
        return e.l_r_c / 2.0, 2.0 * e.c_l_c, 2.0 * e.l_r_d, e.c_l_d / 2.0
    return e.l_r_c, e.c_l_c, e.l_r_d, e.c_l_d


def _check_frequency(frequency: float) -> float:
    if not (isinstance(frequency, (int, float)) and math.isfinite(frequency) and frequency > 0):
        raise ValueError(f"frequency must be positive and finite, got {frequency!r}")
    return float(frequency)


def _guard_pole(cell: UnitCell, frequency: float, pole_hz: float, branch: str) -> None:
    if cell.q_factor is None and abs(frequency - pole_hz) <= POLE_GUARD_REL * pole_hz:
        raise PoleSingularityError(frequency, pole_hz, branch)


def _inductor_z(omega: float, inductance: float, q: float) -> complex:
    x = omega * inductance
    return complex(x / q, x)


def _capacitor_y(omega: float, capacitance: float, q: float) -> complex:
    b = omega * capacitance
    return complex(b / q, b)


def series_impedance(cell: UnitCell, frequency: float) -> complex:
    """Series-branch impedance Z of one cell [ohm].

    Lossless cells return an exactly purely imaginary value; the leg
    term vanishes exactly at f_cs and the tank pole at f_dp is guarded
    (see :data:`POLE_GUARD_REL`).
    """
    frequency = _check_frequency(frequency)
    res = resonant_frequencies(cell.elements)
    _guard_pole(cell, frequency, res.f_dp, "series branch")
    l_leg, c_leg, l_tank, c_tank = _series_branch(cell)
    omega = TWO_PI * frequency
    if cell.q_factor is None:
        x = omega * l_leg * (1.0 - (res.f_cs / frequency) ** 2) - 1.0 / (
            omega * c_tank * (1.0 - (res.f_dp / frequency) ** 2)
        )
        return complex(0.0, x)
    q = cell.q_factor
    z = _inductor_z(omega, l_leg, q) + 1.0 / _capacitor_y(omega, c_leg, q)
    z += 1.0 / (1.0 / _inductor_z(omega, l_tank, q) + _capacitor_y(omega, c_tank, q))
    return z


def shunt_admittance(cell: UnitCell, frequency: float) -> complex:
    """Shunt-branch admittance Y of one cell [S].

    Tank admittance (c_r_c || l_l_c) plus the series-leg admittance
    (l_l_d, c_r_d); the tank term vanishes exactly at f_cp and the leg
    pole at f_ds is guarded.
    """
    frequency = _check_frequency(frequency)
    e = cell.elements
    res = resonant_frequencies(e)
    _guard_pole(cell, frequency, res.f_ds, "shunt branch")
    omega = TWO_PI * frequency
    if cell.q_factor is None:
        b = omega * e.c_r_c * (1.0 - (res.f_cp / frequency) ** 2) - 1.0 / (
            omega * e.l_l_d * (1.0 - (res.f_ds / frequency) ** 2)
        )
        return complex(0.0, b)
    q = cell.q_factor
    y = _capacitor_y(omega, e.c_r_c, q) + 1.0 / _inductor_z(omega, e.l_l_c, q)
    y += 1.0 / (_inductor_z(omega, e.l_l_d, q) + 1.0 / _capacitor_y(omega, e.c_r_d, q))
    return y


def _symmetric_t(z: complex, y: complex) -> TwoPortMatrix:
    arm = series_element(z)
    return cascade(arm, shunt_element(y), arm)


def unit_cell_abcd(cell: UnitCell, frequency: float) -> TwoPortMatrix:
    """Chain matrix of one cell: the symmetric T  series(Z)-shunt(Y)-series(Z)."""
    return _symmetric_t(series_impedance(cell, frequency), shunt_admittance(cell, frequency))


def _gamma_from_cos(w: complex) -> complex:
    """Invert cos(gamma) = w onto the branch Re(gamma) >= 0, Im(gamma) in [0, pi]."""
    w = complex(w)
    if w.imag != 0.0:
        g = cmath.acosh(w)
        return complex(abs(g.real), abs(g.imag))
    x = w.real
    if -1.0 <= x <= 1.0:
        return complex(0.0, math.acos(x))
    if x > 1.0:
        return complex(math.acosh(x), 0.0)
    return complex(math.acosh(-x), math.pi)


def bloch_gamma(cell: UnitCell, frequency: float) -> complex:
    """Per-cell propagation constant gamma*p from cos(gamma*p) = 1 + Z*Y.

    The branch is chosen so Re >= 0 (passive attenuation) and
    Im in [0, pi] (single-valued, magnitude-of-phase convention).  In a
    lossless passband (|1 + ZY| <= 1) the real part is exactly zero.
    """
    z = series_impedance(cell, frequency)
    y = shunt_admittance(cell, frequency)
    return _gamma_from_cos(1.0 + z * y)


def bloch_impedance(cell: UnitCell, frequency: float) -> complex:
    """Bloch impedance sqrt(Z/Y) * sqrt(2 + Z*Y) [ohm], Re >= 0 convention."""
    z = series_impedance(cell, frequency)
    y = shunt_admittance(cell, frequency)
    if y == 0:
        raise UnboundedImpedanceError(f"shunt admittance vanishes at {frequency} Hz")
    zb = cmath.sqrt(z / y) * cmath.sqrt(2.0 + z * y)
    return -zb if zb.real < 0.0 else zb


def bloch_impedance_approx(cell: UnitCell, frequency: float) -> complex:
    """Balanced-point approximation sqrt(2*Z/Y) [ohm]; exact where Z*Y = 0."""
    z = series_impedance(cell, frequency)
    y = shunt_admittance(cell, frequency)
    if y == 0:
        raise UnboundedImpedanceError(f"shunt admittance vanishes at {frequency} Hz")
    zb = cmath.sqrt(2.0 * z / y)
    return -zb if zb.real < 0.0 else zb


def stub_input_impedance(cell: UnitCell, n_cells: int, frequency: float) -> complex:
    """Input impedance of ``n_cells`` cascaded cells terminated in an open [ohm].

    This is the a/c ratio of the cascade; a frequency where 1 + ZY = 0
    returns exactly zero for a single cell (the open looks like a short).
    Raises :class:`UnboundedImpedanceError` when the cascade's c entry is
    exactly zero.
    """
    if not (isinstance(n_cells, int) and not isinstance(n_cells, bool) and n_cells >= 1):
        raise ValueError(f"n_cells must be a positive integer, got {n_cells!r}")
    matrix = unit_cell_abcd(cell, frequency)
    total = matrix
    for _ in range(n_cells - 1):
        total = cascade(total, matrix)
    return input_impedance(total, OPEN)
