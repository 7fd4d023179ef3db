"""Notch-filter model: a through line loaded mid-span with an open-ended stub.

The host microstrip is split into two equal ideal line sections with the
E-CRLH stub tapped between them as a shunt element.  Wherever the stub's
per-cell dispersion satisfies 1 + Z*Y = 0 (a quarter-wave per-cell phase),
the open end transforms to a short across the line and transmission drops
to zero, independent of the host-line geometry.  This module sweeps the
composite S-parameters and locates/characterizes those notches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import bisect, minimize_scalar

from .ecrlh import (
    DispersionPoint,
    UnitCell,
    bloch_gamma,
    bloch_impedance,
    resonant_frequencies,
    series_impedance,
    shunt_admittance,
    stub_input_impedance,
)
from .errors import (
    LossyCellError,
    PoleSingularityError,
    ShortCircuitError,
    StopbandPhaseError,
    UnboundedImpedanceError,
)
from .twoport import SParameterPoint, TwoPortMatrix, abcd_to_s, cascade, input_impedance, shunt_element, tline_section

__all__ = [
    "DEPTH_FLOOR_DB",
    "DETECT_THRESHOLD_DB",
    "REPORT_THRESHOLD_DB",
    "FilterTopology",
    "SweepGrid",
    "NotchReport",
    "assemble",
    "sparams_at",
    "sweep_sparams",
    "dispersion_sweep",
    "locate_notches",
    "notch_report",
    "phase_shift",
]

# Reported lossless transmission zeros are floored here; true -inf dB is
# not representable in finite output files.
DEPTH_FLOOR_DB = -120.0
# A grid dip must reach this level to be treated as a notch candidate.
DETECT_THRESHOLD_DB = -10.0
# Rejection level a notch must meet to count as a filtering claim.
REPORT_THRESHOLD_DB = -20.0

# Relative nudge applied to grid points that land exactly on a lossless pole.
_POLE_NUDGE_REL = 1e-9
# Relative golden-section frequency tolerance for notch refinement.
_REFINE_XTOL = 1e-12


@dataclass(frozen=True)
class FilterTopology:
    """Host-line and reference parameters of the assembled filter.

    theta_per_side is the electrical length of each through-line half at
    f_ref; it scales linearly with frequency.  Defaults model a 50 ohm
    system with a modest 20 degree half-line at 1 GHz and a single-cell
    stub; notch positions do not depend on these host-line choices.
    """

    z0_line: float = 50.0
    theta_per_side: float = math.radians(20.0)
    f_ref: float = 1.0e9
    n_cells: int = 1
    z_ref: float = 50.0

    def __post_init__(self) -> None:
        for name in ("z0_line", "f_ref", "z_ref"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
            object.__setattr__(self, name, v)
        th = float(self.theta_per_side)
        if not (math.isfinite(th) and th >= 0):
            raise ValueError(f"theta_per_side must be non-negative, got {th!r}")
        object.__setattr__(self, "theta_per_side", th)
        if not (isinstance(self.n_cells, int) and not isinstance(self.n_cells, bool) and self.n_cells >= 1):
            raise ValueError(f"n_cells must be a positive integer, got {self.n_cells!r}")

    def theta_at(self, frequency: float) -> float:
        """Electrical length of one through-line half at ``frequency`` [rad]."""
        return self.theta_per_side * frequency / self.f_ref


@dataclass(frozen=True)
class SweepGrid:
    """Linearly spaced frequency grid."""

    f_start: float
    f_stop: float
    n_points: int
    spacing: str = "linear"

    def __post_init__(self) -> None:
        f_start = float(self.f_start)
        f_stop = float(self.f_stop)
        if not (math.isfinite(f_start) and math.isfinite(f_stop) and 0 < f_start < f_stop):
            raise ValueError(f"grid needs 0 < f_start < f_stop, got {f_start!r}, {f_stop!r}")
        if not (isinstance(self.n_points, int) and not isinstance(self.n_points, bool) and self.n_points >= 2):
            raise ValueError(f"n_points must be an integer >= 2, got {self.n_points!r}")
        if self.spacing != "linear":
            raise ValueError(f"only linear spacing is supported, got {self.spacing!r}")
        object.__setattr__(self, "f_start", f_start)
        object.__setattr__(self, "f_stop", f_stop)

    def frequencies(self) -> list[float]:
        return [float(f) for f in np.linspace(self.f_start, self.f_stop, self.n_points)]


@dataclass(frozen=True)
class NotchReport:
    """One detected notch: refined position, depth, and 10 dB bandwidth."""

    f_notch: float
    depth_db: float
    bw_10db: float
    refined: bool

    def __post_init__(self) -> None:
        if not self.depth_db <= DETECT_THRESHOLD_DB:
            raise ValueError(f"reported notch depth must be <= {DETECT_THRESHOLD_DB} dB, got {self.depth_db!r}")
        if self.refined and not self.bw_10db > 0:
            raise ValueError(f"refined notch must carry a positive bandwidth, got {self.bw_10db!r}")


def _stub_impedance(cell: UnitCell | None, n_cells: int, frequency: float) -> complex | None:
    """Stub input impedance, or None when the stub is absent/unbounded."""
    if cell is None:
        return None
    try:
        return stub_input_impedance(cell, n_cells, frequency)
    except UnboundedImpedanceError:
        return None


def assemble(topology: FilterTopology, cell: UnitCell | None, frequency: float) -> TwoPortMatrix:
    """Chain matrix of line - shunt stub - line at one frequency.

    An unbounded stub impedance contributes nothing and the shunt element
    is omitted; ``cell=None`` models the bare host line.  An exactly-zero
    stub impedance is an ideal short across the line, which has no finite
    chain matrix: that raises :class:`ShortCircuitError` (the S-parameter
    path in :func:`sparams_at` handles it as an exact transmission zero).
    """
    arm = tline_section(topology.z0_line, topology.theta_at(frequency))
    z_stub = _stub_impedance(cell, topology.n_cells, frequency)
    if z_stub is None:
        return cascade(arm, arm)
    if z_stub == 0:
        raise ShortCircuitError(frequency)
    return cascade(arm, shunt_element(1.0 / z_stub), arm)


def sparams_at(topology: FilterTopology, cell: UnitCell | None, frequency: float) -> SParameterPoint:
    """S-parameters of the assembled filter at one frequency.

    Handles the exact transmission zero (stub impedance identically
    zero): |S21| is exactly 0 there and the reflection is that of the
    shorted half-line.
    """
    try:
        matrix = assemble(topology, cell, frequency)
    except ShortCircuitError:
        arm = tline_section(topology.z0_line, topology.theta_at(frequency))
        try:
            z_in = input_impedance(arm, 0j)
            s11 = (z_in - topology.z_ref) / (z_in + topology.z_ref)
        except UnboundedImpedanceError:
            s11 = complex(1.0)
        return SParameterPoint(frequency, s11, 0j, 0j, s11, topology.z_ref)
    return abcd_to_s(matrix, topology.z_ref, frequency)


def _sparams_nudged(topology: FilterTopology, cell: UnitCell | None, frequency: float) -> SParameterPoint:
    try:
        return sparams_at(topology, cell, frequency)
    except PoleSingularityError:
        point = sparams_at(topology, cell, frequency * (1.0 + _POLE_NUDGE_REL))
        return replace(point, pole_adjusted=True)


def sweep_sparams(topology: FilterTopology, cell: UnitCell | None, grid: SweepGrid) -> list[SParameterPoint]:
    """One S-parameter point per grid frequency, in grid order.

    Grid points that hit an exact lossless pole are nudged up by 1e-9
    relative and flagged ``pole_adjusted`` rather than dropped, so the
    sweep is total and deterministic.
    """
    return [_sparams_nudged(topology, cell, f) for f in grid.frequencies()]


def dispersion_sweep(cell: UnitCell, grid: SweepGrid) -> list[DispersionPoint]:
    """Per-cell propagation constant and Bloch impedance over a grid.

    Applies the same pole-nudging policy as :func:`sweep_sparams`; points
    where the shunt branch admittance vanishes exactly are nudged too so
    every row stays finite.
    """
    points = []
    for f in grid.frequencies():
        try:
            points.append(DispersionPoint(f, bloch_gamma(cell, f), bloch_impedance(cell, f)))
        except (PoleSingularityError, UnboundedImpedanceError):
            f2 = f * (1.0 + _POLE_NUDGE_REL)
            points.append(DispersionPoint(f2, bloch_gamma(cell, f2), bloch_impedance(cell, f2)))
    return points


def _dispersion_real(cell: UnitCell):
    """1 + Z*Y as a real-valued function of frequency (lossless cells only)."""

    def g(frequency: float) -> float:
        z = series_impedance(cell, frequency)
        y = shunt_admittance(cell, frequency)
        return 1.0 + (z * y).real

    return g


def locate_notches(cell: UnitCell, band: tuple[float, float], scan_points: int = 2000) -> list[float]:
    """All frequencies in ``band`` where 1 + Z*Y = 0, sorted ascending.

    These are the transmission zeros of any filter built on this stub
    (the per-cell phase is a quarter wave there).  The band is
    partitioned at the four branch resonances, each piece is scanned on
    ``scan_points`` samples, and sign changes are refined by bisection to
    machine precision.  Only lossless cells have a real-valued root
    condition; lossy cells raise :class:`LossyCellError`.
    """
    if cell.q_factor is not None:
        raise LossyCellError("notch location needs a lossless cell (real 1 + ZY)")
    f_lo, f_hi = float(band[0]), float(band[1])
    if not (math.isfinite(f_lo) and math.isfinite(f_hi) and 0 < f_lo < f_hi):
        raise ValueError(f"band must satisfy 0 < f_lo < f_hi, got {band!r}")
    res = resonant_frequencies(cell.elements)
    partitions = sorted({res.f_cs, res.f_dp, res.f_cp, res.f_ds})
    edges = [f_lo] + [p for p in partitions if f_lo < p < f_hi] + [f_hi]
    g = _dispersion_real(cell)
    roots: list[float] = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        a = lo * (1.0 + _POLE_NUDGE_REL)
        b = hi * (1.0 - _POLE_NUDGE_REL)
        if not a < b:
            continue
        xs = np.linspace(a, b, scan_points)
        vals = np.array([g(float(x)) for x in xs])
        for i in range(scan_points - 1):
            vi, vj = vals[i], vals[i + 1]
            if vi == 0.0:
                roots.append(float(xs[i]))
            elif np.isfinite(vi) and np.isfinite(vj) and vi * vj < 0:
                roots.append(float(bisect(g, float(xs[i]), float(xs[i + 1]))))
        if vals[-1] == 0.0:
            roots.append(float(xs[-1]))
    roots.sort()
    deduped: list[float] = []
    for r in roots:
        if not deduped or r - deduped[-1] > 1e-9 * r:
            deduped.append(r)
    return deduped


def _s21_magnitude(topology: FilterTopology, cell: UnitCell | None):
    def mag(frequency: float) -> float:
        return abs(_sparams_nudged(topology, cell, frequency).s21)

    return mag


def _db(magnitude: float) -> float:
    if magnitude <= 0.0:
        return DEPTH_FLOOR_DB
    return max(20.0 * math.log10(magnitude), DEPTH_FLOOR_DB)


def _crossing(mag, f_above: float, f_below: float, threshold: float) -> float:
    """Frequency where |s21| crosses ``threshold`` between the two samples."""

    def h(f: float) -> float:
        return mag(f) - threshold

    ha, hb = h(f_above), h(f_below)
    if ha == 0.0:
        return f_above
    if hb == 0.0:
        return f_below
    lo, hi = (f_above, f_below) if f_above < f_below else (f_below, f_above)
    return float(bisect(h, lo, hi))


def notch_report(topology: FilterTopology, cell: UnitCell | None, grid: SweepGrid) -> list[NotchReport]:
    """Detect, refine, and characterize every notch visible on the grid.

    Grid-local minima of |s21| at or below the -10 dB detection level are
    refined by golden-section search; the 10 dB bandwidth is measured by
    bisection on the threshold crossings (clamped to the grid edges when
    the stop band runs off the sweep).  Depths are floored at -120 dB.
    """
    points = sweep_sparams(topology, cell, grid)
    freqs = [p.frequency for p in points]
    mags = [abs(p.s21) for p in points]
    mag = _s21_magnitude(topology, cell)
    detect_mag = 10.0 ** (DETECT_THRESHOLD_DB / 20.0)

    reports: list[NotchReport] = []
    for i in range(1, len(points) - 1):
        if not (mags[i] < mags[i - 1] and mags[i] < mags[i + 1]):
            continue
        if mags[i] > detect_mag:
            continue
        result = minimize_scalar(
            mag,
            bracket=(freqs[i - 1], freqs[i], freqs[i + 1]),
            method="golden",
            options={"xtol": _REFINE_XTOL, "maxiter": 10_000},
        )
        f_notch = float(result.x)
        depth_db = _db(min(float(result.fun), mags[i]))

        j = i
        while j > 0 and mags[j] <= detect_mag:
            j -= 1
        f_left = _crossing(mag, freqs[j], freqs[j + 1], detect_mag) if mags[j] > detect_mag else freqs[0]
        k = i
        while k < len(points) - 1 and mags[k] <= detect_mag:
            k += 1
        f_right = _crossing(mag, freqs[k], freqs[k - 1], detect_mag) if mags[k] > detect_mag else freqs[-1]

        reports.append(NotchReport(f_notch=f_notch, depth_db=depth_db, bw_10db=f_right - f_left, refined=True))
    return reports


def phase_shift(cell: UnitCell, frequency: float) -> float:
    """Per-cell phase shift beta*p in [0, pi] at a passband frequency [rad].

    Defined only where the lossless cell propagates (|1 + ZY| <= 1);
    stopband frequencies raise :class:`StopbandPhaseError`.  At a notch
    frequency the value is pi/2.
    """
    if cell.q_factor is not None:
        raise LossyCellError("per-cell phase needs a lossless cell")
    w = _dispersion_real(cell)(frequency)
    if abs(w) > 1.0:
        raise StopbandPhaseError(frequency, w)
    return math.acos(w)
