"""Quad-band synthesis: receiver frequency planning and element fitting.

A heterodyne receiver plan turns an (RF, LO) pair into its image and
second-harmonic interferer frequencies; four such interferers become the
notch targets.  Synthesis then factors the per-cell notch condition
Z*Y = -1 into branch targets Z = j*s*R and Y = j*s/R and fits each
Foster branch of the E-CRLH cell independently: for a trial internal
pole the three remaining branch parameters solve a linear system on the
first three samples, and a bracketed scalar root-find on the pole drives
the fourth-sample residual to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .ecrlh import ElementSet, UnitCell, series_impedance, shunt_admittance
from .errors import (
    ConvergenceFailureError,
    DegeneratePlanError,
    InfeasibleTargetsError,
    NonphysicalSolutionError,
)
from .filters import locate_notches

__all__ = [
    "RESIDUAL_TOL",
    "FrequencyPlan",
    "SynthesisSpec",
    "BranchFitDiagnostics",
    "SynthesisDiagnostics",
    "SynthesisResult",
    "ValidationCheck",
    "ValidationReport",
    "frequency_plan",
    "branch_reactance_fit",
    "branch_susceptance_fit",
    "synthesize",
    "validate",
]

TWO_PI = 2.0 * math.pi

# A synthesis is accepted only if |1 + ZY| at every target is below this.
RESIDUAL_TOL = 1e-6

# Relative inset applied to the automatic pole bracket so the bracket
# endpoints never coincide with sample frequencies (singular fit system).
_BRACKET_INSET_REL = 1e-6
# Scan resolution used to isolate a sign change of the pole residual.
_POLE_SCAN_POINTS = 2000


@dataclass(frozen=True)
class FrequencyPlan:
    """RF/LO/IF triple with the derived interferer frequencies [Hz].

    f_im is the image 2*f_lo - f_rf; f_sh is the second-harmonic
    interferer 2*f_lo + f_if.
    """

    f_rf: float
    f_lo: float
    f_if: float
    f_im: float
    f_sh: float

    def __post_init__(self) -> None:
        for name in ("f_rf", "f_lo", "f_if", "f_im", "f_sh"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
            object.__setattr__(self, name, v)
        if self.f_if != abs(self.f_rf - self.f_lo):
            raise ValueError("f_if must equal |f_rf - f_lo| exactly")
        if self.f_im != 2.0 * self.f_lo - self.f_rf:
            raise ValueError("f_im must equal 2*f_lo - f_rf exactly")
        if self.f_sh != 2.0 * self.f_lo + self.f_if:
            raise ValueError("f_sh must equal 2*f_lo + f_if exactly")


def frequency_plan(f_rf: float, f_lo: float) -> FrequencyPlan:
    """Derive the interferers a mixer folds onto the IF of an (RF, LO) pair.

    The image is f_rf + 2*f_if for low-side signals (f_rf < f_lo) and
    f_rf - 2*f_if for high-side ones; both equal 2*f_lo - f_rf.  Equal RF
    and LO is the homodyne case and raises
    :class:`DegeneratePlanError`.
    """
    for name, v in (("f_rf", f_rf), ("f_lo", f_lo)):
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise ValueError(f"{name} must be positive and finite, got {v!r}")
    f_rf = float(f_rf)
    f_lo = float(f_lo)
    if f_rf == f_lo:
        raise DegeneratePlanError("f_rf == f_lo: homodyne plan has no image frequency")
    f_if = abs(f_rf - f_lo)
    f_im = 2.0 * f_lo - f_rf
    if f_im <= 0:
        raise ValueError(f"image frequency 2*f_lo - f_rf = {f_im!r} Hz is not positive")
    return FrequencyPlan(f_rf=f_rf, f_lo=f_lo, f_if=f_if, f_im=f_im, f_sh=2.0 * f_lo + f_if)


@dataclass(frozen=True)
class SynthesisSpec:
    """Four strictly increasing notch targets plus the impedance scale.

    The sign pattern fixes the branch targets Z = j*s_i*r_scale and
    Y = j*s_i/r_scale; any alternating pattern satisfies Z*Y = -1, the
    default (-, +, -, +) keeps both Foster branches increasing on each
    side of their internal pole.
    """

    targets: tuple[float, float, float, float]
    r_scale: float = 50.0
    sign_pattern: tuple[int, int, int, int] = (-1, 1, -1, 1)

    def __post_init__(self) -> None:
        targets = tuple(float(t) for t in self.targets)
        if len(targets) != 4:
            raise ValueError(f"exactly four targets required, got {len(targets)}")
        for t in targets:
            if not (math.isfinite(t) and t > 0):
                raise ValueError(f"targets must be positive and finite, got {t!r}")
        if not all(a < b for a, b in zip(targets, targets[1:])):
            raise ValueError(f"targets must be strictly increasing, got {targets}")
        object.__setattr__(self, "targets", targets)
        r = float(self.r_scale)
        if not (math.isfinite(r) and r > 0):
            raise ValueError(f"r_scale must be positive and finite, got {self.r_scale!r}")
        object.__setattr__(self, "r_scale", r)
        pattern = tuple(int(s) for s in self.sign_pattern)
        if len(pattern) != 4 or any(s not in (-1, 1) for s in pattern):
            raise ValueError(f"sign_pattern entries must be +1 or -1, got {self.sign_pattern!r}")
        object.__setattr__(self, "sign_pattern", pattern)


@dataclass(frozen=True)
class BranchFitDiagnostics:
    """Root-finder bookkeeping for one branch fit."""

    iterations: int
    function_calls: int
    bracket: tuple[float, float]
    candidates_tried: int


@dataclass(frozen=True)
class SynthesisDiagnostics:
    series: BranchFitDiagnostics
    shunt: BranchFitDiagnostics


@dataclass(frozen=True)
class SynthesisResult:
    """Fitted elements with residuals and the fitted branch poles [Hz]."""

    elements: ElementSet
    residuals: tuple[float, float, float, float]
    pole_series: float
    pole_shunt: float
    diagnostics: SynthesisDiagnostics


@dataclass(frozen=True)
class _FosterFit:
    slope: float        # coefficient of the w*x term
    inverse: float      # coefficient of the -1/(w*x) term
    tank: float         # coefficient of the internal-pole term
    pole_w: float       # internal pole [rad/s]
    diagnostics: BranchFitDiagnostics


def _validate_samples(samples, kind: str) -> tuple[list[float], list[float]]:
    samples = list(samples)
    if len(samples) != 4:
        raise ValueError(f"exactly four samples required, got {len(samples)}")
    freqs = [float(f) for f, _ in samples]
    values = [float(v) for _, v in samples]
    for f in freqs:
        if not (math.isfinite(f) and f > 0):
            raise ValueError(f"sample frequencies must be positive and finite, got {f!r}")
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"sample {kind} values must be finite, got {v!r}")
    if not all(a < b for a, b in zip(freqs, freqs[1:])):
        raise ValueError(f"sample frequencies must be strictly increasing, got {freqs}")
    return freqs, values


def _check_monotone_sides(freqs, values, bracket, kind: str) -> None:
    lo, hi = bracket
    inside = [f for f in freqs if lo <= f <= hi]
    if inside:
        raise ValueError(
            f"sample frequencies {inside} lie inside the pole bracket; their pole side is ambiguous"
        )
    left = [v for f, v in zip(freqs, values) if f < lo]
    right = [v for f, v in zip(freqs, values) if f > hi]
    for side, vals in (("below", left), ("above", right)):
        if not all(a < b for a, b in zip(vals, vals[1:])):
            raise InfeasibleTargetsError(
                f"{kind} samples {side} the pole bracket are not strictly increasing; "
                "a lossless branch cannot decrease between poles"
            )


def _foster_fit(freqs_hz, values, bracket_hz, kind: str) -> _FosterFit:
    """Fit v(w) = w*slope - inverse/w + w*tank/(1 - w^2/wp^2) through four samples.

    For a trial pole the three linear coefficients come from the first
    three samples and the fourth sample's residual is driven to zero by
    a bracketed Brent root-find on the pole.  Frequencies are normalized
    to the samples' geometric mean so the linear system stays
    well-conditioned.
    """
    lo_hz, hi_hz = float(bracket_hz[0]), float(bracket_hz[1])
    if not (math.isfinite(lo_hz) and math.isfinite(hi_hz) and 0 < lo_hz < hi_hz):
        raise ValueError(f"pole bracket must satisfy 0 < lo < hi, got {bracket_hz!r}")
    _check_monotone_sides(freqs_hz, values, (lo_hz, hi_hz), kind)

    w_ref = math.exp(sum(math.log(TWO_PI * f) for f in freqs_hz) / 4.0)
    u = [TWO_PI * f / w_ref for f in freqs_hz]

    def solve3(u_pole: float) -> np.ndarray:
        rows = [[ui, -1.0 / ui, ui / (1.0 - (ui / u_pole) ** 2)] for ui in u[:3]]
        return np.linalg.solve(np.asarray(rows), np.asarray(values[:3]))

    def residual(u_pole: float) -> float:
        try:
            slope_n, inverse_n, tank_n = solve3(u_pole)
        except np.linalg.LinAlgError:
            return math.nan
        ui = u[3]
        model = ui * slope_n - inverse_n / ui + ui * tank_n / (1.0 - (ui / u_pole) ** 2)
        return model - values[3]

    u_lo = TWO_PI * lo_hz / w_ref
    u_hi = TWO_PI * hi_hz / w_ref
    scan = np.linspace(u_lo, u_hi, _POLE_SCAN_POINTS)
    resid = np.array([residual(float(x)) for x in scan])

    tried = 0
    saw_sign_change = False
    for i in range(len(scan) - 1):
        ra, rb = resid[i], resid[i + 1]
        if not (np.isfinite(ra) and np.isfinite(rb)):
            continue
        if ra == 0.0:
            u_pole, info = float(scan[i]), None
        elif ra * rb < 0:
            u_pole, info = brentq(
                residual, float(scan[i]), float(scan[i + 1]), rtol=1e-14, full_output=True
            )
            u_pole = float(u_pole)
        else:
            continue
        saw_sign_change = True
        tried += 1
        if not math.isfinite(residual(u_pole)) or abs(residual(u_pole)) > 1e-6 * max(abs(v) for v in values):
            continue  # converged onto a discontinuity, not a root
        slope_n, inverse_n, tank_n = solve3(u_pole)
        slope = slope_n / w_ref
        inverse = inverse_n * w_ref
        tank = tank_n / w_ref
        for name, value in (("slope element", slope), ("inverse element", inverse), ("pole element", tank)):
            if not value > 0:
                raise NonphysicalSolutionError(f"{kind} {name}", value)
        diag = BranchFitDiagnostics(
            iterations=info.iterations if info is not None else 0,
            function_calls=info.function_calls if info is not None else 0,
            bracket=(float(scan[i]) * w_ref / TWO_PI, float(scan[i + 1]) * w_ref / TWO_PI),
            candidates_tried=tried,
        )
        return _FosterFit(slope=slope, inverse=inverse, tank=tank, pole_w=u_pole * w_ref, diagnostics=diag)

    if saw_sign_change:
        raise InfeasibleTargetsError(
            f"{kind} pole residual sign changes only across discontinuities in the bracket"
        )
    raise InfeasibleTargetsError(
        f"{kind} pole residual has no sign change across the bracket "
        f"({lo_hz:.6g} Hz, {hi_hz:.6g} Hz); the targets are not realizable there"
    )


def branch_reactance_fit(samples, pole_bracket) -> tuple[float, float, float, float]:
    """Fit the series-branch reactance X(w) = w*L_a - 1/(w*C_b) + w*L_t/(1 - w^2*L_t*C_t).

    ``samples`` are four (frequency [Hz], reactance [ohm]) pairs with
    strictly increasing frequencies; ``pole_bracket`` is the frequency
    interval [Hz] known to contain the internal tank resonance.  Returns
    (L_a, C_b, L_t, C_t), all strictly positive.
    """
    freqs, values = _validate_samples(samples, "reactance")
    fit = _foster_fit(freqs, values, pole_bracket, "reactance")
    return fit.slope, 1.0 / fit.inverse, fit.tank, 1.0 / (fit.pole_w**2 * fit.tank)


def branch_susceptance_fit(samples, pole_bracket) -> tuple[float, float, float, float]:
    """Fit the shunt-branch susceptance B(w) = w*C_a - 1/(w*L_b) + w*C_s/(1 - w^2*L_s*C_s).

    Dual of :func:`branch_reactance_fit`; samples carry siemens values.
    Returns (C_a, L_b, L_s, C_s), all strictly positive.
    """
    freqs, values = _validate_samples(samples, "susceptance")
    fit = _foster_fit(freqs, values, pole_bracket, "susceptance")
    return fit.slope, 1.0 / fit.inverse, 1.0 / (fit.pole_w**2 * fit.tank), fit.tank


def _fit_both_branches(spec: SynthesisSpec):
    f1, f2, f3, f4 = spec.targets
    bracket = (f2 * (1.0 + _BRACKET_INSET_REL), f3 * (1.0 - _BRACKET_INSET_REL))
    x_samples = list(zip(spec.targets, (s * spec.r_scale for s in spec.sign_pattern)))
    b_samples = list(zip(spec.targets, (s / spec.r_scale for s in spec.sign_pattern)))
    series = _foster_fit([f for f, _ in x_samples], [v for _, v in x_samples], bracket, "reactance")
    shunt = _foster_fit([f for f, _ in b_samples], [v for _, v in b_samples], bracket, "susceptance")
    return series, shunt


def synthesize(spec: SynthesisSpec) -> SynthesisResult:
    """Solve for the eight element values that notch the four targets.

    Sets Z(w_i) = j*s_i*R and Y(w_i) = j*s_i/R so Z*Y = -1 (per-cell
    quarter-wave phase) at every target, fits each branch with its
    internal pole bracketed between the second and third targets, and
    re-checks |1 + ZY| at all four targets.  The produced cell uses the
    fitted values exactly as fitted (no half-series convention).
    """
    series, shunt = _fit_both_branches(spec)
    elements = ElementSet(
        c_r_c=shunt.slope,
        l_l_c=1.0 / shunt.inverse,
        l_l_d=1.0 / (shunt.pole_w**2 * shunt.tank),
        c_r_d=shunt.tank,
        l_r_c=series.slope,
        c_l_c=1.0 / series.inverse,
        c_l_d=1.0 / (series.pole_w**2 * series.tank),
        l_r_d=series.tank,
    )
    cell = UnitCell(elements, half_series_convention=False)
    residuals = tuple(
        abs(1.0 + series_impedance(cell, f) * shunt_admittance(cell, f)) for f in spec.targets
    )
    diagnostics = SynthesisDiagnostics(series=series.diagnostics, shunt=shunt.diagnostics)
    if max(residuals) > RESIDUAL_TOL:
        raise ConvergenceFailureError(
            f"max |1 + ZY| residual {max(residuals):.3g} exceeds {RESIDUAL_TOL:g}",
            diagnostics=diagnostics,
        )
    return SynthesisResult(
        elements=elements,
        residuals=residuals,
        pole_series=series.pole_w / TWO_PI,
        pole_shunt=shunt.pole_w / TWO_PI,
        diagnostics=diagnostics,
    )


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[ValidationCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def __str__(self) -> str:
        lines = [
            f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}" for c in self.checks
        ]
        return "\n".join(lines)


# Relative frequency tolerance for the root-vs-target match in validate().
_NOTCH_MATCH_REL = 1e-6


def validate(result: SynthesisResult, spec: SynthesisSpec) -> ValidationReport:
    """Recheck a synthesis from scratch; failures are reported, not raised.

    Recomputes the target residuals, re-asserts element positivity, and
    re-locates the notches over [0.5*f1, 1.2*f4], requiring exactly four
    roots each matching its target.
    """
    checks: list[ValidationCheck] = []

    values = {name: getattr(result.elements, name) for name in ElementSet.__dataclass_fields__}
    bad = {k: v for k, v in values.items() if not (isinstance(v, float) and math.isfinite(v) and v > 0)}
    checks.append(
        ValidationCheck(
            name="element positivity",
            passed=not bad,
            detail="all eight elements positive" if not bad else f"non-positive elements: {bad}",
        )
    )

    if bad:
        checks.append(ValidationCheck("target residuals", False, "skipped: elements invalid"))
        checks.append(ValidationCheck("notch match", False, "skipped: elements invalid"))
        return ValidationReport(tuple(checks))

    cell = UnitCell(result.elements, half_series_convention=False)
    residuals = [
        abs(1.0 + series_impedance(cell, f) * shunt_admittance(cell, f)) for f in spec.targets
    ]
    residual_ok = max(residuals) <= RESIDUAL_TOL
    checks.append(
        ValidationCheck(
            name="target residuals",
            passed=residual_ok,
            detail=f"max |1 + ZY| = {max(residuals):.3g} (tolerance {RESIDUAL_TOL:g})",
        )
    )

    band = (0.5 * spec.targets[0], 1.2 * spec.targets[3])
    roots = locate_notches(cell, band)
    if len(roots) != len(spec.targets):
        checks.append(
            ValidationCheck(
                name="notch match",
                passed=False,
                detail=f"expected 4 roots in {band}, found {len(roots)}: "
                f"{[f'{r:.6g}' for r in roots]}",
            )
        )
    else:
        drifts = [abs(r - t) / t for r, t in zip(roots, spec.targets)]
        checks.append(
            ValidationCheck(
                name="notch match",
                passed=max(drifts) <= _NOTCH_MATCH_REL,
                detail=f"max relative drift {max(drifts):.3g} (tolerance {_NOTCH_MATCH_REL:g})",
            )
        )
    return ValidationReport(tuple(checks))
