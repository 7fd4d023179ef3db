"""Job configuration loading and deterministic file emission.

Configs are strict JSON with engineering-suffixed quantities ("1.4 GHz",
"6.4 nH") normalized to SI on load by exact power-of-ten scaling (the
decimal exponent is shifted textually before the single string-to-float
conversion, so "1.4 GHz" parses to exactly the same float as 1.4e9).

Output formats are byte-deterministic: Touchstone v1 two-port files in
real/imaginary form, and RFC-style CSV with LF line endings and a header
row naming every column with its unit.  All numbers carry 10 significant
digits.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

from .ecrlh import DispersionPoint, ElementSet, UnitCell
from .errors import ConfigError
from .filters import DEPTH_FLOOR_DB, FilterTopology, NotchReport, SweepGrid
from .synthesis import SynthesisSpec
from .twoport import SParameterPoint

__all__ = [
    "JobConfig",
    "load_config",
    "parse_quantity",
    "format_number",
    "write_touchstone",
    "read_touchstone",
    "write_csv",
    "read_csv",
    "SWEEP_COLUMNS",
    "DISPERSION_COLUMNS",
    "NOTCH_COLUMNS",
    "PLAN_COLUMNS",
]

_NUMBER_FMT = ".10g"

SWEEP_COLUMNS = (
    "freq_hz",
    "s11_re", "s11_im", "s21_re", "s21_im",
    "s12_re", "s12_im", "s22_re", "s22_im",
    "s11_db", "s21_db",
)
DISPERSION_COLUMNS = ("freq_hz", "beta_p_rad", "alpha_np", "zbloch_re_ohm", "zbloch_im_ohm")
NOTCH_COLUMNS = ("f_notch_hz", "depth_db", "bw_10db_hz", "refined")
PLAN_COLUMNS = ("f_rf_hz", "f_lo_hz", "f_if_hz", "f_im_hz", "f_sh_hz")

# Magnitude corresponding to the -120 dB reporting floor.
_FLOOR_MAG = 10.0 ** (DEPTH_FLOOR_DB / 20.0)

_UNIT_EXPONENTS = {
    "frequency": {"hz": 0, "khz": 3, "mhz": 6, "ghz": 9, "thz": 12},
    "inductance": {"h": 0, "mh": -3, "uh": -6, "nh": -9, "ph": -12},
    "capacitance": {"f": 0, "mf": -3, "uf": -6, "nf": -9, "pf": -12},
    "resistance": {"ohm": 0, "ohms": 0, "kohm": 3},
    "dimensionless": {"": 0},
}

_QUANTITY_RE = re.compile(
    r"\s*(?P<sign>[+-]?)(?P<mantissa>\d+(?:\.\d*)?|\.\d+)(?:[eE](?P<exp>[+-]?\d+))?\s*(?P<unit>[A-Za-z]*)\s*"
)


def format_number(value: float) -> str:
    """Fixed 10-significant-digit rendering used in every output file."""
    return format(float(value), _NUMBER_FMT)


def parse_quantity(value, kind: str, field: str) -> float:
    """Normalize a config quantity to SI units.

    Bare numbers are taken as already-SI; strings may carry an
    engineering suffix appropriate for ``kind`` and are scaled by the
    exact power of ten it denotes.
    """
    table = _UNIT_EXPONENTS[kind]
    if isinstance(value, bool):
        raise ConfigError(field, f"expected a quantity, got {value!r}")
    if isinstance(value, (int, float)):
        result = float(value)
    elif isinstance(value, str):
        match = _QUANTITY_RE.fullmatch(value)
        if match is None:
            raise ConfigError(field, f"cannot parse quantity {value!r}")
        unit = match.group("unit").lower()
        if unit == "" and kind != "dimensionless":
            shift = 0
        elif unit not in table:
            raise ConfigError(field, f"unknown {kind} unit suffix {match.group('unit')!r}")
        else:
            shift = table[unit]
        exponent = int(match.group("exp") or 0) + shift
        result = float(f"{match.group('sign')}{match.group('mantissa')}e{exponent}")
    else:
        raise ConfigError(field, f"expected a number or quantity string, got {value!r}")
    if not math.isfinite(result):
        raise ConfigError(field, f"quantity {value!r} is not finite")
    if result <= 0:
        raise ConfigError(field, f"quantity must be positive, got {value!r}")
    return result


@dataclass(frozen=True)
class JobConfig:
    """One fully-normalized job: a mode plus exactly its required inputs."""

    mode: str
    plans: tuple[tuple[float, float], ...] | None = None
    synthesis: SynthesisSpec | None = None
    cell: UnitCell | None = None
    topology: FilterTopology = FilterTopology()
    grid: SweepGrid = SweepGrid(0.1e9, 4.0e9, 4001)
    job: "JobConfig | None" = None


_MODE_KEYS = {
    "plan": {"mode", "plans"},
    "synth": {"mode", "targets", "r_scale", "sign_pattern"},
    "analyze": {"mode", "elements", "convention", "q_factor", "topology", "grid"},
    "verify": {"mode", "job"},
}

_ELEMENT_KINDS = {
    "c_r_c": "capacitance",
    "l_l_c": "inductance",
    "l_l_d": "inductance",
    "c_r_d": "capacitance",
    "l_r_c": "inductance",
    "c_l_c": "capacitance",
    "c_l_d": "capacitance",
    "l_r_d": "inductance",
}

_CONVENTIONS = {"as-given": False, "half-series": True}


def _require(data: dict, field: str):
    if field not in data:
        raise ConfigError(field, "required field is missing")
    return data[field]


def _check_keys(data: dict, mode: str) -> None:
    allowed = _MODE_KEYS[mode]
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(sorted(unknown)[0], f"field not used by mode '{mode}'")


def _parse_topology(data, field: str) -> FilterTopology:
    if data is None:
        return FilterTopology()
    if not isinstance(data, dict):
        raise ConfigError(field, f"expected an object, got {data!r}")
    known = {"z0_line", "theta_per_side_deg", "f_ref", "n_cells", "z_ref"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{field}.{sorted(unknown)[0]}", "unknown topology field")
    kwargs = {}
    if "z0_line" in data:
        kwargs["z0_line"] = parse_quantity(data["z0_line"], "resistance", f"{field}.z0_line")
    if "z_ref" in data:
        kwargs["z_ref"] = parse_quantity(data["z_ref"], "resistance", f"{field}.z_ref")
    if "f_ref" in data:
        kwargs["f_ref"] = parse_quantity(data["f_ref"], "frequency", f"{field}.f_ref")
    if "theta_per_side_deg" in data:
        deg = data["theta_per_side_deg"]
        if not isinstance(deg, (int, float)) or isinstance(deg, bool) or not math.isfinite(float(deg)) or deg < 0:
            raise ConfigError(f"{field}.theta_per_side_deg", f"expected a non-negative number, got {deg!r}")
        kwargs["theta_per_side"] = math.radians(float(deg))
    if "n_cells" in data:
        n = data["n_cells"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ConfigError(f"{field}.n_cells", f"expected a positive integer, got {n!r}")
        kwargs["n_cells"] = n
    try:
        return FilterTopology(**kwargs)
    except ValueError as exc:
        raise ConfigError(field, str(exc)) from exc


def _parse_grid(data, field: str) -> SweepGrid:
    if data is None:
        return SweepGrid(0.1e9, 4.0e9, 4001)
    if not isinstance(data, dict):
        raise ConfigError(field, f"expected an object, got {data!r}")
    known = {"f_start", "f_stop", "n_points"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{field}.{sorted(unknown)[0]}", "unknown grid field")
    f_start = parse_quantity(_require(data, "f_start"), "frequency", f"{field}.f_start")
    f_stop = parse_quantity(_require(data, "f_stop"), "frequency", f"{field}.f_stop")
    n_points = data.get("n_points", 4001)
    if not isinstance(n_points, int) or isinstance(n_points, bool) or n_points < 2:
        raise ConfigError(f"{field}.n_points", f"expected an integer >= 2, got {n_points!r}")
    try:
        return SweepGrid(f_start, f_stop, n_points)
    except ValueError as exc:
        raise ConfigError(field, str(exc)) from exc


def _parse_elements(data, field: str) -> ElementSet:
    if not isinstance(data, dict):
        raise ConfigError(field, f"expected an object of the eight element values, got {data!r}")
    unknown = set(data) - set(_ELEMENT_KINDS)
    if unknown:
        raise ConfigError(f"{field}.{sorted(unknown)[0]}", "unknown element name")
    values = {}
    for name, kind in _ELEMENT_KINDS.items():
        if name not in data:
            raise ConfigError(f"{field}.{name}", "required field is missing")
        values[name] = parse_quantity(data[name], kind, f"{field}.{name}")
    return ElementSet(**values)


def _parse_config_dict(data: dict, allow_verify: bool = True) -> JobConfig:
    if not isinstance(data, dict):
        raise ConfigError("<root>", "top level must be an object")
    mode = _require(data, "mode")
    if mode not in _MODE_KEYS:
        raise ConfigError("mode", f"unknown mode {mode!r}; expected one of {sorted(_MODE_KEYS)}")
    if mode == "verify" and not allow_verify:
        raise ConfigError("job.mode", "a verify job cannot nest another verify job")
    _check_keys(data, mode)

    if mode == "plan":
        raw = _require(data, "plans")
        if not isinstance(raw, list) or not raw:
            raise ConfigError("plans", "expected a non-empty list of {f_rf, f_lo} objects")
        pairs = []
        for i, item in enumerate(raw):
            if not isinstance(item, dict) or set(item) != {"f_rf", "f_lo"}:
                raise ConfigError(f"plans[{i}]", "expected exactly the fields f_rf and f_lo")
            pairs.append(
                (
                    parse_quantity(item["f_rf"], "frequency", f"plans[{i}].f_rf"),
                    parse_quantity(item["f_lo"], "frequency", f"plans[{i}].f_lo"),
                )
            )
        return JobConfig(mode="plan", plans=tuple(pairs))

    if mode == "synth":
        raw_targets = _require(data, "targets")
        if not isinstance(raw_targets, list) or len(raw_targets) != 4:
            raise ConfigError("targets", "expected a list of exactly four frequencies")
        targets = tuple(
            parse_quantity(t, "frequency", f"targets[{i}]") for i, t in enumerate(raw_targets)
        )
        kwargs = {"targets": targets}
        if "r_scale" in data:
            kwargs["r_scale"] = parse_quantity(data["r_scale"], "resistance", "r_scale")
        if "sign_pattern" in data:
            pattern = data["sign_pattern"]
            if not isinstance(pattern, list) or len(pattern) != 4:
                raise ConfigError("sign_pattern", "expected a list of four entries, each +1 or -1")
            kwargs["sign_pattern"] = tuple(pattern)
        try:
            spec = SynthesisSpec(**kwargs)
        except ValueError as exc:
            raise ConfigError("targets", str(exc)) from exc
        return JobConfig(mode="synth", synthesis=spec)

    if mode == "analyze":
        elements = _parse_elements(_require(data, "elements"), "elements")
        convention = data.get("convention", "as-given")
        if convention not in _CONVENTIONS:
            raise ConfigError("convention", f"expected one of {sorted(_CONVENTIONS)}, got {convention!r}")
        q_factor = None
        if data.get("q_factor") is not None:
            q_factor = parse_quantity(data["q_factor"], "dimensionless", "q_factor")
        cell = UnitCell(elements, half_series_convention=_CONVENTIONS[convention], q_factor=q_factor)
        return JobConfig(
            mode="analyze",
            cell=cell,
            topology=_parse_topology(data.get("topology"), "topology"),
            grid=_parse_grid(data.get("grid"), "grid"),
        )

    inner = _require(data, "job")
    if not isinstance(inner, dict):
        raise ConfigError("job", "expected the original job config object")
    return JobConfig(mode="verify", job=_parse_config_dict(inner, allow_verify=False))


def load_config(path) -> JobConfig:
    """Load and normalize a JSON job config; every quantity comes back SI."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"{path} is not valid JSON: {exc}") from exc
    return _parse_config_dict(data)


def _floored(s: complex) -> complex:
    """Clamp a transmission coefficient up to the -120 dB reporting floor."""
    mag = abs(s)
    if mag >= _FLOOR_MAG:
        return s
    if mag == 0.0:
        return complex(_FLOOR_MAG, 0.0)
    return s * (_FLOOR_MAG / mag)


def write_touchstone(points, path, comments=()) -> None:
    """Write a Touchstone v1 two-port file (GHz, S-parameters, RI, real ref).

    Columns per row: frequency [GHz], then Re/Im of S11, S21, S12, S22.
    Transmission entries below the -120 dB floor are written at the floor
    magnitude so the file never carries zeros or NaNs for notch points.
    Comment lines record whatever strings are passed in ``comments``.
    """
    points = list(points)
    if not points:
        raise ValueError("cannot write an empty Touchstone file")
    z_ref = points[0].z_ref
    for p in points:
        if p.z_ref != z_ref:
            raise ValueError("all points must share one reference impedance")
    freqs = [p.frequency for p in points]
    if not all(a < b for a, b in zip(freqs, freqs[1:])):
        raise ValueError("frequencies must be strictly increasing")

    lines = [f"! {comment}" for comment in comments]
    lines.append(f"# GHz S RI R {z_ref:g}")
    for p in points:
        s21 = _floored(p.s21)
        s12 = _floored(p.s12)
        row = [p.frequency / 1e9]
        for s in (p.s11, s21, s12, p.s22):
            row.extend((s.real, s.imag))
        lines.append(" ".join(format_number(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_touchstone(path) -> list[SParameterPoint]:
    """Parse a two-port Touchstone v1 file written by :func:`write_touchstone`."""
    path = Path(path)
    unit_scale = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
    scale = None
    z_ref = None
    points = []
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("!"):
            continue
        if line.startswith("#"):
            tokens = line[1:].split()
            if len(tokens) < 5 or tokens[1].upper() != "S" or tokens[2].upper() != "RI" or tokens[3].upper() != "R":
                raise ValueError(f"{path}:{line_no}: unsupported Touchstone option line {line!r}")
            unit = tokens[0].lower()
            if unit not in unit_scale:
                raise ValueError(f"{path}:{line_no}: unsupported frequency unit {tokens[0]!r}")
            scale = unit_scale[unit]
            z_ref = float(tokens[4])
            continue
        if scale is None:
            raise ValueError(f"{path}:{line_no}: data before the option line")
        values = [float(tok) for tok in line.split()]
        if len(values) != 9:
            raise ValueError(f"{path}:{line_no}: expected 9 columns, got {len(values)}")
        f = values[0] * scale
        s = [complex(values[i], values[i + 1]) for i in (1, 3, 5, 7)]
        points.append(SParameterPoint(f, s[0], s[1], s[2], s[3], z_ref))
    if not points:
        raise ValueError(f"{path}: no data rows")
    return points


def _db_floor(magnitude: float) -> float:
    if magnitude <= _FLOOR_MAG:
        return DEPTH_FLOOR_DB
    return 20.0 * math.log10(magnitude)


def _sweep_rows(points):
    for p in points:
        yield (
            p.frequency,
            p.s11.real, p.s11.imag, p.s21.real, p.s21.imag,
            p.s12.real, p.s12.imag, p.s22.real, p.s22.imag,
            _db_floor(abs(p.s11)), _db_floor(abs(p.s21)),
        )


def _dispersion_rows(points):
    for p in points:
        yield (p.frequency, p.gamma_p.imag, p.gamma_p.real, p.z_bloch.real, p.z_bloch.imag)


def _notch_rows(reports):
    for r in reports:
        yield (r.f_notch, r.depth_db, r.bw_10db, "true" if r.refined else "false")


def _plan_rows(plans):
    for p in plans:
        yield (p.f_rf, p.f_lo, p.f_if, p.f_im, p.f_sh)


_CSV_KINDS = {
    "sweep": (SWEEP_COLUMNS, _sweep_rows),
    "dispersion": (DISPERSION_COLUMNS, _dispersion_rows),
    "notches": (NOTCH_COLUMNS, _notch_rows),
    "plan": (PLAN_COLUMNS, _plan_rows),
}


def _infer_kind(records) -> str:
    first = records[0]
    if isinstance(first, SParameterPoint):
        return "sweep"
    if isinstance(first, DispersionPoint):
        return "dispersion"
    if isinstance(first, NotchReport):
        return "notches"
    if type(first).__name__ == "FrequencyPlan":
        return "plan"
    raise ValueError(f"cannot infer a CSV layout for {type(first).__name__}")


def write_csv(records, path, kind: str | None = None) -> None:
    """Write sweep, dispersion, notch, or plan records as deterministic CSV.

    The layout is inferred from the record type; an empty record list
    needs an explicit ``kind`` and produces a header-only file.  Numbers
    carry 10 significant digits, rows end with LF.
    """
    records = list(records)
    if kind is None:
        if not records:
            raise ValueError("an empty record list needs an explicit kind")
        kind = _infer_kind(records)
    if kind not in _CSV_KINDS:
        raise ValueError(f"unknown CSV kind {kind!r}; expected one of {sorted(_CSV_KINDS)}")
    columns, to_rows = _CSV_KINDS[kind]
    lines = [",".join(columns)]
    for row in to_rows(records):
        lines.append(",".join(v if isinstance(v, str) else format_number(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_csv(path) -> tuple[tuple[str, ...], list[tuple[str, ...]]]:
    """Read back one of this module's CSV files as raw string cells."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty file")
    header = tuple(lines[0].split(","))
    rows = [tuple(line.split(",")) for line in lines[1:] if line]
    return header, rows
