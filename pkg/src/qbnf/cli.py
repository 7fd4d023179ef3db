"""Command-line entry point: plan, synth, analyze, and verify jobs.

Usage::

    qbnf plan    --config plan.json    [--out DIR] [--no-meta]
    qbnf synth   --config synth.json   [--out DIR] [--no-meta]
    qbnf analyze --config analyze.json [--out DIR] [--no-meta]
                 [--convention as-given|half-series] [--grid START,STOP,N]
    qbnf verify  --config verify.json  --out DIR

All computation inputs come from the config file (no environment
variables); the flags override the convention and sweep grid or suppress
the timestamp comment so outputs are byte-reproducible.  Exit status is
0 on success, 1 on a categorized computation/config failure, 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime
import json
import sys
from pathlib import Path

from . import __version__
from .ecrlh import resonant_frequencies
from .errors import ConfigError, QbnfError
from .fileio import (
    JobConfig,
    format_number,
    load_config,
    parse_quantity,
    read_csv,
    read_touchstone,
    write_csv,
    write_touchstone,
)
from .filters import SweepGrid, dispersion_sweep, notch_report, sweep_sparams
from .synthesis import frequency_plan, synthesize, validate

__all__ = ["main", "run"]

_MODES = ("plan", "synth", "analyze", "verify")


def _error_category(exc: QbnfError) -> str:
    name = type(exc).__name__
    if name.endswith("Error"):
        name = name[: -len("Error")]
    out = []
    for ch in name:
        if ch.isupper() and out:
            out.append("-")
        out.append(ch.lower())
    return "".join(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbnf",
        description="Quad-band notch filter planning, synthesis, and analysis.",
    )
    parser.add_argument("mode", choices=_MODES, help="job to run")
    parser.add_argument("--config", required=True, metavar="PATH", help="JSON job configuration")
    parser.add_argument("--out", default=".", metavar="DIR", help="output directory (default: cwd)")
    parser.add_argument(
        "--convention",
        choices=("as-given", "half-series"),
        help="override the analyze-mode series-branch convention",
    )
    parser.add_argument(
        "--grid",
        metavar="START,STOP,N",
        help='override the sweep grid, e.g. "0.5 GHz,4 GHz,4001"',
    )
    parser.add_argument(
        "--no-meta",
        action="store_true",
        help="omit the timestamp comment from Touchstone output",
    )
    return parser


def _parse_grid_flag(text: str) -> SweepGrid:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ConfigError("--grid", f"expected START,STOP,N, got {text!r}")
    f_start = parse_quantity(parts[0], "frequency", "--grid start")
    f_stop = parse_quantity(parts[1], "frequency", "--grid stop")
    try:
        n_points = int(parts[2])
    except ValueError as exc:
        raise ConfigError("--grid", f"point count {parts[2]!r} is not an integer") from exc
    try:
        return SweepGrid(f_start, f_stop, n_points)
    except ValueError as exc:
        raise ConfigError("--grid", str(exc)) from exc


def _apply_overrides(config: JobConfig, args) -> JobConfig:
    if args.convention is not None:
        if config.mode != "analyze":
            raise ConfigError("--convention", f"not applicable to mode '{config.mode}'")
        cell = dataclasses.replace(
            config.cell, half_series_convention=args.convention == "half-series"
        )
        config = dataclasses.replace(config, cell=cell)
    if args.grid is not None:
        if config.mode != "analyze":
            raise ConfigError("--grid", f"not applicable to mode '{config.mode}'")
        config = dataclasses.replace(config, grid=_parse_grid_flag(args.grid))
    return config


def _echo_config(config: JobConfig) -> None:
    print(f"qbnf {__version__} mode={config.mode}")
    if config.mode == "plan":
        for f_rf, f_lo in config.plans:
            print(f"  plan input: f_rf={format_number(f_rf)} Hz f_lo={format_number(f_lo)} Hz")
    elif config.mode == "synth":
        spec = config.synthesis
        targets = " ".join(format_number(t) for t in spec.targets)
        print(f"  targets [Hz]: {targets}")
        print(f"  r_scale: {format_number(spec.r_scale)} ohm, sign_pattern: {spec.sign_pattern}")
    elif config.mode == "analyze":
        cell = config.cell
        for name in cell.elements.__dataclass_fields__:
            print(f"  {name}: {format_number(getattr(cell.elements, name))}")
        convention = "half-series" if cell.half_series_convention else "as-given"
        print(f"  convention: {convention}, q_factor: {cell.q_factor}")
        topo = config.topology
        print(
            f"  topology: z0_line={format_number(topo.z0_line)} ohm "
            f"theta_per_side={format_number(topo.theta_per_side)} rad at "
            f"{format_number(topo.f_ref)} Hz, n_cells={topo.n_cells}, "
            f"z_ref={format_number(topo.z_ref)} ohm"
        )
        grid = config.grid
        print(
            f"  grid: {format_number(grid.f_start)} Hz .. {format_number(grid.f_stop)} Hz, "
            f"{grid.n_points} points"
        )


def _meta_comments(config: JobConfig, no_meta: bool) -> list[str]:
    convention = "none"
    if config.cell is not None:
        convention = "half-series" if config.cell.half_series_convention else "as-given"
    topo = config.topology
    comments = [
        f"qbnf {__version__}",
        f"convention: {convention}",
        f"topology: z0_line={format_number(topo.z0_line)} ohm, "
        f"theta_per_side={format_number(topo.theta_per_side)} rad at {format_number(topo.f_ref)} Hz, "
        f"n_cells={topo.n_cells}, z_ref={format_number(topo.z_ref)} ohm",
    ]
    if not no_meta:
        stamp = datetime.datetime.now(datetime.timezone.utc).replace(microsecond=0)
        comments.append(f"written: {stamp.isoformat()}")
    return comments


def _elements_as_json(elements) -> dict:
    return {name: getattr(elements, name) for name in elements.__dataclass_fields__}


def _run_plan(config: JobConfig, out_dir: Path) -> int:
    plans = [frequency_plan(f_rf, f_lo) for f_rf, f_lo in config.plans]
    print("f_rf [Hz]      f_lo [Hz]      f_if [Hz]      f_im [Hz]      f_sh [Hz]")
    for p in plans:
        print(
            f"{format_number(p.f_rf):<14} {format_number(p.f_lo):<14} "
            f"{format_number(p.f_if):<14} {format_number(p.f_im):<14} {format_number(p.f_sh)}"
        )
    write_csv(plans, out_dir / "plan.csv", kind="plan")
    print(f"wrote {out_dir / 'plan.csv'}")
    return 0


def _run_synth(config: JobConfig, out_dir: Path) -> int:
    result = synthesize(config.synthesis)
    report = validate(result, config.synthesis)
    elements_path = out_dir / "elements.json"
    elements_path.write_text(
        json.dumps({"mode": "analyze", "elements": _elements_as_json(result.elements)},
                   indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    report_path = out_dir / "synthesis_report.json"
    report_payload = {
        "targets_hz": list(config.synthesis.targets),
        "r_scale_ohm": config.synthesis.r_scale,
        "sign_pattern": list(config.synthesis.sign_pattern),
        "residuals": list(result.residuals),
        "pole_series_hz": result.pole_series,
        "pole_shunt_hz": result.pole_shunt,
        "diagnostics": {
            "series": dataclasses.asdict(result.diagnostics.series),
            "shunt": dataclasses.asdict(result.diagnostics.shunt),
        },
        "validation": [dataclasses.asdict(check) for check in report.checks],
    }
    report_path.write_text(json.dumps(report_payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print("fitted elements [SI]:")
    for name, value in _elements_as_json(result.elements).items():
        print(f"  {name}: {format_number(value)}")
    print(f"max |1 + ZY| residual: {max(result.residuals):.3g}")
    print(report)
    print(f"wrote {elements_path}")
    print(f"wrote {report_path}")
    return 0 if report.passed else 1


def _run_analyze(config: JobConfig, out_dir: Path, no_meta: bool) -> int:
    sweep = sweep_sparams(config.topology, config.cell, config.grid)
    dispersion = dispersion_sweep(config.cell, config.grid)
    notches = notch_report(config.topology, config.cell, config.grid)

    write_touchstone(sweep, out_dir / "sweep.s2p", comments=_meta_comments(config, no_meta))
    write_csv(sweep, out_dir / "sweep.csv", kind="sweep")
    write_csv(dispersion, out_dir / "dispersion.csv", kind="dispersion")
    write_csv(notches, out_dir / "notches.csv", kind="notches")

    res = resonant_frequencies(config.cell.elements)
    print(
        "branch resonances [Hz]: "
        f"f_cs={format_number(res.f_cs)} f_dp={format_number(res.f_dp)} "
        f"f_cp={format_number(res.f_cp)} f_ds={format_number(res.f_ds)}"
    )
    if notches:
        print("notches:")
        for n in notches:
            print(
                f"  f={format_number(n.f_notch)} Hz depth={n.depth_db:.2f} dB "
                f"bw10={format_number(n.bw_10db)} Hz"
            )
    else:
        print("notches: none detected")
    for name in ("sweep.s2p", "sweep.csv", "dispersion.csv", "notches.csv"):
        print(f"wrote {out_dir / name}")
    return 0


def _format_match(recomputed: float, stored: str) -> bool:
    return format_number(recomputed) == stored


def _verify_plan(job: JobConfig, out_dir: Path, failures: list[str]) -> None:
    path = out_dir / "plan.csv"
    header, rows = read_csv(path)
    plans = [frequency_plan(f_rf, f_lo) for f_rf, f_lo in job.plans]
    if len(rows) != len(plans):
        failures.append(f"{path}: expected {len(plans)} rows, found {len(rows)}")
        return
    for i, (plan, row) in enumerate(zip(plans, rows)):
        values = (plan.f_rf, plan.f_lo, plan.f_if, plan.f_im, plan.f_sh)
        for name, value, cell_text in zip(header, values, row):
            if not _format_match(value, cell_text):
                failures.append(f"{path}: row {i} column {name}: {cell_text!r} != recomputed")


def _verify_synth(job: JobConfig, out_dir: Path, failures: list[str]) -> None:
    result = synthesize(job.synthesis)
    report = validate(result, job.synthesis)
    if not report.passed:
        failures.append("synthesis validation: " + "; ".join(c.name for c in report.checks if not c.passed))
    path = out_dir / "elements.json"
    stored = json.loads(path.read_text(encoding="utf-8"))["elements"]
    recomputed = _elements_as_json(result.elements)
    for name, value in recomputed.items():
        if stored.get(name) != value:
            failures.append(f"{path}: element {name}: stored {stored.get(name)!r} != recomputed {value!r}")


def _verify_analyze(job: JobConfig, out_dir: Path, failures: list[str]) -> None:
    sweep = sweep_sparams(job.topology, job.cell, job.grid)
    stored = read_touchstone(out_dir / "sweep.s2p")
    if len(stored) != len(sweep):
        failures.append(f"sweep.s2p: expected {len(sweep)} points, found {len(stored)}")
    else:
        for i, (a, b) in enumerate(zip(sweep, stored)):
            same = _format_match(a.frequency / 1e9, format_number(b.frequency / 1e9))
            for name in ("s11", "s22"):
                sa, sb = getattr(a, name), getattr(b, name)
                same = same and format_number(sa.real) == format_number(sb.real)
                same = same and format_number(sa.imag) == format_number(sb.imag)
            if not same:
                failures.append(f"sweep.s2p: point {i} differs from recomputation")
                break
    header, rows = read_csv(out_dir / "sweep.csv")
    if len(rows) != len(sweep):
        failures.append(f"sweep.csv: expected {len(sweep)} rows, found {len(rows)}")
    else:
        for i, (point, row) in enumerate(zip(sweep, rows)):
            if not _format_match(point.frequency, row[0]):
                failures.append(f"sweep.csv: row {i} frequency mismatch")
                break
    notches = notch_report(job.topology, job.cell, job.grid)
    _, notch_rows = read_csv(out_dir / "notches.csv")
    if len(notch_rows) != len(notches):
        failures.append(f"notches.csv: expected {len(notches)} rows, found {len(notch_rows)}")
    else:
        for i, (n, row) in enumerate(zip(notches, notch_rows)):
            if not (_format_match(n.f_notch, row[0]) and _format_match(n.depth_db, row[1])):
                failures.append(f"notches.csv: row {i} differs from recomputation")


def _run_verify(config: JobConfig, out_dir: Path) -> int:
    job = config.job
    failures: list[str] = []
    try:
        if job.mode == "plan":
            _verify_plan(job, out_dir, failures)
        elif job.mode == "synth":
            _verify_synth(job, out_dir, failures)
        else:
            _verify_analyze(job, out_dir, failures)
    except (OSError, ValueError) as exc:
        failures.append(str(exc))
    if failures:
        for failure in failures:
            print(f"[FAIL] {failure}")
        return 1
    print(f"[PASS] artifacts in {out_dir} match a fresh {job.mode} recomputation")
    return 0


def run(args) -> int:
    config = load_config(args.config)
    if config.mode != args.mode:
        raise ConfigError("mode", f"config says {config.mode!r} but the command line says {args.mode!r}")
    config = _apply_overrides(config, args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _echo_config(config)
    if config.mode == "plan":
        return _run_plan(config, out_dir)
    if config.mode == "synth":
        return _run_synth(config, out_dir)
    if config.mode == "analyze":
        return _run_analyze(config, out_dir, args.no_meta)
    return _run_verify(config, out_dir)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except QbnfError as exc:
        print(f"error[{_error_category(exc)}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
