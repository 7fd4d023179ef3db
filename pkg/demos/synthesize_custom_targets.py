"""End-to-end synthesis: four arbitrary notch targets to eight element values.

Each branch of the cell is a Foster immittance with one internal pole.
Setting Z = j*s*R and Y = j*s/R at the targets makes Z*Y = -1 there (a
quarter-wave per-cell phase), and each branch is then fitted with its
pole bracketed between the middle targets.  The fitted cell is validated
by relocating its transmission zeros and sweeping the assembled filter,
lossless and with a uniform component Q.

Writes synthesized_sweep.csv (and synthesis.png with matplotlib) into
demos/output/.
"""

import math
from pathlib import Path

from qbnf import (
    FilterTopology,
    SweepGrid,
    SynthesisSpec,
    UnitCell,
    notch_report,
    phase_shift,
    sweep_sparams,
    synthesize,
    validate,
)
from qbnf.fileio import write_csv

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# interferer frequencies of the dual-band receiver plan (see frequency_planning.py)
targets = (0.9e9, 1.3e9, 2.55e9, 3.35e9)

spec = SynthesisSpec(targets=targets)
result = synthesize(spec)

print("fitted element values:")
for name in result.elements.__dataclass_fields__:
    value = getattr(result.elements, name)
    unit = "pF" if name.startswith("c") else "nH"
    scale = 1e12 if unit == "pF" else 1e9
    print(f"  {name}: {value * scale:7.3f} {unit}")
print(f"branch poles: series {result.pole_series / 1e9:.4f} GHz, shunt {result.pole_shunt / 1e9:.4f} GHz")
print(f"max |1 + ZY| residual at the targets: {max(result.residuals):.2e}")

print("\nvalidation:")
print(validate(result, spec))

cell = UnitCell(result.elements)
print("\nper-cell phase at each target [rad]:")
for f in targets:
    print(f"  {f / 1e9:5.2f} GHz: {phase_shift(cell, f):.9f}  (quarter wave = {math.pi / 2:.9f})")

topology = FilterTopology()
grid = SweepGrid(0.5e9, 4.0e9, 4001)
print("\nlossless filter response:")
for n in notch_report(topology, cell, grid):
    print(f"  notch {n.f_notch / 1e9:7.4f} GHz  depth {n.depth_db:6.1f} dB  width {n.bw_10db / 1e6:5.1f} MHz")

lossy = UnitCell(result.elements, q_factor=200.0)
print("with a uniform component Q of 200:")
for n in notch_report(topology, lossy, grid):
    print(f"  notch {n.f_notch / 1e9:7.4f} GHz  depth {n.depth_db:6.1f} dB  width {n.bw_10db / 1e6:5.1f} MHz")

sweep = sweep_sparams(topology, cell, grid)
write_csv(sweep, OUT / "synthesized_sweep.csv")
print(f"\nwrote {OUT / 'synthesized_sweep.csv'}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the plot")
else:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for label, points in (("lossless", sweep), ("Q = 200", sweep_sparams(topology, lossy, grid))):
        db = [max(20 * math.log10(abs(p.s21)) if abs(p.s21) > 0 else -300, -80) for p in points]
        ax.plot([p.frequency / 1e9 for p in points], db, label=label)
    for f in targets:
        ax.axvline(f / 1e9, color="red", ls="--", alpha=0.3)
    ax.axhline(-20, color="gray", ls=":")
    ax.set_xlabel("frequency [GHz]")
    ax.set_ylabel("|S21| [dB]")
    ax.set_ylim(-80, 2)
    ax.legend()
    fig.tight_layout()
    fig.savefig(OUT / "synthesis.png", dpi=140)
    print(f"wrote {OUT / 'synthesis.png'}")
