"""Dispersion study of one E-CRLH unit cell.

Sweeps the per-cell Bloch propagation constant and Bloch impedance of a
published benchmark element set, marks the four branch resonances, and
shows where the per-cell phase crosses a quarter wave -- the frequencies
an open-ended stub of this cell turns into transmission notches.

Writes dispersion.csv (and dispersion.png when matplotlib is available)
into demos/output/.
"""

import math
from pathlib import Path

from qbnf import ElementSet, SweepGrid, UnitCell, dispersion_sweep, resonant_frequencies
from qbnf.fileio import write_csv

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

elements = ElementSet(
    c_r_c=2.6e-12, l_l_c=3.7e-9, l_l_d=3.3e-9, c_r_d=1.9e-12,
    l_r_c=6.4e-9, c_l_c=1.5e-12, c_l_d=1.3e-12, l_r_d=4.8e-9,
)
cell = UnitCell(elements)

resonances = resonant_frequencies(elements)
print("branch resonances:")
for name in ("f_cs", "f_dp", "f_cp", "f_ds"):
    print(f"  {name} = {getattr(resonances, name) / 1e9:.4f} GHz")

grid = SweepGrid(0.3e9, 4.2e9, 2001)
points = dispersion_sweep(cell, grid)
write_csv(points, OUT / "dispersion.csv")
print(f"\nwrote {OUT / 'dispersion.csv'}")

# per-cell phase crosses pi/2 once per propagating band -> four notch points
crossings = []
for a, b in zip(points[:-1], points[1:]):
    if a.gamma_p.real == 0 and b.gamma_p.real == 0:
        if (a.gamma_p.imag - math.pi / 2) * (b.gamma_p.imag - math.pi / 2) <= 0:
            crossings.append(0.5 * (a.frequency + b.frequency))
print("quarter-wave phase crossings (grid resolution):",
      ", ".join(f"{f / 1e9:.3f} GHz" for f in crossings))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the plot")
else:
    freqs = [p.frequency / 1e9 for p in points]
    beta = [p.gamma_p.imag for p in points]
    alpha = [p.gamma_p.real for p in points]
    zb = [abs(p.z_bloch) for p in points]

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    ax1.plot(freqs, beta, label="phase per cell [rad]")
    ax1.plot(freqs, alpha, label="attenuation per cell [Np]", alpha=0.7)
    ax1.axhline(math.pi / 2, color="gray", ls=":", label="quarter wave")
    for f in crossings:
        ax1.axvline(f / 1e9, color="red", ls="--", alpha=0.4)
    ax1.set_ylabel("per-cell propagation")
    ax1.legend(loc="upper right", fontsize=8)

    ax2.plot(freqs, zb)
    ax2.set_yscale("log")
    ax2.set_xlabel("frequency [GHz]")
    ax2.set_ylabel("|Bloch impedance| [ohm]")

    fig.tight_layout()
    fig.savefig(OUT / "dispersion.png", dpi=140)
    print(f"wrote {OUT / 'dispersion.png'}")
