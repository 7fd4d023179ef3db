"""Receiver frequency planning: from (RF, LO) pairs to notch targets.

A heterodyne mixer folds two kinds of interferers onto its IF: the image
at 2*f_LO - f_RF, and the second-harmonic product at 2*f_LO + f_IF.  For
a dual-band receiver this gives four frequencies that a front-end filter
must reject.  This script derives them for a pair of LTE band plans and
prints the resulting quad-band notch target list.
"""

from qbnf import frequency_plan

PLANS = [
    ("band A", 1.4e9, 1.15e9),
    ("band B", 1.8e9, 1.55e9),
]

print(f"{'':8}  {'f_RF':>10}  {'f_LO':>10}  {'f_IF':>10}  {'image':>10}  {'2nd harm':>10}")
targets = []
for label, f_rf, f_lo in PLANS:
    plan = frequency_plan(f_rf, f_lo)
    targets += [plan.f_im, plan.f_sh]
    row = [plan.f_rf, plan.f_lo, plan.f_if, plan.f_im, plan.f_sh]
    print(f"{label:8}  " + "  ".join(f"{v / 1e9:>7.3f} GHz"[:14].rjust(10) for v in row))

targets.sort()
print("\nquad-band notch targets:", ", ".join(f"{t / 1e9:.3g} GHz" for t in targets))
print("feed these to qbnf.synthesize / the `qbnf synth` command (see synthesize_custom_targets.py)")
