"""
Crude MC against the adaptive method over a range of budgets.

For every N the crude estimator is replicated N_ess times and the adaptive
mesh is frozen and re-sampled N_ess times; efficiency is 1 / (time * variance).
Writes compare.csv next to this script; the same table comes from

    adaptmc compare --fn gauss2d --alpha 50 --sweep 1e3,1e4,1e5 --Ness 100
"""
import csv
from pathlib import Path

from adaptmc import AdaptiveConfig
from adaptmc.cli import COMPARE_FIELDS, compare_rows, fmt
from adaptmc.integrands import disc, gauss

out = Path(__file__).with_name("compare.csv")
n_values = [1_000, 10_000, 100_000]
with out.open("w", newline="") as fh:
    writer = csv.writer(fh)
    writer.writerow(["fn"] + COMPARE_FIELDS)
    for f in (disc(), gauss(50.0, 2)):
        rows = compare_rows(f, lambda N: AdaptiveConfig(N=N, L=4, seed=1), n_values, 100, 1)
        print(f"\n{f.name}")
        print("       N      V_MC       V_AMC    V_MC/V_AMC   Eff_AMC/Eff_MC")
        for r in rows:
            print(f"{r['N']:8d}  {r['V_MC']:.3e}  {r['V_AMC']:.3e}  {r['V_MC'] / r['V_AMC']:9.1f}"
                  f"  {r['Eff_AMC'] / r['Eff_MC']:12.1f}")
            writer.writerow([f.name] + [fmt(r[k]) for k in COMPARE_FIELDS])
print(f"\nwrote {out}")
