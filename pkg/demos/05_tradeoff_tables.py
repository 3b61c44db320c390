"""Scheme comparison tables and tradeoff series as CSV (no plotting)."""

import csv
import io
from importlib import resources

from pdakit.cli import compare_csv

table = resources.files("pdakit").joinpath("data/table2.specs").read_text()
rows = list(csv.DictReader(io.StringIO(compare_csv(table))))
print(f"{'series':<6} {'scheme':<9} {'args':<12} {'K':>4} {'M/N':>8} {'F':>12} {'R':>9}")
for r in rows:
    print(f"{r['series']:<6} {r['scheme']:<9} {r['args']:<12} {r['K']:>4} {r['M/N_dec']:>8} "
          f"{r['F_dec']:>12} {r['R_dec']:>9}")

# memory-load / memory-subpacketization points near K = 384
fig = resources.files("pdakit").joinpath("data/fig3.specs").read_text()
series = {}
for r in csv.DictReader(io.StringIO(compare_csv(fig))):
    series.setdefault(r["series"], []).append((float(r["M/N_dec"]), float(r["R_dec"]), float(r["F_dec"])))
for name, pts in series.items():
    pts.sort()
    lo, hi = pts[0], pts[-1]
    print(f"{name:<9} {len(pts):>3} points, M/N {lo[0]:.3f}..{hi[0]:.3f}, "
          f"R {lo[1]:.4g}..{hi[1]:.4g}")
