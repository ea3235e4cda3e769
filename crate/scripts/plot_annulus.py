#!/usr/bin/env python3
"""Plot the annulus study produced by `splitquad annulus`.

Usage: python3 plot_annulus.py [annulus.csv [out.png]]
"""
import csv
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "annulus.csv"
out = sys.argv[2] if len(sys.argv) > 2 else "annulus.png"

rows = list(csv.DictReader(open(path, newline="")))
methods = sorted({r["method"] for r in rows})

fig, (ax_err, ax_time) = plt.subplots(1, 2, figsize=(11, 4.2))
for m in methods:
    sel = sorted((float(r["alpha"]), float(r["err"]), float(r["t_assemble_s"]))
                 for r in rows if r["method"] == m)
    a = [s[0] for s in sel]
    ax_err.loglog(a, [s[1] for s in sel], "o-", label=m)
    ax_time.loglog(a, [s[2] for s in sel], "o-", label=m)
ax_err.set_xlabel("α")
ax_err.set_ylabel("relative error (max norm)")
ax_err.legend()
ax_time.set_xlabel("α")
ax_time.set_ylabel("neighbor-block assembly time [s]")
ax_time.legend()
fig.tight_layout()
fig.savefig(out, dpi=150)
print(f"wrote {out}")
