#!/usr/bin/env python3
"""Plot the flat-panel accuracy map produced by `splitquad flatpanel`.

Usage: python3 plot_flatpanel.py [flatpanel.csv [out.png]]
"""
import csv
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

path = sys.argv[1] if len(sys.argv) > 1 else "flatpanel.csv"
out = sys.argv[2] if len(sys.argv) > 2 else "flatpanel.png"

rows = list(csv.DictReader(open(path, newline="")))
alphas = sorted({float(r["alpha"]) for r in rows})
hs = sorted({float(r["h"]) for r in rows})
ai = {a: i for i, a in enumerate(alphas)}
hi = {h: i for i, h in enumerate(hs)}


def grid(col):
    g = np.full((len(hs), len(alphas)), np.nan)
    for r in rows:
        g[hi[float(r["h"])], ai[float(r["alpha"])]] = float(r[col])
    return g


fig, axes = plt.subplots(1, 2, figsize=(11, 4.2), sharey=True)
A, H = np.meshgrid(alphas, hs)
for ax, col, title in zip(axes, ["err_plain", "err_subdiv"],
                          ["plain kernel split", "with subdivision"]):
    g = np.log10(np.clip(grid(col), 1e-17, None))
    pc = ax.pcolormesh(A, H, g, cmap="viridis", vmin=-16, vmax=0, shading="nearest")
    cs = ax.contour(A, H, A * H, colors="w", linewidths=0.8,
                    levels=[0.1, 1, 4, 10, 100, 1000])
    ax.clabel(cs, fmt=lambda v: f"αh={v:g}", fontsize=7)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("α")
    ax.set_title(title)
axes[0].set_ylabel("h")
fig.colorbar(pc, ax=axes, label="log10 relative error")
fig.savefig(out, dpi=150)
print(f"wrote {out}")
