"""Collapse of the blown-up density mismatch at the lock.

For each run the density mismatch rho_n - rho_* is blown up by gamma; near
the lock the resulting profiles fall on a single curve regardless of n and
of how gamma grows with n, which is the numerical signature of a boundary
layer of width 1/gamma.
"""

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

import pileup as pk

runs = {}
for n, rule in [(2**4, "1/4"), (2**6, "1/4"), (2**8, "1/4"),
                (2**8, "1/2"), (2**8, "3/4")]:
    gamma = pk.gamma_for(rule, n)
    runs[(n, rule)] = pk.rescaled_nu_samples(pk.newton_minimize(n, gamma))

fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
for (n, rule), run in runs.items():
    if rule != "1/4":
        continue
    keep = run.locations < 3.0
    axes[0].plot(run.locations[keep], run.values[keep], ".", ms=4, label=f"n = {n}")
axes[0].set_title("different n, gamma = n^(1/4)")
axes[0].set_xlabel("blown-up distance to the lock")
axes[0].set_ylabel("blown-up density mismatch")
axes[0].legend()

for (n, rule), run in runs.items():
    if n != 2**8:
        continue
    keep = run.locations < 3.0
    axes[1].plot(run.locations[keep], run.values[keep], ".", ms=4, label=f"gamma = n^({rule})")
axes[1].set_title("n = 2^8, different gamma rules")
axes[1].set_xlabel("blown-up distance to the lock")
axes[1].legend()

fig.tight_layout()
fig.savefig("demos/output/layer_collapse.png", dpi=150)

metric = pk.collapse_metric([runs[(2**6, "1/4")], runs[(2**8, "1/4")]])
print("collapse metric, n = 2^6 vs 2^8 at n^(1/4):", metric)
metric = pk.collapse_metric([runs[(2**8, "1/2")], runs[(2**8, "3/4")]])
print("collapse metric, rules 1/2 vs 3/4 at n = 2^8:", metric)
print("figure saved to demos/output/layer_collapse.png")
