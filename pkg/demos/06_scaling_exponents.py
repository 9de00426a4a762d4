"""Power-law scaling of the energy gap between bulk positions and minimiser.

For gamma growing like n^q the gap alpha_n = E_n(bulk) - E_n(minimiser)
follows a power law alpha_n ~ n^{-p}; successive-doubling estimates of p
drift toward q for q = 1/4 and 1/2, consistent with the boundary layer
carrying an energy of order 1/gamma.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

import pileup as pk

n_list = [2**k for k in range(3, 9)]
report = pk.exponent_table(n_list, ["1/4", "1/2", "3/4"])

print(f"{'n':>5} {'rule':>5} {'gamma':>9} {'alpha':>12} {'p':>8}")
for row in report.rows:
    print(
        f"{row.n:>5} {row.gamma_rule:>5} {row.gamma:>9.4f} "
        f"{row.alpha:>12.6e} {row.p:>8.4f}"
    )

fig, ax = plt.subplots(figsize=(6, 4))
for rule, marker in [("1/4", "o"), ("1/2", "s"), ("3/4", "^")]:
    rows = [r for r in report.rows if r.gamma_rule == rule]
    ax.plot(
        [r.n for r in rows],
        [r.p for r in rows],
        marker + "-",
        label=f"gamma = n^({rule})",
    )
ax.set_xscale("log", base=2)
ax.axhline(0.25, color="0.8", lw=0.7)
ax.axhline(0.5, color="0.8", lw=0.7)
ax.axhline(0.75, color="0.8", lw=0.7)
ax.set_xlabel("n")
ax.set_ylabel("doubling exponent p")
ax.legend()
fig.tight_layout()
fig.savefig("demos/output/scaling_exponents.png", dpi=150)
print("figure saved to demos/output/scaling_exponents.png")
