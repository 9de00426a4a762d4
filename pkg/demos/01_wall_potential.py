"""The wall-wall interaction potential and its transform.

Plots V on linear and log scales against its two asymptotes (logarithmic
divergence at contact, 2|s|e^{-2|s|} decay at large separation), and the
strictly positive Fourier transform that makes the interaction term of the
layer energy a square.
"""

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

import pileup as pk

s = np.linspace(1e-3, 6.0, 800)
v = pk.interaction(s)

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
axes[0].plot(s, v, "k-", label="V(s)")
axes[0].plot(s, -np.log(s) + 1 - np.log(2.0), "b--", label=r"$-\log s + 1 - \log 2$")
axes[0].plot(s, 2 * s * np.exp(-2 * s), "r:", label=r"$2s\,e^{-2s}$")
axes[0].set_ylim(0, 4)
axes[0].set_xlabel("s")
axes[0].legend()
axes[0].set_title("wall interaction and its asymptotes")

w = np.logspace(-2, 2, 400)
axes[1].loglog(w, pk.fourier(w), "k-")
axes[1].loglog(w, 1.0 / (2.0 * w), "r:", label=r"$1/(2\omega)$ tail")
axes[1].set_xlabel(r"$\omega$")
axes[1].legend()
axes[1].set_title("Fourier transform (strictly positive)")

fig.tight_layout()
fig.savefig("demos/output/wall_potential.png", dpi=150)

print("half-line integral of V:", pk.HALF_MASS, "(= pi^2/6)")
print("first moment of V      :", pk.first_moment())
print("transform at 0         :", pk.fourier(0.0), "(= twice the half-line integral)")
print("figure saved to demos/output/wall_potential.png")
