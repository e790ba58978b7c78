# Finite-size exponents alpha_k, beta_k drift slowly toward the limits.
import numpy as np

from overlapfree.counting import growth_exponents

g = growth_exponents(20)
k = np.array(g.k, dtype=float)
a = np.array(g.alpha)
b = np.array(g.beta)
print(np.column_stack([k, a, b])[-6:].round(5))

# log u_n / log n = e + log C / log n + ..., so fit against 1/k over the tail
sel = k >= 10
for deg in (1, 2):
    pa = np.polyfit(1 / k[sel], a[sel], deg)
    pb = np.polyfit(1 / k[sel], b[sel], deg)
    print(f"degree {deg}: alpha -> {pa[-1]:.4f}, beta -> {pb[-1]:.4f}")

# residuals of the linear fit stay small, so the 1/k model is reasonable
pa = np.polyfit(1 / k[sel], a[sel], 1)
print("max residual", np.abs(np.polyval(pa, 1 / k[sel]) - a[sel]).max().round(5))
