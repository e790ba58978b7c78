# Typical growth exponent sigma: Lyapunov exponent of the pair.
import numpy as np

from overlapfree.constants import load
from overlapfree.counting import sigma_empirical
from overlapfree.lyapunov import lyapunov_lower, mk_upper, rho1, rk_estimate

r1 = rho1()
print("rho_1 =", round(r1.value, 6), " eta =", round(r1.eta, 6), " log2 rho_1 =", round(r1.log2, 6))

# geometric means of norms. Valid upper bounds, but they approach sigma slowly
for k in (4, 8, 12, 16):
    print(f"r_{k} = {rk_estimate(k, threads=4):.5f}")

# the convex program does much better at modest k
for k in (4, 8, 12):
    res = mk_upper(k)
    print(f"k={k:2d}: sigma <= {res.sigma_upper:.6f}  (gap {res.gap:.1e}, {res.iterations} steps)")

# lower bound from a fixed nonnegative x (maximal ratio for each product of length t)
x = np.array(load().x_cert, dtype=float)
for s in (6, 8):
    low = lyapunov_lower(x, s, 16, threads=4)
    print(f"s={s}: sigma >= {low.sigma_lower:.6f}")

# sampling log u_n / log n for random n gives the same picture, slightly biased at finite k
for k in (20, 30, 40):
    est = sigma_empirical(k, 4000, seed=1)
    print(k, round(est.mean, 4), round(est.std, 4), est.within)

print("upper minus lower:", mk_upper(12).sigma_upper - lyapunov_lower(x, 8, 16, threads=4).sigma_lower)
