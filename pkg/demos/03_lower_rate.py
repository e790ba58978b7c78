# Lower growth exponent: the lower spectral radius, from both directions.
import math
import time

from overlapfree.lsr import (
    alpha_bounds,
    lsr_upper,
    stored_cone_certificate,
    search_cone_certificate,
    verify_cone_certificate,
)

# any single product gives an upper bound; A_1^10 A_0 is the best one up to length 14
val, w, runner = lsr_upper(14, return_runner_up=True)
print("best word", "".join(map(str, w)), "log2 =", round(math.log2(val), 6),
      " next best", round(math.log2(runner), 6))

# a lower bound needs a vector x with B(Ax - r x) >= 0 for every B of length s and A of length t.
# The stored x is integral, so the check is done exactly
cert = stored_cone_certificate()
res = verify_cone_certificate(cert, threads=4)
print(res["mode"], res["verified"], "alpha >=", round(res["implied_alpha"], 6),
      "worst margin", f"{res['worst_relative_margin']:.2e}")

# finding such an x from scratch with constraint generation, on a smaller instance
for r, s, t in (("2.3", 4, 8), ("2.38", 4, 8), ("2.39", 6, 10)):
    t0 = time.perf_counter()
    found = search_cone_certificate(r, s, t, threads=4)
    print(f"r={r} s={s} t={t}:", "found" if found else "not found",
          f"in {time.perf_counter() - t0:.1f}s")

# above the product bound nothing can ever verify
print(search_cone_certificate("2.43", 2, 4, budget=5))

rep = alpha_bounds(threads=4)
print(f"alpha in [{rep.lower:.6f}, {rep.upper:.6f}]", rep.flags)
