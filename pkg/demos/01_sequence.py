# Counting overlap-free binary words two ways and comparing.
import time

import numpy as np

from overlapfree.counting import count_exact, count_many, table
from overlapfree.words import frontier, oracle_counts

np.set_printoptions(linewidth=120)

# the brute-force side: grow the set of overlap-free words one letter at a time
print(frontier(4))          # 10 words of length 4
t0 = time.perf_counter()
u = oracle_counts(300)
print(f"oracle to length 300 in {time.perf_counter() - t0:.1f}s")

# the matrix side: u_n = w^T y_{n-1}, with y built from the binary digits of n-1
print([count_exact(n) for n in range(16)])
assert all(count_exact(n) == u[n] for n in range(301))

# the recurrence is cheap even where enumeration is hopeless
for n in (10**6, 2**40 + 5, 2**64 + 1):
    print(n, count_exact(n))

# the first 200 values, as a (n, u_n) array
arr = np.array(table(1, 200), dtype=object)
print(arr[-5:])

# u_n / n^1.3 stays in a narrow band while u_n itself grows a lot
ns = np.arange(16, 5000)
vals = np.array(count_many(ns.tolist()), dtype=float)
ratio = vals / ns ** 1.3
print("u_n / n^1.3 ranges over", ratio.min().round(3), "to", ratio.max().round(3))
