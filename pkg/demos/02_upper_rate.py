# Upper growth exponent: the joint spectral radius of (A_0, A_1).
import math

from overlapfree.jsr import (
    beta_bounds,
    jsr_lower,
    jsr_upper_norm,
    stored_certificate,
    verify_ellipsoid_certificate,
)

# lower side. The best short product is A_0 A_1; longer words never beat it here
for d in (1, 2, 6, 12):
    val, w = jsr_lower(d)
    print(f"depth {d:2d}: {val:.7f} from word {''.join(map(str, w))}")

# upper side, plain norms of all products of one length (slow to converge)
for d in (1, 4, 8):
    print("one-norm depth", d, round(jsr_upper_norm(d, "one"), 5),
          " two-norm", round(jsr_upper_norm(d, "two"), 5))

# an ellipsoidal norm makes the same search tight very quickly
print("ellipsoid depth 8:", round(jsr_upper_norm(8, "ellipsoid"), 6))

# checking the stored ellipsoid over all 2^14 products of length 14
res = verify_ellipsoid_certificate(stored_certificate(), threads=4)
print({k: res[k] for k in ("verified", "achieved_c", "worst_word", "seconds")})

rep = beta_bounds(threads=4)
print(f"beta in [{rep.lower:.6f}, {rep.upper:.6f}]  width {rep.upper - rep.lower:.2e}")
print("log2 sqrt(rho(A0 A1)) =", math.log2(jsr_lower(2)[0]))
