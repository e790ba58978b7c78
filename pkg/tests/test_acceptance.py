"""Acceptance gate: one PASS/FAIL line per criterion, then the assertion.

Run under pytest (``pytest tests/test_acceptance.py -s`` shows the lines in
order) or directly with ``python3 tests/test_acceptance.py`` for a summary.
"""

import math
import time

import numpy as np
import pytest

from overlapfree.constants import (
    ConeParams,
    load,
    validate_cone,
    validate_structure,
    validate_zm_in_S,
)
from overlapfree.counting import (
    count_exact,
    count_many,
    growth_exponents,
    ratio_diagnostic,
    sigma_empirical,
)
from overlapfree.jsr import jsr_lower, stored_certificate, verify_ellipsoid_certificate
from overlapfree.linalg import ellipsoid_norm, one_norm
from overlapfree.lsr import alpha_bounds, lsr_upper, stored_cone_certificate, verify_cone_certificate
from overlapfree.lyapunov import lyapunov_lower, mk_upper, rho1, rk_estimate
from overlapfree.words import complement, frontier, oracle_counts

FIRST_SIXTEEN = [1, 2, 4, 6, 10, 14, 20, 24, 30, 36, 44, 48, 60, 60, 62, 72]
ALPHA = (1.2690, 1.2736)
BETA = (1.3322, 1.3326)
RATIO_FROZEN = (0.388, 0.993)


def report(n, ok, detail, capsys=None):
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    return ok


def _timed(fn, *a, **kw):
    t0 = time.perf_counter()
    out = fn(*a, **kw)
    return out, time.perf_counter() - t0


def criterion_1():
    oracle_counts.cache_clear()
    u, dt = _timed(oracle_counts, 500)
    bad = [n for n in range(501) if count_exact(n) != u[n]]
    ok = not bad and dt < 60 and list(u[:16]) == FIRST_SIXTEEN
    return ok, f"count == oracle for N <= 500 (mismatches {bad[:3]}), oracle {dt:.1f}s"


def criterion_2():
    (val, w), dt = _timed(jsr_lower, 2)
    ok = abs(val - 2.5179) <= 5e-4 and math.log2(val) >= 1.3322 and dt < 1 and w == (0, 1)
    return ok, f"rho(A0A1)^(1/2) = {val:.6f}, log2 = {math.log2(val):.6f}, {dt:.2f}s"


def criterion_3():
    res = verify_ellipsoid_certificate(stored_certificate(), threads=4)
    c = res["achieved_c"]
    ok = res["seconds"] < 120 and c <= 2.5186 * 1.001 and math.log2(c) < 1.3330
    return ok, (f"achieved_c = {c:.7f} (verified at 2.5186: {res['verified']}), "
                f"beta <= {math.log2(c):.6f}, {res['seconds']:.1f}s")


def criterion_4():
    t0 = time.perf_counter()
    v11, w11 = lsr_upper(11)
    v14, w14 = lsr_upper(14)
    dt = time.perf_counter() - t0
    l11, l14 = math.log2(v11), math.log2(v14)
    ok = (sorted(w11) == [0] + [1] * 10 and abs(l11 - 1.2735) <= 5e-4
          and l14 >= l11 - 1e-4 and dt < 300)
    return ok, f"A_1^10 A_0: log2 = {l11:.6f}; best to length 14 = {l14:.6f}, {dt:.1f}s"


def criterion_5():
    res = verify_cone_certificate(stored_cone_certificate(), threads=4)
    ok = (res["verified"] and res["mode"] == "exact" and res["implied_alpha"] > 1.2690
          and res["seconds"] < 180)
    ia = res["implied_alpha"]
    return ok, (f"verified={res['verified']} mode={res['mode']} "
                f"alpha >= {ia if ia is None else round(ia, 6)}, {res['seconds']:.1f}s")


def criterion_6():
    t0 = time.perf_counter()
    low = lyapunov_lower(np.array(load().x_cert, float), 8, 16, threads=4)
    mk = mk_upper(12)
    dt = time.perf_counter() - t0
    a_low = alpha_bounds(threads=4).lower
    b_up = math.log2(verify_ellipsoid_certificate(stored_certificate(), threads=4)["achieved_c"])
    nest = a_low < low.sigma_lower <= mk.sigma_upper < b_up
    ok = (low.sigma_lower >= 1.3005 - 1e-4 and mk.sigma_upper <= 1.3098 + 1e-3
          and dt < 600 and nest)
    return ok, (f"sigma in [{low.sigma_lower:.6f}, {mk.sigma_upper:.6f}] "
                f"(need lower >= 1.3004), nesting {nest}, {dt:.1f}s")


def criterion_7():
    r = rho1()
    r20, dt = _timed(rk_estimate, 20, threads=4)
    mk = mk_upper(12)
    ok = (abs(r.value - 2.479) <= 1e-3 and abs(r.eta - 2.310) <= 1e-3
          and abs(r20 - 2.4865) <= 1e-3 and dt < 300 and 2.0 ** mk.sigma_upper < r.value)
    return ok, (f"rho_1 = {r.value:.6f}, eta = {r.eta:.6f}, r_20 = {r20:.6f} ({dt:.1f}s), "
                f"m_12^(1/12) <= {2.0 ** mk.sigma_upper:.6f}")


def _submultiplicative(rng, p):
    for _ in range(200):
        a, b = rng.uniform(-1, 1, size=(2, 20, 20))
        if one_norm(a @ b) > one_norm(a) * one_norm(b) * (1 + 1e-12):
            return False
        if ellipsoid_norm(a @ b, p) > ellipsoid_norm(a, p) * ellipsoid_norm(b, p) * (1 + 1e-10):
            return False
    return True


def criterion_8():
    d = load()
    failed = [r.name for r in validate_structure(d, strict=False) if not r.passed]
    if not validate_cone(ConeParams(), d).passed:
        failed.append("cone eps=1/4")
    zm = validate_zm_in_S(d, strict=False)
    if not zm.passed:
        bad_m = [msg.split(":")[0] for msg in zm.details]
        failed.append(f"z_m in S ({', '.join(bad_m)})")
    u = count_many(range(0, 10_002))
    if any(u[n + 1] > 2 * u[n] for n in range(10_001)):
        failed.append("u_{n+1} <= 2 u_n")
    sets = {n: set(frontier(n)) for n in range(13)}
    if not all(w[:-1] in sets[n - 1] for n in range(1, 13) for w in sets[n]):
        failed.append("prefix closure")
    if not all(complement(w) in sets[n] and w[::-1] in sets[n] for n in sets for w in sets[n]):
        failed.append("complement/reversal")
    if not _submultiplicative(np.random.default_rng(8), d.P_cert):
        failed.append("submultiplicativity")
    return not failed, "all structural checks hold" if not failed else f"failing: {failed}"


def criterion_9():
    rng = np.random.default_rng(0)
    sample = rng.integers(16, 2 ** 40, size=10_000, dtype=np.int64).tolist()
    r = ratio_diagnostic(sample)
    a_ok = RATIO_FROZEN[0] <= r.min and r.max <= RATIO_FROZEN[1]
    g = growth_exponents(20)
    a20, b20 = g.alpha[-1], g.beta[-1]
    b_ok = (ALPHA[0] - 0.02 <= a20 <= ALPHA[1] + 0.02) and (BETA[0] - 0.02 <= b20 <= BETA[1] + 0.02)
    f30 = sigma_empirical(30, 10_000, seed=0).within[0.05]
    f40 = sigma_empirical(40, 10_000, seed=0).within[0.05]
    c_ok = f40 >= f30
    return a_ok and b_ok and c_ok, (
        f"(a) {'ok' if a_ok else 'no'} ratio in [{r.min:.5f}, {r.max:.5f}]; "
        f"(b) {'ok' if b_ok else 'no'} alpha_20 = {a20:.5f}, beta_20 = {b20:.5f}; "
        f"(c) {'ok' if c_ok else 'no'} within 0.05: {f30:.4f} -> {f40:.4f}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    report(n, ok, detail, capsys)
    assert ok, detail


if __name__ == "__main__":
    results = [report(i, *fn()) for i, fn in enumerate(CRITERIA, 1)]
    print(f"{sum(results)}/{len(results)} criteria pass")
