import math
from fractions import Fraction

import numpy as np
import pytest

from overlapfree.linalg import NotPositiveDefiniteError, dominant_eigenvalue
from overlapfree.lsr import (
    ConeCert,
    PreconditionError,
    SdpCert,
    alpha_bounds,
    common_zero_columns,
    lsr_upper,
    stored_cone_certificate,
    search_cone_certificate,
    verify_cone_certificate,
    verify_sdp_certificate,
)
from overlapfree.products import product


def test_depth_one_is_rho_a0(family):
    val, w = lsr_upper(1)
    # A_0 and A_1 share their spectral radius, so either letter may be reported
    assert len(w) == 1
    assert val == pytest.approx(dominant_eigenvalue(family[0]).value, rel=1e-9)
    assert abs(math.log2(val) - 1.276) <= 1e-3
    assert val >= dominant_eigenvalue(family[0]).lower


def test_depth_eleven_witness():
    val, w = lsr_upper(11)
    assert sorted(w) == [0] + [1] * 10          # a rotation of A_1^10 A_0
    assert abs(math.log2(val) - 1.2735) <= 5e-4


def test_depth_range():
    for d in (0, 15):
        with pytest.raises(ValueError):
            lsr_upper(d)


def test_stored_cone_certificate_exact():
    cert = stored_cone_certificate()
    assert cert.integral and cert.r == Fraction(241, 100) ** 16
    res = verify_cone_certificate(cert)
    assert res["verified"] and res["mode"] == "exact"
    assert res["implied_alpha"] == pytest.approx(math.log2(2.41), abs=1e-12)
    assert res["implied_alpha"] > 1.2690
    assert res["worst_relative_margin"] > 0


def test_too_large_rate_fails():
    x = stored_cone_certificate().x
    res = verify_cone_certificate(ConeCert(x, Fraction(26, 10), 6, 16))
    assert not res["verified"] and res["implied_alpha"] is None


def test_zero_rate_is_trivial(rng):
    x = tuple(rng.uniform(0.1, 1.0, size=20))
    res = verify_cone_certificate(ConeCert(x, 0, 3, 6))
    assert res["verified"] and res["mode"] == "float"


def test_cone_cert_validation():
    with pytest.raises(ValueError):
        ConeCert((1.0, -1.0), 2, 1, 2)
    with pytest.raises(ValueError):
        ConeCert((0.0, 0.0), 2, 1, 2)
    with pytest.raises(ValueError):
        ConeCert((1.0,), 2, 3, 2)
    assert ConeCert((1,), 2.41, 0, 1).r_base == Fraction(241, 100)


def test_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        verify_cone_certificate(ConeCert((1.0,) * 19, 2, 1, 2))


def _zero_column_family():
    a0 = np.array([[1.0, 0.0, 2.0], [1.0, 0.0, 1.0], [0.5, 0.0, 3.0]])
    a1 = np.array([[2.0, 0.0, 1.0], [3.0, 0.0, 0.5], [1.0, 0.0, 1.0]])
    return a0, a1


def test_precondition_and_reduction():
    a0, a1 = _zero_column_family()
    assert common_zero_columns([a0, a1]) == [1]
    with pytest.raises(PreconditionError):
        verify_cone_certificate(ConeCert((1.0, 1.0, 1.0), 1, 1, 2), mats=[a0, a1])
    keep = [0, 2]
    r0, r1 = (a[np.ix_(keep, keep)] for a in (a0, a1))
    for d in (1, 4, 8):
        full = lsr_upper(d, mats=[a0, a1])[0]
        red = lsr_upper(d, mats=[r0, r1])[0]
        assert full == pytest.approx(red, rel=1e-9)
    # the reduced family admits a certificate at its own rate
    rate = lsr_upper(8, mats=[r0, r1])[0]
    cert = search_cone_certificate(round(0.95 * rate, 2), 1, 2, mats=[r0, r1])
    assert cert is not None


def test_search_demo_finds_certificate():
    cert = search_cone_certificate(2.3, 4, 8)
    assert cert is not None
    again = verify_cone_certificate(cert)
    assert again["verified"] and again["implied_rho"] == pytest.approx(2.3)


def test_search_above_upper_bound_never_verifies():
    up = lsr_upper(14)[0]
    r = Fraction(math.ceil(up * 1.01 * 100), 100)
    assert search_cone_certificate(r, 2, 4, budget=5) is None


def test_search_warm_start_returns_immediately():
    cert = stored_cone_certificate()
    found = search_cone_certificate("2.41", 6, 16, budget=1, x0=np.array(cert.x, float))
    assert found is not None and found.x == tuple(float(v) for v in cert.x)


def test_verify_never_exceeds_product_bound():
    x = stored_cone_certificate().x
    for s, t in ((1, 2), (2, 4), (4, 8)):
        up = lsr_upper(t)[0]
        assert not verify_cone_certificate(ConeCert(x, Fraction(up) * Fraction(1001, 1000), s, t))["verified"]


def test_induction_step(family, rng):
    cert = stored_cone_certificate()
    x = cert.x_array()
    t = cert.t
    r = float(cert.r)
    from overlapfree.products import applied_vectors
    c = float(applied_vectors(family, t, x).sum(axis=1).min()) / r
    for _ in range(100):
        w = tuple(int(v) for v in rng.integers(0, 2, size=3 * t))
        lhs = float(np.ones(20) @ product(family, w) @ x)
        assert lhs >= c * r ** 3 * (1 - 1e-9)


def test_cone_json_round_trip():
    cert = stored_cone_certificate()
    back = ConeCert.from_json(cert.to_json())
    assert back == cert
    with pytest.raises(ValueError):
        ConeCert.from_json('{"type": "ellipsoid"}')


def test_sdp_identity_zero_rate():
    res = verify_sdp_certificate(SdpCert(np.eye(20), 0.0, 1, 3))
    assert res["verified"] and res["implied_bound"] == 0.0


def test_sdp_diagonal_congruence():
    mats = [np.diag([2.0, 3.0]), np.diag([3.0, 2.5])]
    # every length-2 product has diagonal >= 4, so x = (1, 1) is a cone certificate at r = 4
    cone = verify_cone_certificate(ConeCert((1.0, 1.0), 2, 1, 2), mats=mats)
    assert cone["verified"]
    d = np.diag([1.0, 1.0])
    sdp = verify_sdp_certificate(SdpCert(d @ d, 16.0, 1, 2), mats=mats)
    assert sdp["verified"]
    assert sdp["implied_bound"] == pytest.approx(cone["implied_rho"])
    assert not verify_sdp_certificate(SdpCert(d @ d, 16.5, 1, 2), mats=mats)["verified"]


def test_sdp_rate_too_large():
    t = 2
    up = lsr_upper(t)[0]
    res = verify_sdp_certificate(SdpCert(np.eye(20), 1.01 * up ** (2 * t), 1, t))
    assert not res["verified"]


def test_sdp_requires_pd():
    with pytest.raises(NotPositiveDefiniteError):
        verify_sdp_certificate(SdpCert(-np.eye(20), 0.0, 1, 2))
    with pytest.raises(NotPositiveDefiniteError):
        SdpCert(np.triu(np.ones((3, 3))), 0.0, 1, 2)


def test_alpha_bounds():
    rep = alpha_bounds()
    assert not rep.flags
    assert rep.lower == pytest.approx(1.26903, abs=1e-5)
    assert rep.upper == pytest.approx(1.27355, abs=1e-5)
    assert rep.contains(1.2690, 1.2736, tol=2e-4)


def test_alpha_bounds_variants():
    rep = alpha_bounds(cert=None)
    assert rep.lower == -math.inf and "no-lower-certificate" in rep.flags
    assert alpha_bounds(cert=None, depth=1).upper == pytest.approx(1.276, abs=1e-3)
