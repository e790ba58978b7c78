import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from overlapfree.linalg import (
    DimensionError,
    ExactMatrix,
    ExactVector,
    NotPositiveDefiniteError,
    ReducibleError,
    as_real,
    dominant_eigenvalue,
    dominant_eigenvalue_batch,
    ellipsoid_norm,
    ellipsoid_transform,
    is_irreducible,
    is_negative_definite,
    one_norm,
    perron_left_vector,
    project_simplex,
)

small_ints = st.integers(-50, 50)


def test_exact_matrix_construction():
    m = ExactMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert m.shape == (2, 3)
    assert m[1, 2] == 6
    assert m.transpose().to_rows() == [[1, 4], [2, 5], [3, 6]]
    assert (ExactMatrix.identity(2) @ m) == m
    with pytest.raises(DimensionError):
        ExactMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(DimensionError):
        m @ m
    with pytest.raises(DimensionError):
        m + m.transpose()


def test_block_assembly():
    a = ExactMatrix.identity(2)
    z = ExactMatrix.zeros(2, 1)
    b = ExactMatrix.block([[a, z], [ExactMatrix.zeros(1, 2), ExactMatrix.identity(1)]])
    assert b == ExactMatrix.identity(3)
    assert b.submatrix(0, 2, 0, 2) == a


def test_exact_arithmetic_is_exact():
    big = 3 ** 80
    m = ExactMatrix.from_rows([[big, 1], [0, big]])
    p = m @ m
    assert p[0, 0] == big * big and p[0, 1] == 2 * big
    v = m @ ExactVector.of([1, 1])
    assert v.entries == (big + 1, big)


@settings(max_examples=60, deadline=None)
@given(arrays(np.int64, (4, 5), elements=small_ints), arrays(np.int64, (5, 3), elements=small_ints))
def test_mat_mul_matches_numpy(a, b):
    ea = ExactMatrix.from_rows(a.tolist())
    eb = ExactMatrix.from_rows(b.tolist())
    assert (ea @ eb).to_rows() == (a @ b).tolist()
    x = ExactVector.of(b[:, 0].tolist())
    assert list((ea @ x).entries) == (a @ b[:, 0]).tolist()


def test_as_real_rejects_nonfinite():
    with pytest.raises(ValueError):
        as_real([1.0, np.nan])
    with pytest.raises(ValueError):
        as_real([[np.inf]])


@pytest.mark.parametrize("m, rho", [
    (np.eye(3), 1.0),
    (np.zeros((3, 3)), 0.0),
    (np.array([[0.0, 1.0], [1.0, 0.0]]), 1.0),     # periodic
    (np.array([[2.0, 1.0], [0.0, 1.0]]), 2.0),     # reducible
    (np.array([[1.0, 1.0], [0.0, 2.0]]), 2.0),
])
def test_dominant_eigenvalue_small_cases(m, rho):
    e = dominant_eigenvalue(m)
    assert e.lower <= rho + 1e-12 and e.upper >= rho - 1e-12
    assert e.width <= 1e-9 * max(rho, 1)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (6, 6), elements=st.floats(0, 10)))
def test_enclosure_contains_numpy_radius(a):
    e = dominant_eigenvalue(a)
    rho = max(abs(np.linalg.eigvals(a)))
    assert e.lower <= rho * (1 + 1e-9) + 1e-12
    assert e.upper >= rho * (1 - 1e-9) - 1e-12


def test_batch_matches_single(family):
    a0, a1 = family
    stack = np.array([a0, a1, a0 @ a1])
    lo, hi, _, ok = dominant_eigenvalue_batch(stack)
    assert ok.all()
    for i, m in enumerate(stack):
        e = dominant_eigenvalue(m)
        assert lo[i] == e.lower and hi[i] == e.upper


def test_enclosure_scale_equivariance_is_exact(family):
    a0, a1 = family
    for m in (a0, a1, a0 @ a1 @ a1):
        e, e2 = dominant_eigenvalue(m), dominant_eigenvalue(2 * m)
        assert e2.lower == 2 * e.lower and e2.upper == 2 * e.upper


def test_enclosure_root():
    e = dominant_eigenvalue(np.array([[4.0]]))
    r = e.root(2)
    assert r.lower == pytest.approx(2.0) and r.upper == pytest.approx(2.0)


def test_nonnegativity_required():
    with pytest.raises(ValueError):
        dominant_eigenvalue(np.array([[1.0, -1.0], [0.0, 1.0]]))
    with pytest.raises(DimensionError):
        dominant_eigenvalue(np.ones((2, 3)))


def test_perron_left_vector(family):
    a = 0.5 * (family[0] + family[1])
    v, rho = perron_left_vector(a)
    assert np.all(v > 0) and v.sum() == pytest.approx(1.0)
    assert np.allclose(a.T @ v, rho * v, rtol=1e-8, atol=1e-14)


def test_perron_left_vector_reducible():
    with pytest.raises(ReducibleError):
        perron_left_vector(np.diag([1.0, 2.0]))
    assert not is_irreducible(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert is_irreducible(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_one_norm(family):
    assert one_norm(family[0]) == 8.0 and one_norm(family[1]) == 7.0
    assert one_norm(np.array([[1.0, -3.0], [2.0, 1.0]])) == 4.0


def test_ellipsoid_norm_identity_is_spectral(rng):
    a = rng.normal(size=(5, 5))
    assert ellipsoid_norm(a, np.eye(5)) == pytest.approx(np.linalg.norm(a, 2))


def test_ellipsoid_norm_diagonal(rng):
    a = rng.uniform(size=(4, 4))
    d = np.diag([1.0, 2.0, 0.5, 3.0])
    assert ellipsoid_norm(a, d @ d) == pytest.approx(np.linalg.norm(d @ a @ np.linalg.inv(d), 2))


def test_ellipsoid_transform_rejects_bad_p():
    with pytest.raises(NotPositiveDefiniteError):
        ellipsoid_transform(np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(NotPositiveDefiniteError):
        ellipsoid_transform(np.array([[1.0, 0.5], [0.0, 1.0]]))


def _random_pd(rng, d):
    m = rng.normal(size=(d, d))
    return m @ m.T + d * np.eye(d)


def test_submultiplicativity_random(rng):
    """Both norms used for bounds are submultiplicative."""
    p = _random_pd(rng, 6)
    for _ in range(200):
        a, b = rng.normal(size=(2, 6, 6))
        assert one_norm(a @ b) <= one_norm(a) * one_norm(b) * (1 + 1e-12)
        assert ellipsoid_norm(a @ b, p) <= ellipsoid_norm(a, p) * ellipsoid_norm(b, p) * (1 + 1e-12)


def test_negative_definite():
    assert is_negative_definite(-np.eye(3))
    assert not is_negative_definite(np.eye(3))
    assert not is_negative_definite(np.diag([-1.0, 0.0]))
    # only the symmetric part matters
    assert is_negative_definite(np.array([[-1.0, 5.0], [-5.0, -1.0]]))


def test_project_simplex_against_slsqp(rng):
    from scipy.optimize import minimize
    for _ in range(10):
        y = rng.normal(size=7)
        w = rng.uniform(0.2, 2.0, size=7)
        x = project_simplex(y, w)
        ref = minimize(lambda z: ((z - y) ** 2).sum(), np.ones(7) / w.sum(),
                       constraints=[{"type": "eq", "fun": lambda z: w @ z - 1}],
                       bounds=[(0, None)] * 7, method="SLSQP", options={"ftol": 1e-14})
        assert np.all(x >= 0) and w @ x == pytest.approx(1.0)
        assert np.abs(x - ref.x).max() < 1e-6


def test_project_simplex_fixed_point():
    x = np.array([0.2, 0.3, 0.5])
    assert np.allclose(project_simplex(x), x)
    with pytest.raises(ValueError):
        project_simplex(x, np.array([1.0, 0.0, 1.0]))
