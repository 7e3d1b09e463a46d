import numpy as np
import pytest

from lightcone.degenerate import build_default
from lightcone.errors import DegenerateSamples, DimensionMismatch
from lightcone.quadratic import metric, q, random_directions
from lightcone.transforms import (
    AffineMap,
    PoincareSimilarity,
    apply_similarity,
    boost,
    compose,
    decompose_similarity,
    fit_affine,
    invert,
    is_lorentz,
    random_similarity,
    spatial_rotation,
)


def preserves_q(Q, rng, count=200):
    # oracle independent of is_lorentz: q(Q x) == q(x) on random vectors
    x = rng.standard_normal((count, Q.shape[0]))
    return np.allclose(q(x @ Q.T), q(x), rtol=0, atol=1e-9 * (1 + np.max(np.abs(x)) ** 2) * 10)


def test_is_lorentz_examples():
    rng = np.random.default_rng(0)
    assert is_lorentz(np.eye(4))
    B = boost(3, 0.7)
    assert is_lorentz(B) and preserves_q(B, rng)
    assert not is_lorentz(np.diag([1.0, 1, 1, 2]))
    with pytest.raises(DimensionMismatch):
        is_lorentz(np.ones((3, 4)))


def test_boost():
    np.testing.assert_array_equal(boost(1, 0.0), np.eye(4))
    B = boost(3, 0.7)
    np.testing.assert_allclose(B[2:, 2:], [[np.cosh(0.7), np.sinh(0.7)], [np.sinh(0.7), np.cosh(0.7)]])
    np.testing.assert_allclose(boost(2, 0.7) @ boost(2, -0.7), np.eye(4), atol=1e-15)
    with pytest.raises(ValueError):
        boost(4, 0.1)
    with pytest.raises(ValueError):
        boost(0, 0.1)


def test_spatial_rotation():
    np.testing.assert_array_equal(spatial_rotation((1, 2), 0.0), np.eye(4))
    np.testing.assert_allclose(spatial_rotation((1, 2), np.pi / 2) @ [1, 0, 0, 0], [0, 1, 0, 0],
                               atol=1e-15)
    R = spatial_rotation((1, 3), 0.4) @ spatial_rotation((2, 3), -1.1)
    assert is_lorentz(R) and preserves_q(R, np.random.default_rng(1))
    with pytest.raises(ValueError):
        spatial_rotation((2, 2), 0.3)


def test_similarity_validation():
    with pytest.raises(ValueError):
        PoincareSimilarity(0.0, np.eye(4), np.zeros(4))
    with pytest.raises(ValueError):
        PoincareSimilarity(1.0, np.diag([1.0, 1, 1, 2]), np.zeros(4))
    with pytest.raises(DimensionMismatch):
        PoincareSimilarity(1.0, np.eye(4), np.zeros(3))


def test_apply_similarity_examples():
    r = np.array([1.0, 2.0, 3.0, 4.0])
    np.testing.assert_array_equal(apply_similarity(PoincareSimilarity.identity(), r), r)
    ps = PoincareSimilarity(2.0, np.eye(4), [0, 0, 0, 1])
    np.testing.assert_array_equal(ps([1, 0, 0, 1]), [2, 0, 0, 3])
    ps = PoincareSimilarity(1.0, boost(3, 0.7), np.zeros(4))
    assert abs(q(ps([3.0, 4.0, 0.0, 5.0]))) < 1e-12


def test_random_similarity_deterministic():
    a, b = random_similarity(9), random_similarity(9)
    assert a.k == b.k
    np.testing.assert_array_equal(a.Q, b.Q)
    np.testing.assert_array_equal(a.a, b.a)
    assert not np.array_equal(a.Q, random_similarity(10).Q)
    assert 0.5 <= a.k <= 2.0


def test_random_similarity_preserves_coherency():
    rng = np.random.default_rng(3)
    for seed in range(20):
        ps = random_similarity(seed)
        assert is_lorentz(ps.Q) and preserves_q(ps.Q, rng)
        r1 = rng.uniform(-10, 10, (1000, 4))
        r2 = r1 + rng.uniform(-10, 10, (1000, 1)) * random_directions(rng, 4, 1000)
        d = ps(r1) - ps(r2)
        assert np.all(np.abs(q(d)) <= 1e-9 * (1 + np.sum(d * d, axis=1)))


def test_two_sided_preservation():
    # q(phi r1 - phi r2) = k^2 q(r1 - r2) for coherent and non-coherent pairs
    rng = np.random.default_rng(4)
    for seed in range(50):
        ps = random_similarity(seed)
        r1 = rng.uniform(-10, 10, (200, 4))
        r2 = rng.uniform(-10, 10, (200, 4))
        dr = r1 - r2
        lhs = q(ps(r1) - ps(r2))
        bound = 1e-9 * (1 + np.sum(dr * dr, axis=1)) * ps.k**2
        assert np.all(np.abs(lhs - ps.k**2 * q(dr)) <= bound)


def test_compose_and_invert():
    rng = np.random.default_rng(5)
    ident = PoincareSimilarity.identity()
    ps = random_similarity(1)
    c = compose(ps, ident)
    assert c.k == ps.k
    np.testing.assert_array_equal(c.Q, ps.Q)
    inv = invert(ident)
    np.testing.assert_array_equal(inv.Q, np.eye(4))
    np.testing.assert_array_equal(inv.a, np.zeros(4))
    for s in range(30):
        p1, p2, p3 = (random_similarity(3 * s + i) for i in range(3))
        r = rng.uniform(-10, 10, (20, 4))
        np.testing.assert_allclose(compose(p1, p2)(r), p1(p2(r)), rtol=1e-9, atol=1e-9)
        lhs, rhs = compose(compose(p1, p2), p3), compose(p1, compose(p2, p3))
        np.testing.assert_allclose(lhs(r), rhs(r), rtol=1e-9, atol=1e-9)
        for e in (compose(p1, invert(p1)), compose(invert(p1), p1)):
            np.testing.assert_allclose(e(r), r, atol=1e-9)
            np.testing.assert_allclose(e.Q, np.eye(4), atol=1e-9)


def test_fit_affine_exact_map():
    rng = np.random.default_rng(6)
    L = rng.standard_normal((4, 4))
    b = rng.standard_normal(4)
    X = rng.uniform(-10, 10, (100, 4))
    am, res = fit_affine(X, X @ L.T + b)
    assert res <= 1e-10
    np.testing.assert_allclose(am.L, L, atol=1e-9)
    np.testing.assert_allclose(am.b, b, atol=1e-9)


def test_fit_affine_degenerate_samples():
    X = np.tile([1.0, 2.0, 3.0, 4.0], (10, 1))
    with pytest.raises(DegenerateSamples):
        fit_affine(X, X)
    with pytest.raises(DegenerateSamples):
        fit_affine(np.eye(4), np.eye(4))


def test_fit_affine_on_patch_map_is_poor():
    spec = build_default(3, 0.2, rng_seed=1)
    rng = np.random.default_rng(7)
    X = np.concatenate([p.center + rng.uniform(-0.15, 0.15, (100, 4)) for p in spec.patches])
    _, res = fit_affine(X, spec(X))
    assert res > 1e-6


def test_decompose_examples():
    ps = decompose_similarity(AffineMap(3 * np.eye(4), np.zeros(4)))
    assert ps.k == pytest.approx(3.0, rel=1e-15)
    np.testing.assert_allclose(ps.Q, np.eye(4), atol=1e-15)

    B = boost(3, 0.7)
    b = np.array([1.0, -2.0, 0.5, 3.0])
    ps = decompose_similarity(AffineMap(2 * B, b))
    assert ps.k == pytest.approx(2.0, rel=1e-12)
    np.testing.assert_allclose(ps.Q, B, atol=1e-12)
    np.testing.assert_array_equal(ps.a, b)

    assert decompose_similarity(AffineMap(np.diag([1.0, 2, 3, 4]), np.zeros(4))) is None
    assert decompose_similarity(AffineMap(np.zeros((4, 4)), np.zeros(4))) is None


def test_decompose_round_trip():
    for seed in range(100):
        ps = random_similarity(seed)
        got = decompose_similarity(ps.to_affine())
        assert abs(got.k - ps.k) / ps.k <= 1e-9
        assert np.linalg.norm(got.Q - ps.Q) / np.linalg.norm(ps.Q) <= 1e-9
        assert np.linalg.norm(got.a - ps.a) / np.linalg.norm(ps.a) <= 1e-9


def test_decompose_orientation_reversing():
    # time reversal and spatial reflection are Lorentz with det -1 or +1
    for D in (np.diag([-1.0, -1, -1, 1]), np.diag([1.0, 1, 1, -1]), -np.eye(4)):
        ps = decompose_similarity(AffineMap(1.5 * D, np.ones(4)))
        assert ps is not None and ps.k == pytest.approx(1.5)
        np.testing.assert_allclose(ps.Q @ metric(4) @ ps.Q.T, metric(4), atol=1e-12)
