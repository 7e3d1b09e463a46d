import numpy as np
import pytest

from lightcone.errors import DimensionMismatch, NotProjection, SingularT
from lightcone.hermitian import (
    Herm2,
    event_to_herm,
    herm_to_event,
    rank2,
    standard_preserver,
    standard_preserver_as_affine,
    trace_degenerate_preserver,
)
from lightcone.quadratic import is_adjacent, minkowski_inner, random_directions
from lightcone.transforms import decompose_similarity

ZERO = Herm2(0.0, 0.0, 0.0, 0.0)
IDENT = Herm2(1.0, 1.0, 0.0, 0.0)


def random_herm(rng, size, scale=10.0):
    return Herm2.from_array(rng.uniform(-scale, scale, (size, 4)))


def adjacent_pairs(rng, size, scale=10.0):
    """Rank-one differences: B = A + s v v* for a random complex vector v."""
    A = random_herm(rng, size, scale)
    v = rng.standard_normal((size, 2)) + 1j * rng.standard_normal((size, 2))
    s = rng.uniform(0.5, 3.0, size) * rng.choice([-1, 1], size)
    R = s[:, None, None] * np.einsum("ni,nj->nij", v, v.conj())
    return A, A + Herm2.from_matrix(R)


def test_event_to_herm_examples():
    A = event_to_herm([0, 0, 0, 1])
    assert (A.d1, A.d2, A.off_re, A.off_im) == (1, 1, 0, 0)
    A = event_to_herm([1, 2, 3, 5])
    assert (A.d1, A.d2, A.off_re, A.off_im) == (8, 2, 1, 2)
    assert A.det() == 11
    with pytest.raises(DimensionMismatch):
        event_to_herm([1, 2, 3])


def test_herm_to_event_examples():
    np.testing.assert_array_equal(herm_to_event(IDENT), [0, 0, 0, 1])
    np.testing.assert_array_equal(herm_to_event(ZERO), [0, 0, 0, 0])
    np.testing.assert_array_equal(herm_to_event(Herm2(8, 2, 1, 2)), [1, 2, 3, 5])


def test_matrix_layout():
    M = event_to_herm([1, 2, 3, 5]).to_matrix()
    np.testing.assert_array_equal(M, [[8, 1 + 2j], [1 - 2j, 2]])
    assert np.linalg.det(M).real == pytest.approx(11)


def test_round_trip_and_isometry():
    rng = np.random.default_rng(0)
    r = rng.uniform(-100, 100, (10**5, 4))
    A = event_to_herm(r)
    # (t+z)+(t-z) rounds, so the recovered event agrees to a few ulps
    back = herm_to_event(A)
    assert np.all(np.abs(back - r) <= 4 * np.finfo(float).eps * np.abs(r).max(axis=1, keepdims=True))
    ints = rng.integers(-1000, 1000, (1000, 4)).astype(float)
    np.testing.assert_array_equal(herm_to_event(event_to_herm(ints)), ints)
    err = np.abs(A.det() - minkowski_inner(r, r))
    assert np.all(err <= 1e-12 * (1 + np.sum(r * r, axis=1)))


def test_rank2_examples():
    assert rank2(ZERO) == 0
    assert rank2(Herm2(1.0, 0.0, 0.0, 0.0)) == 1
    assert rank2(IDENT) == 2


def test_adjacency_matches_rank_one():
    rng = np.random.default_rng(1)
    m = 10**4
    r1 = rng.uniform(-10, 10, (m, 4))
    r2 = r1.copy()
    kind = rng.integers(0, 3, m)
    coh = kind == 0
    r2[coh] += rng.uniform(-10, 10, (coh.sum(), 1)) * random_directions(rng, 4, coh.sum())
    rnd = kind == 1
    r2[rnd] = rng.uniform(-10, 10, (rnd.sum(), 4))
    adj = is_adjacent(r1, r2)
    rk = rank2(event_to_herm(r1) - event_to_herm(r2))
    assert np.array_equal(adj, rk == 1)
    assert adj.sum() > 1000 and (rk == 0).sum() > 1000


def test_standard_preserver_examples():
    A = Herm2(1.5, -0.5, 0.25, 2.0)
    out = standard_preserver(1, np.eye(2), ZERO, False, A)
    np.testing.assert_allclose(out.to_array(), A.to_array())
    out = standard_preserver(1, np.diag([2.0, 1.0]), ZERO, False, IDENT)
    np.testing.assert_allclose(out.to_array(), [4, 1, 0, 0])
    with pytest.raises(SingularT):
        standard_preserver(1, np.array([[1, 2], [2, 4]]), ZERO, False, A)
    # transpose conjugates the off-diagonal entry
    out = standard_preserver(-1, np.eye(2), ZERO, True, A)
    np.testing.assert_allclose(out.to_array(), [-1.5, 0.5, -0.25, 2.0])


@pytest.mark.parametrize("c,transpose", [(1, False), (-1, False), (1, True), (-1, True)])
def test_standard_preserver_keeps_adjacency(c, transpose):
    rng = np.random.default_rng(3)
    T = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    S = Herm2(*rng.standard_normal(4))
    A, B = adjacent_pairs(rng, 10**4)
    assert np.all(rank2(A - B) == 1)
    out = standard_preserver(c, T, S, transpose, A) - standard_preserver(c, T, S, transpose, B)
    assert np.all(rank2(out) == 1)


def test_trace_preserver_examples():
    R = Herm2(1.0, 0.0, 0.0, 0.0)
    S = Herm2(0.5, 1.0, -2.0, 0.3)
    out = trace_degenerate_preserver(R, S, Herm2(1.0, -1.0, 4.0, 2.0))
    np.testing.assert_array_equal(out.to_array(), S.to_array())
    out = trace_degenerate_preserver(R, ZERO, Herm2(2.0, 3.0, 0.0, 0.0))
    np.testing.assert_array_equal(out.to_array(), [5, 0, 0, 0])
    with pytest.raises(NotProjection):
        trace_degenerate_preserver(IDENT, ZERO, IDENT)


def test_trace_preserver_keeps_adjacency():
    rng = np.random.default_rng(4)
    v = np.array([1.0, 1j]) / np.sqrt(2)
    R = Herm2.from_matrix(np.outer(v, v.conj()))
    S = Herm2(*rng.standard_normal(4))
    A, B = adjacent_pairs(rng, 10**4)
    out = trace_degenerate_preserver(R, S, A) - trace_degenerate_preserver(R, S, B)
    assert np.all(rank2(out) == 1)


def test_pullback_is_poincare_similarity():
    rng = np.random.default_rng(5)
    for i in range(50):
        T = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        S = Herm2(*rng.standard_normal(4))
        c = int(rng.choice([-1, 1]))
        am = standard_preserver_as_affine(c, T, S, transpose=bool(i % 2))
        ps = decompose_similarity(am)
        assert ps is not None
        assert ps.k == pytest.approx(abs(np.linalg.det(T)), rel=1e-9)
        r = rng.uniform(-5, 5, (10, 4))
        via_herm = herm_to_event(standard_preserver(c, T, S, bool(i % 2), event_to_herm(r)))
        np.testing.assert_allclose(ps(r), via_herm, rtol=1e-9, atol=1e-9)
