"""The Minkowski quadratic space R^n with signature (1, n-1).

Events are plain float arrays whose last axis holds the coordinates
``(x_1, ..., x_{n-1}, t)``; the time coordinate comes last.  Most functions
broadcast over leading axes so that batches of events can be processed in a
single call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    Collinear,
    DimensionMismatch,
    NotCoherent,
    NotNull,
    TimeComponentVanishes,
    VertexCoincidence,
)

MIN_DIM = 3
MAX_DIM = 6


@dataclass(frozen=True)
class TolerancePolicy:
    """Relative tolerance for nullity tests.

    A difference ``d`` counts as null when ``|q(d)| <= tau_rel * (1 + |d|^2)``.
    The quadratic scaling matches the degree of the form.
    """

    tau_rel: float = 1e-9

    def __post_init__(self):
        if not self.tau_rel > 0:
            raise ValueError(f"tau_rel must be positive, got {self.tau_rel}")

    def scale(self, d):
        d = np.asarray(d, dtype=float)
        return self.tau_rel * (1.0 + np.sum(d * d, axis=-1))


DEFAULT_TOL = TolerancePolicy()


def as_event(r, n: int | None = None) -> np.ndarray:
    """Validate and convert ``r`` to a float array of events."""
    r = np.asarray(r, dtype=float)
    if r.ndim == 0:
        raise DimensionMismatch("an event needs at least one axis")
    dim = r.shape[-1]
    if not MIN_DIM <= dim <= MAX_DIM:
        raise DimensionMismatch(f"dimension {dim} outside [{MIN_DIM}, {MAX_DIM}]")
    if n is not None and dim != n:
        raise DimensionMismatch(f"expected dimension {n}, got {dim}")
    if not np.all(np.isfinite(r)):
        raise ValueError("event coordinates must be finite")
    return r


def _pair(a, b):
    a = as_event(a)
    b = as_event(b, a.shape[-1])
    return a, b


def metric(n: int = 4) -> np.ndarray:
    """Diagonal Gram matrix ``diag(-1, ..., -1, 1)``."""
    m = -np.eye(n)
    m[-1, -1] = 1.0
    return m


def minkowski_inner(r1, r2):
    """Indefinite inner product ``t1*t2 - sum_k x1_k * x2_k``."""
    r1, r2 = _pair(r1, r2)
    return r1[..., -1] * r2[..., -1] - np.sum(r1[..., :-1] * r2[..., :-1], axis=-1)


def q(r):
    """Quadratic form ``t^2 - |x|^2``."""
    r = np.asarray(r, dtype=float)
    return r[..., -1] ** 2 - np.sum(r[..., :-1] ** 2, axis=-1)


def polar(x, y):
    """Polar form of ``q``, computed literally as ``(q(x+y) - (q(x) + q(y))) / 2``.

    Grouping ``q(x) + q(y)`` keeps the result exactly symmetric in floats.
    """
    x, y = _pair(x, y)
    return 0.5 * (q(x + y) - (q(x) + q(y)))


def eta(r):
    """Time coordinate of ``r``."""
    return np.asarray(r, dtype=float)[..., -1]


def spatial(r) -> np.ndarray:
    return np.asarray(r, dtype=float)[..., :-1]


def is_coherent(a, b, tol: TolerancePolicy = DEFAULT_TOL):
    a, b = _pair(a, b)
    d = a - b
    return np.abs(q(d)) <= tol.scale(d)


def is_adjacent(a, b, tol: TolerancePolicy = DEFAULT_TOL):
    """Coherent and distinct."""
    a, b = _pair(a, b)
    dist = np.linalg.norm(a - b, axis=-1)
    floor = tol.tau_rel * (1.0 + np.linalg.norm(a, axis=-1) + np.linalg.norm(b, axis=-1))
    return is_coherent(a, b, tol) & (dist > floor)


def make_direction(v) -> np.ndarray:
    """Point of the cone section from a nonzero spatial vector.

    The result has unit spatial part and time coordinate exactly 1.
    """
    s = np.asarray(v, dtype=float)
    norm = np.linalg.norm(s, axis=-1, keepdims=True)
    if np.any(norm == 0):
        raise ValueError("zero spatial vector has no direction")
    s = s / norm
    return np.concatenate([s, np.ones(s.shape[:-1] + (1,))], axis=-1)


def is_direction(p, atol: float = 1e-12) -> bool:
    p = np.asarray(p, dtype=float)
    return bool(
        np.all(p[..., -1] == 1.0)
        and np.all(np.abs(np.sum(spatial(p) ** 2, axis=-1) - 1.0) <= atol)
    )


def random_directions(rng, n: int = 4, size=None) -> np.ndarray:
    """Uniformly distributed points of the cone section."""
    rng = np.random.default_rng(rng)
    shape = (n - 1,) if size is None else tuple(np.atleast_1d(size)) + (n - 1,)
    return make_direction(rng.standard_normal(shape))


def project_to_section(a, m, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Direction ``p`` of the coherent line through ``a`` and ``m``.

    Satisfies ``m = a + eta(m - a) * p``.  The spatial part is renormalized
    to unit length so the result is exactly on the section.
    """
    a, m = _pair(a, m)
    d = m - a
    norm_d = np.linalg.norm(d)
    if norm_d <= tol.tau_rel * (1.0 + np.linalg.norm(a) + np.linalg.norm(m)):
        raise VertexCoincidence("m coincides with the vertex a")
    if not is_coherent(a, m, tol):
        raise NotCoherent(f"q(m - a) = {q(d):.3e} is not null")
    t = eta(d)
    if abs(t) <= tol.tau_rel * (1.0 + norm_d):
        raise TimeComponentVanishes(f"eta(m - a) = {t:.3e}")
    return make_direction(spatial(d) / t)


def collinear(a, b, c, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Whether three events lie on a common affine line.

    Checks that every 2x2 minor of the pair ``(b - a, c - a)`` vanishes
    relative to ``|b - a| * |c - a|``.  Coincident points count as collinear.
    """
    a, b = _pair(a, b)
    c = as_event(c, a.shape[-1])
    u = b - a
    v = c - a
    minors = np.outer(u, v) - np.outer(v, u)
    bound = tol.tau_rel * np.linalg.norm(u) * np.linalg.norm(v)
    return bool(np.max(np.abs(minors)) <= bound)


@dataclass(frozen=True)
class CoherentLine:
    """The maximal coherent set ``base + R * dir``."""

    base: np.ndarray
    dir: np.ndarray

    def __post_init__(self):
        base = as_event(self.base)
        d = as_event(self.dir, base.shape[-1])
        if not is_direction(d):
            raise ValueError("dir must lie on the cone section")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "dir", d)

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return self.base + t[..., None] * self.dir


def find_common_coherent(x, y) -> np.ndarray:
    """An event coherent with both ``x`` and ``y`` and no farther from ``x`` than ``y``.

    Rotates the spatial part of ``y - x`` onto a unit axis ``u`` and returns
    ``x + (|v| + tau)/2 * (u, 1)`` where ``v`` and ``tau`` are the spatial and
    time parts of ``y - x``.  Broadcasts over leading axes.
    """
    x, y = _pair(x, y)
    d = y - x
    v = spatial(d)
    tau = eta(d)
    # pre-scale by the largest entry so tiny spatial parts do not underflow
    big = np.max(np.abs(v), axis=-1, keepdims=True)
    w = v / np.where(big > 0, big, 1.0)
    nw = np.linalg.norm(w, axis=-1, keepdims=True)
    nv = big * nw
    fallback = np.zeros(v.shape[-1])
    fallback[-1] = 1.0
    u = np.where(big > 0, w / np.where(nw > 0, nw, 1.0), fallback)
    s = 0.5 * (nv[..., 0] + tau)
    step = np.concatenate([u, np.ones(u.shape[:-1] + (1,))], axis=-1)
    return x + s[..., None] * step


def _nullspace_rref(rows: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Canonical null-space basis of ``rows`` from its reduced row echelon form.

    Each basis vector has a 1 in one free column and zeros in the others.
    Returns an array of shape ``(k, n)``.
    """
    a = np.array(rows, dtype=float)
    m, n = a.shape
    scale = max(np.max(np.abs(a)), 1.0)
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        piv = row + int(np.argmax(np.abs(a[row:, col])))
        if abs(a[piv, col]) <= rtol * scale:
            continue
        a[[row, piv]] = a[[piv, row]]
        a[row] /= a[row, col]
        for r in range(m):
            if r != row:
                a[r] -= a[r, col] * a[row]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n))
    for i, f in enumerate(free):
        basis[i, f] = 1.0
        for r, pc in enumerate(pivots):
            basis[i, pc] = -a[r, f]
    return basis


def _transversal_score(d0, a):
    # product of the two polynomials that must not vanish, made scale free
    nd = np.linalg.norm(d0, axis=-1)
    num = np.abs(minkowski_inner(d0, a)) * np.abs(q(d0))
    return num / (nd**3 * np.linalg.norm(a))


def find_transversal_coherent(a, b, c, tol: TolerancePolicy = DEFAULT_TOL,
                              seed: int = 0) -> np.ndarray:
    """A non-null event coherent with three pairwise non-collinear null vectors.

    Works in the plane ``P`` orthogonal (for the polar form) to ``a - b`` and
    ``b - c``: picks ``d0`` in ``P`` with ``B(d0, a) != 0`` and
    ``q(d0) != 0`` among the basis vectors of ``P`` and their pairwise sums,
    then scales it by the nonzero root ``t0 = 2 B(d0, a) / q(d0)``.
    """
    a, b = _pair(a, b)
    c = as_event(c, a.shape[-1])
    n = a.shape[-1]
    if n < 4:
        raise DimensionMismatch("three-cone intersection requires dimension >= 4")
    for name, v in (("a", a), ("b", b), ("c", c)):
        if not is_coherent(v, np.zeros(n), tol) or not np.any(v):
            raise NotNull(f"{name} is not a nonzero null vector")
    zero = np.zeros(n)
    for u, v in ((a, b), (b, c), (a, c)):
        if collinear(zero, u, v, tol):
            raise Collinear("inputs must be pairwise non-collinear")

    gram = metric(n)
    basis = _nullspace_rref(np.stack([gram @ (a - b), gram @ (b - c)]))
    rng = np.random.default_rng(seed)
    threshold = 1e-8
    for _ in range(9):
        k = len(basis)
        cands = [basis[i] for i in range(k)]
        cands += [basis[i] + basis[j] for i in range(k) for j in range(i + 1, k)]
        cands = np.array(cands)
        scores = _transversal_score(cands, a)
        best = int(np.argmax(scores))
        if scores[best] > threshold:
            d0 = cands[best]
            t0 = 2.0 * minkowski_inner(d0, a) / q(d0)
            return t0 * d0 + 0.0
        basis = rng.standard_normal((k, k)) @ basis
    raise Collinear("no admissible direction found in the orthogonal plane")
