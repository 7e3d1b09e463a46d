"""Lorentz matrices, Poincare similarities ``r -> k Q r + a`` and affine fits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSamples, DimensionMismatch
from .quadratic import as_event, metric


def is_lorentz(Q, tol: float = 1e-9) -> bool:
    """``|Q M Q^T - M|_F <= tol * n`` with ``M = diag(-1, ..., -1, 1)``."""
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {Q.shape}")
    n = Q.shape[0]
    M = metric(n)
    return bool(np.linalg.norm(Q @ M @ Q.T - M) <= tol * n)


def boost(axis: int, rapidity: float, n: int = 4) -> np.ndarray:
    """Pure boost along spatial axis ``axis`` (1-based)."""
    if not 1 <= axis <= n - 1:
        raise ValueError(f"axis must be in 1..{n - 1}, got {axis}")
    B = np.eye(n)
    i, t = axis - 1, n - 1
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    B[i, i] = B[t, t] = ch
    B[i, t] = B[t, i] = sh
    return B


def spatial_rotation(plane: tuple[int, int], angle: float, n: int = 4) -> np.ndarray:
    """Rotation by ``angle`` in the plane of spatial axes ``plane`` (1-based).

    ``spatial_rotation((1, 2), pi/2)`` sends ``e1`` to ``e2``.
    """
    i, j = plane
    if i == j or not (1 <= i <= n - 1 and 1 <= j <= n - 1):
        raise ValueError(f"need two distinct spatial axes in 1..{n - 1}, got {plane}")
    i, j = i - 1, j - 1
    R = np.eye(n)
    c, s = np.cos(angle), np.sin(angle)
    R[i, i] = R[j, j] = c
    R[j, i] = s
    R[i, j] = -s
    return R


def lorentz_inverse(Q) -> np.ndarray:
    """``M Q^T M``, exact inverse of a Lorentz matrix."""
    Q = np.asarray(Q, dtype=float)
    M = metric(Q.shape[0])
    return M @ Q.T @ M


@dataclass(frozen=True)
class AffineMap:
    """``r -> L r + b``."""

    L: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        L = np.asarray(self.L, dtype=float)
        b = as_event(self.b)
        if L.shape != (b.shape[-1], b.shape[-1]):
            raise DimensionMismatch(f"L has shape {L.shape}, b has length {b.shape[-1]}")
        if not np.all(np.isfinite(L)):
            raise ValueError("L must be finite")
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "b", b)

    @property
    def dimension(self) -> int:
        return self.b.shape[-1]

    def __call__(self, r):
        r = as_event(r, self.dimension)
        return r @ self.L.T + self.b

    def to_dict(self) -> dict:
        return {"L": self.L.tolist(), "b": self.b.tolist()}


@dataclass(frozen=True)
class PoincareSimilarity:
    """``r -> k Q r + a`` with ``k > 0`` and ``Q`` Lorentz."""

    k: float
    Q: np.ndarray
    a: np.ndarray

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=float)
        a = as_event(self.a)
        if not self.k > 0:
            raise ValueError(f"k must be positive, got {self.k}")
        if Q.shape != (a.shape[-1], a.shape[-1]):
            raise DimensionMismatch(f"Q has shape {Q.shape}, a has length {a.shape[-1]}")
        if not is_lorentz(Q):
            raise ValueError("Q is not a Lorentz matrix")
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "a", a)

    @classmethod
    def identity(cls, n: int = 4) -> PoincareSimilarity:
        return cls(1.0, np.eye(n), np.zeros(n))

    @property
    def dimension(self) -> int:
        return self.a.shape[-1]

    def __call__(self, r):
        return apply_similarity(self, r)

    def to_affine(self) -> AffineMap:
        return AffineMap(self.k * self.Q, self.a)

    def to_dict(self) -> dict:
        return {"k": self.k, "Q": self.Q.tolist(), "a": self.a.tolist()}


def apply_similarity(ps: PoincareSimilarity, r):
    r = as_event(r, ps.dimension)
    return ps.k * (r @ ps.Q.T) + ps.a


def compose(ps1: PoincareSimilarity, ps2: PoincareSimilarity) -> PoincareSimilarity:
    """The similarity ``ps1 o ps2`` (apply ``ps2`` first)."""
    if ps1.dimension != ps2.dimension:
        raise DimensionMismatch("cannot compose similarities of different dimension")
    return PoincareSimilarity(
        ps1.k * ps2.k, ps1.Q @ ps2.Q, ps1.k * (ps1.Q @ ps2.a) + ps1.a
    )


def invert(ps: PoincareSimilarity) -> PoincareSimilarity:
    Qi = lorentz_inverse(ps.Q)
    return PoincareSimilarity(1.0 / ps.k, Qi, -(Qi @ ps.a) / ps.k)


def random_similarity(seed, k_range: tuple[float, float] = (0.5, 2.0),
                      translation: float = 10.0, max_rapidity: float = 0.5,
                      max_factors: int = 6, n: int = 4) -> PoincareSimilarity:
    """Seeded random similarity for tests and demos.

    ``k`` is log-uniform in ``k_range``, ``Q`` a product of at most
    ``max_factors`` random boosts and spatial rotations, ``a`` uniform in
    ``[-translation, translation]^n``.
    """
    lo, hi = k_range
    if not (0 < lo <= hi) or translation < 0 or max_rapidity < 0:
        raise ValueError("bounds must be positive")
    rng = np.random.default_rng(seed)
    k = float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
    Q = np.eye(n)
    for _ in range(int(rng.integers(1, max_factors + 1))):
        if rng.random() < 0.5:
            axis = int(rng.integers(1, n))
            F = boost(axis, rng.uniform(-max_rapidity, max_rapidity), n)
        else:
            i, j = rng.choice(np.arange(1, n), size=2, replace=False)
            F = spatial_rotation((int(i), int(j)), rng.uniform(-np.pi, np.pi), n)
        Q = F @ Q
    a = rng.uniform(-translation, translation, n)
    return PoincareSimilarity(k, Q, a)


def fit_affine(inputs, outputs) -> tuple[AffineMap, float]:
    """Least-squares affine map through sample pairs.

    Solves the normal equations on centred inputs.  The residual is the RMS
    error divided by ``1 + rms(|y|)``.
    """
    X = as_event(inputs)
    Y = as_event(outputs, X.shape[-1])
    if X.ndim != 2 or X.shape != Y.shape:
        raise DimensionMismatch("inputs and outputs must be matching (m, n) arrays")
    m, n = X.shape
    if m < n + 1:
        raise DegenerateSamples(f"need at least {n + 1} samples, got {m}")
    xm = X.mean(axis=0)
    ym = Y.mean(axis=0)
    Xc = X - xm
    if np.linalg.matrix_rank(Xc) < n:
        raise DegenerateSamples("sample inputs do not span an affine frame")
    G = Xc.T @ Xc
    Lt = np.linalg.solve(G, Xc.T @ (Y - ym))
    L = Lt.T
    b = ym - L @ xm
    err = X @ L.T + b - Y
    rms = np.sqrt(np.mean(np.sum(err**2, axis=1)))
    scale = 1.0 + np.sqrt(np.mean(np.sum(Y**2, axis=1)))
    return AffineMap(L, b), float(rms / scale)


def decompose_similarity(am: AffineMap, tol: float = 1e-9) -> PoincareSimilarity | None:
    """Recover ``(k, Q, a)`` from ``L = k Q``, or ``None`` if ``L`` is not a similarity.

    Lorentz matrices have determinant +-1, so ``k = |det L|^(1/n)``.
    """
    n = am.dimension
    k = abs(np.linalg.det(am.L)) ** (1.0 / n)
    if k <= tol:
        return None
    Q = am.L / k
    if not is_lorentz(Q, tol):
        return None
    return PoincareSimilarity(k, Q, am.b)
