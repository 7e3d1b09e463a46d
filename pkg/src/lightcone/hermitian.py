"""The 2x2 Hermitian-matrix model of four-dimensional Minkowski space.

``(x, y, z, t)`` corresponds to ``[[t + z, x + iy], [x - iy, t - z]]`` and the
Minkowski form becomes the determinant.  ``Herm2`` fields may be scalars or
equally shaped arrays, in which case every operation acts elementwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotProjection, SingularT
from .quadratic import DEFAULT_TOL, TolerancePolicy, as_event
from .transforms import AffineMap


@dataclass(frozen=True)
class Herm2:
    d1: float
    d2: float
    off_re: float
    off_im: float

    # let ndarray * Herm2 fall through to __rmul__
    __array_ufunc__ = None

    @classmethod
    def from_matrix(cls, A) -> Herm2:
        """From a (batch of) complex 2x2 matrix; the Hermitian part is kept."""
        A = np.asarray(A, dtype=complex)
        off = 0.5 * (A[..., 0, 1] + np.conj(A[..., 1, 0]))
        return cls(A[..., 0, 0].real, A[..., 1, 1].real, off.real, off.imag)

    @classmethod
    def from_array(cls, v) -> Herm2:
        v = np.asarray(v, dtype=float)
        return cls(v[..., 0], v[..., 1], v[..., 2], v[..., 3])

    def to_array(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.d1, self.d2, self.off_re, self.off_im), axis=-1)

    def to_matrix(self) -> np.ndarray:
        d1, d2, re, im = np.broadcast_arrays(self.d1, self.d2, self.off_re, self.off_im)
        out = np.empty(np.shape(d1) + (2, 2), dtype=complex)
        out[..., 0, 0] = d1
        out[..., 1, 1] = d2
        out[..., 0, 1] = re + 1j * im
        out[..., 1, 0] = re - 1j * im
        return out

    def det(self):
        return self.d1 * self.d2 - (self.off_re**2 + self.off_im**2)

    def trace(self):
        return self.d1 + self.d2

    def __add__(self, other: Herm2) -> Herm2:
        return Herm2(self.d1 + other.d1, self.d2 + other.d2,
                     self.off_re + other.off_re, self.off_im + other.off_im)

    def __sub__(self, other: Herm2) -> Herm2:
        return Herm2(self.d1 - other.d1, self.d2 - other.d2,
                     self.off_re - other.off_re, self.off_im - other.off_im)

    def __mul__(self, c) -> Herm2:
        return Herm2(c * self.d1, c * self.d2, c * self.off_re, c * self.off_im)

    __rmul__ = __mul__


def event_to_herm(r) -> Herm2:
    r = as_event(r, 4)
    x, y, z, t = np.moveaxis(r, -1, 0)
    return Herm2(t + z, t - z, x, y)


def herm_to_event(A: Herm2) -> np.ndarray:
    d1, d2, re, im = np.broadcast_arrays(A.d1, A.d2, A.off_re, A.off_im)
    return np.stack([re, im, 0.5 * (d1 - d2), 0.5 * (d1 + d2)], axis=-1).astype(float)


def rank2(A: Herm2, tol: TolerancePolicy = DEFAULT_TOL):
    """Rank of a Hermitian 2x2 matrix: 0, 1 or 2.

    Zero when every entry is within ``tau_rel``; full rank when ``|det|``
    exceeds the quadratic scale of the corresponding event.
    """
    entries = np.abs(A.to_array())
    zero = np.max(entries, axis=-1) <= tol.tau_rel
    full = np.abs(A.det()) > tol.scale(herm_to_event(A))
    out = np.where(zero, 0, np.where(full, 2, 1))
    return int(out) if out.ndim == 0 else out


def _check_T(T, tol: TolerancePolicy) -> np.ndarray:
    T = np.asarray(T, dtype=complex)
    if T.shape != (2, 2):
        raise ValueError(f"T must be 2x2, got shape {T.shape}")
    if abs(np.linalg.det(T)) <= tol.tau_rel * (1.0 + np.sum(np.abs(T) ** 2)):
        raise SingularT("T is not invertible")
    return T


def standard_preserver(c: int, T, S: Herm2, transpose: bool, A: Herm2,
                       tol: TolerancePolicy = DEFAULT_TOL) -> Herm2:
    """``c T A T* + S``, or ``c T A^t T* + S`` when ``transpose`` is set."""
    if c not in (-1, 1):
        raise ValueError("c must be +1 or -1")
    T = _check_T(T, tol)
    M = A.to_matrix()
    if transpose:
        M = np.swapaxes(M, -1, -2)
    out = c * (T @ M @ T.conj().T)
    return Herm2.from_matrix(out) + S


def standard_preserver_as_affine(c: int, T, S: Herm2, transpose: bool = False,
                                 tol: TolerancePolicy = DEFAULT_TOL) -> AffineMap:
    """Pull a standard preserver back to an affine map of R^4."""
    T = _check_T(T, tol)
    zero = Herm2(0.0, 0.0, 0.0, 0.0)
    cols = [herm_to_event(standard_preserver(c, T, zero, transpose, event_to_herm(e), tol))
            for e in np.eye(4)]
    return AffineMap(np.stack(cols, axis=1), herm_to_event(S))


def trace_degenerate_preserver(R: Herm2, S: Herm2, A: Herm2, atol: float = 1e-9) -> Herm2:
    """``trace(A) R + S`` for a rank-one orthogonal projection ``R``."""
    P = R.to_matrix()
    if np.ndim(R.d1) != 0:
        raise ValueError("R must be a single matrix")
    if np.linalg.norm(P @ P - P) > atol or abs(R.trace() - 1.0) > atol:
        raise NotProjection("R is not a rank-one orthogonal projection")
    return A.trace() * R + S
