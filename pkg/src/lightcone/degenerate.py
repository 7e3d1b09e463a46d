"""Degenerate continuous coherency preservers built from patches.

A degenerate map sends everything to a fixed vertex ``s'`` except on a finite
family of disjoint balls ``U_j``, where it moves along one null ray
``s' + R s_j`` with a tent-shaped amplitude that vanishes on the boundary.
Whenever no event of ``U_j`` is coherent with an event of ``U_j'`` for
``j != j'``, the map preserves coherency and its range lies in the light cone
of the vertex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import EpsilonTooLarge, InvalidSpec
from .quadratic import as_event, is_direction, q, random_directions, spatial, eta

EPSILON_BOUND = 0.25


def bump(center, radius: float, r):
    """Tent profile ``max(0, 1 - |r - center| / radius)``."""
    if not radius > 0:
        raise ValueError("radius must be positive")
    dist = np.linalg.norm(np.asarray(r, dtype=float) - np.asarray(center, dtype=float), axis=-1)
    return np.maximum(0.0, 1.0 - dist / radius)


@dataclass(frozen=True)
class Patch:
    center: np.ndarray
    radius: float
    direction: np.ndarray
    amplitude: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_event(self.center))
        object.__setattr__(self, "direction", np.asarray(self.direction, dtype=float))
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "amplitude", float(self.amplitude))

    def to_dict(self) -> dict:
        return {
            "center": self.center.tolist(),
            "radius": self.radius,
            "direction": self.direction.tolist(),
            "amplitude": self.amplitude,
        }


@dataclass(frozen=True)
class DegenerateSpec:
    vertex: np.ndarray
    patches: tuple[Patch, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertex", as_event(self.vertex))
        object.__setattr__(self, "patches", tuple(self.patches))

    @property
    def dimension(self) -> int:
        return self.vertex.shape[-1]

    @cached_property
    def structural_problems(self) -> list[str]:
        """Failures of the deterministic checks (no sampling involved)."""
        return _structural_problems(self)

    def __call__(self, r):
        return evaluate(self, r)

    def to_dict(self) -> dict:
        return {"vertex": self.vertex.tolist(), "patches": [p.to_dict() for p in self.patches]}


@dataclass
class PairReport:
    j: int
    k: int
    separated: bool
    spatial_interval: tuple[float, float]
    time_interval: tuple[float, float]
    disjoint_balls: bool

    def to_dict(self) -> dict:
        return {
            "patches": [self.j, self.k],
            "separated": self.separated,
            "spatial_interval": list(self.spatial_interval),
            "time_interval": list(self.time_interval),
            "disjoint_balls": self.disjoint_balls,
        }


@dataclass
class ValidationReport:
    valid: bool
    pairs: list[PairReport] = field(default_factory=list)
    bad_patches: list[tuple[int, str]] = field(default_factory=list)
    witness: tuple[np.ndarray, np.ndarray] | None = None
    samples: int = 0
    min_abs_q: float = float("inf")
    note: str = "patches are Euclidean balls; other shapes are not checked"

    @property
    def failures(self) -> list[str]:
        out = [f"patch {j}: {why}" for j, why in self.bad_patches]
        for p in self.pairs:
            if not p.disjoint_balls:
                out.append(f"patches {p.j},{p.k}: balls overlap")
            if not p.separated:
                out.append(f"patches {p.j},{p.k}: separation criterion fails")
        if self.witness is not None:
            out.append("coherent cross-patch pair found")
        return out

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "failures": self.failures,
            "pairs": [p.to_dict() for p in self.pairs],
            "witness": None if self.witness is None else [w.tolist() for w in self.witness],
            "samples": self.samples,
            "min_abs_q": None if not np.isfinite(self.min_abs_q) else self.min_abs_q,
            "note": self.note,
        }


def _pair_intervals(a: Patch, b: Patch):
    delta = a.center - b.center
    rho = a.radius + b.radius
    ds = float(np.linalg.norm(spatial(delta)))
    dt = abs(float(eta(delta)))
    return (ds - rho, ds + rho), (dt - rho, dt + rho)


def _separated(sp, tm) -> bool:
    # disjoint intervals: no difference can have |spatial| == |time|
    return sp[0] > tm[1] or tm[0] > sp[1]


def _patch_problems(p: Patch, n: int) -> list[str]:
    out = []
    if p.center.shape != (n,):
        out.append("center has the wrong dimension")
    if not p.radius > 0:
        out.append("radius must be positive")
    if p.direction.shape != (n,) or not is_direction(p.direction):
        out.append("direction is not on the cone section")
    return out


def _structural_problems(spec: DegenerateSpec) -> list[str]:
    n = spec.dimension
    problems = []
    for j, p in enumerate(spec.patches):
        problems += [f"patch {j}: {why}" for why in _patch_problems(p, n)]
    if problems:
        return problems
    for (j, a), (k, b) in itertools.combinations(enumerate(spec.patches), 2):
        if np.linalg.norm(a.center - b.center) < a.radius + b.radius:
            problems.append(f"patches {j},{k}: balls overlap")
        sp, tm = _pair_intervals(a, b)
        if not _separated(sp, tm):
            problems.append(f"patches {j},{k}: separation criterion fails")
    return problems


def evaluate(spec: DegenerateSpec, r) -> np.ndarray:
    """``s' + f(r) s_j`` inside patch ``j``, ``s'`` elsewhere."""
    if spec.structural_problems:
        raise InvalidSpec("; ".join(spec.structural_problems))
    r = as_event(r, spec.dimension)
    out = np.broadcast_to(spec.vertex, r.shape).copy()
    for p in spec.patches:
        w = p.amplitude * bump(p.center, p.radius, r)
        out += w[..., None] * p.direction
    return out


def _sample_ball(rng, center, radius, size):
    n = center.shape[-1]
    v = rng.standard_normal((size, n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    rad = radius * rng.random(size) ** (1.0 / n)
    return center + rad[:, None] * v


def _null_line_hits(rng, a: Patch, b: Patch, size: int):
    """Sample null lines from points of ``a`` and return those entering ``b``."""
    n = a.center.shape[-1]
    r = _sample_ball(rng, a.center, a.radius, size)
    p = random_directions(rng, n, size)
    w = r - b.center
    # |w + t p|^2 is minimised at t = -<w, p> / |p|^2 with |p|^2 = 2
    t = -np.sum(w * p, axis=1) / 2.0
    r2 = r + t[:, None] * p
    hit = np.linalg.norm(r2 - b.center, axis=1) < b.radius
    return r[hit], r2[hit]


def validate_spec(spec: DegenerateSpec, samples: int = 10**4, seed: int = 0) -> ValidationReport:
    """Check patch separation, ball disjointness and direction validity.

    Per patch pair, with ``delta`` the centre offset and ``rho`` the sum of
    radii, the spatial-distance interval ``|delta_s| +- rho`` and the time-gap
    interval ``|delta_t| +- rho`` must be disjoint.  A seeded sampler then
    looks for coherent cross-patch pairs (``samples`` per pair, half of them
    random pairs and half along random null lines).
    """
    n = spec.dimension
    report = ValidationReport(valid=True)
    for j, p in enumerate(spec.patches):
        report.bad_patches += [(j, why) for why in _patch_problems(p, n)]
    if report.bad_patches:
        report.valid = False
        return report

    rng = np.random.default_rng(seed)
    half = max(samples // 2, 1)
    for (j, a), (k, b) in itertools.combinations(enumerate(spec.patches), 2):
        sp, tm = _pair_intervals(a, b)
        disjoint = bool(np.linalg.norm(a.center - b.center) >= a.radius + b.radius)
        report.pairs.append(PairReport(j, k, _separated(sp, tm), sp, tm, disjoint))

        r1 = _sample_ball(rng, a.center, a.radius, half)
        r2 = _sample_ball(rng, b.center, b.radius, half)
        qs = np.abs(q(r1 - r2))
        report.min_abs_q = min(report.min_abs_q, float(qs.min()))
        s1, s2 = _null_line_hits(rng, a, b, half)
        report.samples += 2 * half
        if report.witness is None:
            if len(s1):
                report.witness = (s1[0], s2[0])
            elif qs.min() == 0.0:
                i = int(np.argmin(qs))
                report.witness = (r1[i], r2[i])

    report.valid = not report.failures
    return report


def build_default(count: int, epsilon: float, vertex=None, rng_seed=0, n: int = 4,
                  amplitude_range: tuple[float, float] = (0.5, 2.0)) -> DegenerateSpec:
    """Patches of radius ``epsilon`` around ``(j, 0, ..., 0)``, ``j < count``.

    Directions are distinct seeded points of the cone section, amplitudes are
    nonzero with random sign.  With unit spacing the separation criterion
    requires ``epsilon < 1/4``.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if epsilon >= EPSILON_BOUND:
        raise EpsilonTooLarge(f"epsilon must be below {EPSILON_BOUND}, got {epsilon}")
    rng = np.random.default_rng(rng_seed)
    vertex = np.zeros(n) if vertex is None else as_event(vertex, n)
    dirs = random_directions(rng, n, count) if count else np.zeros((0, n))
    while count > 1:
        gaps = np.linalg.norm(dirs[:, None] - dirs[None], axis=-1) + np.eye(count)
        if gaps.min() > 1e-6:
            break
        dirs = random_directions(rng, n, count)
    lo, hi = amplitude_range
    amps = rng.uniform(lo, hi, count) * rng.choice([-1.0, 1.0], count)
    patches = []
    for j in range(count):
        center = np.zeros(n)
        center[0] = j
        patches.append(Patch(center, epsilon, dirs[j], amps[j]))
    return DegenerateSpec(vertex, tuple(patches))
