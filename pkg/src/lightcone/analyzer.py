"""Black-box analysis of maps on Minkowski space.

Everything here treats a map as an opaque function evaluated on batches of
events: sampling-based coherency checks, detection of collapsed coherent
lines, the induced action on null directions and its degree, and a
classifier that sorts a map into similarity, degenerate, violator or
inconclusive.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np

from .degenerate import DegenerateSpec
from .errors import (
    DegenerateSamples,
    DimensionMismatch,
    LightconeError,
    LineCollapse,
    MeshTooCoarse,
    NoConvergence,
    NotCoherent,
    TimeComponentVanishes,
)
from .mesh import DegreeResult, SphereMesh, icosphere, sphere_map_degree
from .quadratic import (
    DEFAULT_TOL,
    TolerancePolicy,
    as_event,
    eta,
    make_direction,
    metric,
    q,
    random_directions,
    spatial,
)
from .transforms import AffineMap, PoincareSimilarity, decompose_similarity, fit_affine

log = logging.getLogger(__name__)

CHUNK = 8192
STALL_GTOL = 1e-6


class BlackBoxMap:
    """A deterministic map ``R^n -> R^n`` known only through evaluation.

    ``fn`` receives an ``(m, n)`` array and returns an ``(m, n)`` array.
    ``support``, when given, is the finite set of inputs on which the map is
    defined (table maps); samplers then draw from it instead of a box.
    """

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], dimension: int = 4,
                 tag: str | None = None, support: np.ndarray | None = None, source: Any = None):
        self.fn = fn
        self.dimension = dimension
        self.tag = tag
        self.support = None if support is None else as_event(support, dimension)
        self.source = source

    def __call__(self, r):
        r = as_event(r, self.dimension)
        flat = r.reshape(-1, self.dimension)
        out = np.asarray(self.fn(flat), dtype=float)
        return out.reshape(r.shape)

    def __repr__(self):
        return f"BlackBoxMap(tag={self.tag!r}, dimension={self.dimension})"


class TableMap(BlackBoxMap):
    """Pointwise map given by explicit ``(input, output)`` rows."""

    def __init__(self, inputs, outputs):
        inputs = as_event(np.atleast_2d(inputs))
        outputs = as_event(np.atleast_2d(outputs), inputs.shape[-1])
        if inputs.shape != outputs.shape:
            raise DimensionMismatch("inputs and outputs must have the same shape")
        self.inputs, self.outputs = inputs, outputs
        self._rows = {tuple(x): i for i, x in enumerate(inputs.tolist())}
        super().__init__(self._lookup, inputs.shape[-1], "table", support=inputs)

    def _lookup(self, r):
        try:
            idx = [self._rows[tuple(x)] for x in r.tolist()]
        except KeyError as exc:
            raise LookupError(f"event {list(exc.args[0])} is not in the table") from None
        return self.outputs[idx]


def as_black_box(obj) -> BlackBoxMap:
    """Wrap similarities, affine maps, degenerate specs or callables."""
    if isinstance(obj, BlackBoxMap):
        return obj
    if isinstance(obj, PoincareSimilarity):
        return BlackBoxMap(obj, obj.dimension, "similarity", source=obj)
    if isinstance(obj, AffineMap):
        return BlackBoxMap(obj, obj.dimension, "affine", source=obj)
    if isinstance(obj, DegenerateSpec):
        return BlackBoxMap(obj, obj.dimension, "degenerate", source=obj)
    if callable(obj):
        return BlackBoxMap(obj)
    raise TypeError(f"cannot treat {type(obj).__name__} as a map")


def _seed(rng) -> int:
    """Integer seed from an int, ``None`` (fresh entropy) or a Generator."""
    if isinstance(rng, np.random.Generator):
        return int(rng.integers(2**63))
    if rng is None:
        return int(np.random.SeedSequence().entropy % 2**63)
    return int(rng)


def _chunk_rngs(seed: int, count: int, chunk: int = CHUNK):
    """One generator per chunk, derived from the seed alone.

    Chunks are independent, so results do not depend on evaluation order.
    """
    nchunks = -(-count // chunk)
    children = np.random.SeedSequence(seed).spawn(nchunks)
    for i, ss in enumerate(children):
        yield np.random.default_rng(ss), min(chunk, count - i * chunk)


def sample_coherent_pair(rng, scale: float = 10.0, n: int = 4, size=None, center=None):
    """Coherent pair ``(r1, r1 + t p)`` with ``r1`` and ``t`` uniform in ``[-scale, scale]``."""
    if not scale > 0:
        raise ValueError("scale must be positive")
    rng = np.random.default_rng(rng)
    shape = () if size is None else tuple(np.atleast_1d(size))
    r1 = rng.uniform(-scale, scale, shape + (n,))
    if center is not None:
        r1 = r1 + as_event(center, n)
    t = rng.uniform(-scale, scale, shape)
    p = random_directions(rng, n, size)
    return r1, r1 + np.asarray(t)[..., None] * p


def support_coherent_pairs(points: np.ndarray, tol: TolerancePolicy = DEFAULT_TOL,
                           limit: int | None = None):
    """All index pairs ``i < j`` of mutually coherent, distinct support points."""
    pts = np.asarray(points, dtype=float)
    found = []
    for i0 in range(0, len(pts), 256):
        block = pts[i0:i0 + 256]
        d = block[:, None, :] - pts[None, :, :]
        coh = np.abs(q(d)) <= tol.scale(d)
        coh &= np.any(d != 0, axis=-1)
        ii, jj = np.nonzero(coh)
        ii = ii + i0
        keep = ii < jj
        found.append(np.stack([ii[keep], jj[keep]], axis=1))
    pairs = np.concatenate(found) if found else np.zeros((0, 2), dtype=int)
    return pairs if limit is None else pairs[:limit]


@dataclass
class CheckReport:
    passed: bool
    count: int
    max_ratio: float
    seed: int
    worst: dict | None = None

    @property
    def witness(self) -> dict | None:
        return None if self.passed else self.worst

    def to_dict(self) -> dict:
        return {"passed": self.passed, "count": self.count, "max_ratio": self.max_ratio,
                "seed": self.seed, "witness": self.witness, "worst": self.worst}


def _pair_record(r1, r2, f1, f2, ratio) -> dict:
    return {"r1": r1.tolist(), "r2": r2.tolist(), "phi_r1": f1.tolist(), "phi_r2": f2.tolist(),
            "q_in": float(q(r1 - r2)), "q_out": float(q(f1 - f2)), "ratio": float(ratio)}


def check_coherency_preservation(map, rng=0, count: int = 10**5,
                                 tol: TolerancePolicy = DEFAULT_TOL,
                                 scale: float = 10.0) -> CheckReport:
    """Evaluate ``count`` coherent pairs and look for non-null image differences.

    The statistic is ``|q(phi r1 - phi r2)| / tol.scale(phi r1 - phi r2)``;
    the check passes when its maximum is at most 1.  Maps with a finite
    support are checked on the coherent pairs inside the support.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    map = as_black_box(map)
    seed = _seed(rng)
    n = map.dimension
    best = (-1.0, None)
    evaluated = 0

    def consume(r1, r2):
        nonlocal best, evaluated
        f1, f2 = map(r1), map(r2)
        d = f1 - f2
        ratio = np.abs(q(d)) / tol.scale(d)
        i = int(np.argmax(ratio))
        if ratio[i] > best[0]:
            best = (float(ratio[i]), _pair_record(r1[i], r2[i], f1[i], f2[i], ratio[i]))
        evaluated += len(r1)

    if map.support is not None:
        pairs = support_coherent_pairs(map.support, tol)
        if len(pairs) == 0:
            raise DegenerateSamples("the support contains no coherent pair")
        order = np.random.default_rng(seed).permutation(len(pairs))[:count]
        pairs = pairs[order]
        for i0 in range(0, len(pairs), CHUNK):
            blk = pairs[i0:i0 + CHUNK]
            consume(map.support[blk[:, 0]], map.support[blk[:, 1]])
    else:
        for g, m in _chunk_rngs(seed, count):
            consume(*sample_coherent_pair(g, scale, n, size=m))

    return CheckReport(best[0] <= 1.0, evaluated, best[0], seed, best[1])


def _ladder(probes: int, t0: float) -> np.ndarray:
    half = -(-probes // 2)
    exps = np.arange(-(half // 2), half - half // 2)
    mags = t0 * 2.0 ** exps
    return np.concatenate([mags, -mags])


def collapsed_lines(map, bases, dirs, probes: int = 16, t0: float = 1.0,
                    tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Batched ``constant_line_detect`` over lines ``bases[i] + R dirs[i]``."""
    if probes < 3:
        raise ValueError("probes must be at least 3")
    map = as_black_box(map)
    bases = np.atleast_2d(as_event(bases, map.dimension))
    dirs = np.atleast_2d(as_event(dirs, map.dimension))
    ts = _ladder(probes, t0)
    f0 = map(bases)
    pts = bases[:, None, :] + ts[None, :, None] * dirs[:, None, :]
    f = map(pts)
    dev = np.linalg.norm(f - f0[:, None, :], axis=-1).max(axis=1)
    return dev <= tol.tau_rel * (1.0 + np.linalg.norm(f0, axis=-1))


def constant_line_detect(map, a, p, probes: int = 16, t0: float = 1.0,
                         tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Whether ``map`` is constant on ``a + R p`` at the ladder ``+-2^j t0``.

    A continuous coherency preserver that is constant on a coherent line is
    degenerate, so a ``True`` here flags degeneracy.
    """
    return bool(collapsed_lines(map, a, p, probes, t0, tol)[0])


def find_collapsed_line(map, rng=0, lines: int = 1000, scale: float = 10.0, probes: int = 16,
                        tol: TolerancePolicy = DEFAULT_TOL):
    """Probe ``lines`` random coherent lines; return ``(count, first (a, p) or None)``."""
    map = as_black_box(map)
    g = np.random.default_rng(rng)
    bases = g.uniform(-scale, scale, (lines, map.dimension))
    dirs = random_directions(g, map.dimension, lines)
    hit = collapsed_lines(map, bases, dirs, probes, tol=tol)
    idx = np.flatnonzero(hit)
    first = (bases[idx[0]], dirs[idx[0]]) if len(idx) else None
    return int(hit.sum()), first


def _t_candidates(count: int = 24) -> np.ndarray:
    exps = [0]
    k = 1
    while len(exps) < count:
        exps += [-k, k]
        k += 1
    return 2.0 ** np.array(exps[:count], dtype=float)


def induced_directions(map, a, dirs, tol: TolerancePolicy = DEFAULT_TOL,
                       eta_floor: float = 1e-6) -> np.ndarray:
    """Batched induced sphere map at base point ``a``.

    For each direction ``p`` finds ``t`` on the ladder ``1, 1/2, 2, 1/4, ...``
    whose image difference ``phi(a + t p) - phi(a)`` has a time component
    above ``eta_floor * (1 + |phi(a)|)`` and normalises it onto the section.
    """
    map = as_black_box(map)
    n = map.dimension
    a = as_event(a, n)
    dirs = np.atleast_2d(as_event(dirs, n))
    fa = map(a)
    floor = eta_floor * (1.0 + np.linalg.norm(fa))
    out = np.full(dirs.shape, np.nan)
    todo = np.arange(len(dirs))
    for t in _t_candidates():
        if not len(todo):
            break
        d = map(a + t * dirs[todo]) - fa
        ok = np.abs(eta(d)) > floor
        if np.any(ok):
            good = d[ok]
            bad = np.abs(q(good)) > tol.scale(good)
            if np.any(bad):
                raise NotCoherent(f"image of a coherent line is not coherent (base {a.tolist()})")
            out[todo[ok]] = make_direction(spatial(good) / eta(good)[:, None])
        todo = todo[~ok]
    if len(todo):
        collapsed = collapsed_lines(map, np.broadcast_to(a, dirs[todo].shape), dirs[todo], tol=tol)
        if np.any(collapsed):
            raise LineCollapse(f"{int(collapsed.sum())} coherent line(s) through "
                               f"{a.tolist()} are collapsed to a point")
        raise TimeComponentVanishes("image differences have vanishing time component")
    return out


def induced_sphere_map(map, a, p, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """The direction ``p'`` with ``phi(a + R p)`` inside ``phi(a) + R p'``."""
    return induced_directions(map, a, p, tol)[0]


def degree(map, a, mesh: SphereMesh | None = None, level: int = 5,
           tol: TolerancePolicy = DEFAULT_TOL, strict: bool = False) -> DegreeResult:
    """Degree of the induced sphere map at ``a`` (dimension 4 only).

    With ``strict`` a failed quality flag raises ``MeshTooCoarse`` instead of
    being returned.
    """
    map = as_black_box(map)
    if map.dimension != 4:
        raise DimensionMismatch("degree is only available in dimension 4")
    mesh = icosphere(level) if mesh is None else mesh
    dirs = make_direction(mesh.vertices)
    images = induced_directions(map, a, dirs, tol)
    result = sphere_map_degree(spatial(images), mesh)
    if strict and not result.quality:
        raise MeshTooCoarse(f"degree estimate {result.raw:.3f} is not trustworthy at "
                            f"subdivision level {mesh.subdivision_level}")
    return result


def _cone_residuals(Y, s):
    D = Y - s
    return q(D), D


def cone_fit_residual(Y, s) -> float:
    r, D = _cone_residuals(Y, s)
    return float(np.sqrt(np.mean((np.abs(r) / (1.0 + np.sum(D * D, axis=1))) ** 2)))


def _gauss_newton(Y, s, max_iter: int, gtol: float):
    """Damped Gauss-Newton for ``min sum q(y_i - s)^2``; returns ``(s, converged)``."""
    n = Y.shape[1]
    Mv = np.diag(metric(n))
    mu = 1e-3
    r, D = _cone_residuals(Y, s)
    obj = r @ r
    for _ in range(max_iter):
        J = -2.0 * D * Mv
        g = J.T @ r
        gscale = 1.0 + np.sum(np.abs(r) * np.linalg.norm(J, axis=1))
        if np.linalg.norm(g) <= gtol * gscale:
            return s, True
        H = J.T @ J
        while True:
            step = np.linalg.solve(H + mu * (np.diag(np.diag(H)) + np.eye(n)), -g)
            trial = s + step
            r_t, D_t = _cone_residuals(Y, trial)
            obj_t = r_t @ r_t
            if obj_t < obj:
                s, r, D, obj = trial, r_t, D_t, obj_t
                mu = max(mu / 3.0, 1e-12)
                break
            mu *= 4.0
            if mu > 1e16:
                # no representable descent step left: accept a stationary point
                return s, bool(np.linalg.norm(g) <= STALL_GTOL * gscale)
    J = -2.0 * D * Mv
    g = J.T @ r
    return s, bool(np.linalg.norm(g) <= gtol * (1.0 + np.sum(np.abs(r) * np.linalg.norm(J, axis=1))))


def fit_cone_vertex(samples, rng=0, starts: int = 8, max_iter: int = 200,
                    gtol: float = 1e-10) -> tuple[np.ndarray, float]:
    """Vertex ``s'`` of the light cone best containing the samples.

    Multistart damped Gauss-Newton from seeded sample points and the
    coordinate-wise median.  The residual is the RMS of
    ``|q(y_i - s')| / (1 + |y_i - s'|^2)``.
    """
    Y = np.atleast_2d(as_event(samples))
    if len(Y) < 5:
        raise ValueError("need at least 5 samples")
    g = np.random.default_rng(rng)
    picks = g.choice(len(Y), size=min(starts, len(Y)), replace=False)
    inits = [np.median(Y, axis=0)] + [Y[i] for i in picks]
    best = None
    for s0 in inits:
        s, ok = _gauss_newton(Y, s0.copy(), max_iter, gtol)
        if not ok:
            continue
        res = cone_fit_residual(Y, s)
        if best is None or res < best[1]:
            best = (s, res)
    if best is None:
        raise NoConvergence("no start reached the gradient tolerance")
    return best


@dataclass
class ClassifierConfig:
    check_pairs: int = 10**5
    fit_samples: int = 512
    box: float = 10.0
    tau_rel: float = 1e-9
    residual_threshold: float = 1e-6
    lorentz_tol: float = 1e-6
    census_lines: int = 64
    degree_level: int = 3

    def validate(self):
        defaults = ClassifierConfig()
        for name in ("check_pairs", "fit_samples"):
            if getattr(self, name) < getattr(defaults, name) / 10:
                raise ValueError(f"{name} must be at least a tenth of its default")

    @property
    def tol(self) -> TolerancePolicy:
        return TolerancePolicy(self.tau_rel)


@dataclass
class Similarity:
    k: float
    Q: np.ndarray
    a: np.ndarray
    residual: float
    verdict: str = field(default="similarity", init=False)

    @property
    def similarity(self) -> PoincareSimilarity:
        return PoincareSimilarity(self.k, self.Q, self.a)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict,
                "parameters": {"k": self.k, "Q": self.Q.tolist(), "a": self.a.tolist()},
                "residuals": {"affine": self.residual}, "witnesses": []}


@dataclass
class Degenerate:
    vertex: np.ndarray
    residual: float
    verdict: str = field(default="degenerate", init=False)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "parameters": {"vertex": self.vertex.tolist()},
                "residuals": {"cone": self.residual}, "witnesses": []}


@dataclass
class Violator:
    witness: dict
    magnitude: float
    verdict: str = field(default="violator", init=False)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "parameters": {},
                "residuals": {"violation": self.magnitude}, "witnesses": [self.witness]}


@dataclass
class Inconclusive:
    diagnostics: dict
    verdict: str = field(default="inconclusive", init=False)

    def to_dict(self) -> dict:
        res = {k: v for k, v in self.diagnostics.items() if k.endswith("residual")}
        return {"verdict": self.verdict, "parameters": {}, "residuals": res,
                "witnesses": [], "diagnostics": self.diagnostics}


Classification = Similarity | Degenerate | Violator | Inconclusive


def _fit_inputs(map: BlackBoxMap, rng, config: ClassifierConfig) -> np.ndarray:
    if map.support is not None:
        m = min(config.fit_samples, len(map.support))
        return map.support[rng.choice(len(map.support), size=m, replace=False)]
    return rng.uniform(-config.box, config.box, (config.fit_samples, map.dimension))


def classify(map, rng=0, config: ClassifierConfig | None = None) -> Classification:
    """Sort a map into similarity, degenerate, violator or inconclusive.

    1. coherency check on sampled pairs; any failure gives ``Violator``;
    2. affine least-squares fit; an exact fit that decomposes as ``k Q r + a``
       gives ``Similarity``;
    3. light-cone vertex fit of the sampled outputs; an exact fit gives
       ``Degenerate``;
    4. otherwise ``Inconclusive`` with the diagnostics gathered so far.

    Sampling cannot establish continuity, so the verdict is only consistent
    with the similarity/degenerate dichotomy, never a proof of it.
    """
    config = config or ClassifierConfig()
    config.validate()
    map = as_black_box(map)
    tol = config.tol
    seeds = np.random.SeedSequence(_seed(rng)).spawn(4)

    check = check_coherency_preservation(map, np.random.default_rng(seeds[0]),
                                         config.check_pairs, tol, config.box)
    if not check.passed:
        return Violator(check.witness, check.max_ratio)

    diag: dict[str, Any] = {"check_max_ratio": check.max_ratio}
    g = np.random.default_rng(seeds[1])
    X = _fit_inputs(map, g, config)
    Y = map(X)
    try:
        am, res = fit_affine(X, Y)
        diag["affine_residual"] = res
        if res <= config.residual_threshold:
            ps = decompose_similarity(am, config.lorentz_tol)
            if ps is not None:
                return Similarity(ps.k, ps.Q, ps.a, res)
    except DegenerateSamples as exc:
        diag["affine_error"] = str(exc)

    try:
        vertex, cres = fit_cone_vertex(Y, np.random.default_rng(seeds[2]))
        diag["cone_residual"] = cres
        if cres <= config.residual_threshold:
            return Degenerate(vertex, cres)
    except (NoConvergence, ValueError) as exc:
        diag["cone_error"] = str(exc)

    if map.support is None:
        collapsed, _ = find_collapsed_line(map, np.random.default_rng(seeds[3]),
                                           config.census_lines, config.box, tol=tol)
        diag["collapsed_lines"] = collapsed
        diag["probed_lines"] = config.census_lines
        if map.dimension == 4:
            try:
                diag["degree"] = degree(map, np.zeros(4), level=config.degree_level,
                                        tol=tol).to_dict()
            except (LightconeError, LookupError) as exc:
                diag["degree_error"] = f"{type(exc).__name__}: {exc}"
    log.debug("inconclusive: %s", diag)
    return Inconclusive(diag)


def config_dict(config: ClassifierConfig) -> dict:
    return asdict(config)
