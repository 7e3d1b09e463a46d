"""Command-line front end.

Exit codes: 0 success or pass, 1 semantic failure (violation, invalid spec,
low-quality degree), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

import numpy as np

from . import mapspec
from .analyzer import (
    ClassifierConfig,
    TableMap,
    as_black_box,
    check_coherency_preservation,
    classify,
    config_dict,
    degree,
    sample_coherent_pair,
)
from .degenerate import DegenerateSpec, build_default, validate_spec
from .errors import DimensionMismatch, EpsilonTooLarge, LightconeError, LineCollapse, SchemaError
from .hermitian import Herm2, event_to_herm, herm_to_event
from .quadratic import TolerancePolicy, q
from .transforms import AffineMap, PoincareSimilarity, is_lorentz, random_similarity

OK, FAIL, USAGE = 0, 1, 2


class InputError(Exception):
    pass


def _emit(obj) -> None:
    print(json.dumps(obj, indent=1))


def _seed_or_fresh(seed):
    if seed is not None:
        return seed
    seed = int(np.random.SeedSequence().entropy % 2**32)
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def _load(path):
    try:
        return mapspec.load(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except (SchemaError, ValueError) as exc:
        raise InputError(str(exc)) from None


def squaring_table(pairs: int, seed: int, scale: float = 10.0) -> TableMap:
    """Table of ``r -> (q(r), 0, 0, 0)`` over seeded coherent pairs."""
    r1, r2 = sample_coherent_pair(seed, scale, 4, size=pairs)
    x = np.concatenate([r1, r2])
    y = np.zeros_like(x)
    y[:, 0] = q(x)
    return TableMap(x, y)


def cmd_gen(args) -> int:
    seed = _seed_or_fresh(args.seed)
    if args.kind == "similarity":
        ps = random_similarity(seed, (args.k_min, args.k_max), args.translation, args.max_rapidity)
        if args.reflect:
            ps = PoincareSimilarity(ps.k, ps.Q @ np.diag([-1.0, -1.0, -1.0, 1.0]), ps.a)
        obj = ps
    elif args.kind == "degenerate":
        try:
            obj = build_default(args.patches, args.epsilon, args.vertex, seed)
        except (EpsilonTooLarge, ValueError) as exc:
            raise InputError(str(exc)) from None
    else:
        if args.pairs < 1:
            raise InputError("--pairs must be positive")
        obj = squaring_table(args.pairs, seed, args.scale)
    print(mapspec.dumps(obj, seed=seed))
    return OK


def cmd_validate(args) -> int:
    obj = _load(args.file)
    if isinstance(obj, DegenerateSpec):
        report = validate_spec(obj, args.samples, args.seed).to_dict()
    elif isinstance(obj, PoincareSimilarity):
        report = {"valid": bool(obj.k > 0 and is_lorentz(obj.Q)), "failures": []}
    else:
        report = {"valid": True, "failures": [],
                  "note": f"{type(obj).__name__} has no semantic conditions"}
    report["kind"] = type(obj).__name__
    _emit(report)
    return OK if report["valid"] else FAIL


def cmd_check(args) -> int:
    obj = _load(args.file)
    seed = _seed_or_fresh(args.seed)
    report = check_coherency_preservation(as_black_box(obj), seed, args.pairs,
                                          TolerancePolicy(args.tol), args.scale)
    _emit(report.to_dict())
    return OK if report.passed else FAIL


def cmd_classify(args) -> int:
    obj = _load(args.file)
    seed = _seed_or_fresh(args.seed)
    config = ClassifierConfig(check_pairs=args.pairs, fit_samples=args.fit_samples,
                              box=args.box, tau_rel=args.tol,
                              residual_threshold=args.threshold)
    try:
        config.validate()
    except ValueError as exc:
        raise InputError(str(exc)) from None
    result = classify(as_black_box(obj), seed, config)
    report = result.to_dict()
    report["seed"] = seed
    report["config"] = config_dict(config)
    report["timestamp"] = datetime.now(timezone.utc).isoformat()
    _emit(report)
    return OK


def cmd_degree(args) -> int:
    obj = _load(args.file)
    base = np.zeros(4) if args.base is None else np.asarray(args.base, dtype=float)
    try:
        result = degree(as_black_box(obj), base, level=args.subdiv)
    except LineCollapse as exc:
        print(f"error: line collapse at base point: {exc}", file=sys.stderr)
        return USAGE
    except DimensionMismatch as exc:
        raise InputError(str(exc)) from None
    _emit(result.to_dict())
    return OK if result.quality else FAIL


def cmd_convert(args) -> int:
    if args.event is not None:
        r = np.asarray(args.event, dtype=float)
        A = event_to_herm(r)
    else:
        A = Herm2.from_array(np.asarray(args.herm, dtype=float))
        r = herm_to_event(A)
    _emit({
        "event": r.tolist(),
        "herm": A.to_array().tolist(),
        "q_event": float(q(r)),
        "det_herm": float(A.det()),
    })
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lightcone",
                                 description="Light-cone geometry and coherency-preserver analysis")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a map spec on standard output")
    g.add_argument("kind", choices=["similarity", "degenerate", "table"])
    g.add_argument("--seed", type=int)
    g.add_argument("--k-min", type=float, default=0.5)
    g.add_argument("--k-max", type=float, default=2.0)
    g.add_argument("--translation", type=float, default=10.0)
    g.add_argument("--max-rapidity", type=float, default=0.5)
    g.add_argument("--reflect", action="store_true",
                   help="compose the similarity with the spatial point reflection")
    g.add_argument("--patches", type=int, default=5)
    g.add_argument("--epsilon", type=float, default=0.2)
    g.add_argument("--vertex", type=float, nargs=4)
    g.add_argument("--pairs", type=int, default=1000, help="coherent pairs in a table")
    g.add_argument("--scale", type=float, default=10.0)
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("validate", help="check the conditions of a map spec")
    v.add_argument("file")
    v.add_argument("--samples", type=int, default=10**4)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("check", help="sample coherent pairs and test preservation")
    c.add_argument("file")
    c.add_argument("--pairs", type=int, default=10**5)
    c.add_argument("--seed", type=int)
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--scale", type=float, default=10.0)
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("classify", help="similarity / degenerate / violator / inconclusive")
    k.add_argument("file")
    k.add_argument("--seed", type=int)
    k.add_argument("--pairs", type=int, default=10**5)
    k.add_argument("--fit-samples", type=int, default=512)
    k.add_argument("--box", type=float, default=10.0)
    k.add_argument("--tol", type=float, default=1e-9)
    k.add_argument("--threshold", type=float, default=1e-6)
    k.set_defaults(func=cmd_classify)

    d = sub.add_parser("degree", help="degree of the induced sphere map")
    d.add_argument("file")
    d.add_argument("--base", type=float, nargs=4)
    d.add_argument("--subdiv", type=int, default=5)
    d.set_defaults(func=cmd_degree)

    x = sub.add_parser("convert", help="event <-> Hermitian matrix")
    grp = x.add_mutually_exclusive_group(required=True)
    grp.add_argument("--event", type=float, nargs=4, metavar=("X", "Y", "Z", "T"))
    grp.add_argument("--herm", type=float, nargs=4, metavar=("D1", "D2", "RE", "IM"))
    x.set_defaults(func=cmd_convert)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, LookupError, LightconeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
