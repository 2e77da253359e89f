"""Command-line front end.  Every command reads a simplicial set in the JSON
format and writes JSON to standard output (or ``-o``).  Failures exit with the
code of the raised error; see the README for the table."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .cover import build_tau, cover, cover_from_tau, universal_cover
from .effective import effective_homology_universal_cover, homology_groups, homology_of_cover_direct
from .errors import ContractViolation, GroupTooLargeOrInfinite, OracleMismatch, SchemaError, UnicoverError
from .fundamental_group import (
    FiniteGroupTable,
    abelian_invariants,
    edge_path_presentation,
    format_word,
    fundamental_group,
    maximal_tree,
    simplify_presentation,
)
from .homalg import chain_of
from .morse import DiscreteVectorField, check_admissible, face_relation, greedy_field, morse_reduction, validate_dvf
from .simplicial import SCHEMA_VERSION, SimplicialSet, from_json, load, to_json, validate_simplicial
from .twisted import twisted_homology


def _groups(hs) -> list[dict]:
    return [h.as_dict() for h in hs]


def _homology_report(hs) -> dict:
    unreduced = _groups(hs)
    reduced = _groups([hs[0].reduced()] + list(hs[1:])) if hs else []
    return {"reduced": reduced, "unreduced": unreduced}


def _read_json(path: str):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


# -- commands ---------------------------------------------------------------------------


def cmd_validate(X: SimplicialSet, args) -> dict:
    problems = validate_simplicial(X)
    out = {
        "valid": not problems,
        "problems": problems,
        "counts": {str(n): c for n, c in X.counts().items()},
        "nondegenerate": X.n_nondegenerate(),
        "euler_characteristic": X.euler_characteristic(),
    }
    if problems:
        raise _Report(out, ContractViolation.exit_code)
    return out


def cmd_pi1(X: SimplicialSet, args) -> dict:
    ep = edge_path_presentation(X, maximal_tree(X))
    Q, _ = simplify_presentation(ep.presentation)
    ab = abelian_invariants(Q)
    out = {
        "presentation": str(Q),
        "generators": list(Q.generators),
        "relators": [format_word(r, Q.generators) for r in Q.relators],
        "abelianization": {"torsion": list(ab.torsion), "free_rank": ab.free_rank},
    }
    if not ab.is_finite:
        out.update(order=None, finite=False)
        return out
    F = fundamental_group(X, max_cosets=args.max_cosets)
    out.update(order=F.group.order, finite=True, abelian=F.group.is_abelian())
    return out


def _images_from_file(path: str, X: SimplicialSet):
    """``{"permutations": [[...], ...], "images": {edge: [signed 1-based letters]}}``."""
    obj = _read_json(path)
    if not isinstance(obj, dict) or "permutations" not in obj or "images" not in obj:
        raise SchemaError('images file needs "permutations" and "images"')
    H, gens, _ = FiniteGroupTable.from_permutations(obj["permutations"])
    images = {}
    for edge, word in obj["images"].items():
        if not all(isinstance(a, int) and a != 0 and abs(a) <= len(gens) for a in word):
            raise SchemaError(f"bad word for {edge!r}: {word!r}")
        images[edge] = H.evaluate(word, gens)
    return H, images


def _cover_json(C) -> dict:
    out = C.to_json()
    out["group_order"] = C.group.order
    out["nondegenerate"] = C.n_nondegenerate()
    return out


def cmd_cover(X: SimplicialSet, args) -> dict:
    if args.images:
        H, images = _images_from_file(args.images, X)
        if args.group_order_limit is not None and H.order > args.group_order_limit:
            raise GroupTooLargeOrInfinite(f"group of order {H.order} exceeds the limit {args.group_order_limit}")
        return _cover_json(cover(X, H, images))
    F = fundamental_group(X, max_cosets=args.max_cosets)
    if args.group_order_limit is not None and F.group.order > args.group_order_limit:
        raise GroupTooLargeOrInfinite(f"fundamental group of order {F.group.order} exceeds the limit {args.group_order_limit}")
    tau = build_tau(X, F.edge_path.tree, F.group, F.group.word_images)
    return _cover_json(cover_from_tau(X, tau, name=f"universal cover of {X.name}"))


def cmd_universal_cover(X: SimplicialSet, args) -> dict:
    return _cover_json(universal_cover(X, args.max_cosets))


def cmd_homology(X: SimplicialSet, args) -> dict:
    return _homology_report(homology_groups(chain_of(X), args.max_degree))


def cmd_cover_homology(X: SimplicialSet, args) -> dict:
    out: dict = {"via": args.via}
    direct = perturbation = None
    if args.via in ("direct", "both"):
        direct = homology_of_cover_direct(X, args.max_degree, max_cosets=args.max_cosets)
    if args.via in ("perturbation", "both"):
        res = effective_homology_universal_cover(
            X, max_iter=args.max_iter, max_degree=args.max_degree, max_cosets=args.max_cosets
        )
        perturbation = res.homology
    if args.via == "both":
        out["direct"] = _homology_report(direct)
        out["perturbation"] = _homology_report(perturbation)
        out["agree"] = direct == perturbation
        if not out["agree"]:
            raise _Report(out, OracleMismatch.exit_code)
        out.update(_homology_report(direct))
    else:
        out.update(_homology_report(direct if direct is not None else perturbation))
    return out


def _field_from_file(path: str) -> DiscreteVectorField:
    obj = _read_json(path)
    if isinstance(obj, dict):
        obj = obj.get("vectors")
    if not isinstance(obj, list) or not all(isinstance(p, list) and len(p) == 2 for p in obj):
        raise SchemaError("field file must be a list of [source, target] pairs")
    return DiscreteVectorField([tuple(p) for p in obj])


def cmd_morse(X: SimplicialSet, args) -> dict:
    C = chain_of(X)
    if args.auto == bool(args.field):
        raise ContractViolation("give exactly one of --field and --auto")
    V = greedy_field(C) if args.auto else _field_from_file(args.field)
    bad = validate_dvf(C, V)
    if bad:
        raise ContractViolation("invalid vector field: " + "; ".join(bad[:3]))
    r = morse_reduction(C, V, check_admissible(C, V, face_relation(X)))
    crit = r.bottom
    return {
        "vectors": [list(v) for v in V.vectors],
        "critical": {str(n): list(crit.basis(n)) for n in crit.degrees()},
        "critical_counts": {str(n): len(crit.basis(n)) for n in crit.degrees()},
        **_homology_report(homology_groups(crit, args.max_degree if args.max_degree is not None else C.max_degree)),
    }


def _twisted_one(payload):
    obj, n, raw = payload
    X = from_json(obj)
    P = twisted_homology(X, n, raw=raw)
    return {"degree": n, **P.as_dict()}


def cmd_twisted_homology(X: SimplicialSet, args) -> dict:
    degrees = args.degree if args.degree else list(range(X.max_dim + 1))
    if len(degrees) == 1:
        P = twisted_homology(X, degrees[0], raw=args.raw)
        return {"degree": degrees[0], **P.as_dict()}
    if args.jobs > 1:
        obj = to_json(X)
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_twisted_one, [(obj, n, args.raw) for n in degrees]))
    else:
        results = [{"degree": n, **twisted_homology(X, n, raw=args.raw).as_dict()} for n in degrees]
    return {"degrees": results}


COMMANDS = {
    "validate": cmd_validate,
    "pi1": cmd_pi1,
    "cover": cmd_cover,
    "universal-cover": cmd_universal_cover,
    "homology": cmd_homology,
    "cover-homology": cmd_cover_homology,
    "morse": cmd_morse,
    "twisted-homology": cmd_twisted_homology,
}


class _Report(Exception):
    """Carry a JSON report out together with a nonzero exit status."""

    def __init__(self, payload: dict, code: int):
        super().__init__(code)
        self.payload = payload
        self.code = code


# -- argument parsing -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="simplicial set in the JSON format")
    common.add_argument("--max-cosets", type=int, default=100000, help="coset enumeration limit")
    common.add_argument("--max-iter", type=int, default=None, help="perturbation series cap")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent degrees")
    common.add_argument("-o", "--output", help="write JSON here instead of standard output")

    p = argparse.ArgumentParser(prog="unicover", description="Universal covers and their homology.")
    p.add_argument("--version", action="version", version=f"unicover {__version__} (schema {SCHEMA_VERSION})")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check the simplicial identities")
    sub.add_parser("pi1", parents=[common], help="fundamental group")
    c = sub.add_parser("cover", parents=[common], help="regular cover (default: universal)")
    c.add_argument("--group-order-limit", type=int, default=None)
    c.add_argument("--images", help="JSON with permutations and edge images defining the surjection")
    sub.add_parser("universal-cover", parents=[common], help="universal cover")
    h = sub.add_parser("homology", parents=[common], help="homology of the input")
    h.add_argument("--max-degree", type=int, default=None)
    ch = sub.add_parser("cover-homology", parents=[common], help="homology of the universal cover")
    ch.add_argument("--max-degree", type=int, default=None)
    ch.add_argument("--via", choices=["direct", "perturbation", "both"], default="direct")
    m = sub.add_parser("morse", parents=[common], help="Morse reduction by a discrete vector field")
    m.add_argument("--field", help="JSON list of [source, target] pairs")
    m.add_argument("--auto", action="store_true", help="use a greedy field")
    m.add_argument("--max-degree", type=int, default=None)
    t = sub.add_parser("twisted-homology", parents=[common], help="homology of the cover as a group-algebra module")
    t.add_argument("--degree", type=int, action="append", help="degree (repeatable; default all)")
    t.add_argument("--raw", action="store_true", help="unsimplified relations over the quotient ring")
    return p


def _check_flags(args) -> None:
    for flag in ("max_cosets", "jobs"):
        if getattr(args, flag) < 1:
            raise ContractViolation(f"--{flag.replace('_', '-')} must be positive")
    if args.max_iter is not None and args.max_iter < 1:
        raise ContractViolation("--max-iter must be positive")
    for flag in ("max_degree", "group_order_limit"):
        v = getattr(args, flag, None)
        if v is not None and v < 0:
            raise ContractViolation(f"--{flag.replace('_', '-')} must be non-negative")
    for n in getattr(args, "degree", None) or ():
        if n < 0:
            raise ContractViolation("--degree must be non-negative")


def _emit(payload: dict, args) -> None:
    text = json.dumps(payload, indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _check_flags(args)
        try:
            X = load(args.input)
        except OSError as exc:
            raise SchemaError(f"cannot read {args.input}: {exc.strerror}") from None
        payload = COMMANDS[args.command](X, args)
    except _Report as rep:
        _emit(rep.payload, args)
        return rep.code
    except UnicoverError as exc:
        sys.stderr.write(f"unicover: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001 - last-resort report
        sys.stderr.write(f"unicover: internal error: {type(exc).__name__}: {exc}\n")
        return 1
    _emit(payload, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
