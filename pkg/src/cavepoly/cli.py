"""JSON document formats and the command-line surface.

Instance documents carry exactly one of:

* ``{"points": [[0, 3], [1, 2], [2, 1]]}`` -- explicit base points;
* ``{"rank": {"p": 2, "cage": [2, 3], "values": {"[]": 0, "[1]": 2, ...}}}``
  -- a rank function, subsets keyed as sorted 1-based index lists.

Polynomial documents list terms in the canonical order together with the
canonical string; the term list is authoritative, the string advisory.
All commands read an instance from a file argument or stdin, write results
to stdout and diagnostics to stderr, and are stateless.  Exit status: 0 on
success/equality, 1 on mathematical inequality or a cave-check false, 2 on
input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import algorithms, genverify
from .core import Polymatroid, points_from_rank, rank_from_points, validate_rank_function
from .errors import (
    AxiomViolation,
    CavepolyError,
    DimensionMismatch,
    EmptyInput,
    InternalInvariantFailure,
    NotMConvex,
    ParseError,
)
from .geometry import independence_points, is_cave, truncate
from .polyalg import (
    BinomialBasisPoly,
    MultiPoly,
    RationalPoly,
    canonical_key,
    canonical_string,
    expand_binomial,
)

EXIT_OK = 0
EXIT_UNEQUAL = 1
EXIT_INPUT = 2


def _load_document(text):
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("input is not UTF-8: %s" % exc)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("invalid JSON: %s" % exc)
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object")
    return doc


def _parse_point_list(raw):
    if not isinstance(raw, list) or not raw:
        raise ParseError('"points" must be a nonempty list of integer vectors')
    points = []
    for k, vec in enumerate(raw):
        if not isinstance(vec, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in vec):
            raise ParseError("points[%d] is not an integer vector" % k)
        if any(c < 0 for c in vec):
            raise ParseError("points[%d] has a negative coordinate" % k)
        points.append(tuple(vec))
    lengths = {len(q) for q in points}
    if len(lengths) != 1:
        raise ParseError("points have mixed lengths %s" % sorted(lengths))
    return points


def _parse_subset_key(key, p):
    try:
        subset = json.loads(key)
    except json.JSONDecodeError:
        raise ParseError("bad subset key %r, expected e.g. \"[1,2]\"" % key)
    if not isinstance(subset, list) or not all(isinstance(i, int) for i in subset):
        raise ParseError("bad subset key %r, expected a list of indices" % key)
    if sorted(set(subset)) != sorted(subset) or any(not 1 <= i <= p for i in subset):
        raise ParseError("subset key %r is not a sorted set of indices in 1..%d" % (key, p))
    return tuple(subset)


def parse_instance(text) -> Polymatroid:
    """Parse and validate an instance document (bytes or str of UTF-8 JSON)."""
    doc = _load_document(text)
    has_points = "points" in doc
    has_rank = "rank" in doc
    if has_points == has_rank:
        raise ParseError('instance must carry exactly one of "points" or "rank"')
    if has_points:
        try:
            return Polymatroid(_parse_point_list(doc["points"]))
        except (EmptyInput, DimensionMismatch, ValueError) as exc:
            raise ParseError(str(exc))
    rank_doc = doc["rank"]
    if not isinstance(rank_doc, dict):
        raise ParseError('"rank" must be an object with "p", "cage" and "values"')
    for field in ("p", "cage", "values"):
        if field not in rank_doc:
            raise ParseError('"rank" is missing "%s"' % field)
    p = rank_doc["p"]
    if not isinstance(p, int) or p < 1:
        raise ParseError('"p" must be a positive integer')
    cage = rank_doc["cage"]
    if not isinstance(cage, list) or len(cage) != p or not all(isinstance(c, int) for c in cage):
        raise ParseError('"cage" must be a list of %d integers' % p)
    raw_values = rank_doc["values"]
    if not isinstance(raw_values, dict):
        raise ParseError('"values" must map subset keys to integers')
    values = {}
    for key, val in raw_values.items():
        subset = _parse_subset_key(key, p)
        if not isinstance(val, int):
            raise ParseError("rank of %s is not an integer" % key)
        values[subset] = val
    try:
        rk = validate_rank_function(p, values, cage)
    except (ValueError, DimensionMismatch) as exc:
        raise ParseError(str(exc))
    return points_from_rank(rk)


def serialize_instance(P: Polymatroid) -> dict:
    """Point-form instance document; parses back to an equal polymatroid."""
    return {"points": [list(q) for q in sorted(P.points)]}


def rank_document(P: Polymatroid) -> dict:
    rk = rank_from_points(P)
    values = {}
    for subset, value in sorted(rk.as_subset_map().items(), key=lambda kv: (len(kv[0]), kv[0])):
        values[json.dumps(list(subset), separators=(",", ":"))] = value
    return {"rank": {"p": rk.p, "cage": list(rk.cage), "values": values}}


def polynomial_document(q, **extra) -> dict:
    """Term list in canonical order plus the canonical rendering."""
    if isinstance(q, MultiPoly):
        basis = "monomial"
        coeff = lambda c: c
    elif isinstance(q, BinomialBasisPoly):
        basis = "binomial"
        coeff = lambda c: c
        extra.setdefault("shift", q.shift)
    elif isinstance(q, RationalPoly):
        basis = "expanded"
        coeff = lambda c: "%d/%d" % (c.numerator, c.denominator)
    else:
        raise TypeError("cannot serialize %r" % type(q).__name__)
    doc = {"basis": basis, "p": q.p}
    doc.update(extra)
    doc["terms"] = [
        {"exponents": list(e), "coefficient": coeff(c)}
        for e, c in sorted(q.terms.items(), key=lambda item: canonical_key(item[0]))
    ]
    doc["canonical"] = canonical_string(q)
    return doc


def _emit(doc, out):
    json.dump(doc, out, indent=2)
    out.write("\n")


def _read_source(path, stdin):
    if path in (None, "-"):
        data = stdin.read()
        return data if isinstance(data, (str, bytes)) else str(data)
    with open(path, "rb") as handle:
        return handle.read()


def _int_vector(text):
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers, got %r" % text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavepoly",
        description="Exact polymatroid invariants: cave, stalactite, box and Mobius polynomials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_command(name, help_text):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("file", nargs="?", default=None, help="instance JSON file ('-' or absent: stdin)")
        return cmd

    instance_command("validate", "parse an instance and report its shape")
    instance_command("points", "emit the base points")
    instance_command("independence", "emit the independence-region lattice points")
    instance_command("cave", "emit the cave polynomial")
    stal = instance_command("stal", "emit the stalactite polynomial")
    stal.add_argument("--order", type=_int_vector, default=None, help="coordinate priority permutation, e.g. 2,1")
    instance_command("box", "emit the box polynomial")
    mob = instance_command("mobius", "emit the Mobius polynomial")
    mob.add_argument("--table", action="store_true", help="include the Mobius value of every independence point")
    snap = instance_command("snapper", "emit the Snapper polynomial (binomial basis)")
    snap.add_argument("--expand", action="store_true", help="expand to the rational monomial form")
    snap.add_argument("--eval", type=_int_vector, default=None, dest="eval_at", metavar="T1,...,TP",
                      help="print the exact value at an integer vector instead")
    instance_command("equal", "compute all four polynomials and compare")
    trunc = instance_command("truncate", "emit the truncation at a point")
    trunc.add_argument("--at", type=_int_vector, required=True, help="truncation point, e.g. 1,1")
    cave_chk = instance_command("is-cave", "check the three cave conditions on a raw point set")
    cave_chk.add_argument("--order", type=_int_vector, default=None, help="lex order for the union condition")

    rand = sub.add_parser("random", help="emit a random instance")
    rand.add_argument("--seed", type=int, default=0)
    rand.add_argument("--p", type=int, default=3)
    rand.add_argument("--strategy", choices=genverify.STRATEGIES, default="submodular-rejection")
    rand.add_argument("--max-rank", type=int, default=5)
    rand.add_argument("--max-cage-entry", type=int, default=4)

    ver = sub.add_parser("verify", help="generate instances and verify the theorem suite")
    ver.add_argument("--count", type=int, default=25)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--p", type=int, default=3)
    ver.add_argument("--strategy", choices=genverify.STRATEGIES, default="submodular-rejection")
    ver.add_argument("--max-rank", type=int, default=4)
    ver.add_argument("--max-cage-entry", type=int, default=3)
    return parser


def _cmd_validate(P, args, out):
    _emit({"valid": True, "p": P.p, "rank": P.rank, "base_points": len(P.points),
           "cage": list(P.cage)}, out)
    return EXIT_OK


def _cmd_points(P, args, out):
    _emit(serialize_instance(P), out)
    return EXIT_OK


def _cmd_independence(P, args, out):
    _emit({"points": [list(q) for q in sorted(independence_points(P).points)]}, out)
    return EXIT_OK


def _cmd_cave(P, args, out):
    _emit(polynomial_document(algorithms.cave_polynomial(P)), out)
    return EXIT_OK


def _cmd_stal(P, args, out):
    order = algorithms.LexOrder(args.order) if args.order else algorithms.LexOrder.identity(P.p)
    doc = polynomial_document(algorithms.stalactite_polynomial(P, order), order=list(order.permutation))
    _emit(doc, out)
    return EXIT_OK


def _cmd_box(P, args, out):
    _emit(polynomial_document(algorithms.box_polynomial(P)), out)
    return EXIT_OK


def _cmd_mobius(P, args, out):
    doc = polynomial_document(algorithms.mobius_polynomial(P))
    if args.table:
        table = algorithms.mobius_table(P)
        doc["table"] = [
            {"point": list(n), "value": table[n]}
            for n in sorted(table.values, key=canonical_key)
        ]
    _emit(doc, out)
    return EXIT_OK


def _cmd_snapper(P, args, out):
    snapper = algorithms.snapper_from_cave(P)
    target = expand_binomial(snapper) if args.expand else snapper
    if args.eval_at is not None:
        value = target.evaluate(args.eval_at)
        out.write("%s\n" % value)
        return EXIT_OK
    _emit(polynomial_document(target), out)
    return EXIT_OK


def _cmd_equal(P, args, out):
    cave = algorithms.cave_polynomial(P)
    others = {
        "stalactite": algorithms.stalactite_polynomial(P),
        "box": algorithms.box_polynomial(P),
        "mobius": algorithms.mobius_polynomial(P),
    }
    unequal = {name: q for name, q in others.items() if q != cave}
    if not unequal:
        out.write("EQUAL\n")
        return EXIT_OK
    out.write("UNEQUAL\n")
    out.write("cave: %s\n" % canonical_string(cave))
    for name in sorted(unequal):
        out.write("%s: %s\n" % (name, canonical_string(unequal[name])))
    return EXIT_UNEQUAL


def _cmd_truncate(P, args, out):
    _emit(serialize_instance(truncate(P, args.at)), out)
    return EXIT_OK


def _cmd_is_cave(args, stdin, out):
    doc = _load_document(_read_source(args.file, stdin))
    if "points" not in doc:
        raise ParseError('is-cave expects a raw {"points": [...]} document')
    points = _parse_point_list(doc["points"])
    order = algorithms.LexOrder(args.order) if args.order else None
    report = is_cave(points, order)
    _emit({
        "is_cave": report.ok,
        "failed_condition": report.failed_condition,
        "witness": _jsonable(report.witness),
        "order": list(report.order),
    }, out)
    return EXIT_OK if report.ok else EXIT_UNEQUAL


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_jsonable(v) for v in items]
    return value


def _cmd_random(args, out):
    cfg = genverify.GeneratorConfig(
        seed=args.seed, p=args.p, max_rank=args.max_rank,
        max_cage_entry=args.max_cage_entry, strategy=args.strategy)
    _emit(serialize_instance(genverify.random_polymatroid(cfg)), out)
    return EXIT_OK


def _cmd_verify(args, out):
    cfg = genverify.GeneratorConfig(
        seed=args.seed, p=args.p, max_rank=args.max_rank,
        max_cage_entry=args.max_cage_entry, strategy=args.strategy)
    report = genverify.verify_campaign(cfg, args.count)
    _emit(report.to_document(), out)
    return EXIT_OK if report.passed else EXIT_UNEQUAL


_INSTANCE_COMMANDS = {
    "validate": _cmd_validate,
    "points": _cmd_points,
    "independence": _cmd_independence,
    "cave": _cmd_cave,
    "stal": _cmd_stal,
    "box": _cmd_box,
    "mobius": _cmd_mobius,
    "snapper": _cmd_snapper,
    "equal": _cmd_equal,
    "truncate": _cmd_truncate,
}


def run_command(argv, stdin=None, stdout=None, stderr=None) -> int:
    """Dispatch one CLI invocation; returns the exit status."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command in _INSTANCE_COMMANDS:
            P = parse_instance(_read_source(args.file, stdin))
            return _INSTANCE_COMMANDS[args.command](P, args, stdout)
        if args.command == "is-cave":
            return _cmd_is_cave(args, stdin, stdout)
        if args.command == "random":
            return _cmd_random(args, stdout)
        if args.command == "verify":
            return _cmd_verify(args, stdout)
        raise AssertionError("unhandled command %r" % args.command)
    except (ParseError, AxiomViolation, NotMConvex, ValueError) as exc:
        stderr.write("error: %s\n" % exc)
        return EXIT_INPUT
    except InternalInvariantFailure:
        raise
    except CavepolyError as exc:
        stderr.write("error: %s\n" % exc)
        return EXIT_INPUT
    except OSError as exc:
        stderr.write("error: %s\n" % exc)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
