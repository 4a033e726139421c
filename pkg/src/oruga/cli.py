"""Command-line front end.

Exit codes: 0 success, 1 domain failure (invalid input, no match, no
result), 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .construction import Construction, root_id
from .dot import export_dot
from .dsl import Document, load_files
from .dsl.printer import format_construction
from .errors import OrugaError, UnknownName
from .matching import MatchMode, find_match_anchored
from .transfer import (
    SearchLimits,
    TransferResult,
    composition_to_constructions,
    format_goal,
    init_state,
    iter_search,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load(files) -> Document:
    try:
        return load_files(files)
    except (OSError, UnicodeDecodeError) as err:
        raise UsageError(f"cannot read input: {err}") from err


def _resolve_construction(doc: Document, name: str) -> tuple[Construction, str]:
    """A construction declaration, or ``schema.source`` / ``schema.target``.
    Returns the construction and the name of its conSpec."""
    try:
        if "." in name:
            schema_name, side = name.rsplit(".", 1)
            schema = doc.schema(schema_name)
            if side == "source":
                return schema.source_pattern, schema.source_space
            if side == "target":
                return schema.target_pattern, schema.target_space
            raise UsageError(f"expected SCHEMA.source or SCHEMA.target, got {name!r}")
        decl = doc.construction(name)
        return decl.construction, decl.conspec
    except UnknownName as err:
        raise UsageError(str(err)) from err


def cmd_check(args, out, err) -> int:
    doc = _load(args.files)
    print(f"ok: {len(doc.declarations)} declarations", file=out)
    return EXIT_OK


def cmd_closure(args, out, err) -> int:
    doc = _load(args.files)
    try:
        ts = doc.type_system(args.type_system)
    except UnknownName as e:
        raise UsageError(f"UnknownTypeSystem: {e.message}") from e
    for a, b in sorted(ts.closure):
        print(f"{a} <= {b}", file=out)
    return EXIT_OK


def cmd_match(args, out, err) -> int:
    doc = _load(args.files)
    c, c_space = _resolve_construction(doc, args.construction)
    p, p_space = _resolve_construction(doc, args.pattern)
    mode = MatchMode.PREFIX if args.prefix else MatchMode.EXACT
    if mode is MatchMode.EXACT and c_space != p_space:
        print("no match (different constructor specifications)", file=out)
        return EXIT_FAIL
    anchors = []
    for spec in args.anchor or ():
        if "=" not in spec:
            raise UsageError(f"anchor must look like P=T, got {spec!r}")
        anchors.append(tuple(spec.split("=", 1)))
    ts = doc.space(c_space).types
    m = find_match_anchored(c, p, ts, mode, anchors, injective=not args.non_injective)
    if m is None:
        print("no match", file=out)
        return EXIT_FAIL
    for pid, tok in m.items():
        print(f"{pid} -> {tok.id} : {tok.type}", file=out)
    return EXIT_OK


def _print_derivation(node, comp, out, depth=0):
    if node is None:
        return
    print(f"{'  ' * depth}{format_goal(node.goal, comp)}  by {node.rule}", file=out)
    for child in node.children:
        _print_derivation(child, comp, out, depth + 1)


def _print_result(i: int, result: TransferResult, target_space, out):
    ts = target_space.types
    print(f"result {i}", file=out)
    print("--- constructions", file=out)
    for j, c in enumerate(composition_to_constructions(result), start=1):
        print(f"construction result{i}_{j}:{target_space.name} =", file=out)
        print("  " + format_construction(c, ts, 1), file=out)
    print("--- derivation", file=out)
    _print_derivation(result.derivation, result.composition, out)
    print("--- assumptions", file=out)
    for g in result.assumptions:
        print(format_goal(g, result.composition), file=out)
    print(file=out)


def cmd_transfer(args, out, err) -> int:
    doc = _load(args.files)
    source, source_space_name = _resolve_construction(doc, args.construction)
    try:
        source_space = doc.space(source_space_name)
        target_space = doc.space(args.target_space)
    except UnknownName as e:
        raise UsageError(str(e)) from e
    schemas = doc.schemas_between(source_space_name, args.target_space)
    if not schemas:
        raise UsageError(f"no schema bridges {source_space_name} and {args.target_space}")
    limits = SearchLimits(
        max_depth=args.max_depth,
        max_results=args.max_results,
        max_expansions=args.max_expansions,
        assumable=frozenset(args.assume or ()),
        single_construction=args.single_construction,
    )
    initial = init_state(source, args.relation, [root_id(source)], args.sought_type, target_space)
    stats: dict = {}
    results = []
    for result in iter_search(initial, schemas, (source_space, target_space), limits, stats):
        results.append(result)
        _print_result(len(results), result, target_space, out)
    hit = "yes" if stats["limits_hit"] else "no"
    print(f"{len(results)} results, {stats['expansions']} expansions, limit-hit: {hit}", file=out)
    if args.dot and results:
        Path(args.dot).write_text(export_dot(composition_to_constructions(results[0])), encoding="utf-8")
    if not results:
        if stats["limits_hit"]:
            print("warning: no result found before a search limit was hit", file=err)
        else:
            print("warning: NoApplicableSchema: no derivation discharges the goal", file=err)
        return EXIT_FAIL
    return EXIT_OK


def cmd_export_dot(args, out, err) -> int:
    doc = _load(args.files)
    c, _ = _resolve_construction(doc, args.construction)
    text = export_dot(c, args.construction)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oruga", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and validate documents")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("closure", help="print the subtype closure of a type system")
    p.add_argument("files", nargs="+")
    p.add_argument("--type-system", required=True)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("match", help="match a construction against a pattern")
    p.add_argument("files", nargs="+")
    p.add_argument("--construction", required=True)
    p.add_argument("--pattern", required=True, help="construction name or SCHEMA.source / SCHEMA.target")
    p.add_argument("--prefix", action="store_true", help="pattern leaves may match whole sub-trees")
    p.add_argument("--anchor", action="append", metavar="P=T")
    p.add_argument("--non-injective", action="store_true")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("transfer", help="run structure transfer from a construction")
    p.add_argument("files", nargs="+")
    p.add_argument("--construction", required=True)
    p.add_argument("--relation", required=True)
    p.add_argument("--sought-type", required=True)
    p.add_argument("--target-space", required=True)
    p.add_argument("--max-depth", type=_positive, default=10)
    p.add_argument("--max-results", type=_positive, default=5)
    p.add_argument("--max-expansions", type=_positive, default=10000)
    p.add_argument("--assume", action="append", metavar="REL")
    p.add_argument("--single-construction", action="store_true")
    p.add_argument("--dot", metavar="FILE", help="also write the first result as DOT")
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("export-dot", help="write a construction as Graphviz DOT")
    p.add_argument("files", nargs="+")
    p.add_argument("--construction", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args, out, err)
    except UsageError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except OrugaError as e:
        print(str(e), file=err)
        return EXIT_FAIL


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
