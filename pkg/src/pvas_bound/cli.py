"""CLI for pvas-bound."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any, Literal

from pydantic import BaseModel, Field, ValidationError

from pvas_bound.core.errors import AnnotationError, FormatError, GrammarError, PvasBoundError

if TYPE_CHECKING:
    from pvas_bound.models.grammar import Gvas
    from pvas_bound.models.pvas import Pvas

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3


class RunConfig(BaseModel):
    """One validated invocation."""

    command: str
    inputs: list[str] = Field(default_factory=list)
    output: Literal["text", "json"] = "text"
    verbose: int = 0
    # decide / oracle
    cap: int | None = Field(default=None, gt=0)
    oracle_max: int | None = Field(default=None, gt=0)
    complete: bool = False
    pruning: bool = True
    check_prefix_closed: int = Field(default=0, ge=0)
    start: str | None = None
    input_value: int | None = Field(default=None, ge=0)
    # simulate
    max_counter: int = Field(default=64, gt=0)
    max_stack: int = Field(default=16, gt=0)
    max_configs: int = Field(default=100_000, gt=0)
    # witness
    starts: list[str] = Field(default_factory=list)
    # verify / rank
    flow_tree: str | None = None
    certificate: str | None = None
    s: str | None = None
    t: str | None = None
    dot: bool = False
    # fixture / gen
    name: str | None = None
    kind: Literal["gvas", "normalized", "pvas"] | None = None
    seed: int = Field(default=0, ge=0)
    size: int = Field(default=3, gt=0)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _emit(config: RunConfig, document: dict[str, Any], text: str) -> None:
    from pvas_bound.adapters.json_codec import dump_json

    if config.output == "json":
        print(dump_json(document), end="")
    else:
        print(text.rstrip("\n"))


def _load_gvas(path: str) -> Gvas:
    from pvas_bound.adapters.text_format import parse_gvas

    return parse_gvas(_read(path))


def _load_pvas(path: str) -> Pvas:
    from pvas_bound.adapters.text_format import parse_pvas

    return parse_pvas(_read(path))


def _cmd_normalize(config: RunConfig) -> int:
    from pvas_bound.adapters.text_format import format_gvas
    from pvas_bound.core.normalize import normalize

    normalized = normalize(_load_gvas(config.inputs[0]))
    document = {
        "start": normalized.start,
        "counter_init": normalized.c_init,
        "nonterminals": list(normalized.nonterminals),
        "rules": [str(rule) for rule in normalized.rules],
    }
    _emit(config, document, format_gvas(normalized))
    return EXIT_OK


def _cmd_displacement(config: RunConfig) -> int:
    from pvas_bound.core.displacement import displacement_table
    from pvas_bound.core.normalize import normalize
    from pvas_bound.models.flowtree import format_ext

    normalized = normalize(_load_gvas(config.inputs[0]))
    table = displacement_table(normalized)
    width = max(len(name) for name in normalized.nonterminals)
    lines = [f"{name:<{width}}  {format_ext(table[name])}" for name in normalized.nonterminals]
    _emit(config, table.model_dump(mode="json"), "\n".join(lines))
    return EXIT_OK


def _cmd_pump(config: RunConfig) -> int:
    from pvas_bound.adapters.json_codec import parse_tree_document
    from pvas_bound.core.displacement import find_positive_pump
    from pvas_bound.core.grammar import yield_of
    from pvas_bound.core.normalize import normalize
    from pvas_bound.models.grammar import ParseTree

    pump = find_positive_pump(normalize(_load_gvas(config.inputs[0])))
    if pump is None:
        _emit(config, {"pump": None}, "no positive pump: the start displacement is finite")
        return EXIT_NEGATIVE
    document = {
        "anchor": pump.anchor,
        "gain": pump.gain,
        "pump_tree": parse_tree_document(pump.pump_tree),
        "context_tree": parse_tree_document(pump.context_tree),
    }
    (hole,) = pump.pump_tree.nonterminal_leaves()
    word = yield_of(pump.pump_tree.replace(hole, ParseTree(symbol=None)))
    text = (
        f"anchor {pump.anchor}, gain {pump.gain}\n"
        f"pump yield around {pump.anchor}: {' '.join(map(str, word))}\n"
        f"pump nodes {pump.pump_tree.node_count()}, context nodes {pump.context_tree.node_count()}"
    )
    _emit(config, document, text)
    return EXIT_OK


def _cmd_witness(config: RunConfig) -> int:
    from pvas_bound.adapters.json_codec import parse_tree_document
    from pvas_bound.core.displacement import derive_witness
    from pvas_bound.core.grammar import sum_of, yield_of
    from pvas_bound.core.normalize import normalize

    normalized = normalize(_load_gvas(config.inputs[0]))
    starts = config.starts or [normalized.start]
    trees = derive_witness(normalized, starts)
    sums = [sum_of(yield_of(tree)) for tree in trees]
    document = {
        "starts": starts,
        "trees": [parse_tree_document(tree) for tree in trees],
        "sums": sums,
        "total": sum(sums),
    }
    lines = [
        f"{name}: sum {total}, {tree.node_count()} nodes"
        for name, tree, total in zip(starts, trees, sums, strict=True)
    ]
    lines.append(f"total {sum(sums)}")
    _emit(config, document, "\n".join(lines))
    return EXIT_OK


def _cmd_reduce(config: RunConfig) -> int:
    from pvas_bound.adapters.text_format import format_gvas
    from pvas_bound.core.pvas import reduce_to_gvas

    gvas = reduce_to_gvas(_load_pvas(config.inputs[0]))
    text = format_gvas(gvas)
    _emit(config, {"gvas": text}, text)
    return EXIT_OK


def _cmd_simulate(config: RunConfig) -> int:
    from pvas_bound.core.pvas import bfs_reach

    pvas = _load_pvas(config.inputs[0])
    result = bfs_reach(pvas, config.max_counter, config.max_stack, config.max_configs)
    values = sorted({tuple(c.counters) for c in result.configs})
    flags = result.truncated.model_dump()
    document = {
        "configs": len(result.configs),
        "counter_values": [list(v) for v in values],
        "truncated": flags,
    }
    hit = [name for name, value in flags.items() if value]
    lines = [
        f"{len(result.configs)} configurations",
        "counter values: " + " ".join(",".join(map(str, v)) for v in values),
        "truncated: " + (", ".join(hit) if hit else "no"),
    ]
    _emit(config, document, "\n".join(lines))
    return EXIT_INCONCLUSIVE if result.truncated.hit else EXIT_OK


def _cmd_oracle(config: RunConfig) -> int:
    from pvas_bound.core.normalize import normalize
    from pvas_bound.core.oracle import reach_table
    from pvas_bound.models.verdict import OracleResult

    budget = config.oracle_max or 64
    normalized = normalize(_load_gvas(config.inputs[0]))
    if config.start is not None and config.start not in normalized.nonterminals:
        raise GrammarError(f"unknown or non-productive nonterminal {config.start!r}")
    table = reach_table(
        normalized,
        budget,
        start=config.start,
        c_init=config.input_value,
    )
    result = OracleResult(
        closed=not table.capped, values=tuple(sorted(table.reach_set)), capped_at=budget
    )
    text = (
        f"{'closed' if result.closed else f'capped at {budget}'}: "
        f"{' '.join(map(str, result.values)) or '(empty)'}"
    )
    _emit(config, result.to_json(), text)
    return EXIT_OK if result.closed else EXIT_INCONCLUSIVE


def _cmd_decide(config: RunConfig) -> int:
    from pvas_bound.adapters.json_codec import to_dot
    from pvas_bound.core.decide import DecideOptions, decide
    from pvas_bound.models.verdict import VerdictKind

    defaults = DecideOptions()
    options = DecideOptions(
        cap_schedule=(config.cap,) if config.cap else defaults.cap_schedule,
        oracle_schedule=(config.oracle_max,) if config.oracle_max else defaults.oracle_schedule,
        complete=config.complete,
        pruning=config.pruning,
        check_prefix_closed=config.check_prefix_closed,
    )
    verdict = decide(_load_gvas(config.inputs[0]), options)
    lines = [verdict.kind.value]
    if verdict.proof is not None:
        lines[0] += f" ({verdict.proof.value})"
    if verdict.reach_set is not None:
        lines.append("reachability set: " + " ".join(map(str, verdict.reach_set)))
    if verdict.certificate is not None:
        cert = verdict.certificate
        lines.append(f"certificate at cap {verdict.cap}: s={list(cert.s)} t={list(cert.t)}")
        if config.dot:
            lines.append(to_dot(cert.flow, (cert.s, cert.t)))
    if verdict.kind is VerdictKind.INCONCLUSIVE:
        lines.append(f"budgets spent: {verdict.budgets}")
    lines.extend(f"warning: {w}" for w in verdict.warnings)
    _emit(config, verdict.to_json(), "\n".join(lines))
    return EXIT_OK if verdict.is_definitive else EXIT_INCONCLUSIVE


def _cmd_verify(config: RunConfig) -> int:
    from pvas_bound.adapters.json_codec import (
        load_certificate,
        load_flow_tree,
        parse_path,
        to_dot,
    )
    from pvas_bound.core.flowtree import (
        is_good,
        rank_of,
        validate_certificate,
        validate_flow_tree,
    )

    gvas = _load_gvas(config.inputs[0])
    document: dict[str, Any]
    if config.certificate is not None:
        cert = load_certificate(
            _read(config.certificate),
            parse_path(config.s) if config.s is not None else None,
            parse_path(config.t) if config.t is not None else None,
        )
        flow, marked = cert.flow, (cert.s, cert.t)
        violations = validate_certificate(gvas, cert)
        document = {"kind": "certificate"}
    elif config.flow_tree is not None:
        flow, marked = load_flow_tree(_read(config.flow_tree)), ()
        violations = validate_flow_tree(gvas, flow)
        document = {"kind": "flow-tree", "good": is_good(flow)}
    else:
        raise FormatError("verify needs --flow-tree FILE or --certificate FILE")
    try:
        rank: list[int] | None = list(rank_of(flow))
    except AnnotationError:
        rank = None
    document |= {
        "valid": not violations,
        "violations": [str(v) for v in violations],
        "rank": rank,
    }
    lines = ["valid" if not violations else f"{len(violations)} violation(s)"]
    lines.extend(f"  {v}" for v in violations)
    if "good" in document:
        lines.append(f"good: {str(document['good']).lower()}")
    if config.dot:
        lines.append(to_dot(flow, marked))
    _emit(config, document, "\n".join(lines))
    return EXIT_OK if not violations else EXIT_NEGATIVE


def _cmd_rank(config: RunConfig) -> int:
    from pvas_bound.adapters.json_codec import load_flow_tree
    from pvas_bound.core.flowtree import is_good, rank_of

    flow = load_flow_tree(_read(config.inputs[0]))
    rank = rank_of(flow)
    _emit(
        config,
        {"rank": list(rank), "good": is_good(flow)},
        f"rank ({rank.first}, {rank.second}), good: {str(is_good(flow)).lower()}",
    )
    return EXIT_OK


def _cmd_fixture(config: RunConfig) -> int:
    from pvas_bound.fixtures import FIXTURES, fixture_text

    assert config.name is not None
    if config.name not in FIXTURES:
        raise FormatError(f"unknown fixture {config.name!r}; known: {', '.join(FIXTURES)}")
    text = fixture_text(config.name)
    _emit(config, {"name": config.name, "text": text}, text)
    return EXIT_OK


def _cmd_schema(config: RunConfig) -> int:
    from pvas_bound.schemas import SCHEMAS, schema_text

    assert config.name is not None
    if config.name not in SCHEMAS:
        raise FormatError(f"unknown schema {config.name!r}; known: {', '.join(SCHEMAS)}")
    text = schema_text(config.name)
    print(text.rstrip("\n"))
    return EXIT_OK


def _cmd_gen(config: RunConfig) -> int:
    from pvas_bound.adapters.generators import random_gvas, random_normalized, random_pvas
    from pvas_bound.adapters.text_format import format_gvas, format_pvas

    if config.kind == "pvas":
        text = format_pvas(random_pvas(config.seed, states=config.size))
    elif config.kind == "normalized":
        text = format_gvas(random_normalized(config.seed, size=config.size))
    else:
        text = format_gvas(random_gvas(config.seed, size=config.size))
    _emit(config, {"kind": config.kind, "seed": config.seed, "text": text}, text)
    return EXIT_OK


_COMMANDS = {
    "normalize": _cmd_normalize,
    "displacement": _cmd_displacement,
    "pump": _cmd_pump,
    "witness": _cmd_witness,
    "reduce": _cmd_reduce,
    "simulate": _cmd_simulate,
    "oracle": _cmd_oracle,
    "decide": _cmd_decide,
    "verify": _cmd_verify,
    "rank": _cmd_rank,
    "fixture": _cmd_fixture,
    "schema": _cmd_schema,
    "gen": _cmd_gen,
}


def run(config: RunConfig) -> int:
    """Dispatch one invocation; input problems become exit code 3."""
    source = config.inputs[0] if config.inputs else "<args>"
    try:
        return _COMMANDS[config.command](config)
    except (PvasBoundError, ValidationError, OSError) as exc:
        logger.debug("%s failed", config.command, exc_info=True)
        if isinstance(exc, FormatError) and exc.line:
            message = f"{source}:{exc}"
        elif isinstance(exc, ValidationError):
            message = f"{source}: invalid document: {exc.errors()[0]['msg']}"
        elif isinstance(exc, OSError):
            message = f"error: {exc}"
        else:
            message = f"{source}: {exc}"
        print(message, file=sys.stderr)
    return EXIT_INPUT


def _input(parser: argparse.ArgumentParser, help_text: str = "GVAS text file, - for stdin") -> None:
    parser.add_argument("input", help=help_text)


def _json(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="Emit one JSON document")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pvas-bound",
        description="Counter-boundedness of one-dimensional pushdown VAS",
    )
    parser.add_argument("--version", action="store_true", help="Show version")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="Log progress (-vv for debug)"
    )
    subparsers = parser.add_subparsers(dest="command")

    sub = subparsers.add_parser("normalize", help="Rewrite a GVAS into weak CNF")
    _input(sub)
    _json(sub)

    sub = subparsers.add_parser("displacement", help="Print the displacement table")
    _input(sub)
    _json(sub)

    sub = subparsers.add_parser("pump", help="Find a positive pump for the start symbol")
    _input(sub)
    _json(sub)

    sub = subparsers.add_parser("witness", help="Small trees realizing summed displacements")
    _input(sub)
    sub.add_argument("--starts", default="", help="Comma-separated nonterminals")
    _json(sub)

    sub = subparsers.add_parser("reduce", help="Reduce a 1-dim PVAS to a GVAS")
    _input(sub, "PVAS text file, - for stdin")
    _json(sub)

    sub = subparsers.add_parser("simulate", help="Breadth-first PVAS exploration")
    _input(sub, "PVAS text file, - for stdin")
    sub.add_argument("--max-counter", type=int, default=64, help="Counter budget")
    sub.add_argument("--max-stack", type=int, default=16, help="Stack height budget")
    sub.add_argument("--max-configs", type=int, default=100_000, help="Configuration budget")
    _json(sub)

    sub = subparsers.add_parser("oracle", help="Exact reachability under a value budget")
    _input(sub)
    sub.add_argument("--max", dest="oracle_max", type=int, default=64, help="Value budget N")
    sub.add_argument("--start", default=None, help="Nonterminal to start from")
    sub.add_argument("--input", dest="input_value", type=int, default=None, help="Input value")
    _json(sub)

    sub = subparsers.add_parser("decide", help="Decide counter-boundedness")
    _input(sub)
    sub.add_argument("--cap", type=int, default=None, help="Certificate value cap")
    sub.add_argument("--oracle-max", type=int, default=None, help="Oracle value budget")
    sub.add_argument(
        "--complete", action="store_true", help="Escalate the cap up to the theoretical cap"
    )
    sub.add_argument("--no-pruning", action="store_true", help="Disable search pruning")
    sub.add_argument(
        "--check-prefix-closed",
        type=int,
        default=0,
        metavar="L",
        help="Sample words up to length L for prefix closure",
    )
    sub.add_argument("--dot", action="store_true", help="Render the certificate as Graphviz")
    _json(sub)

    sub = subparsers.add_parser("verify", help="Check a flow tree or certificate")
    _input(sub)
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--flow-tree", default=None, help="Flow tree JSON file")
    group.add_argument("--certificate", default=None, help="Certificate JSON file")
    sub.add_argument("--s", default=None, help="Path of s, e.g. 0.1")
    sub.add_argument("--t", default=None, help="Path of t, e.g. 0.1.1")
    sub.add_argument("--dot", action="store_true", help="Render the tree as Graphviz")
    _json(sub)

    sub = subparsers.add_parser("rank", help="Rank and goodness of a flow tree")
    _input(sub, "Flow tree JSON file, - for stdin")
    _json(sub)

    sub = subparsers.add_parser("fixture", help="Print a shipped fixture")
    sub.add_argument("name", help="Fixture file name, e.g. g1.gvas")

    sub = subparsers.add_parser("schema", help="Print the JSON Schema of a document")
    sub.add_argument("name", help="Command name, flow-tree or certificate")

    sub = subparsers.add_parser("gen", help="Print a seeded random instance")
    sub.add_argument("kind", choices=["gvas", "normalized", "pvas"])
    sub.add_argument("--seed", type=int, default=0, help="Random seed")
    sub.add_argument("--size", type=int, default=3, help="Nonterminals or states")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    values = vars(args)
    fields: dict[str, Any] = {
        key: values[key] for key in RunConfig.model_fields if values.get(key) is not None
    }
    fields["command"] = args.command
    fields["inputs"] = [args.input] if "input" in values else []
    fields["output"] = "json" if values.get("json") else "text"
    fields["pruning"] = not values.get("no_pruning", False)
    if "starts" in values:
        fields["starts"] = [s for s in args.starts.split(",") if s]
    return RunConfig.model_validate(fields)


def main(argv: list[str] | None = None) -> int:
    """Entry point for the pvas-bound CLI."""
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.version:
        from pvas_bound import __version__

        print(f"pvas-bound {__version__}")
        return EXIT_OK

    if args.command is None:
        parser.print_help()
        return EXIT_OK

    logging.basicConfig(
        stream=sys.stderr,
        level=(
            logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING
        ),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = _config(args)
    except ValidationError as exc:
        print(f"error: {exc.errors()[0]['loc'][0]}: {exc.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_INPUT
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
