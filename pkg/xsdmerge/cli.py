"""
Command-line front end.

    python -m xsdmerge.cli match S1.xsd S2.xsd --severity 0 --thesaurus thesaurus.tsv --dictionaries
    python -m xsdmerge.cli integrate S1.xsd S2.xsd --out global.xsd --audit audit.json
    python -m xsdmerge.cli neighborhood S1.xsd customer -j 1
    python -m xsdmerge.cli eval properties.json gold.json
    python -m xsdmerge.cli sweep S1.xsd S2.xsd --gold gold.json --max-level 3

Exit codes: 0 success, 1 I/O, parse or configuration error, 2 invalid severity or empty gold.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from xsdmerge.configuration import Configuration
from xsdmerge.core.errors import EmptyGoldStandard, SeverityOutOfRange, XsdMergeError
from xsdmerge.core.instance_reader import resolve_idrefs
from xsdmerge.core.pipeline import MatchInputs, load_inputs, run_integration, run_match
from xsdmerge.core.schema_model import Typology, parse_schema
from xsdmerge.core.thesaurus import Thesaurus, load_thesaurus
from xsdmerge.core.xs_graph import build_xs_graph, neighborhood, sorted_by_name
from xsdmerge.services.evaluation import evaluate, format_sweep, load_property_file, severity_sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID_LEVEL = 2


def _add_pair_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("schema1", help="first referenced-style schema (.xsd)")
    parser.add_argument("schema2", help="second referenced-style schema (.xsd)")
    parser.add_argument("--severity", "-u", type=int, default=None, help="severity level (default: config)")
    parser.add_argument("--thesaurus", default=None, help="TSV thesaurus (default: $XSDMERGE_THESAURUS)")
    parser.add_argument("--instances1", nargs="*", default=[], help="XML instances of schema1")
    parser.add_argument("--instances2", nargs="*", default=[], help="XML instances of schema2")
    parser.add_argument("--out", default=None, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xsdmerge", description="Match and integrate XML Schemas")
    parser.add_argument("--log-level", default=None, help="logging level (default: $XSDMERGE_LOG_LEVEL)")
    commands = parser.add_subparsers(dest="command", required=True)

    match = commands.add_parser("match", help="extract synonymies and homonymies")
    _add_pair_arguments(match)
    match.add_argument("--dictionaries", action="store_true", help="also emit the Merge/Rename Dictionaries")

    integrate = commands.add_parser("integrate", help="build the global schema")
    _add_pair_arguments(integrate)
    integrate.add_argument("--root-name", default=None, help="name of a synthetic root (default: root)")
    integrate.add_argument("--audit", default=None, help="write the component mapping as JSON here")

    hood = commands.add_parser("neighborhood", help="print the level-j neighborhood of a component")
    hood.add_argument("schema")
    hood.add_argument("component")
    hood.add_argument("-j", "--level", type=int, default=0)
    hood.add_argument("--typology", choices=[t.value for t in Typology], default=None)
    hood.add_argument("--instances", nargs="*", default=[])

    evaluation = commands.add_parser("eval", help="correctness and completeness against a gold standard")
    evaluation.add_argument("properties", help="match output JSON")
    evaluation.add_argument("gold", help="gold standard JSON")

    sweep = commands.add_parser("sweep", help="evaluate every severity level against a gold standard")
    sweep.add_argument("schema1")
    sweep.add_argument("schema2")
    sweep.add_argument("--gold", required=True)
    sweep.add_argument("--max-level", type=int, default=None)
    sweep.add_argument("--thesaurus", default=None)
    sweep.add_argument("--instances1", nargs="*", default=[])
    sweep.add_argument("--instances2", nargs="*", default=[])
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).write_text(text, encoding="utf-8")
    logger.info(f"Wrote {out}")


def _dump(document) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def _thesaurus(config: Configuration) -> Thesaurus:
    return load_thesaurus(config.thesaurus) if config.thesaurus else Thesaurus()


def _severity(args, config: Configuration) -> int:
    chosen = getattr(args, "severity", None)
    return config.severity if chosen is None else chosen


def _inputs(args, config: Configuration) -> MatchInputs:
    return load_inputs(
        Path(args.schema1).read_bytes(),
        Path(args.schema2).read_bytes(),
        thesaurus=_thesaurus(config),
        instances1=[Path(p).read_bytes() for p in args.instances1],
        instances2=[Path(p).read_bytes() for p in args.instances2],
        max_workers=config.max_workers,
    )


def cmd_match(args, config: Configuration) -> int:
    inputs = _inputs(args, config)
    result = run_match(inputs, _severity(args, config), with_dictionaries=args.dictionaries)
    _emit(_dump(result.to_document()), args.out)
    return EXIT_OK


def cmd_integrate(args, config: Configuration) -> int:
    inputs = _inputs(args, config)
    result = run_integration(
        inputs,
        _severity(args, config),
        root_name=config.root_name,
        rename_suffix_start=config.rename_suffix_start,
    )
    _emit(result.schema_text(), args.out)
    if args.audit:
        Path(args.audit).write_text(_dump(result.integration.audit_document()), encoding="utf-8")
        logger.info(f"Wrote audit mapping to {args.audit}")
    return EXIT_OK


def cmd_neighborhood(args, config: Configuration) -> int:
    if args.level < 0:
        print(f"error: neighborhood level must be non-negative, got {args.level}", file=sys.stderr)
        return EXIT_INVALID_LEVEL
    model = parse_schema(Path(args.schema).read_bytes(), Path(args.schema).stem)
    refmap = resolve_idrefs(model, [Path(p).read_bytes() for p in args.instances], config.max_workers)
    graph = build_xs_graph(model, refmap)
    x = model.find(args.component, Typology(args.typology) if args.typology else None)
    for member in sorted_by_name(neighborhood(graph, x, args.level)):
        print(member)
    return EXIT_OK


def cmd_eval(args, config: Configuration) -> int:
    report = evaluate(load_property_file(args.properties), load_property_file(args.gold))
    print(report.format())
    return EXIT_OK


def cmd_sweep(args, config: Configuration) -> int:
    gold = load_property_file(args.gold)
    frame = severity_sweep(_inputs(args, config), gold, max_level=args.max_level)
    for line in format_sweep(frame):
        print(line)
    return EXIT_OK


COMMANDS = {
    "match": cmd_match,
    "integrate": cmd_integrate,
    "neighborhood": cmd_neighborhood,
    "eval": cmd_eval,
    "sweep": cmd_sweep,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = Configuration.from_environment(
            thesaurus=getattr(args, "thesaurus", None),
            root_name=getattr(args, "root_name", None),
            log_level=args.log_level,
        )
    except ValidationError as e:
        print(f"error: invalid configuration: {e}", file=sys.stderr)
        return EXIT_FAILURE
    config.configure_logging()

    try:
        return COMMANDS[args.command](args, config)
    except (SeverityOutOfRange, EmptyGoldStandard) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID_LEVEL
    except (XsdMergeError, OSError) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
