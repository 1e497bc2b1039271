"""Check an ABox of closed individuals against a compiled regulation."""
from commands.options import OK, FAILED, fail
from core import cli_log, strict_literals, close_individuals
from core.abox_checker import abox_from_ontology, close_abox, check_compliance
from core.exceptions import PIPELINE_EXCEPTIONS
from core.owl_model import merge_ontologies
from core.reports import compliance_json, compliance_text
from core.serializer import parse_manchester_subset
from pathlib import Path
import argparse

name = 'check'


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('ontology', help='Compiled regulation (.omn)')
    parser.add_argument('abox', help='Individuals to check (.omn)')
    parser.add_argument('--close', action='store_true', default=close_individuals,
                        help='Close every individual on every property before checking')
    parser.add_argument('--strict-literals', action='store_true', default=strict_literals,
                        help='Compare strings exactly instead of ignoring whitespace')
    parser.add_argument('--json', action='store_true', help='Print the report as JSON')


def run(args: argparse.Namespace) -> int:
    # Load the regulation, then read the individuals against its labels
    try:
        onto = parse_manchester_subset(Path(args.ontology).read_text(encoding='utf-8'))
        individuals = parse_manchester_subset(Path(args.abox).read_text(encoding='utf-8'), onto)
    except PIPELINE_EXCEPTIONS + (OSError,) as e:
        return fail(e)

    merged = merge_ontologies(onto, individuals)
    abox = abox_from_ontology(merged)
    if args.close:
        abox = close_abox(abox, merged)

    # Classify and look for violated regulations
    try:
        report = check_compliance(merged, abox, args.strict_literals)
    except PIPELINE_EXCEPTIONS as e:
        return fail(e)
    print(compliance_json(report) if args.json else compliance_text(report, merged), end='')
    cli_log.info('Checked %d individuals: %s', len(abox.individuals),
                 'consistent' if report.consistent else 'inconsistent')
    return OK if report.consistent else FAILED
