"""Check the annotation schema of a TSV export."""
from commands.options import OK, FAILED, add_vocabulary_arguments, config_from_args, fail
from core import cli_log
from core.exceptions import PIPELINE_EXCEPTIONS
from core.preprocess import preprocess
from core.reports import diagnostics_json, diagnostics_text
from core.schema_check import validate_tables, has_errors
from core.tsv_ingest import read_tsv
import argparse

name = 'validate'


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('tsv', help='WebAnno TSV 3.3 export')
    add_vocabulary_arguments(parser)
    parser.add_argument('--json', action='store_true', help='Print the diagnostics as JSON')


def run(args: argparse.Namespace) -> int:
    # Load vocabularies and the annotated document
    try:
        config = config_from_args(args)
        tables = preprocess(read_tsv(args.tsv), config.terms)
    except PIPELINE_EXCEPTIONS + (OSError,) as e:
        return fail(e)

    # Check every arrow against the decision table
    diagnostics = validate_tables(tables, config.constr)
    print(diagnostics_json(diagnostics) if args.json else diagnostics_text(diagnostics), end='')
    cli_log.info('Validated %s: %d diagnostics', args.tsv, len(diagnostics))
    return FAILED if has_errors(diagnostics) else OK
