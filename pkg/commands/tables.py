"""Print the term, type and role tables of a TSV export."""
from commands.options import OK, add_vocabulary_arguments, config_from_args, fail
from core.exceptions import PIPELINE_EXCEPTIONS
from core.preprocess import preprocess
from core.reports import format_tables
from core.tsv_ingest import read_tsv
import argparse

name = 'tables'


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('tsv', help='WebAnno TSV 3.3 export')
    add_vocabulary_arguments(parser)


def run(args: argparse.Namespace) -> int:
    try:
        config = config_from_args(args)
        tables = preprocess(read_tsv(args.tsv), config.terms)
    except PIPELINE_EXCEPTIONS + (OSError,) as e:
        return fail(e)
    print(format_tables(tables), end='')
    return OK
