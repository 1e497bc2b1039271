from core import cli_log
from core.codegen import CompilerConfig, load_config
from core.enums import Quantifier
import argparse
import sys

# Exit codes
OK = 0
FAILED = 1
ERROR = 2


def add_vocabulary_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--terms', help='Term vocabulary file (LABEL<TAB>IRI[<TAB>KIND])')
    parser.add_argument('--card-map', help='Card map file (phrase<TAB>integer)')
    parser.add_argument('--constr-map', help='Constr map file (phrase<TAB>facet)')


def add_compiler_arguments(parser: argparse.ArgumentParser):
    add_vocabulary_arguments(parser)
    parser.add_argument('--base-iri', help='Namespace of the generated entities')
    parser.add_argument('--subject-default', choices=[q.value for q in Quantifier],
                        help='Quantifier of unquantified predicates inside the Subject')
    parser.add_argument('--requirement-default', choices=[q.value for q in Quantifier],
                        help='Quantifier of unquantified predicates inside the Requirement')


def config_from_args(args: argparse.Namespace) -> CompilerConfig:
    return load_config(base_iri=getattr(args, 'base_iri', None),
                       subject_default=getattr(args, 'subject_default', None),
                       requirement_default=getattr(args, 'requirement_default', None),
                       card_map=args.card_map, constr_map=args.constr_map, terms=args.terms)


def fail(error: Exception) -> int:
    cli_log.error('%s: %s', type(error).__name__, str(error))
    print('error: ' + type(error).__name__.replace('Exception', '') + ': ' + str(error), file=sys.stderr)
    return ERROR
