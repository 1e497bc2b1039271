"""Compile a TSV export (or a directory of them) into Manchester syntax."""
from commands.options import OK, FAILED, ERROR, add_compiler_arguments, config_from_args, fail
from core import cli_log
from core.codegen import compile as compile_document, compile_directory
from core.exceptions import PIPELINE_EXCEPTIONS
from core.preprocess import preprocess
from core.schema_check import validate_tables, has_errors, format_diagnostics
from core.serializer import to_manchester
from core.tsv_ingest import read_tsv
from pathlib import Path
import argparse
import sys

name = 'compile'


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('input', help='WebAnno TSV 3.3 export, or a directory of exports')
    parser.add_argument('-o', '--output', help='Output .omn file, or output directory in batch mode')
    parser.add_argument('--workers', type=int, default=4, help='Files compiled at once in batch mode')
    add_compiler_arguments(parser)


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding='utf-8')


def _compile_one(args: argparse.Namespace) -> int:
    source = Path(args.input)
    target = Path(args.output) if args.output else source.with_suffix('.omn')

    # Refuse to compile a document that breaks the annotation schema
    try:
        config = config_from_args(args)
        doc = read_tsv(str(source))
        diagnostics = validate_tables(preprocess(doc, config.terms), config.constr)
    except PIPELINE_EXCEPTIONS + (OSError,) as e:
        return fail(e)
    if has_errors(diagnostics):
        print(format_diagnostics(diagnostics), end='', file=sys.stderr)
        cli_log.error('%s breaks the annotation schema, nothing written', source)
        return FAILED

    # Serialize fully before touching the output file
    try:
        text = to_manchester(compile_document(doc, config))
        _write(target, text)
    except PIPELINE_EXCEPTIONS + (OSError,) as e:
        return fail(e)
    cli_log.info('Wrote %s', target)
    print(str(target))
    return OK


def _compile_batch(args: argparse.Namespace) -> int:
    source = Path(args.input)
    out_dir = Path(args.output) if args.output else source
    try:
        config = config_from_args(args)
    except PIPELINE_EXCEPTIONS + (OSError,) as e:
        return fail(e)

    status = OK
    for path, result in compile_directory(str(source), config, args.workers).items():
        if isinstance(result, Exception):
            print('error: ' + path + ': ' + str(result), file=sys.stderr)
            status = ERROR
            continue
        diagnostics = validate_tables(preprocess(read_tsv(path), config.terms), config.constr)
        if has_errors(diagnostics):
            print(''.join(path + ': ' + line + '\n' for line in format_diagnostics(diagnostics).splitlines()),
                  end='', file=sys.stderr)
            status = max(status, FAILED)
            continue
        target = out_dir.joinpath(Path(path).stem + '.omn')
        try:
            _write(target, to_manchester(result))
        except PIPELINE_EXCEPTIONS + (OSError,) as e:
            print('error: ' + path + ': ' + str(e), file=sys.stderr)
            status = ERROR
            continue
        print(str(target))
    return status


def run(args: argparse.Namespace) -> int:
    if Path(args.input).is_dir():
        return _compile_batch(args)
    return _compile_one(args)
