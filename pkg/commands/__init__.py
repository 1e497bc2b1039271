from . import validate, compile, check, tables
import argparse

commands = [validate, compile, check, tables]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='reg2owl',
        description='Compile annotated regulations to OWL DL and check individuals against them.'
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    for command in commands:
        sub = subparsers.add_parser(command.name, help=command.__doc__.split('\n')[0],
                                    description=command.__doc__)
        command.add_arguments(sub)
        sub.set_defaults(run=command.run)
    return parser
