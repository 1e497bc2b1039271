from configparser import ConfigParser
from pathlib import Path
import logging

# Load the config.ini file
config_path = Path(__file__).parent.resolve().joinpath('config.ini')
parser = ConfigParser()
parser.read(config_path)

# Load logging section from config.ini
log_level = 'WARNING'
if parser.has_section('logging'):
    log_level = parser.get('logging', 'level', fallback='WARNING').upper()

# Configure logging
logging.basicConfig(
    level=getattr(logging, log_level, logging.WARNING),
    format='[%(asctime)s] - %(name)s - %(levelname)s - %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S'
)

# Create loggers
ingest_log = logging.getLogger('tsv-ingest')
preprocess_log = logging.getLogger('preprocess')
schema_log = logging.getLogger('schema-check')
vocab_log = logging.getLogger('vocab')
codegen_log = logging.getLogger('codegen')
serializer_log = logging.getLogger('serializer')
checker_log = logging.getLogger('abox-checker')
cli_log = logging.getLogger('cli')

# Load compiler section from config.ini
if parser.has_section('compiler'):
    base_iri = parser.get('compiler', 'base_iri')
    subject_default = parser.get('compiler', 'subject_default', fallback='some')
    requirement_default = parser.get('compiler', 'requirement_default', fallback='only')
else:
    raise Exception('Section compiler not found in the config.ini file')


def _resolve(path: str) -> str:
    p = Path(path)
    if not p.is_absolute():
        p = config_path.parent.joinpath(p)
    return str(p)


# Load vocabulary section from config.ini
if parser.has_section('vocabulary'):
    terms_path = _resolve(parser.get('vocabulary', 'terms'))
    card_map_path = _resolve(parser.get('vocabulary', 'card_map'))
    constr_map_path = _resolve(parser.get('vocabulary', 'constr_map'))
else:
    raise Exception('Section vocabulary not found in the config.ini file')

# Load checker section from config.ini
strict_literals = False
close_individuals = False
if parser.has_section('checker'):
    strict_literals = parser.getboolean('checker', 'strict_literals', fallback=False)
    close_individuals = parser.getboolean('checker', 'close', fallback=False)
