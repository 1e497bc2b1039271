from core.codegen import load_config, compile
from core.enums import Quantifier
from core.tsv_ingest import read_tsv
from dataclasses import replace
from pathlib import Path
import pytest

FIXTURES = Path(__file__).parent.joinpath('fixtures')


@pytest.fixture(scope='session')
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture(scope='session')
def config():
    return replace(load_config(), subject_default=Quantifier.SOME, requirement_default=Quantifier.ONLY)


@pytest.fixture(scope='session')
def only_config(config):
    return replace(config, subject_default=Quantifier.ONLY)


@pytest.fixture
def example1_doc():
    return read_tsv(str(FIXTURES.joinpath('example1.tsv')))


@pytest.fixture
def example2_doc():
    return read_tsv(str(FIXTURES.joinpath('example2.tsv')))


@pytest.fixture(scope='session')
def example1(config):
    return compile(read_tsv(str(FIXTURES.joinpath('example1.tsv'))), config)


@pytest.fixture(scope='session')
def example1_only(only_config):
    return compile(read_tsv(str(FIXTURES.joinpath('example1.tsv'))), only_config)


@pytest.fixture(scope='session')
def example2(config):
    return compile(read_tsv(str(FIXTURES.joinpath('example2.tsv'))), config)


@pytest.fixture(scope='session')
def listings_text() -> str:
    return FIXTURES.joinpath('listings_abox.omn').read_text(encoding='utf-8')
