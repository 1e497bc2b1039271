from core.enums import EntityKind
from core.owl_model import Ontology

BASE = 'https://example.org/regulation#'
IFC = 'https://example.org/ifc#'

SUBJECT_1 = 'If the degree of fire resistance of a building is III the beams in it'
REQUIREMENT_1 = 'the fire resistance limit should be R15'
SUBJECT_2 = 'For buildings with a capacity of not more than 300 students classrooms'
REQUIREMENT_2 = 'height must be at least 3.0 m'


def iri_of(onto: Ontology, label: str, kind: EntityKind = None) -> str:
    found = [e.iri for e in onto.entities if e.label == label and (kind is None or e.kind == kind)]
    assert len(found) == 1, label + ' -> ' + str(found)
    return found[0]


def individual(name: str) -> str:
    return BASE + name
