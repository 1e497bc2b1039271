from core.enums import SemanticType as T, SemanticRole, Severity, DiagnosticCode as C
from core.preprocess import TermRow, TypeRow, RoleRow, preprocess
from core.schema_check import validate, validate_tables, has_errors, format_diagnostic, format_diagnostics
import pytest

# Both roles together cover tokens 1..98, so quantifier warnings stay quiet for units below 99
ROLES = [
    RoleRow(100, 'subject', SemanticRole.Subject, 101, tuple((1, i) for i in range(1, 50))),
    RoleRow(101, 'requirement', SemanticRole.Requirement, None, tuple((1, i) for i in range(50, 99))),
]


def row(unit_id, tag, domain=None, range_=None, of=(), surface=None):
    return TypeRow(unit_id, surface or tag.value.lower() + str(unit_id), tag, domain, range_, tuple(of),
                   ((1, unit_id),))


def codes(types, roles=ROLES, constr=None):
    return [d.code for d in validate([], types, roles, constr)]


@pytest.mark.parametrize('types', [
    [row(1, T.Relation, 2, 3), row(2, T.Class), row(3, T.Class)],
    [row(1, T.Relation, 2, 3), row(2, T.Relation, 3, 3), row(3, T.Class)],
    [row(1, T.Relation, 2, 3), row(2, T.Class), row(3, T.Property, 2, 4), row(4, T.Literal)],
    [row(1, T.Property, 2, 3), row(2, T.Relation, 4, 4), row(3, T.Literal), row(4, T.Class)],
    [row(1, T.Not, of=(2,)), row(2, T.Class)],
    [row(1, T.Or, of=(2, 3)), row(2, T.Class), row(3, T.Class)],
    [row(1, T.Property, 4, 2), row(2, T.Literal), row(3, T.Comparison, of=(2,)), row(4, T.Class)],
    [row(1, T.Some, of=(2,)), row(2, T.Relation, 3, 3), row(3, T.Class)],
    [row(1, T.Only, of=(2,)), row(2, T.Property, 3, 4), row(3, T.Class), row(4, T.Literal)],
    [row(1, T.Number, of=(2,)), row(2, T.Relation, 3, 3), row(3, T.Class)],
])
def test_allowed_arrows(types):
    assert codes(types) == []


@pytest.mark.parametrize('types, code', [
    ([row(1, T.Class, domain=2), row(2, T.Class)], C.BAD_DOMAIN_START),
    ([row(1, T.Relation, 2, 3), row(2, T.Literal), row(3, T.Class)], C.BAD_DOMAIN_END),
    ([row(1, T.Relation, 2, 3), row(2, T.Property, 4, 5), row(3, T.Class), row(4, T.Class), row(5, T.Literal)],
     C.BAD_DOMAIN_END),
    ([row(1, T.Property, 2, 3), row(2, T.Literal), row(3, T.Literal)], C.BAD_DOMAIN_END),
    ([row(1, T.Property, 2, 3), row(2, T.Property, 4, 3), row(3, T.Literal), row(4, T.Class)], C.BAD_DOMAIN_END),
    ([row(1, T.Class, range_=2), row(2, T.Class)], C.BAD_RANGE_START),
    ([row(1, T.Relation, 2, 3), row(2, T.Class), row(3, T.Literal)], C.BAD_RANGE_END),
    ([row(1, T.Property, 2, 3), row(2, T.Class), row(3, T.Class)], C.BAD_RANGE_END),
    ([row(1, T.Relation, 2, 99), row(2, T.Class)], C.BAD_RANGE_END),
    ([row(1, T.Class, of=(2,)), row(2, T.Class)], C.BAD_OF_START),
    ([row(1, T.Not, of=(2,)), row(2, T.Literal)], C.BAD_OF_END),
    ([row(1, T.Or, of=(2, 3)), row(2, T.Class), row(3, T.Literal)], C.BAD_OF_END),
    ([row(1, T.Comparison, of=(2,)), row(2, T.Class)], C.BAD_OF_END),
    ([row(1, T.Some, of=(2,)), row(2, T.Class)], C.BAD_OF_END),
    ([row(1, T.Only, of=(2,)), row(2, T.Class)], C.BAD_OF_END),
    ([row(1, T.Number, of=(2,)), row(2, T.Class)], C.BAD_OF_END),
    ([row(1, T.Some, of=(2,)), row(2, T.Literal)], C.BAD_OF_END),
    ([row(1, T.Not)], C.MISSING_OF),
    ([row(1, T.Relation, range_=2), row(2, T.Class)], C.MISSING_DOMAIN),
    ([row(1, T.Relation, domain=2), row(2, T.Class)], C.MISSING_RANGE),
    ([row(1, T.Or, of=(2,)), row(2, T.Class)], C.OR_ARITY),
    ([row(1, T.Some, of=(3,)), row(2, T.Only, of=(3,)), row(3, T.Relation, 4, 4), row(4, T.Class)],
     C.CONFLICTING_QUANTIFIER),
    ([row(1, T.Comparison, of=(4,)), row(2, T.Comparison, of=(4,)), row(3, T.Comparison, of=(4,)),
      row(4, T.Literal)], C.BAD_INTERVAL),
])
def test_rejected_arrows(types, code):
    diagnostics = validate([], types, ROLES)
    assert [d.code for d in diagnostics] == [code]
    assert has_errors(diagnostics)


def test_no_roles():
    assert codes([], roles=[]) == [C.MISSING_SUBJECT, C.MISSING_REQUIREMENT]


def test_subject_without_to_is_a_warning():
    roles = [RoleRow(1, 'beams', SemanticRole.Subject), RoleRow(2, 'limit', SemanticRole.Requirement)]
    diagnostics = validate([], [], roles)
    assert [(d.severity, d.code, d.unit_id) for d in diagnostics] == [(Severity.Warning, C.UNLINKED_SUBJECT, 1)]
    assert not has_errors(diagnostics)


def test_to_from_a_requirement():
    roles = [RoleRow(1, 'beams', SemanticRole.Subject, 2), RoleRow(2, 'limit', SemanticRole.Requirement, 1)]
    diagnostics = validate([], [], roles)
    assert [(d.code, d.unit_id) for d in diagnostics] == [(C.BAD_TO, 2)]
    assert format_diagnostic(diagnostics[0]).startswith('ERROR BAD_TO unit=2 ')


def test_to_between_subjects():
    roles = [RoleRow(1, 'beams', SemanticRole.Subject, 2), RoleRow(2, 'walls', SemanticRole.Subject, None),
             RoleRow(3, 'limit', SemanticRole.Requirement)]
    assert C.BAD_TO in codes([], roles=roles)


def test_unquantified_predicate_outside_roles():
    diagnostics = validate([], [row(99, T.Relation, 2, 3), row(2, T.Class), row(3, T.Class)], ROLES)
    assert [(d.severity, d.code, d.unit_id) for d in diagnostics] == [(Severity.Warning, C.MISSING_QUANTIFIER, 99)]


def test_unresolved_term():
    diagnostics = validate([TermRow(1, 'walls', 'WALL', '')], [], ROLES)
    assert [(d.severity, d.code) for d in diagnostics] == [(Severity.Warning, C.UNRESOLVED_TERM)]
    assert format_diagnostics(diagnostics).count('\n') == 1


def interval(first, second=None, literal='300'):
    types = [row(1, T.Comparison, of=(3,), surface=first), row(3, T.Literal, surface=literal)]
    if second is not None:
        types.append(row(2, T.Comparison, of=(3,), surface=second))
    return types


@pytest.mark.parametrize('types, expected', [
    (interval('at least', 'at most'), []),
    (interval('not less than', 'less than'), []),
    (interval('at least', 'more than'), [C.BAD_INTERVAL]),
    (interval('at most', 'not more than'), [C.BAD_INTERVAL]),
    (interval('at least', literal='R15'), [C.BAD_INTERVAL]),
    (interval('exactly', literal='R15'), []),
    (interval('roughly', 'at least'), []),
])
def test_interval_bounds(types, expected, config):
    assert codes(types, constr=config.constr) == expected


def test_example1_is_valid(example1_doc, config):
    assert validate_tables(preprocess(example1_doc, config.terms), config.constr) == []


def test_example2_is_valid(example2_doc, config):
    assert validate_tables(preprocess(example2_doc, config.terms), config.constr) == []


def test_example1_without_terms(example1_doc, config):
    diagnostics = validate_tables(preprocess(example1_doc), config.constr)
    assert {d.code for d in diagnostics} == {C.UNRESOLVED_TERM}
    assert len(diagnostics) == 4
    assert not has_errors(diagnostics)
