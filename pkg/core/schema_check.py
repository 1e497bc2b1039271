from core import schema_log
from core.enums import SemanticType as T, SemanticRole, Severity, DiagnosticCode, Facet, PREDICATE_TYPES, \
    QUANTIFIER_TYPES
from core.exceptions import UnmappedConstrPhraseException
from core.owl_model import infer_datatype, Datatype
from core.preprocess import TermRow, TypeRow, RoleRow, LayerTables
from core.vocab import ConstrMap, constr_lookup
from dataclasses import dataclass
from typing import Dict, List, Sequence

# Allowed (start tags -> end tags) per arrow, one entry per row of the arrow decision table
DOMAIN_RULES = {
    T.Relation: (T.Class, T.Relation),
    T.Property: (T.Class, T.Relation),
}
RANGE_RULES = {
    T.Relation: (T.Class, T.Relation, T.Property),
    T.Property: (T.Literal,),
}
OF_RULES = {
    T.Not: (T.Class, T.Relation, T.Property),
    T.Or: (T.Class, T.Relation, T.Property),
    T.Comparison: (T.Literal,),
    T.Some: (T.Relation, T.Property),
    T.Only: (T.Relation, T.Property),
    T.Number: (T.Relation, T.Property),
}
NEEDS_OF = (T.Not, T.Comparison, T.Some, T.Only, T.Number)

LOWER = (Facet.MinInclusive, Facet.MinExclusive)
UPPER = (Facet.MaxInclusive, Facet.MaxExclusive)


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: DiagnosticCode
    unit_id: int
    message: str


def _error(code: DiagnosticCode, unit_id: int, message: str) -> Diagnostic:
    return Diagnostic(Severity.Error, code, unit_id, message)


def _warning(code: DiagnosticCode, unit_id: int, message: str) -> Diagnostic:
    return Diagnostic(Severity.Warning, code, unit_id, message)


def _describe(row: TypeRow) -> str:
    return row.type_tag.value + ' "' + row.surface + '"'


def _check_arrow(row: TypeRow, ref: int, rules: Dict, by_id: Dict[int, TypeRow], arrow: str,
                 start_code: DiagnosticCode, end_code: DiagnosticCode) -> List[Diagnostic]:
    if row.type_tag not in rules:
        return [_error(start_code, row.unit_id, arrow + ' arrow cannot start at ' + _describe(row))]
    target = by_id.get(ref)
    if target is None:
        return [_error(end_code, row.unit_id, arrow + ' arrow of ' + _describe(row) +
                       ' does not end at a Semantic Type unit')]
    if target.type_tag not in rules[row.type_tag]:
        return [_error(end_code, row.unit_id, arrow + ' arrow from ' + _describe(row) + ' cannot end at ' +
                       _describe(target))]
    return []


def _check_types(types: Sequence[TypeRow], roles: Sequence[RoleRow], constr: ConstrMap = None) -> List[Diagnostic]:
    by_id = {row.unit_id: row for row in types}
    diagnostics = []
    quantifiers = {}
    comparisons = {}

    for row in types:
        if row.domain_ref is not None:
            diagnostics += _check_arrow(row, row.domain_ref, DOMAIN_RULES, by_id, 'Domain',
                                        DiagnosticCode.BAD_DOMAIN_START, DiagnosticCode.BAD_DOMAIN_END)
        if row.range_ref is not None:
            diagnostics += _check_arrow(row, row.range_ref, RANGE_RULES, by_id, 'Range',
                                        DiagnosticCode.BAD_RANGE_START, DiagnosticCode.BAD_RANGE_END)
        for ref in row.of_refs:
            found = _check_arrow(row, ref, OF_RULES, by_id, 'Of', DiagnosticCode.BAD_OF_START,
                                 DiagnosticCode.BAD_OF_END)
            diagnostics += found
            if found:
                continue
            if row.type_tag in QUANTIFIER_TYPES:
                quantifiers.setdefault(ref, []).append(row)
            elif row.type_tag == T.Comparison:
                comparisons.setdefault(ref, []).append(row)

        if row.type_tag in PREDICATE_TYPES:
            if row.domain_ref is None:
                diagnostics.append(_error(DiagnosticCode.MISSING_DOMAIN, row.unit_id,
                                          _describe(row) + ' has no Domain arrow'))
            if row.range_ref is None:
                diagnostics.append(_error(DiagnosticCode.MISSING_RANGE, row.unit_id,
                                          _describe(row) + ' has no Range arrow'))
        if row.type_tag in NEEDS_OF and not row.of_refs:
            diagnostics.append(_error(DiagnosticCode.MISSING_OF, row.unit_id, _describe(row) + ' has no Of arrow'))
        if row.type_tag == T.Or and len(row.of_refs) < 2:
            diagnostics.append(_error(DiagnosticCode.OR_ARITY, row.unit_id,
                                      _describe(row) + ' joins ' + str(len(row.of_refs)) + ' operands, needs 2'))

    for row in types:
        if row.type_tag not in PREDICATE_TYPES:
            continue
        found = quantifiers.get(row.unit_id, [])
        if not found and not any(set(row.tokens) <= set(role.tokens) for role in roles):
            diagnostics.append(_warning(DiagnosticCode.MISSING_QUANTIFIER, row.unit_id,
                                        _describe(row) + ' has no Some/Only/Number and lies outside every role'))
        elif len(found) > 1:
            diagnostics.append(_error(DiagnosticCode.CONFLICTING_QUANTIFIER, row.unit_id,
                                      _describe(row) + ' is quantified by ' +
                                      ', '.join(_describe(q) for q in found)))

    for ref, found in comparisons.items():
        diagnostics += _check_interval(by_id[ref], found, constr)
    return diagnostics


# Up to two Comparisons may share a Literal when one is a lower and the other an upper bound
def _check_interval(literal: TypeRow, found: List[TypeRow], constr: ConstrMap) -> List[Diagnostic]:
    if len(found) > 2:
        return [_error(DiagnosticCode.BAD_INTERVAL, literal.unit_id,
                       _describe(literal) + ' carries ' + str(len(found)) + ' Comparisons')]
    if constr is None:
        return []

    facets = []
    for comparison in found:
        try:
            facets.append(constr_lookup(constr, comparison.surface))
        except UnmappedConstrPhraseException as e:
            schema_log.debug('Skipping interval check: %s', str(e))
            return []

    numeric = infer_datatype(literal.surface) != Datatype.string
    if any(f != Facet.Exact for f in facets) and not numeric:
        return [_error(DiagnosticCode.BAD_INTERVAL, literal.unit_id,
                       'Comparison bound ' + _describe(literal) + ' is not a number')]
    if len(facets) == 2 and not ((facets[0] in LOWER and facets[1] in UPPER) or
                                 (facets[0] in UPPER and facets[1] in LOWER)):
        return [_error(DiagnosticCode.BAD_INTERVAL, literal.unit_id,
                       _describe(literal) + ' needs one lower and one upper bound, found ' +
                       ' and '.join(f.value for f in facets))]
    return []


def _check_roles(roles: Sequence[RoleRow]) -> List[Diagnostic]:
    by_id = {row.unit_id: row for row in roles}
    diagnostics = []
    if not any(row.role_tag == SemanticRole.Subject for row in roles):
        diagnostics.append(_error(DiagnosticCode.MISSING_SUBJECT, 0, 'No Subject role is annotated'))
    if not any(row.role_tag == SemanticRole.Requirement for row in roles):
        diagnostics.append(_error(DiagnosticCode.MISSING_REQUIREMENT, 0, 'No Requirement role is annotated'))

    for row in roles:
        if row.to_ref is None:
            if row.role_tag == SemanticRole.Subject:
                diagnostics.append(_warning(DiagnosticCode.UNLINKED_SUBJECT, row.unit_id,
                                            'Subject "' + row.surface + '" has no To arrow'))
            continue
        target = by_id.get(row.to_ref)
        if row.role_tag != SemanticRole.Subject or target is None or \
                target.role_tag != SemanticRole.Requirement:
            diagnostics.append(_error(DiagnosticCode.BAD_TO, row.unit_id,
                                      'To arrow must go from a Subject to a Requirement, starts at ' +
                                      row.role_tag.value + ' "' + row.surface + '"'))
    return diagnostics


def _check_terms(terms: Sequence[TermRow]) -> List[Diagnostic]:
    return [_warning(DiagnosticCode.UNRESOLVED_TERM, row.unit_id,
                     'Term ' + row.term_label + ' is not in the term vocabulary')
            for row in terms if not row.term_iri]


def validate(terms: Sequence[TermRow], types: Sequence[TypeRow], roles: Sequence[RoleRow],
             constr: ConstrMap = None) -> List[Diagnostic]:
    diagnostics = _check_terms(terms) + _check_types(types, roles, constr) + _check_roles(roles)
    diagnostics.sort(key=lambda d: (d.unit_id, d.code.value))
    errors = sum(1 for d in diagnostics if d.severity == Severity.Error)
    schema_log.info('Validation found %d errors and %d warnings', errors, len(diagnostics) - errors)
    return diagnostics


def validate_tables(tables: LayerTables, constr: ConstrMap = None) -> List[Diagnostic]:
    return validate(tables.terms, tables.types, tables.roles, constr)


def has_errors(diagnostics: Sequence[Diagnostic]) -> bool:
    return any(d.severity == Severity.Error for d in diagnostics)


def format_diagnostic(d: Diagnostic) -> str:
    return d.severity.value + ' ' + d.code.name + ' unit=' + str(d.unit_id) + ' ' + d.message


def format_diagnostics(diagnostics: Sequence[Diagnostic]) -> str:
    return ''.join(format_diagnostic(d) + '\n' for d in diagnostics)
