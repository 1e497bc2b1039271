from core.abox_checker import ABox, Individual, Violation, FiniteModel, load_abox, close_abox, close_individual, \
    check_compliance, replay_trace, format_trace, literals_equal, in_data_range, evaluate, stratify
from core.enums import Datatype, Facet, CardinalityMode
from core.exceptions import OpenPropertyException, UnstratifiedDefinitionException
from core.owl_model import Ontology, Literal, Enumeration, FacetRestriction, Named, ComplementOf, IntersectionOf, \
    ObjectOneOf, ObjectOnly, ObjectCardinality, DataOnly, DataCardinality, SubClassOf, EquivalentClasses, \
    ClassAssertion, ObjectFact, DataFact, EquivalentProperties, NOTHING, subexpressions, axiom_expressions
from dataclasses import replace
from hypothesis import given, settings, HealthCheck
import hypothesis.strategies as st
from tests.helpers import BASE, IFC, SUBJECT_1, individual, iri_of
from tests.oracle import Oracle, NotStratified
from tests.strategies import RANDOM_BASE, ontologies, closed_aboxes, expressions, vocabulary_of
import pytest

IN = BASE + 'in'


def string(lexical):
    return Literal(lexical, Datatype.string)


def test_listings_are_consistent(example1, listings_text):
    report = check_compliance(example1, load_abox(listings_text, example1))
    subject = iri_of(example1, SUBJECT_1)
    assert report.consistent
    assert report.classifications == [(individual('beam_in_III'), subject), (individual('beam_in_III_R15'), subject)]


def test_only_subject_also_classifies_vacuous_beams(example1_only, listings_text):
    report = check_compliance(example1_only, load_abox(listings_text, example1_only))
    assert report.consistent
    assert {x for x, _ in report.classifications} == \
        {individual(n) for n in ('beam', 'beam_in', 'beam_in_III', 'beam_in_III_R15')}


def test_wrong_limit_is_a_violation(example1, listings_text):
    abox = load_abox(listings_text.replace('"R 15"', '"R14"'), example1)
    report = check_compliance(example1, abox)
    assert not report.consistent
    assert len(report.violations) == 1

    violation = report.violations[0]
    assert violation.individual == individual('beam_in_III_R15')
    assert isinstance(violation.gci, SubClassOf)
    items = [step.item for step in violation.trace]
    assert items[0] == violation.gci
    assert ClassAssertion(violation.gci.sub, violation.individual) in items
    definition = [a for a in example1.axioms if isinstance(a, EquivalentClasses) and violation.gci.sup in a.operands]
    assert definition[0] in items
    assert any(isinstance(item, EquivalentProperties) for item in items)
    assert items[-1] == DataFact(violation.individual, IFC + 'FireProtection', string('R14'))
    assert '"R14"^^xsd:string' in violation.trace[-1].sentence
    assert format_trace(violation).count('\n') == len(violation.trace)
    assert replay_trace(violation, example1, abox)


def test_incomplete_traces_do_not_replay(example1, listings_text):
    abox = load_abox(listings_text.replace('"R 15"', '"R14"'), example1)
    violation = check_compliance(example1, abox).violations[0]
    assert not replay_trace(replace(violation, trace=violation.trace[:-1]), example1, abox)
    assert not replay_trace(replace(violation, trace=violation.trace[1:]), example1, abox)
    assert not replay_trace(replace(violation, trace=()), example1, abox)


def test_strict_literals_keep_whitespace(example1, listings_text):
    abox = load_abox(listings_text, example1)
    report = check_compliance(example1, abox, strict_literals=True)
    assert [v.individual for v in report.violations] == [individual('beam_in_III_R15')]
    assert replay_trace(report.violations[0], example1, abox, strict_literals=True)


def test_violated_type_assertion(example1, listings_text):
    text = listings_text.replace('Facts: in building\n', 'Facts: in building, in beam\n')
    abox = load_abox(text, example1)
    report = check_compliance(example1, abox)
    assert len(report.violations) == 1
    violation = report.violations[0]
    assert violation.gci == ClassAssertion(ObjectOnly(IN, ObjectOneOf((individual('building'),))),
                                           individual('beam_in'))
    assert ObjectFact(individual('beam_in'), IN, individual('beam')) in [step.item for step in violation.trace]
    assert replay_trace(violation, example1, abox)


def test_empty_abox(example1):
    report = check_compliance(example1, ABox())
    assert report.consistent
    assert report.classifications == []


def test_open_property(example1_only):
    abox = load_abox('Individual: b\n    Types: BEAM\n', example1_only)
    with pytest.raises(OpenPropertyException):
        check_compliance(example1_only, abox)
    report = check_compliance(example1_only, close_abox(abox, example1_only))
    assert [x for x, _ in report.classifications] == [individual('b')]


def test_close_individual(example1):
    beam = close_individual(Individual(individual('beam')), example1)
    assert ObjectOnly(IN, NOTHING) in beam.asserted_classes
    assert DataCardinality(IFC + 'FireSafety', CardinalityMode.Max, 0) in beam.asserted_classes

    beam_in = close_individual(Individual(individual('beam_in'), object_facts=((IN, individual('building')),),
                                          data_facts=((IFC + 'FireProtection', string('R 15')),)), example1)
    assert ObjectOnly(IN, ObjectOneOf((individual('building'),))) in beam_in.asserted_classes
    closed = DataOnly(IFC + 'FireProtection', Enumeration((string('R 15'),)))
    assert closed in beam_in.asserted_classes
    assert DataOnly(BASE + 'fire_resistance_limit', Enumeration((string('R 15'),))) in beam_in.asserted_classes
    assert close_individual(beam_in, example1) == beam_in


def test_closing_listings_changes_nothing(example1, listings_text):
    abox = load_abox(listings_text, example1)
    closed = close_abox(abox, example1)
    assert close_abox(closed, example1) == closed
    assert check_compliance(example1, closed).classifications == check_compliance(example1, abox).classifications


@pytest.mark.parametrize('a, b, strict, expected', [
    (Literal('300', Datatype.integer), Literal('300.0', Datatype.float), False, True),
    (string('R 15'), string('R15'), False, True),
    (string('R 15'), string('R15'), True, False),
    (string('300'), Literal('300', Datatype.integer), False, False),
    (string('III'), string('II'), False, False),
])
def test_literals_equal(a, b, strict, expected):
    assert literals_equal(a, b, strict) == expected


@pytest.mark.parametrize('value, rng, expected', [
    (Literal('300', Datatype.integer), FacetRestriction(Datatype.integer, (
        (Facet.MaxInclusive, Literal('300', Datatype.integer)),)), True),
    (Literal('301', Datatype.integer), FacetRestriction(Datatype.integer, (
        (Facet.MaxInclusive, Literal('300', Datatype.integer)),)), False),
    (Literal('3.0', Datatype.float), FacetRestriction(Datatype.integer, (
        (Facet.MinInclusive, Literal('1', Datatype.integer)),)), False),
    (Literal('3', Datatype.integer), FacetRestriction(Datatype.float, (
        (Facet.MinInclusive, Literal('3.0', Datatype.float)),)), True),
    (Literal('2.5', Datatype.float), FacetRestriction(Datatype.float, (
        (Facet.MinExclusive, Literal('2.5', Datatype.float)),)), False),
    (string('3.0'), FacetRestriction(Datatype.float, ((Facet.MinInclusive, Literal('1.0', Datatype.float)),)), False),
    (string('R15'), Enumeration((string('R14'), string('R15'))), True),
])
def test_in_data_range(value, rng, expected):
    assert in_data_range(value, rng) == expected


def test_evaluate_single_individual(example1, listings_text):
    abox = load_abox(listings_text, example1)
    subject = Named(iri_of(example1, SUBJECT_1))
    assert evaluate(abox.get(individual('beam_in_III')), subject, abox, example1)
    assert not evaluate(abox.get(individual('beam_in')), subject, abox, example1)


@pytest.mark.parametrize('name', ['example1', 'example1_only'])
def test_golden_subexpressions_agree_with_oracle(request, name, listings_text):
    onto = request.getfixturevalue(name)
    abox = close_abox(load_abox(listings_text, onto), onto)
    model, oracle = FiniteModel(onto, abox), Oracle(onto, abox)
    for axiom in onto.axioms:
        for operand in axiom_expressions(axiom):
            for expr in subexpressions(operand):
                assert model.extension(expr) == oracle.ext(expr), expr


@st.composite
def models(draw, max_individuals=3):
    onto = draw(ontologies())
    abox = draw(closed_aboxes(onto, RANDOM_BASE, max_individuals))
    expr = draw(expressions(vocabulary_of(onto, abox.iris()), max_leaves=5))
    return onto, abox, expr, draw(st.booleans())


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(models())
def test_model_agrees_with_oracle(drawn):
    onto, abox, expr, strict = drawn
    try:
        oracle = Oracle(onto, abox, strict)
    except NotStratified:
        with pytest.raises(UnstratifiedDefinitionException):
            FiniteModel(onto, abox, strict)
        return
    model = FiniteModel(onto, abox, strict)
    for name in vocabulary_of(onto, []).classes:
        assert model.extension(Named(name)) == oracle.ext(Named(name))
    for sub in subexpressions(expr):
        assert model.extension(sub) == oracle.ext(sub)


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(models(max_individuals=8))
def test_memberships_are_supported_on_larger_aboxes(drawn):
    onto, abox, _, strict = drawn
    try:
        model = FiniteModel(onto, abox, strict)
    except UnstratifiedDefinitionException:
        return
    assert Oracle(onto, abox, strict, named=model.named).is_supported()


def named_class(local):
    return Named(RANDOM_BASE + local)


def test_negated_definition_reads_settled_classes():
    a, b, c, s = (named_class(n) for n in 'ABCS')
    onto = Ontology(RANDOM_BASE.rstrip('#'), frozenset(), (
        EquivalentClasses((s, IntersectionOf((a, ComplementOf(b))))),
        EquivalentClasses((b, c)),
        SubClassOf(s, named_class('D')),
    ))
    abox = ABox((Individual(RANDOM_BASE + 'x', (a, c)),))
    model = FiniteModel(onto, abox)
    assert model.extension(b) == {RANDOM_BASE + 'x'}
    assert model.extension(s) == set()
    report = check_compliance(onto, abox)
    assert report.consistent
    assert report.classifications == []


@pytest.mark.parametrize('definitions', [
    ((named_class('A'), IntersectionOf((named_class('B'), ComplementOf(named_class('A'))))),),
    ((named_class('A'), ComplementOf(named_class('B'))), (named_class('B'), named_class('A'))),
    ((named_class('A'), ObjectCardinality(RANDOM_BASE + 'p', CardinalityMode.Max, 1, named_class('A'))),),
])
def test_definitions_through_their_own_negation_are_rejected(definitions):
    onto = Ontology(RANDOM_BASE.rstrip('#'), frozenset(), tuple(EquivalentClasses(d) for d in definitions))
    with pytest.raises(UnstratifiedDefinitionException):
        stratify(onto)
    with pytest.raises(NotStratified):
        Oracle(onto, ABox((Individual(RANDOM_BASE + 'x'),)))


def test_stratify_orders_definitions_by_dependency():
    a, b, c, s = (named_class(n) for n in 'ABCS')
    first = EquivalentClasses((s, IntersectionOf((a, ComplementOf(b)))))
    second = EquivalentClasses((b, c))
    assert stratify(Ontology(RANDOM_BASE.rstrip('#'), frozenset(), (first, second))) == [[second], [first]]


def test_violation_without_trace_does_not_replay(example1):
    gci = [a for a in example1.axioms if isinstance(a, SubClassOf)][0]
    assert not replay_trace(Violation(individual('beam'), gci, ()), example1, ABox())
