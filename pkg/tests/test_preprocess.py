from core.enums import LayerId, Arrow, SemanticType, SemanticRole
from core.exceptions import BranchingConcatenationException, CyclicArrowsException, CrossTagArrowException, \
    DuplicateArrowException
from core.preprocess import apply_linguistic_arrows, extract_layers, preprocess, LayerTables
from core.tsv_ingest import AnnotatedDocument, Token, SpanAnnotation, RelationAnnotation
from collections import Counter
from hypothesis import given, settings
import hypothesis.strategies as st
import pytest

ROLE = LayerId.SEMROLE
TYPE = LayerId.SEMTYPE


def document(n, relations=(), layer=ROLE, tag='Subject', extra=()):
    words = ['w' + str(i) for i in range(1, n + 1)]
    tokens = []
    start = 0
    for i, word in enumerate(words, start=1):
        tokens.append(Token(1, i, start, start + len(word), word))
        start += len(word) + 1
    spans = tuple(SpanAnnotation(layer, tag, i, ((1, i),)) for i in range(1, n + 1)) + tuple(extra)
    return AnnotatedDocument(' '.join(words), tuple(tokens), spans, tuple(relations))


def arrow(kind, a, b, layer=ROLE):
    return RelationAnnotation(kind, (layer, a), (layer, b))


def surfaces(doc, layer=ROLE):
    return sorted(doc.surface(s) for s in doc.spans if s.layer_id == layer)


def covered(doc):
    return Counter(ref for s in doc.spans for ref in s.tokens)


@st.composite
def concatenations(draw):
    n = draw(st.integers(2, 10))
    order = draw(st.permutations(list(range(1, n + 1))))
    cuts = draw(st.lists(st.booleans(), min_size=n - 1, max_size=n - 1))
    arrows = [arrow(Arrow.Concatenation, a, b) for a, b, cut in zip(order, order[1:], cuts) if not cut]
    return document(n, arrows), 1 + sum(cuts)


@st.composite
def distributions(draw):
    n = draw(st.integers(2, 10))
    source = draw(st.integers(1, n))
    targets = draw(st.lists(st.sampled_from([i for i in range(1, n + 1) if i != source]), min_size=1, unique=True))
    kind = draw(st.sampled_from([Arrow.Distribution, Arrow.SelfDistribution]))
    return document(n, [arrow(kind, source, t) for t in targets]), source, targets, kind


@settings(max_examples=500, deadline=None)
@given(concatenations())
def test_concatenation_conserves_tokens(case):
    doc, paths = case
    merged = apply_linguistic_arrows(doc)
    assert covered(merged) == covered(doc)
    assert len(merged.spans) == paths
    assert not any(r.arrow == Arrow.Concatenation for r in merged.relations)


@settings(max_examples=500, deadline=None)
@given(distributions())
def test_distribution_copies(case):
    doc, source, targets, kind = case
    result = apply_linguistic_arrows(doc)
    copies = [s for s in result.spans if s.tokens[0] == (1, source)]
    expected = len(targets) + 1 if kind == Arrow.SelfDistribution else len(targets)
    assert len(copies) == expected
    assert (((1, source),) in [s.tokens for s in result.spans]) == (kind == Arrow.SelfDistribution)
    for t in targets:
        assert ((1, t),) not in [s.tokens for s in result.spans]
        assert ((1, source), (1, t)) in [s.tokens for s in copies]
    assert len({s.key for s in result.spans}) == len(result.spans)


@settings(max_examples=500, deadline=None)
@given(st.one_of(concatenations().map(lambda case: case[0]), distributions().map(lambda case: case[0])))
def test_arrows_apply_once(doc):
    once = apply_linguistic_arrows(doc)
    assert apply_linguistic_arrows(once) == once


def test_example1_subject_concatenation(example1_doc):
    doc = apply_linguistic_arrows(example1_doc)
    roles = {s.tag: doc.surface(s) for s in doc.spans if s.layer_id == ROLE}
    assert roles == {
        'Subject': 'If the degree of fire resistance of a building is III the beams in it',
        'Requirement': 'the fire resistance limit should be R15',
    }


def test_concatenation_follows_arrow_order():
    doc = apply_linguistic_arrows(document(3, [arrow(Arrow.Concatenation, 3, 1)]))
    assert surfaces(doc) == ['w2', 'w3 w1']


def test_distribution_replaces_the_source():
    doc = document(3, [arrow(Arrow.Distribution, 1, 2), arrow(Arrow.Distribution, 1, 3)])
    assert surfaces(apply_linguistic_arrows(doc)) == ['w1 w2', 'w1 w3']


def test_self_distribution_keeps_the_source():
    doc = document(2, [arrow(Arrow.SelfDistribution, 1, 2)])
    assert surfaces(apply_linguistic_arrows(doc)) == ['w1', 'w1 w2']


def test_semantic_arrows_follow_every_copy():
    relation = SpanAnnotation(TYPE, 'Relation', 4, ((1, 4),))
    doc = document(4, [arrow(Arrow.Distribution, 1, 2, TYPE), arrow(Arrow.Distribution, 1, 3, TYPE),
                       arrow(Arrow.Domain, 4, 1, TYPE)], layer=TYPE, tag='Class')
    doc = AnnotatedDocument(doc.source_text, doc.tokens, doc.spans[:3] + (relation,), doc.relations)
    result = apply_linguistic_arrows(doc)
    domains = [r for r in result.relations if r.arrow == Arrow.Domain]
    assert len(domains) == 2
    assert sorted(result.surface(result.span(r.target)) for r in domains) == ['w1 w2', 'w1 w3']
    assert all(r.source == (TYPE, 4) for r in domains)


def test_two_outgoing_concatenations():
    doc = document(3, [arrow(Arrow.Concatenation, 1, 2), arrow(Arrow.Concatenation, 1, 3)])
    with pytest.raises(BranchingConcatenationException):
        apply_linguistic_arrows(doc)


def test_two_incoming_concatenations():
    doc = document(3, [arrow(Arrow.Concatenation, 1, 3), arrow(Arrow.Concatenation, 2, 3)])
    with pytest.raises(BranchingConcatenationException):
        apply_linguistic_arrows(doc)


def test_concatenation_cycle():
    doc = document(2, [arrow(Arrow.Concatenation, 1, 2), arrow(Arrow.Concatenation, 2, 1)])
    with pytest.raises(CyclicArrowsException):
        apply_linguistic_arrows(doc)


def test_distribution_chain():
    doc = document(3, [arrow(Arrow.Distribution, 1, 2), arrow(Arrow.Distribution, 2, 3)])
    with pytest.raises(CyclicArrowsException):
        apply_linguistic_arrows(doc)


def test_mixed_distribution_kinds():
    doc = document(3, [arrow(Arrow.Distribution, 1, 2), arrow(Arrow.SelfDistribution, 1, 3)])
    with pytest.raises(DuplicateArrowException):
        apply_linguistic_arrows(doc)


def test_arrow_across_tags():
    other = SpanAnnotation(ROLE, 'Requirement', 3, ((1, 3),))
    doc = document(2, [arrow(Arrow.Concatenation, 1, 3)], extra=(other,))
    doc = AnnotatedDocument(doc.source_text + ' w3', doc.tokens + (Token(1, 3, 6, 8, 'w3'),), doc.spans,
                            doc.relations)
    with pytest.raises(CrossTagArrowException):
        apply_linguistic_arrows(doc)


def test_example1_tables(example1_doc, config):
    tables = preprocess(example1_doc, config.terms)
    types = {r.surface: r for r in tables.types}
    should_be = types['should be']
    assert should_be.type_tag == SemanticType.Only
    assert should_be.of_ref == types['fire resistance limit'].unit_id

    assert types['in'].domain_ref == types['beams'].unit_id
    assert types['in'].range_ref == types['building'].unit_id
    assert types['degree of fire resistance'].range_ref == types['III'].unit_id

    subject, requirement = sorted(tables.roles, key=lambda r: r.role_tag.value, reverse=True)
    assert subject.role_tag == SemanticRole.Subject
    assert subject.to_ref == requirement.unit_id

    terms = {r.term_label: r for r in tables.terms}
    assert terms['BEAM'].term_iri == 'https://example.org/ifc#IfcBeam'
    assert terms['BEAM'].surface == 'beams'

    ids = [r.unit_id for r in tables.terms + tables.types + tables.roles]
    assert sorted(ids) == list(range(1, 15))


def test_example2_comparisons(example2_doc, config):
    tables = preprocess(example2_doc, config.terms)
    types = {r.surface: r for r in tables.types}
    assert types['not more than'].type_tag == SemanticType.Comparison
    assert types['not more than'].of_ref == types['300'].unit_id
    assert types['at least'].type_tag == SemanticType.Comparison
    assert types['at least'].of_ref == types['3.0'].unit_id


def test_terms_without_vocabulary(example1_doc):
    tables = preprocess(example1_doc)
    assert all(r.term_iri == '' for r in tables.terms)


def test_empty_document():
    assert extract_layers(AnnotatedDocument('')) == LayerTables([], [], [])


def test_two_domains_from_one_unit():
    spans = (SpanAnnotation(TYPE, 'Relation', 1, ((1, 1),)), SpanAnnotation(TYPE, 'Class', 2, ((1, 2),)),
             SpanAnnotation(TYPE, 'Class', 3, ((1, 3),)))
    doc = document(3, [arrow(Arrow.Domain, 1, 2, TYPE), arrow(Arrow.Domain, 1, 3, TYPE)])
    doc = AnnotatedDocument(doc.source_text, doc.tokens, spans, doc.relations)
    with pytest.raises(DuplicateArrowException):
        extract_layers(doc)


def test_or_keeps_every_operand():
    spans = (SpanAnnotation(TYPE, 'Class', 1, ((1, 1),)), SpanAnnotation(TYPE, 'Or', 2, ((1, 2),)),
             SpanAnnotation(TYPE, 'Class', 3, ((1, 3),)))
    doc = document(3, [arrow(Arrow.Of, 2, 1, TYPE), arrow(Arrow.Of, 2, 3, TYPE)])
    doc = AnnotatedDocument(doc.source_text, doc.tokens, spans, doc.relations)
    union = [r for r in extract_layers(doc).types if r.type_tag == SemanticType.Or][0]
    assert union.of_refs == (1, 3)
