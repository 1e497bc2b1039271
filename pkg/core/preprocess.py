from core import preprocess_log
from core.enums import LayerId, SemanticType, SemanticRole, Arrow, LINGUISTIC_ARROWS
from core.exceptions import BranchingConcatenationException, CyclicArrowsException, CrossTagArrowException, \
    DuplicateArrowException
from core.tsv_ingest import AnnotatedDocument, SpanAnnotation, RelationAnnotation, SpanKey, TokenRef
from core.vocab import TermVocabulary
from dataclasses import dataclass, replace
from itertools import product
from typing import Dict, List, NamedTuple, Optional, Tuple


@dataclass(frozen=True)
class TagUnit:
    unit_id: int
    layer_id: LayerId
    tag: str
    tokens: Tuple[TokenRef, ...]
    surface: str


@dataclass(frozen=True)
class TermRow:
    unit_id: int
    surface: str
    term_label: str
    term_iri: str
    tokens: Tuple[TokenRef, ...] = ()


@dataclass(frozen=True)
class TypeRow:
    unit_id: int
    surface: str
    type_tag: SemanticType
    domain_ref: Optional[int] = None
    range_ref: Optional[int] = None
    of_refs: Tuple[int, ...] = ()
    tokens: Tuple[TokenRef, ...] = ()

    @property
    def of_ref(self) -> Optional[int]:
        return self.of_refs[0] if self.of_refs else None


@dataclass(frozen=True)
class RoleRow:
    unit_id: int
    surface: str
    role_tag: SemanticRole
    to_ref: Optional[int] = None
    tokens: Tuple[TokenRef, ...] = ()


class LayerTables(NamedTuple):
    terms: List[TermRow]
    types: List[TypeRow]
    roles: List[RoleRow]


def _span_order(span: SpanAnnotation):
    return span.tokens[0], span.layer_id.value, span.tag, span.span_id


def _check_linguistic(doc: AnnotatedDocument, relation: RelationAnnotation):
    source = doc.span(relation.source)
    target = doc.span(relation.target)
    if source.layer_id != target.layer_id or source.tag != target.tag:
        raise CrossTagArrowException(relation.arrow.value + ' arrow joins ' + source.tag + ' span ' +
                                     str(source.span_id) + ' to ' + target.tag + ' span ' + str(target.span_id))
    if relation.source == relation.target:
        raise CyclicArrowsException(relation.arrow.value + ' arrow loops on span ' + str(source.span_id))


# Merge Concatenation paths into their head span; returns the merged spans and a key -> head key map
def _concatenate(doc: AnnotatedDocument, arrows: List[RelationAnnotation]) -> Tuple[Dict[SpanKey, SpanAnnotation],
                                                                                      Dict[SpanKey, SpanKey]]:
    successor = {}
    predecessor = {}
    for arrow in arrows:
        if arrow.source in successor:
            raise BranchingConcatenationException('Span ' + str(arrow.source[1]) + ' has two outgoing '
                                                  'Concatenation arrows')
        if arrow.target in predecessor:
            raise BranchingConcatenationException('Span ' + str(arrow.target[1]) + ' has two incoming '
                                                  'Concatenation arrows')
        successor[arrow.source] = arrow.target
        predecessor[arrow.target] = arrow.source

    merged = {}
    head_of = {}
    heads = sorted((key for key in successor if key not in predecessor), key=lambda k: _span_order(doc.span(k)))
    for head in heads:
        tokens = list(doc.span(head).tokens)
        head_of[head] = head
        key = head
        while key in successor:
            key = successor[key]
            tokens.extend(doc.span(key).tokens)
            head_of[key] = head
        merged[head] = replace(doc.span(head), tokens=tuple(tokens))

    unvisited = (set(successor) | set(predecessor)) - set(head_of)
    if unvisited:
        ids = ', '.join(str(key[1]) for key in sorted(unvisited, key=lambda k: (k[0].value, k[1])))
        raise CyclicArrowsException('Concatenation arrows form a cycle through spans ' + ids)
    return merged, head_of


def apply_linguistic_arrows(doc: AnnotatedDocument) -> AnnotatedDocument:
    linguistic = [r for r in doc.relations if r.arrow in LINGUISTIC_ARROWS]
    if not linguistic:
        return doc
    for relation in linguistic:
        _check_linguistic(doc, relation)

    concatenation = [r for r in linguistic if r.arrow == Arrow.Concatenation]
    merged, head_of = _concatenate(doc, concatenation)
    spans = {}
    for span in doc.spans:
        head = head_of.get(span.key)
        if head is None:
            spans[span.key] = span
        elif head == span.key:
            spans[span.key] = merged[head]

    # Distribution runs on the merged spans
    distributions = {}
    for relation in linguistic:
        if relation.arrow == Arrow.Concatenation:
            continue
        source = head_of.get(relation.source, relation.source)
        target = head_of.get(relation.target, relation.target)
        if source == target:
            raise CyclicArrowsException('Distribution arrow loops on span ' + str(source[1]) +
                                        ' after concatenation')
        entry = distributions.setdefault(source, {'targets': [], 'keep': relation.arrow == Arrow.SelfDistribution})
        if entry['keep'] != (relation.arrow == Arrow.SelfDistribution):
            raise DuplicateArrowException('Span ' + str(source[1]) + ' carries both Distribution and '
                                          'SelfDistribution arrows')
        if target not in entry['targets']:
            entry['targets'].append(target)

    targets = {t for entry in distributions.values() for t in entry['targets']}
    both = targets & set(distributions)
    if both:
        raise CyclicArrowsException('Span ' + str(sorted(k[1] for k in both)[0]) +
                                    ' is both a distribution source and a distribution target')

    next_id = {}
    for key in spans:
        next_id[key[0]] = max(next_id.get(key[0], 0), key[1])

    copies_of = {}
    for source in sorted(distributions, key=lambda k: _span_order(spans[k])):
        entry = distributions[source]
        head = spans[source]
        results = [source] if entry['keep'] else []
        for target in sorted(entry['targets'], key=lambda k: _span_order(spans[k])):
            next_id[source[0]] += 1
            copy = SpanAnnotation(head.layer_id, head.tag, next_id[source[0]], head.tokens + spans[target].tokens)
            copies_of.setdefault(target, []).append(copy.key)
            spans[copy.key] = copy
            results.append(copy.key)
        copies_of[source] = results
        preprocess_log.info('Distributed %s span %d into %d spans', head.tag, head.span_id, len(results))

    for key, results in copies_of.items():
        if key not in results:
            del spans[key]

    def replacements(key: SpanKey) -> List[SpanKey]:
        head = head_of.get(key, key)
        return copies_of.get(head, [head])

    relations = []
    for relation in doc.relations:
        if relation.arrow in LINGUISTIC_ARROWS:
            continue
        sources = replacements(relation.source)
        ends = replacements(relation.target)
        for source, target in product(sources, ends):
            clone = RelationAnnotation(relation.arrow, source, target)
            if clone not in relations:
                relations.append(clone)

    ordered = sorted(spans.values(), key=lambda s: (s.tokens[0], s.layer_id.value, s.span_id))
    preprocess_log.info('Applied %d linguistic arrows: %d spans remain', len(linguistic), len(ordered))
    return AnnotatedDocument(doc.source_text, doc.tokens, tuple(ordered), tuple(relations))


def tag_units(doc: AnnotatedDocument) -> Dict[SpanKey, TagUnit]:
    units = {}
    for unit_id, span in enumerate(sorted(doc.spans, key=_span_order), start=1):
        units[span.key] = TagUnit(unit_id, span.layer_id, span.tag, span.tokens, doc.surface(span))
    return units


def extract_layers(doc: AnnotatedDocument, terms: TermVocabulary = None) -> LayerTables:
    if any(r.arrow in LINGUISTIC_ARROWS for r in doc.relations):
        preprocess_log.debug('Applying pending linguistic arrows before extraction')
        doc = apply_linguistic_arrows(doc)

    units = tag_units(doc)
    domain = {}
    range_ = {}
    of = {}
    to = {}

    for relation in doc.relations:
        source = units[relation.source]
        target = units[relation.target]
        if relation.arrow == Arrow.Of:
            targets = of.setdefault(source.unit_id, [])
            if targets and source.tag != SemanticType.Or.value:
                raise DuplicateArrowException('Unit ' + str(source.unit_id) + ' (' + source.surface +
                                              ') has more than one Of arrow')
            if target.unit_id not in targets:
                targets.append(target.unit_id)
            continue
        fields = {Arrow.Domain: domain, Arrow.Range: range_, Arrow.To: to}[relation.arrow]
        if source.unit_id in fields and fields[source.unit_id] != target.unit_id:
            raise DuplicateArrowException('Unit ' + str(source.unit_id) + ' (' + source.surface +
                                          ') has more than one ' + relation.arrow.value + ' arrow')
        fields[source.unit_id] = target.unit_id

    term_rows = []
    type_rows = []
    role_rows = []
    for unit in sorted(units.values(), key=lambda u: u.unit_id):
        if unit.layer_id == LayerId.TERM:
            entry = terms.get(unit.tag) if terms is not None else None
            if entry is None:
                preprocess_log.warning('Term %s is not in the term vocabulary', unit.tag)
            term_rows.append(TermRow(unit.unit_id, unit.surface, unit.tag, entry.iri if entry else '', unit.tokens))
        elif unit.layer_id == LayerId.SEMTYPE:
            type_rows.append(TypeRow(unit.unit_id, unit.surface, SemanticType(unit.tag), domain.get(unit.unit_id),
                                     range_.get(unit.unit_id), tuple(of.get(unit.unit_id, ())), unit.tokens))
        else:
            role_rows.append(RoleRow(unit.unit_id, unit.surface, SemanticRole(unit.tag), to.get(unit.unit_id),
                                     unit.tokens))

    preprocess_log.info('Extracted %d term rows, %d type rows, %d role rows', len(term_rows), len(type_rows),
                        len(role_rows))
    return LayerTables(term_rows, type_rows, role_rows)


def preprocess(doc: AnnotatedDocument, terms: TermVocabulary = None) -> LayerTables:
    return extract_layers(apply_linguistic_arrows(doc), terms)
