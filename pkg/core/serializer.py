from core import serializer_log
from core.enums import EntityKind, Datatype, FacetSymbol, CardinalityMode, PropertyKind
from core.exceptions import ManchesterSyntaxException, UnsupportedConstructException
from core.owl_model import Ontology, Entity, Literal, Enumeration, FacetRestriction, Named, ComplementOf, \
    UnionOf, IntersectionOf, ObjectOneOf, ObjectSome, ObjectOnly, ObjectCardinality, DataSome, DataOnly, \
    DataCardinality, SubClassOf, EquivalentClasses, EquivalentProperties, ClassAssertion, ObjectFact, DataFact, \
    ClassExpression, DataRange, Axiom, OWL, RDFS, XSD, BUILTIN_IRIS, local_name, namespace
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple
import pyparsing as pp
import re

STANDARD_PREFIXES = (('owl', OWL), ('rdfs', RDFS), ('xsd', XSD))
DEFAULT_NAMESPACE = 'urn:x-abox#'

KEYWORDS = {'some', 'only', 'min', 'max', 'exactly', 'and', 'or', 'not', 'value', 'that', 'inverse', 'Self'}
SECTION_WORDS = {'Prefix', 'Ontology', 'Class', 'ObjectProperty', 'DataProperty', 'Individual', 'Datatype',
                 'Annotations', 'EquivalentTo', 'SubClassOf', 'Types', 'Facts', 'EquivalentClasses'}
UNSUPPORTED_SECTIONS = ('DisjointWith', 'DisjointUnionOf', 'DisjointClasses', 'DisjointProperties', 'HasKey',
                        'SameAs', 'DifferentFrom', 'SameIndividual', 'DifferentIndividuals', 'Characteristics',
                        'Domain', 'Range', 'InverseOf', 'SubPropertyOf', 'SubPropertyChain', 'Import',
                        'AnnotationProperty', 'EquivalentProperties', 'Rule')

FRAME_ORDER = {EntityKind.Datatype: 0, EntityKind.Class: 1, EntityKind.ObjectProperty: 2,
               EntityKind.DataProperty: 3, EntityKind.NamedIndividual: 4}
DATATYPES = {
    'string': Datatype.string,
    'integer': Datatype.integer,
    'int': Datatype.integer,
    'float': Datatype.float,
    'double': Datatype.float,
    'decimal': Datatype.float,
}
SYMBOL_FACETS = {symbol: facet for facet, symbol in FacetSymbol.items()}

simple_name = re.compile(r'^[A-Za-z_][A-Za-z0-9_\-]*$')
local_part = re.compile(r'^[A-Za-z0-9_][A-Za-z0-9_\-]*$')
unsupported_section = re.compile(r'(?<![\w\-])(' + '|'.join(UNSUPPORTED_SECTIONS) + r'):')
unsupported_word = re.compile(r'(?<![\w\-:])(value|inverse|Self|that)(?![\w\-])')
masked = re.compile(r'"(?:[^"\\\n]|\\.)*"|\'[^\'\n]*\'|<[^<>\s]*>')


# Emission

class _Namer:
    """Chooses how each entity is written: by label when the label is unambiguous, else by IRI."""

    def __init__(self, onto: Ontology):
        self.default = ''
        self.prefixes = {}
        for name, ns in STANDARD_PREFIXES + tuple(onto.prefixes):
            if name == '':
                self.default = ns
            self.prefixes.setdefault(ns, name)
        counts = {}
        for e in onto.entities:
            if e.label:
                counts[e.label] = counts.get(e.label, 0) + 1
        self.labels = set(counts)
        self.by_label = {(e.kind, e.iri): e.label for e in onto.entities
                         if e.label and counts[e.label] == 1 and "'" not in e.label and '\n' not in e.label}

    def iri_form(self, iri: str) -> str:
        local = local_name(iri)
        ns = namespace(iri)
        if local in KEYWORDS or local in SECTION_WORDS:
            return '<' + iri + '>'
        if ns == self.default and simple_name.match(local) and local not in self.labels:
            return local
        if ns in self.prefixes and local_part.match(local):
            return self.prefixes[ns] + ':' + local
        return '<' + iri + '>'

    def ref(self, iri: str, kind: EntityKind) -> str:
        label = self.by_label.get((kind, iri))
        if label is None:
            return self.iri_form(iri)
        if simple_name.match(label) and label not in KEYWORDS and label not in SECTION_WORDS:
            return label
        return "'" + label + "'"


def _escape(text: str) -> str:
    return text.replace('\\', '\\\\').replace('"', '\\"')


def literal_text(lit: Literal) -> str:
    if lit.datatype == Datatype.integer:
        return lit.lexical
    if lit.datatype == Datatype.float:
        return lit.lexical + 'f'
    return '"' + _escape(lit.lexical) + '"^^xsd:string'


def data_range_text(rng: DataRange) -> str:
    if isinstance(rng, Enumeration):
        return '{' + ', '.join(literal_text(lit) for lit in rng.literals) + '}'
    return 'xsd:' + rng.base.value + '[' + ', '.join(FacetSymbol[f] + ' ' + literal_text(lit)
                                                    for f, lit in rng.facets) + ']'


def _expression(expr: ClassExpression, namer: _Namer) -> str:
    def wrap(e: ClassExpression) -> str:
        text = _expression(e, namer)
        return text if isinstance(e, (Named, ObjectOneOf)) else '(' + text + ')'

    def bool_operand(e: ClassExpression) -> str:
        text = _expression(e, namer)
        return '(' + text + ')' if isinstance(e, (UnionOf, IntersectionOf)) else text

    if isinstance(expr, Named):
        return namer.ref(expr.iri, EntityKind.Class)
    if isinstance(expr, ObjectOneOf):
        return '{' + ', '.join(namer.ref(i, EntityKind.NamedIndividual) for i in expr.individuals) + '}'
    if isinstance(expr, ComplementOf):
        return 'not ' + wrap(expr.operand)
    if isinstance(expr, IntersectionOf):
        return ' and '.join(bool_operand(op) for op in expr.operands)
    if isinstance(expr, UnionOf):
        return ' or '.join(bool_operand(op) for op in expr.operands)
    if isinstance(expr, (ObjectSome, ObjectOnly)):
        word = ' some ' if isinstance(expr, ObjectSome) else ' only '
        return namer.ref(expr.prop, EntityKind.ObjectProperty) + word + wrap(expr.filler)
    if isinstance(expr, ObjectCardinality):
        text = namer.ref(expr.prop, EntityKind.ObjectProperty) + ' ' + expr.mode.value + ' ' + str(expr.n)
        return text + (' ' + wrap(expr.filler) if expr.filler is not None else '')
    if isinstance(expr, (DataSome, DataOnly)):
        word = ' some ' if isinstance(expr, DataSome) else ' only '
        return namer.ref(expr.prop, EntityKind.DataProperty) + word + data_range_text(expr.data_range)
    if isinstance(expr, DataCardinality):
        text = namer.ref(expr.prop, EntityKind.DataProperty) + ' ' + expr.mode.value + ' ' + str(expr.n)
        return text + (' ' + data_range_text(expr.data_range) if expr.data_range is not None else '')
    raise UnsupportedConstructException('Cannot write ' + type(expr).__name__)


def render_expression(expr: ClassExpression, onto: Ontology) -> str:
    return _expression(expr, _Namer(onto))


# One-line form used in explanations
def render_axiom(axiom: Axiom, onto: Ontology) -> str:
    namer = _Namer(onto)
    if isinstance(axiom, EquivalentProperties):
        kind = EntityKind.ObjectProperty if axiom.kind == PropertyKind.object else EntityKind.DataProperty
        return 'EquivalentProperties: ' + namer.ref(axiom.p1, kind) + ', ' + namer.ref(axiom.p2, kind)
    if isinstance(axiom, EquivalentClasses):
        return ' EquivalentTo '.join(_expression(op, namer) for op in axiom.operands)
    if isinstance(axiom, SubClassOf):
        return _expression(axiom.sub, namer) + ' SubClassOf ' + _expression(axiom.sup, namer)
    if isinstance(axiom, ClassAssertion):
        return namer.ref(axiom.individual, EntityKind.NamedIndividual) + ' Type ' + _expression(axiom.cls, namer)
    if isinstance(axiom, ObjectFact):
        return ' '.join((namer.ref(axiom.subject, EntityKind.NamedIndividual),
                         namer.ref(axiom.prop, EntityKind.ObjectProperty),
                         namer.ref(axiom.target, EntityKind.NamedIndividual)))
    if isinstance(axiom, DataFact):
        return ' '.join((namer.ref(axiom.subject, EntityKind.NamedIndividual),
                         namer.ref(axiom.prop, EntityKind.DataProperty), literal_text(axiom.value)))
    raise UnsupportedConstructException('Cannot write ' + type(axiom).__name__)


@dataclass
class _FrameText:
    entity: Entity
    sections: Dict[str, List[str]] = field(default_factory=dict)

    def add(self, section: str, text: str):
        self.sections.setdefault(section, []).append(text)


SECTION_ORDER = ('EquivalentTo', 'SubClassOf', 'Types', 'Facts')
FRAME_KEYWORDS = {EntityKind.Class: 'Class', EntityKind.ObjectProperty: 'ObjectProperty',
                  EntityKind.DataProperty: 'DataProperty', EntityKind.NamedIndividual: 'Individual',
                  EntityKind.Datatype: 'Datatype'}


def to_manchester(onto: Ontology) -> str:
    namer = _Namer(onto)
    frames = {(e.kind, e.iri): _FrameText(e) for e in onto.entities}
    misc = []

    def frame(kind: EntityKind, iri: str) -> _FrameText:
        return frames.setdefault((kind, iri), _FrameText(Entity(kind, iri)))

    classes = onto.of_kind(EntityKind.Class)
    for axiom in onto.axioms:
        if isinstance(axiom, EquivalentClasses):
            owners = [i for i, op in enumerate(axiom.operands) if isinstance(op, Named) and op.iri in classes]
            if len(axiom.operands) == 2 and owners:
                owner = axiom.operands[owners[0]]
                other = axiom.operands[1 - owners[0]]
                frame(EntityKind.Class, owner.iri).add('EquivalentTo', _expression(other, namer))
            else:
                misc.append('EquivalentClasses: ' + ', '.join(_expression(op, namer) for op in axiom.operands))
        elif isinstance(axiom, SubClassOf):
            if not isinstance(axiom.sub, Named):
                raise UnsupportedConstructException('SubClassOf with a complex left-hand side has no frame')
            frame(EntityKind.Class, axiom.sub.iri).add('SubClassOf', _expression(axiom.sup, namer))
        elif isinstance(axiom, EquivalentProperties):
            kind = EntityKind.ObjectProperty if axiom.kind == PropertyKind.object else EntityKind.DataProperty
            frame(kind, axiom.p1).add('EquivalentTo', namer.ref(axiom.p2, kind))
        elif isinstance(axiom, ClassAssertion):
            frame(EntityKind.NamedIndividual, axiom.individual).add('Types', _expression(axiom.cls, namer))
        elif isinstance(axiom, ObjectFact):
            frame(EntityKind.NamedIndividual, axiom.subject).add(
                'Facts', namer.ref(axiom.prop, EntityKind.ObjectProperty) + ' ' +
                namer.ref(axiom.target, EntityKind.NamedIndividual))
        elif isinstance(axiom, DataFact):
            frame(EntityKind.NamedIndividual, axiom.subject).add(
                'Facts', namer.ref(axiom.prop, EntityKind.DataProperty) + ' ' + literal_text(axiom.value))

    lines = []
    seen = set()
    for name, ns in tuple(onto.prefixes) + STANDARD_PREFIXES:
        if name not in seen:
            seen.add(name)
            lines.append('Prefix: ' + name + ': <' + ns + '>')
    lines.append('')
    lines.append('Ontology: <' + onto.iri + '>' if onto.iri else 'Ontology:')
    lines.append('')

    for key in sorted(frames, key=lambda k: (k[1], FRAME_ORDER[k[0]])):
        text = frames[key]
        lines.append(FRAME_KEYWORDS[key[0]] + ': ' + namer.iri_form(key[1]))
        lines.append('')
        if text.entity.label:
            lines.append('    Annotations: rdfs:label "' + _escape(text.entity.label) + '"')
            lines.append('')
        for section in SECTION_ORDER:
            items = text.sections.get(section)
            if items:
                lines.append('    ' + section + ':')
                lines.append(',\n'.join('        ' + item for item in items))
                lines.append('')
        lines.append('')

    for item in misc:
        lines.append(item)
        lines.append('')

    serializer_log.info('Wrote %d frames', len(frames))
    return '\n'.join(lines).rstrip('\n') + '\n'


# Parsing

@dataclass(frozen=True)
class _Name:
    form: str
    text: str
    prefix: str = ''
    loc: int = 0


@dataclass(frozen=True)
class _Node:
    op: str
    args: tuple
    loc: int = 0


@dataclass(frozen=True)
class _Section:
    word: str
    items: tuple


@dataclass(frozen=True)
class _Frame:
    word: str
    name: Optional[_Name]
    sections: tuple
    loc: int = 0


def _unescape(text: str) -> str:
    return re.sub(r'\\(.)', r'\1', text)


def _keyword_guard(s, loc, toks):
    if toks[0] in KEYWORDS or toks[0] in SECTION_WORDS:
        raise pp.ParseException(s, loc, toks[0] + ' is a reserved word')


def _string_literal(s, loc, toks):
    lexical = _unescape(toks[0][1:-1])
    datatype = Datatype.string
    if len(toks) > 1 and isinstance(toks[1], _Name):
        name = toks[1]
        local = name.text if name.form == 'prefixed' else local_name(name.text)
        datatype = DATATYPES.get(local, Datatype.string)
    return _Node('literal', (lexical, datatype), loc)


def _grammar():
    lpar, rpar, lbrace, rbrace, lbrack, rbrack, comma = map(pp.Suppress, '(){}[],')

    quoted = pp.Regex(r"'[^'\n]*'").set_parse_action(lambda s, l, t: _Name('quoted', t[0][1:-1], '', l))
    iri_ref = pp.Regex(r'<[^<>"{}|^`\\\s]*>').set_parse_action(lambda s, l, t: _Name('iri', t[0][1:-1], '', l))
    prefixed = pp.Regex(r'([A-Za-z][A-Za-z0-9_\-]*)?:[A-Za-z0-9_][A-Za-z0-9_\-]*').set_parse_action(
        lambda s, l, t: _Name('prefixed', t[0].split(':', 1)[1], t[0].split(':', 1)[0], l))
    bare = pp.Regex(r'[A-Za-z_][A-Za-z0-9_\-]*(?![A-Za-z0-9_\-:])')
    bare.add_parse_action(_keyword_guard)
    bare.add_parse_action(lambda s, l, t: _Name('bare', t[0], '', l))
    name = quoted | iri_ref | prefixed | bare

    string_lit = pp.Regex(r'"(?:[^"\\\n]|\\.)*"') + pp.Opt(
        pp.Suppress('^^') + (prefixed | iri_ref) | pp.Suppress(pp.Regex(r'@[A-Za-z\-]+')))
    string_lit.set_parse_action(_string_literal)
    float_lit = pp.Regex(r'[+-]?\d+\.\d+[fF]?|[+-]?\d+[fF]').set_parse_action(
        lambda s, l, t: _Node('literal', (t[0].rstrip('fF'), Datatype.float), l))
    int_lit = pp.Regex(r'[+-]?\d+(?![\d.fF])').set_parse_action(
        lambda s, l, t: _Node('literal', (t[0], Datatype.integer), l))
    literal = string_lit | float_lit | int_lit
    count = pp.Regex(r'\d+').set_parse_action(lambda s, l, t: int(t[0]))

    facet = pp.Regex(r'<=|>=|<|>') + literal
    facet.set_parse_action(lambda s, l, t: _Node('facet', (SYMBOL_FACETS[t[0]], t[1]), l))
    facet_range = (prefixed | iri_ref) + lbrack + pp.delimited_list(facet) + rbrack
    facet_range.set_parse_action(lambda s, l, t: _Node('facets', (t[0], tuple(t[1:])), l))
    enum_range = lbrace + pp.delimited_list(literal) + rbrace
    enum_range.set_parse_action(lambda s, l, t: _Node('enum', tuple(t), l))
    data_range = facet_range | enum_range

    description = pp.Forward()
    primary = pp.Forward()
    one_of = lbrace + pp.delimited_list(name) + rbrace
    one_of.set_parse_action(lambda s, l, t: _Node('oneof', tuple(t), l))
    named = name.copy().add_parse_action(lambda s, l, t: _Node('named', (t[0],), l))
    atomic = one_of | named | lpar + description + rpar
    filler = data_range | primary

    some_only = name + (pp.Keyword('some') | pp.Keyword('only')) + filler
    some_only.set_parse_action(lambda s, l, t: _Node(t[1], (t[0], t[2]), l))
    cardinality = name + (pp.Keyword('min') | pp.Keyword('max') | pp.Keyword('exactly')) + count + pp.Opt(filler)
    cardinality.set_parse_action(lambda s, l, t: _Node('card', (t[0], CardinalityMode(t[1]), t[2],
                                                                t[3] if len(t) > 3 else None), l))
    negation = pp.Suppress(pp.Keyword('not')) + primary
    negation.set_parse_action(lambda s, l, t: _Node('not', (t[0],), l))
    primary <<= negation | some_only | cardinality | atomic

    conjunction = primary + pp.ZeroOrMore(pp.Suppress(pp.Keyword('and')) + primary)
    conjunction.set_parse_action(lambda s, l, t: t[0] if len(t) == 1 else _Node('and', tuple(t), l))
    disjunction = conjunction + pp.ZeroOrMore(pp.Suppress(pp.Keyword('or')) + conjunction)
    disjunction.set_parse_action(lambda s, l, t: t[0] if len(t) == 1 else _Node('or', tuple(t), l))
    description <<= disjunction

    def section(word: str, item) -> pp.ParserElement:
        expr = pp.Suppress(pp.Literal(word + ':')) + pp.delimited_list(item)
        return expr.set_parse_action(lambda s, l, t: _Section(word, tuple(t)))

    annotation = (name + literal).set_parse_action(lambda s, l, t: _Node('annotation', (t[0], t[1]), l))
    fact = pp.Opt(pp.Keyword('not')) + name + (literal | name)
    fact.set_parse_action(lambda s, l, t: _Node('fact', tuple(t), l))
    annotations = section('Annotations', annotation)

    def frame(word: str, *sections) -> pp.ParserElement:
        body = pp.MatchFirst([annotations] + list(sections))
        expr = pp.Suppress(pp.Literal(word + ':')) + name + pp.ZeroOrMore(body)
        return expr.set_parse_action(lambda s, l, t: _Frame(word, t[0], tuple(t[1:]), l))

    frames = (frame('Class', section('EquivalentTo', description), section('SubClassOf', description)) |
              frame('ObjectProperty', section('EquivalentTo', name)) |
              frame('DataProperty', section('EquivalentTo', name)) |
              frame('Individual', section('Types', description), section('Facts', fact)) |
              frame('Datatype'))
    equivalent_classes = pp.Suppress(pp.Literal('EquivalentClasses:')) + pp.delimited_list(description)
    equivalent_classes.set_parse_action(lambda s, l, t: _Frame('EquivalentClasses', None,
                                                               (_Section('EquivalentTo', tuple(t)),), l))

    prefix = pp.Suppress(pp.Literal('Prefix:')) + pp.Regex(r'([A-Za-z][A-Za-z0-9_\-]*)?:') + iri_ref
    prefix.set_parse_action(lambda s, l, t: _Node('prefix', (t[0][:-1], t[1].text), l))
    ontology = pp.Suppress(pp.Literal('Ontology:')) + pp.Opt(iri_ref)
    ontology.set_parse_action(lambda s, l, t: _Node('ontology', (t[0].text if t else '',), l))

    return pp.ZeroOrMore(prefix) + pp.Opt(ontology) + pp.ZeroOrMore(frames | equivalent_classes)


document = _grammar()


def _check_supported(text: str):
    hidden = masked.sub(lambda m: re.sub(r'[^\n]', ' ', m.group(0)), text)
    for pattern in (unsupported_section, unsupported_word):
        match = pattern.search(hidden)
        if match is not None:
            line = hidden.count('\n', 0, match.start()) + 1
            column = match.start() - (hidden.rfind('\n', 0, match.start()) + 1) + 1
            raise UnsupportedConstructException('line ' + str(line) + ', column ' + str(column) + ': ' +
                                                match.group(1) + ' is outside the supported subset')


class _Resolver:
    """Turns parsed names into IRIs: labels of the document, then labels of the context, then prefixes."""

    def __init__(self, text: str, prefixes: Dict[str, str], context: Optional[Ontology]):
        self.text = text
        self.prefixes = dict(STANDARD_PREFIXES)
        if context is not None:
            self.prefixes.update({k: v for k, v in context.prefixes})
        self.prefixes.update(prefixes)
        if '' not in self.prefixes:
            self.prefixes[''] = context.iri + '#' if context is not None and context.iri else DEFAULT_NAMESPACE
        self.context = context
        self.labels = {}
        self.context_labels = _unique_labels(context.entities) if context is not None else {}
        self.kinds = {}
        if context is not None:
            for e in context.entities:
                self.kinds.setdefault(e.iri, set()).add(e.kind)

    def fail(self, message: str, loc: int):
        raise ManchesterSyntaxException(message, pp.lineno(loc, self.text), pp.col(loc, self.text))

    def iri(self, name: _Name) -> str:
        if name.form == 'iri':
            return name.text
        if name.form == 'prefixed':
            if name.prefix not in self.prefixes:
                self.fail('unknown prefix ' + name.prefix + ':', name.loc)
            return self.prefixes[name.prefix] + name.text
        if not simple_name.match(name.text):
            self.fail('unknown name ' + repr(name.text), name.loc)
        return self.prefixes[''] + name.text

    def by_label(self, name: _Name, kind: EntityKind) -> Optional[str]:
        if name.form not in ('quoted', 'bare'):
            return None
        return self.labels.get((kind, name.text)) or self.context_labels.get((kind, name.text))

    def resolve(self, name: _Name, kind: EntityKind) -> str:
        return self.by_label(name, kind) or self.iri(name)

    # Object or data property, decided by labels, known declarations, then the filler
    def property_kind(self, name: _Name, hint: Optional[EntityKind]) -> EntityKind:
        kinds = (EntityKind.ObjectProperty, EntityKind.DataProperty)
        if hint is not None:
            kinds = (hint,) + tuple(k for k in kinds if k != hint)
        for kind in kinds:
            if self.by_label(name, kind) is not None:
                return kind
        if name.form in ('iri', 'prefixed') or simple_name.match(name.text):
            declared = self.kinds.get(self.iri(name), set())
            for kind in kinds:
                if kind in declared:
                    return kind
        return kinds[0]


def _unique_labels(entities) -> Dict[Tuple[EntityKind, str], str]:
    found = {}
    ambiguous = set()
    for e in entities:
        if not e.label:
            continue
        key = (e.kind, e.label)
        if key in found and found[key] != e.iri:
            ambiguous.add(key)
        found[key] = e.iri
    return {k: v for k, v in found.items() if k not in ambiguous}


def parse_manchester_subset(text: str, context: Ontology = None) -> Ontology:
    _check_supported(text)
    try:
        parsed = document.parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        serializer_log.error('Manchester syntax error: %s', str(e))
        raise ManchesterSyntaxException(e.msg, e.lineno, e.col)

    prefixes = {}
    onto_iri = context.iri if context is not None else ''
    frames = []
    for item in parsed:
        if isinstance(item, _Frame):
            frames.append(item)
        elif item.op == 'prefix':
            prefixes[item.args[0]] = item.args[1]
        else:
            onto_iri = item.args[0]

    resolver = _Resolver(text, prefixes, context)
    return _Builder(resolver, context).build(onto_iri, frames, prefixes)


FRAME_KINDS = {'Class': EntityKind.Class, 'ObjectProperty': EntityKind.ObjectProperty,
               'DataProperty': EntityKind.DataProperty, 'Individual': EntityKind.NamedIndividual,
               'Datatype': EntityKind.Datatype}


class _Builder:

    def __init__(self, resolver: _Resolver, context: Optional[Ontology]):
        self.r = resolver
        self.context = context
        self.referenced = []

    def build(self, onto_iri: str, frames: List[_Frame], prefixes: Dict[str, str]) -> Ontology:
        declared = {}
        headers = {}
        for fr in frames:
            if fr.name is None:
                continue
            kind = FRAME_KINDS[fr.word]
            iri = headers[id(fr)] = self.r.iri(fr.name)
            self.r.kinds.setdefault(iri, set()).add(kind)
            label = declared.get((kind, iri), '')
            for sec in fr.sections:
                if sec.word == 'Annotations':
                    for annotation in sec.items:
                        prop, value = annotation.args
                        if self.r.iri(prop) == RDFS + 'label':
                            label = value.args[0]
            declared[(kind, iri)] = label
        self.r.labels = _unique_labels(Entity(k, i, l) for (k, i), l in declared.items())

        axioms = []
        for fr in frames:
            if fr.name is None:
                for sec in fr.sections:
                    axioms.append(self._equivalence(tuple(self.expression(e) for e in sec.items), fr.loc))
                continue
            kind = FRAME_KINDS[fr.word]
            iri = headers[id(fr)]
            for sec in fr.sections:
                for item in sec.items:
                    axiom = self._section_axiom(kind, iri, sec.word, item)
                    if axiom is not None:
                        axioms.append(axiom)

        entities = {(k, i): Entity(k, i, l) for (k, i), l in declared.items()}
        for kind, iri in self.referenced:
            if (kind, iri) in entities or iri in BUILTIN_IRIS:
                continue
            known = self.context.entity(iri, kind) if self.context is not None else None
            entities[(kind, iri)] = known if known is not None else Entity(kind, iri)

        serializer_log.info('Parsed %d frames into %d axioms', len(frames), len(axioms))
        return Ontology(onto_iri, frozenset(entities.values()), tuple(axioms), tuple(sorted(prefixes.items())))

    def _equivalence(self, operands: tuple, loc: int) -> EquivalentClasses:
        if len(operands) < 2:
            self.r.fail('EquivalentClasses needs two class expressions', loc)
        return EquivalentClasses(operands)

    def _section_axiom(self, kind: EntityKind, iri: str, word: str, item) -> Optional[Axiom]:
        if word == 'Annotations':
            return None
        if kind == EntityKind.Class:
            self.referenced.append((EntityKind.Class, iri))
            if word == 'EquivalentTo':
                return EquivalentClasses((Named(iri), self.expression(item)))
            return SubClassOf(Named(iri), self.expression(item))
        if kind in (EntityKind.ObjectProperty, EntityKind.DataProperty):
            other = self.r.resolve(item, kind)
            self.referenced.append((kind, other))
            prop_kind = PropertyKind.object if kind == EntityKind.ObjectProperty else PropertyKind.data
            return EquivalentProperties(iri, other, prop_kind)
        if word == 'Types':
            return ClassAssertion(self.expression(item), iri)
        return self._fact(iri, item)

    def _fact(self, subject: str, node: _Node) -> Axiom:
        if node.args[0] == 'not':
            raise UnsupportedConstructException('line ' + str(pp.lineno(node.loc, self.r.text)) +
                                                ': negative facts are outside the supported subset')
        prop, value = node.args
        if isinstance(value, _Node):
            iri = self.r.resolve(prop, EntityKind.DataProperty)
            self.referenced.append((EntityKind.DataProperty, iri))
            return DataFact(subject, iri, self.literal(value))
        iri = self.r.resolve(prop, EntityKind.ObjectProperty)
        target = self.r.resolve(value, EntityKind.NamedIndividual)
        self.referenced += [(EntityKind.ObjectProperty, iri), (EntityKind.NamedIndividual, target)]
        return ObjectFact(subject, iri, target)

    def literal(self, node: _Node) -> Literal:
        lexical, datatype = node.args
        try:
            return Literal(lexical, datatype)
        except ValueError as e:
            self.r.fail(str(e), node.loc)

    def data_range(self, node: _Node) -> DataRange:
        try:
            if node.op == 'enum':
                return Enumeration(tuple(self.literal(lit) for lit in node.args))
            datatype_name, facets = node.args
            datatype_iri = self.r.iri(datatype_name)
            if namespace(datatype_iri) != XSD or local_name(datatype_iri) not in DATATYPES:
                raise UnsupportedConstructException('Datatype ' + datatype_iri + ' is outside the supported subset')
            return FacetRestriction(DATATYPES[local_name(datatype_iri)],
                                    tuple((f.args[0], self.literal(f.args[1])) for f in facets))
        except ValueError as e:
            self.r.fail(str(e), node.loc)

    def expression(self, node) -> ClassExpression:
        op = node.op
        if op == 'named':
            iri = self.r.resolve(node.args[0], EntityKind.Class)
            self.referenced.append((EntityKind.Class, iri))
            return Named(iri)
        if op == 'oneof':
            individuals = tuple(self.r.resolve(n, EntityKind.NamedIndividual) for n in node.args)
            self.referenced += [(EntityKind.NamedIndividual, i) for i in individuals]
            return ObjectOneOf(individuals)
        if op == 'not':
            return ComplementOf(self.expression(node.args[0]))
        if op in ('and', 'or'):
            operands = tuple(self.expression(n) for n in node.args)
            return IntersectionOf(operands) if op == 'and' else UnionOf(operands)
        if op in ('some', 'only', 'card'):
            return self._restriction(node)
        self.r.fail('a data range is not a class expression', node.loc)

    def _restriction(self, node: _Node) -> ClassExpression:
        name = node.args[0]
        filler = node.args[1] if node.op != 'card' else node.args[3]
        hint = None
        if isinstance(filler, _Node):
            hint = EntityKind.DataProperty if filler.op in ('enum', 'facets') else EntityKind.ObjectProperty
        kind = self.r.property_kind(name, hint)
        prop = self.r.resolve(name, kind)
        self.referenced.append((kind, prop))

        if kind == EntityKind.DataProperty:
            if filler is not None and filler.op not in ('enum', 'facets'):
                self.r.fail('data property ' + prop + ' needs a data range', node.loc)
            rng = self.data_range(filler) if filler is not None else None
            if node.op == 'some':
                return DataSome(prop, rng)
            if node.op == 'only':
                return DataOnly(prop, rng)
            return DataCardinality(prop, node.args[1], node.args[2], rng)

        if filler is not None and filler.op in ('enum', 'facets'):
            self.r.fail('object property ' + prop + ' cannot take a data range', node.loc)
        fill = self.expression(filler) if filler is not None else None
        if node.op == 'some':
            return ObjectSome(prop, fill)
        if node.op == 'only':
            return ObjectOnly(prop, fill)
        return ObjectCardinality(prop, node.args[1], node.args[2], fill)
