from core.enums import EntityKind, Datatype, Facet, CardinalityMode, PropertyKind
from dataclasses import dataclass, field, replace
from typing import FrozenSet, Iterable, Iterator, Optional, Set, Tuple, Union
import re

OWL = 'http://www.w3.org/2002/07/owl#'
RDFS = 'http://www.w3.org/2000/01/rdf-schema#'
XSD = 'http://www.w3.org/2001/XMLSchema#'
OWL_THING = OWL + 'Thing'
OWL_NOTHING = OWL + 'Nothing'
BUILTIN_IRIS = {OWL_THING, OWL_NOTHING}

integer_lexical = re.compile(r'^[+-]?\d+$')
decimal_lexical = re.compile(r'^[+-]?\d+\.\d+$')
slug_junk = re.compile(r'[^a-z0-9]+')

LOWER_FACETS = (Facet.MinInclusive, Facet.MinExclusive)
UPPER_FACETS = (Facet.MaxInclusive, Facet.MaxExclusive)
FACET_ORDER = {facet: i for i, facet in enumerate(Facet)}


def infer_datatype(lexical: str) -> Datatype:
    if integer_lexical.match(lexical):
        return Datatype.integer
    if decimal_lexical.match(lexical):
        return Datatype.float
    return Datatype.string


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: Datatype

    def __post_init__(self):
        if self.datatype == Datatype.integer and not integer_lexical.match(self.lexical):
            raise ValueError(self.lexical + ' is not an integer lexical form')
        if self.datatype == Datatype.float and not (decimal_lexical.match(self.lexical) or
                                                    integer_lexical.match(self.lexical)):
            raise ValueError(self.lexical + ' is not a float lexical form')

    @property
    def value(self):
        if self.datatype == Datatype.integer:
            return int(self.lexical)
        if self.datatype == Datatype.float:
            return float(self.lexical)
        return self.lexical

    @property
    def numeric(self) -> bool:
        return self.datatype != Datatype.string


def make_literal(lexical: str) -> Literal:
    return Literal(lexical, infer_datatype(lexical))


# Data ranges

@dataclass(frozen=True)
class Enumeration:
    literals: Tuple[Literal, ...]

    def __post_init__(self):
        if not self.literals:
            raise ValueError('Enumeration needs at least one literal')


@dataclass(frozen=True)
class FacetRestriction:
    base: Datatype
    facets: Tuple[Tuple[Facet, Literal], ...]

    def __post_init__(self):
        if not self.facets:
            raise ValueError('FacetRestriction needs at least one facet')
        lower = [f for f, _ in self.facets if f in LOWER_FACETS]
        upper = [f for f, _ in self.facets if f in UPPER_FACETS]
        if len(lower) > 1 or len(upper) > 1 or len(lower) + len(upper) != len(self.facets):
            raise ValueError('FacetRestriction takes at most one lower and one upper bound')
        for _, bound in self.facets:
            if self.base == Datatype.string or not bound.numeric:
                raise ValueError('Facet bounds must be numeric')
            if self.base == Datatype.integer and bound.datatype != Datatype.integer:
                raise ValueError('Bound ' + bound.lexical + ' does not fit xsd:integer')


DataRange = Union[Enumeration, FacetRestriction]


# Class expressions

@dataclass(frozen=True)
class Named:
    iri: str


@dataclass(frozen=True)
class ComplementOf:
    operand: 'ClassExpression'


@dataclass(frozen=True)
class UnionOf:
    operands: Tuple['ClassExpression', ...]

    def __post_init__(self):
        if len(self.operands) < 2:
            raise ValueError('UnionOf needs at least two operands')


@dataclass(frozen=True)
class IntersectionOf:
    operands: Tuple['ClassExpression', ...]

    def __post_init__(self):
        if len(self.operands) < 2:
            raise ValueError('IntersectionOf needs at least two operands')


@dataclass(frozen=True)
class ObjectOneOf:
    individuals: Tuple[str, ...]

    def __post_init__(self):
        if not self.individuals:
            raise ValueError('ObjectOneOf needs at least one individual')


@dataclass(frozen=True)
class ObjectSome:
    prop: str
    filler: 'ClassExpression'


@dataclass(frozen=True)
class ObjectOnly:
    prop: str
    filler: 'ClassExpression'


@dataclass(frozen=True)
class ObjectCardinality:
    prop: str
    mode: CardinalityMode
    n: int
    filler: Optional['ClassExpression'] = None


@dataclass(frozen=True)
class DataSome:
    prop: str
    data_range: DataRange


@dataclass(frozen=True)
class DataOnly:
    prop: str
    data_range: DataRange


@dataclass(frozen=True)
class DataCardinality:
    prop: str
    mode: CardinalityMode
    n: int
    data_range: Optional[DataRange] = None


ClassExpression = Union[Named, ComplementOf, UnionOf, IntersectionOf, ObjectOneOf, ObjectSome, ObjectOnly,
                        ObjectCardinality, DataSome, DataOnly, DataCardinality]

OBJECT_RESTRICTIONS = (ObjectSome, ObjectOnly, ObjectCardinality)
DATA_RESTRICTIONS = (DataSome, DataOnly, DataCardinality)

THING = Named(OWL_THING)
NOTHING = Named(OWL_NOTHING)


# Axioms

@dataclass(frozen=True)
class SubClassOf:
    sub: ClassExpression
    sup: ClassExpression


@dataclass(frozen=True)
class EquivalentClasses:
    operands: Tuple[ClassExpression, ...]

    def __post_init__(self):
        if len(self.operands) < 2:
            raise ValueError('EquivalentClasses needs at least two class expressions')


@dataclass(frozen=True)
class EquivalentProperties:
    p1: str
    p2: str
    kind: PropertyKind


@dataclass(frozen=True)
class ClassAssertion:
    cls: ClassExpression
    individual: str


@dataclass(frozen=True)
class ObjectFact:
    subject: str
    prop: str
    target: str


@dataclass(frozen=True)
class DataFact:
    subject: str
    prop: str
    value: Literal


Axiom = Union[SubClassOf, EquivalentClasses, EquivalentProperties, ClassAssertion, ObjectFact, DataFact]


@dataclass(frozen=True)
class Entity:
    kind: EntityKind
    iri: str
    label: str = ''


@dataclass(frozen=True)
class Ontology:
    iri: str
    entities: FrozenSet[Entity] = frozenset()
    axioms: Tuple[Axiom, ...] = ()
    prefixes: Tuple[Tuple[str, str], ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'entities', frozenset(self.entities))
        object.__setattr__(self, 'axioms', tuple(self.axioms))
        seen = set()
        for entity in self.entities:
            if (entity.kind, entity.iri) in seen:
                raise ValueError('Entity ' + entity.iri + ' declared twice as ' + entity.kind.value)
            seen.add((entity.kind, entity.iri))

    def entity(self, iri: str, kind: EntityKind = None) -> Optional[Entity]:
        for e in self.entities:
            if e.iri == iri and (kind is None or e.kind == kind):
                return e
        return None

    def of_kind(self, kind: EntityKind) -> Set[str]:
        return {e.iri for e in self.entities if e.kind == kind}

    def label(self, iri: str) -> str:
        e = self.entity(iri)
        return e.label if e is not None and e.label else iri

    def with_entities(self, entities: Iterable[Entity]) -> 'Ontology':
        known = {(e.kind, e.iri) for e in self.entities}
        extra = set()
        for e in entities:
            if (e.kind, e.iri) not in known:
                known.add((e.kind, e.iri))
                extra.add(e)
        return replace(self, entities=self.entities | extra)

    def with_axioms(self, axioms: Iterable[Axiom]) -> 'Ontology':
        return replace(self, axioms=self.axioms + tuple(axioms))


# Canonical form

def sort_key(expr) -> str:
    if isinstance(expr, Literal):
        return '"' + expr.lexical + '"^^' + expr.datatype.value
    if isinstance(expr, Enumeration):
        return '{' + ' '.join(sort_key(lit) for lit in expr.literals) + '}'
    if isinstance(expr, FacetRestriction):
        return expr.base.value + '[' + ' '.join(f.value + ' ' + sort_key(lit) for f, lit in expr.facets) + ']'
    if isinstance(expr, Named):
        return expr.iri
    if isinstance(expr, ComplementOf):
        return 'not(' + sort_key(expr.operand) + ')'
    if isinstance(expr, UnionOf):
        return 'or(' + ' '.join(sort_key(op) for op in expr.operands) + ')'
    if isinstance(expr, IntersectionOf):
        return 'and(' + ' '.join(sort_key(op) for op in expr.operands) + ')'
    if isinstance(expr, ObjectOneOf):
        return 'oneof(' + ' '.join(expr.individuals) + ')'
    if isinstance(expr, ObjectSome):
        return 'some(' + expr.prop + ' ' + sort_key(expr.filler) + ')'
    if isinstance(expr, ObjectOnly):
        return 'only(' + expr.prop + ' ' + sort_key(expr.filler) + ')'
    if isinstance(expr, ObjectCardinality):
        filler = ' ' + sort_key(expr.filler) if expr.filler is not None else ''
        return expr.mode.value + '(' + expr.prop + ' ' + str(expr.n) + filler + ')'
    if isinstance(expr, DataSome):
        return 'dsome(' + expr.prop + ' ' + sort_key(expr.data_range) + ')'
    if isinstance(expr, DataOnly):
        return 'donly(' + expr.prop + ' ' + sort_key(expr.data_range) + ')'
    if isinstance(expr, DataCardinality):
        rng = ' ' + sort_key(expr.data_range) if expr.data_range is not None else ''
        return 'd' + expr.mode.value + '(' + expr.prop + ' ' + str(expr.n) + rng + ')'
    raise TypeError('Not a class expression: ' + repr(expr))


def _canonical_range(rng: DataRange) -> DataRange:
    if isinstance(rng, Enumeration):
        return Enumeration(tuple(sorted(set(rng.literals), key=sort_key)))
    return FacetRestriction(rng.base, tuple(sorted(rng.facets, key=lambda f: FACET_ORDER[f[0]])))


def canonicalize(expr):
    if isinstance(expr, (Named, Literal)):
        return expr
    if isinstance(expr, (Enumeration, FacetRestriction)):
        return _canonical_range(expr)
    if isinstance(expr, ComplementOf):
        return ComplementOf(canonicalize(expr.operand))
    if isinstance(expr, (UnionOf, IntersectionOf)):
        return type(expr)(tuple(sorted((canonicalize(op) for op in expr.operands), key=sort_key)))
    if isinstance(expr, ObjectOneOf):
        return ObjectOneOf(tuple(sorted(set(expr.individuals))))
    if isinstance(expr, (ObjectSome, ObjectOnly)):
        return type(expr)(expr.prop, canonicalize(expr.filler))
    if isinstance(expr, ObjectCardinality):
        filler = canonicalize(expr.filler) if expr.filler is not None else None
        return ObjectCardinality(expr.prop, expr.mode, expr.n, filler)
    if isinstance(expr, (DataSome, DataOnly)):
        return type(expr)(expr.prop, _canonical_range(expr.data_range))
    if isinstance(expr, DataCardinality):
        rng = _canonical_range(expr.data_range) if expr.data_range is not None else None
        return DataCardinality(expr.prop, expr.mode, expr.n, rng)
    raise TypeError('Not a class expression: ' + repr(expr))


def structurally_equal(a: ClassExpression, b: ClassExpression) -> bool:
    return canonicalize(a) == canonicalize(b)


def canonical_axiom(axiom: Axiom) -> Axiom:
    if isinstance(axiom, SubClassOf):
        return SubClassOf(canonicalize(axiom.sub), canonicalize(axiom.sup))
    if isinstance(axiom, EquivalentClasses):
        return EquivalentClasses(tuple(sorted((canonicalize(op) for op in axiom.operands), key=sort_key)))
    if isinstance(axiom, EquivalentProperties):
        p1, p2 = sorted((axiom.p1, axiom.p2))
        return EquivalentProperties(p1, p2, axiom.kind)
    if isinstance(axiom, ClassAssertion):
        return ClassAssertion(canonicalize(axiom.cls), axiom.individual)
    return axiom


def ontologies_equal(a: Ontology, b: Ontology) -> bool:
    return a.iri == b.iri and a.entities == b.entities and \
        {canonical_axiom(x) for x in a.axioms} == {canonical_axiom(x) for x in b.axioms}


# Traversal

def subexpressions(expr: ClassExpression) -> Iterator[ClassExpression]:
    yield expr
    if isinstance(expr, ComplementOf):
        yield from subexpressions(expr.operand)
    elif isinstance(expr, (UnionOf, IntersectionOf)):
        for op in expr.operands:
            yield from subexpressions(op)
    elif isinstance(expr, (ObjectSome, ObjectOnly)):
        yield from subexpressions(expr.filler)
    elif isinstance(expr, ObjectCardinality) and expr.filler is not None:
        yield from subexpressions(expr.filler)


def axiom_expressions(axiom: Axiom) -> Tuple[ClassExpression, ...]:
    if isinstance(axiom, SubClassOf):
        return axiom.sub, axiom.sup
    if isinstance(axiom, EquivalentClasses):
        return axiom.operands
    if isinstance(axiom, ClassAssertion):
        return axiom.cls,
    return ()


def referenced_iris(axiom: Axiom) -> Set[Tuple[EntityKind, str]]:
    refs = set()
    for expr in axiom_expressions(axiom):
        for sub in subexpressions(expr):
            if isinstance(sub, Named):
                refs.add((EntityKind.Class, sub.iri))
            elif isinstance(sub, ObjectOneOf):
                refs.update((EntityKind.NamedIndividual, i) for i in sub.individuals)
            elif isinstance(sub, OBJECT_RESTRICTIONS):
                refs.add((EntityKind.ObjectProperty, sub.prop))
            elif isinstance(sub, DATA_RESTRICTIONS):
                refs.add((EntityKind.DataProperty, sub.prop))
    if isinstance(axiom, EquivalentProperties):
        kind = EntityKind.ObjectProperty if axiom.kind == PropertyKind.object else EntityKind.DataProperty
        refs.update({(kind, axiom.p1), (kind, axiom.p2)})
    elif isinstance(axiom, ClassAssertion):
        refs.add((EntityKind.NamedIndividual, axiom.individual))
    elif isinstance(axiom, ObjectFact):
        refs.update({(EntityKind.NamedIndividual, axiom.subject), (EntityKind.ObjectProperty, axiom.prop),
                     (EntityKind.NamedIndividual, axiom.target)})
    elif isinstance(axiom, DataFact):
        refs.update({(EntityKind.NamedIndividual, axiom.subject), (EntityKind.DataProperty, axiom.prop)})
    return refs


# IRIs referenced by some axiom but never declared with the matching kind
def undeclared_iris(onto: Ontology) -> Set[str]:
    declared = {(e.kind, e.iri) for e in onto.entities}
    missing = set()
    for axiom in onto.axioms:
        for kind, iri in referenced_iris(axiom):
            if iri not in BUILTIN_IRIS and (kind, iri) not in declared:
                missing.add(iri)
    return missing


def merge_ontologies(first: Ontology, second: Ontology) -> Ontology:
    merged = first.with_entities(second.entities)
    known = set(first.axioms)
    extra = []
    for axiom in second.axioms:
        if axiom not in known:
            known.add(axiom)
            extra.append(axiom)
    return replace(merged.with_axioms(extra), prefixes=_merge_prefixes(first.prefixes, second.prefixes))


def _merge_prefixes(a, b) -> Tuple[Tuple[str, str], ...]:
    names = {name for name, _ in a}
    return tuple(a) + tuple((name, ns) for name, ns in b if name not in names)


def slug(label: str) -> str:
    return slug_junk.sub('_', label.lower()).strip('_') or 'entity'


def mint_iri(base: str, label: str, taken: Set[str]) -> str:
    stem = base.rstrip('#') + '#' + slug(label)
    iri = stem
    n = 2
    while iri in taken:
        iri = stem + '_' + str(n)
        n += 1
    taken.add(iri)
    return iri


def local_name(iri: str) -> str:
    for sep in ('#', '/', ':'):
        if sep in iri:
            return iri.rsplit(sep, 1)[-1]
    return iri


def namespace(iri: str) -> str:
    return iri[:len(iri) - len(local_name(iri))]
