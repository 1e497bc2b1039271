from core.abox_checker import ABox, Individual, close_abox
from core.enums import EntityKind, Datatype, Facet, CardinalityMode, PropertyKind
from core.owl_model import Ontology, Entity, Literal, Enumeration, FacetRestriction, Named, ComplementOf, \
    UnionOf, IntersectionOf, ObjectOneOf, ObjectSome, ObjectOnly, ObjectCardinality, DataSome, DataOnly, \
    DataCardinality, SubClassOf, EquivalentClasses, EquivalentProperties, ClassAssertion, ObjectFact, DataFact, \
    THING, NOTHING
from typing import NamedTuple, List
import hypothesis.strategies as st

RANDOM_BASE = 'https://example.org/random#'

LITERALS = [
    Literal('III', Datatype.string),
    Literal('R15', Datatype.string),
    Literal('R 15', Datatype.string),
    Literal('R14', Datatype.string),
    Literal('300', Datatype.integer),
    Literal('250', Datatype.integer),
    Literal('-5', Datatype.integer),
    Literal('3.0', Datatype.float),
    Literal('2.5', Datatype.float),
]
ODD_LITERALS = [
    Literal('a "quoted" value', Datatype.string),
    Literal('back\\slash', Datatype.string),
]
LABELS = ['beam', 'building', 'in', 'fire resistance limit', 'has part', 'height', 'wall', 'door', 'capacity',
          'storey', 'only', 'degree of fire resistance', 'Types', 'zone', 'value-rated', 'that-span', 'Self-closing']


class Vocabulary(NamedTuple):
    classes: List[str]
    objects: List[str]
    datas: List[str]
    individuals: List[str]


def literals():
    return st.sampled_from(LITERALS + ODD_LITERALS)


@st.composite
def facet_restrictions(draw):
    base = draw(st.sampled_from([Datatype.integer, Datatype.float]))
    bounds = [b for b in LITERALS if b.numeric and (base == Datatype.float or b.datatype == Datatype.integer)]
    lower = draw(st.one_of(st.none(), st.sampled_from([Facet.MinInclusive, Facet.MinExclusive])))
    upper = draw(st.one_of(st.none(), st.sampled_from([Facet.MaxInclusive, Facet.MaxExclusive])))
    if lower is None and upper is None:
        lower = Facet.MinInclusive
    facets = tuple((f, draw(st.sampled_from(bounds))) for f in (lower, upper) if f is not None)
    return FacetRestriction(base, facets)


def data_ranges():
    enumerations = st.lists(literals(), min_size=1, max_size=2, unique=True).map(
        lambda lits: Enumeration(tuple(lits)))
    return st.one_of(enumerations, facet_restrictions())


def expressions(vocab: Vocabulary, max_leaves: int = 6):
    atoms = [st.sampled_from([Named(c) for c in vocab.classes] + [THING, NOTHING])]
    if vocab.individuals:
        atoms.append(st.lists(st.sampled_from(vocab.individuals), min_size=1, max_size=2, unique=True).map(
            lambda inds: ObjectOneOf(tuple(inds))))
    if vocab.datas:
        datas = st.sampled_from(vocab.datas)
        modes = st.sampled_from(list(CardinalityMode))
        atoms += [
            st.builds(DataSome, datas, data_ranges()),
            st.builds(DataOnly, datas, data_ranges()),
            st.builds(DataCardinality, datas, modes, st.integers(0, 3), st.one_of(st.none(), data_ranges())),
        ]

    def extend(children):
        grown = [
            children.map(ComplementOf),
            st.lists(children, min_size=2, max_size=3).map(lambda ops: UnionOf(tuple(ops))),
            st.lists(children, min_size=2, max_size=3).map(lambda ops: IntersectionOf(tuple(ops))),
        ]
        if vocab.objects:
            objects = st.sampled_from(vocab.objects)
            grown += [
                st.builds(ObjectSome, objects, children),
                st.builds(ObjectOnly, objects, children),
                st.builds(ObjectCardinality, objects, st.sampled_from(list(CardinalityMode)), st.integers(0, 3),
                          st.one_of(st.none(), children)),
            ]
        return st.one_of(grown)

    return st.recursive(st.one_of(atoms), extend, max_leaves=max_leaves)


@st.composite
def ontologies(draw):
    n_classes = draw(st.integers(1, 4))
    n_objects = draw(st.integers(1, 2))
    n_datas = draw(st.integers(1, 2))
    n_individuals = draw(st.integers(0, 3))
    locals_ = (['c' + str(i) for i in range(n_classes)], ['op' + str(i) for i in range(n_objects)],
               ['dp' + str(i) for i in range(n_datas)], ['i' + str(i) for i in range(n_individuals)])
    kinds = (EntityKind.Class, EntityKind.ObjectProperty, EntityKind.DataProperty, EntityKind.NamedIndividual)

    total = sum(len(names) for names in locals_)
    labels = draw(st.lists(st.sampled_from(LABELS), min_size=total, max_size=total, unique=True)
                  if total <= len(LABELS) else st.just([''] * total))
    labelled = draw(st.lists(st.booleans(), min_size=total, max_size=total))

    entities = []
    position = 0
    for kind, names in zip(kinds, locals_):
        for name in names:
            label = labels[position] if labelled[position] else ''
            entities.append(Entity(kind, RANDOM_BASE + name, label))
            position += 1

    vocab = Vocabulary(*[[RANDOM_BASE + n for n in names] for names in locals_])
    expr = expressions(vocab, max_leaves=5)
    classes = st.sampled_from(vocab.classes)
    axioms = st.one_of(
        st.builds(lambda c, e: EquivalentClasses((Named(c), e)), classes, expr),
        st.builds(lambda c, e: SubClassOf(Named(c), e), classes, expr),
        st.builds(lambda c, a, b: EquivalentClasses((Named(c), a, b)), classes, expr, expr),
    )
    found = draw(st.lists(axioms, min_size=1, max_size=4))
    if n_objects > 1 and draw(st.booleans()):
        found.append(EquivalentProperties(vocab.objects[0], vocab.objects[1], PropertyKind.object))
    if n_datas > 1 and draw(st.booleans()):
        found.append(EquivalentProperties(vocab.datas[0], vocab.datas[1], PropertyKind.data))
    for ind in vocab.individuals:
        if draw(st.booleans()):
            found.append(ClassAssertion(draw(expr), ind))
        if draw(st.booleans()):
            found.append(ObjectFact(ind, draw(st.sampled_from(vocab.objects)),
                                    draw(st.sampled_from(vocab.individuals))))
        if draw(st.booleans()):
            found.append(DataFact(ind, draw(st.sampled_from(vocab.datas)), draw(literals())))

    return Ontology(RANDOM_BASE.rstrip('#'), frozenset(entities), tuple(found), (('', RANDOM_BASE),))


def vocabulary_of(onto: Ontology, individuals: List[str]) -> Vocabulary:
    return Vocabulary(sorted(onto.of_kind(EntityKind.Class)), sorted(onto.of_kind(EntityKind.ObjectProperty)),
                      sorted(onto.of_kind(EntityKind.DataProperty)), individuals)


@st.composite
def closed_aboxes(draw, onto: Ontology, base: str, max_individuals: int = 8):
    classes = sorted(onto.of_kind(EntityKind.Class))
    objects = sorted(onto.of_kind(EntityKind.ObjectProperty))
    datas = sorted(onto.of_kind(EntityKind.DataProperty))
    props = draw(st.lists(st.sampled_from(objects + datas), unique=True, min_size=1, max_size=4))
    names = [base + 'x' + str(i) for i in range(draw(st.integers(1, max_individuals)))]

    individuals = []
    for name in names:
        types = draw(st.lists(st.sampled_from(classes), unique=True, max_size=2))
        facts = draw(st.lists(st.tuples(st.sampled_from(props), st.sampled_from(names), st.sampled_from(LITERALS)),
                              max_size=3))
        individuals.append(Individual(name, tuple(Named(c) for c in types),
                                      tuple((p, t) for p, t, _ in facts if p in objects),
                                      tuple((p, v) for p, _, v in facts if p in datas)))
    return close_abox(ABox(tuple(individuals)), onto)
