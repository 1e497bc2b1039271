from core import checker_log, strict_literals as configured_strict_literals
from core.enums import EntityKind, CardinalityMode, Datatype, Facet
from core.exceptions import OpenPropertyException, UnstratifiedDefinitionException
from core.owl_model import Ontology, Literal, Enumeration, Named, ComplementOf, UnionOf, \
    IntersectionOf, ObjectOneOf, ObjectSome, ObjectOnly, ObjectCardinality, DataSome, DataOnly, DataCardinality, \
    SubClassOf, EquivalentClasses, EquivalentProperties, ClassAssertion, ObjectFact, DataFact, ClassExpression, \
    DataRange, Axiom, Entity, OWL_THING, OWL_NOTHING, NOTHING, merge_ontologies
from core.serializer import render_axiom, parse_manchester_subset
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Set, Tuple
import re

whitespace = re.compile(r'\s+')


@dataclass(frozen=True)
class Individual:
    iri: str
    asserted_classes: Tuple[ClassExpression, ...] = ()
    object_facts: Tuple[Tuple[str, str], ...] = ()
    data_facts: Tuple[Tuple[str, Literal], ...] = ()

    def axioms(self) -> List[Axiom]:
        found = [ClassAssertion(c, self.iri) for c in self.asserted_classes]
        found += [ObjectFact(self.iri, p, t) for p, t in self.object_facts]
        found += [DataFact(self.iri, p, v) for p, v in self.data_facts]
        return found


@dataclass(frozen=True)
class ABox:
    individuals: Tuple[Individual, ...] = ()

    def get(self, iri: str) -> Optional[Individual]:
        for ind in self.individuals:
            if ind.iri == iri:
                return ind
        return None

    def iris(self) -> List[str]:
        return [ind.iri for ind in self.individuals]

    def axioms(self) -> List[Axiom]:
        return [axiom for ind in self.individuals for axiom in ind.axioms()]


@dataclass(frozen=True)
class TraceStep:
    item: Axiom
    sentence: str


@dataclass(frozen=True)
class Violation:
    individual: str
    gci: Axiom
    trace: Tuple[TraceStep, ...]


@dataclass
class ComplianceReport:
    classifications: List[Tuple[str, str]] = field(default_factory=list)
    violations: List[Violation] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.violations


def abox_from_ontology(onto: Ontology) -> ABox:
    types = {}
    objects = {}
    data = {}
    order = sorted(onto.of_kind(EntityKind.NamedIndividual))

    def touch(iri: str):
        if iri not in types:
            types[iri] = []
            objects[iri] = []
            data[iri] = []

    for iri in order:
        touch(iri)
    for axiom in onto.axioms:
        if isinstance(axiom, ClassAssertion):
            touch(axiom.individual)
            types[axiom.individual].append(axiom.cls)
        elif isinstance(axiom, ObjectFact):
            touch(axiom.subject)
            touch(axiom.target)
            objects[axiom.subject].append((axiom.prop, axiom.target))
        elif isinstance(axiom, DataFact):
            touch(axiom.subject)
            data[axiom.subject].append((axiom.prop, axiom.value))

    individuals = tuple(Individual(iri, tuple(types[iri]), tuple(objects[iri]), tuple(data[iri]))
                        for iri in sorted(types))
    checker_log.info('ABox holds %d individuals', len(individuals))
    return ABox(individuals)


class _Properties:
    """Union-find over the EquivalentProperties axioms of an ontology."""

    def __init__(self, onto: Ontology):
        self.parent = {}
        self.axioms = [a for a in onto.axioms if isinstance(a, EquivalentProperties)]
        for axiom in self.axioms:
            self.union(axiom.p1, axiom.p2)

    def find(self, prop: str) -> str:
        root = prop
        while self.parent.get(root, root) != root:
            root = self.parent[root]
        while prop != root:
            self.parent[prop], prop = root, self.parent.get(prop, prop)
        return root

    def union(self, a: str, b: str):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def same(self, a: str, b: str) -> bool:
        return self.find(a) == self.find(b)

    def linking(self, props: Set[str]) -> List[EquivalentProperties]:
        roots = {self.find(p) for p in props}
        return [a for a in self.axioms if self.find(a.p1) in roots]


def _closes(expr: ClassExpression, prop: str, props: _Properties) -> bool:
    if isinstance(expr, ObjectOnly):
        return props.same(expr.prop, prop)
    if isinstance(expr, ObjectCardinality):
        return expr.mode != CardinalityMode.Min and props.same(expr.prop, prop)
    return False


def _data_closes(expr: ClassExpression, prop: str) -> bool:
    if isinstance(expr, DataOnly):
        return expr.prop == prop
    if isinstance(expr, DataCardinality):
        return expr.mode != CardinalityMode.Min and expr.prop == prop
    return False


def close_individual(ind: Individual, onto: Ontology) -> Individual:
    props = _Properties(onto)
    added = []
    for prop in sorted(onto.of_kind(EntityKind.ObjectProperty)):
        if any(isinstance(c, ObjectOnly) and c.prop == prop for c in ind.asserted_classes):
            continue
        targets = sorted({t for p, t in ind.object_facts if props.same(p, prop)})
        added.append(ObjectOnly(prop, ObjectOneOf(tuple(targets)) if targets else NOTHING))
    for prop in sorted(onto.of_kind(EntityKind.DataProperty)):
        if any(_data_closes(c, prop) for c in ind.asserted_classes):
            continue
        values = []
        for p, v in ind.data_facts:
            if props.same(p, prop) and v not in values:
                values.append(v)
        added.append(DataOnly(prop, Enumeration(tuple(values))) if values
                     else DataCardinality(prop, CardinalityMode.Max, 0))
    if not added:
        return ind
    checker_log.debug('Closed %s with %d types', ind.iri, len(added))
    return replace(ind, asserted_classes=ind.asserted_classes + tuple(added))


def close_abox(abox: ABox, onto: Ontology) -> ABox:
    return ABox(tuple(close_individual(ind, onto) for ind in abox.individuals))


def literals_equal(a: Literal, b: Literal, strict: bool = False) -> bool:
    if a.numeric and b.numeric:
        return a.value == b.value
    if a.numeric or b.numeric:
        return False
    if strict:
        return a.lexical == b.lexical
    return whitespace.sub('', a.lexical) == whitespace.sub('', b.lexical)


def in_data_range(value: Literal, rng: DataRange, strict: bool = False) -> bool:
    if isinstance(rng, Enumeration):
        return any(literals_equal(value, lit, strict) for lit in rng.literals)
    if not value.numeric or (rng.base == Datatype.integer and value.datatype != Datatype.integer):
        return False
    for facet, bound in rng.facets:
        if facet == Facet.MinInclusive and not value.value >= bound.value:
            return False
        if facet == Facet.MinExclusive and not value.value > bound.value:
            return False
        if facet == Facet.MaxInclusive and not value.value <= bound.value:
            return False
        if facet == Facet.MaxExclusive and not value.value < bound.value:
            return False
    return True


def _count_fits(mode: CardinalityMode, count: int, n: int) -> bool:
    if mode == CardinalityMode.Min:
        return count >= n
    if mode == CardinalityMode.Max:
        return count <= n
    return count == n


def _references(expr: ClassExpression, positive: bool = True):
    """Named classes an expression reads, with the polarity they are read at."""
    if isinstance(expr, Named):
        if expr.iri not in (OWL_THING, OWL_NOTHING):
            yield expr.iri, positive
    elif isinstance(expr, ComplementOf):
        yield from _references(expr.operand, not positive)
    elif isinstance(expr, (UnionOf, IntersectionOf)):
        for op in expr.operands:
            yield from _references(op, positive)
    elif isinstance(expr, (ObjectSome, ObjectOnly)):
        yield from _references(expr.filler, positive)
    elif isinstance(expr, ObjectCardinality) and expr.filler is not None:
        if expr.mode != CardinalityMode.Max:
            yield from _references(expr.filler, positive)
        if expr.mode != CardinalityMode.Min:
            yield from _references(expr.filler, not positive)


def _defined_names(axiom: EquivalentClasses) -> List[str]:
    return [op.iri for op in axiom.operands if isinstance(op, Named) and op.iri not in (OWL_THING, OWL_NOTHING)]


def _components(edges: Dict[str, Set[Tuple[str, bool]]]) -> List[Set[str]]:
    """Strongly connected components of the definition graph, dependencies first."""
    order = {}
    low = {}
    stack = []
    on_stack = set()
    found = []

    def visit(node: str):
        order[node] = low[node] = len(order)
        stack.append(node)
        on_stack.add(node)
        for succ, _ in sorted(edges.get(node, ())):
            if succ not in order:
                visit(succ)
                low[node] = min(low[node], low[succ])
            elif succ in on_stack:
                low[node] = min(low[node], order[succ])
        if low[node] == order[node]:
            component = set()
            while True:
                top = stack.pop()
                on_stack.discard(top)
                component.add(top)
                if top == node:
                    break
            found.append(component)

    for node in sorted(edges):
        if node not in order:
            visit(node)
    return found


def stratify(onto: Ontology) -> List[List[EquivalentClasses]]:
    """Groups the class definitions so that every group only reads the negation of earlier groups."""
    definitions = [a for a in onto.axioms if isinstance(a, EquivalentClasses) and _defined_names(a)]
    edges = {}
    for axiom in definitions:
        refs = {ref for op in axiom.operands for ref in _references(op)}
        for name in _defined_names(axiom):
            edges.setdefault(name, set()).update(refs)
    components = _components(edges)
    index = {name: i for i, component in enumerate(components) for name in component}
    for name in sorted(edges):
        for ref, positive in sorted(edges[name]):
            if not positive and index.get(ref) == index[name]:
                raise UnstratifiedDefinitionException(
                    'Definition of ' + name + ' reads the negation of ' + ref + ', which depends on ' + name)
    strata = [[] for _ in components]
    for axiom in definitions:
        strata[index[_defined_names(axiom)[0]]].append(axiom)
    checker_log.debug('%d class definitions split into %d strata', len(definitions), len(components))
    return [stratum for stratum in strata if stratum]


class FiniteModel:
    """Closed-world reading of an ontology over the individuals of an ABox."""

    def __init__(self, onto: Ontology, abox: ABox, strict_literals: bool = None,
                 named: Dict[str, Set[str]] = None):
        self.onto = onto
        self.abox = abox
        self.strict = configured_strict_literals if strict_literals is None else strict_literals
        self.props = _Properties(onto)
        self.individuals = {ind.iri: ind for ind in abox.individuals}
        for ind in abox.individuals:
            for _, target in ind.object_facts:
                self.individuals.setdefault(target, Individual(target))
        self.domain = sorted(self.individuals)
        self.objects = {}
        self.data = {}
        for ind in self.individuals.values():
            for prop, target in ind.object_facts:
                facts = self.objects.setdefault((ind.iri, self.props.find(prop)), [])
                fact = ObjectFact(ind.iri, prop, target)
                if fact not in facts:
                    facts.append(fact)
            for prop, value in ind.data_facts:
                facts = self.data.setdefault((ind.iri, self.props.find(prop)), [])
                fact = DataFact(ind.iri, prop, value)
                if fact not in facts:
                    facts.append(fact)
        self.named = named if named is not None else self._memberships()

    # Strata settle in dependency order; inside one, each round reads the previous round's extensions
    def _memberships(self) -> Dict[str, Set[str]]:
        self.named = {}
        for ind in self.individuals.values():
            for cls in ind.asserted_classes:
                if isinstance(cls, Named):
                    self.named.setdefault(cls.iri, set()).add(ind.iri)
        rounds = 0
        for stratum in stratify(self.onto):
            while True:
                rounds += 1
                additions = []
                for axiom in stratum:
                    names = _defined_names(axiom)
                    for x in self.domain:
                        if all(x in self.named.get(n, ()) for n in names):
                            continue
                        if any(self.evaluate(x, op) for op in axiom.operands):
                            additions += [(n, x) for n in names]
                fresh = [(n, x) for n, x in additions if x not in self.named.get(n, ())]
                if not fresh:
                    break
                for n, x in fresh:
                    self.named.setdefault(n, set()).add(x)
        checker_log.debug('Class memberships settled after %d rounds', rounds)
        return self.named

    def object_facts(self, x: str, prop: str) -> List[ObjectFact]:
        return self.objects.get((x, self.props.find(prop)), [])

    def data_facts(self, x: str, prop: str) -> List[DataFact]:
        return self.data.get((x, self.props.find(prop)), [])

    def _require_closed(self, x: str, prop: str):
        ind = self.individuals[x]
        if not any(_closes(c, prop, self.props) for c in ind.asserted_classes):
            raise OpenPropertyException('Individual ' + x + ' is not closed on ' + prop +
                                        ', add a "' + prop + ' only ..." type or run with --close')

    def evaluate(self, x: str, expr: ClassExpression, positive: bool = True) -> bool:
        if isinstance(expr, Named):
            if expr.iri == OWL_THING:
                return True
            if expr.iri == OWL_NOTHING:
                return False
            return x in self.named.get(expr.iri, ())
        if isinstance(expr, ObjectOneOf):
            return x in expr.individuals
        if isinstance(expr, ComplementOf):
            return not self.evaluate(x, expr.operand, not positive)
        if isinstance(expr, IntersectionOf):
            return all([self.evaluate(x, op, positive) for op in expr.operands])
        if isinstance(expr, UnionOf):
            return any([self.evaluate(x, op, positive) for op in expr.operands])
        if isinstance(expr, ObjectSome):
            if not positive:
                self._require_closed(x, expr.prop)
            return any([self.evaluate(f.target, expr.filler, positive) for f in self.object_facts(x, expr.prop)])
        if isinstance(expr, ObjectOnly):
            if positive:
                self._require_closed(x, expr.prop)
            return all([self.evaluate(f.target, expr.filler, positive) for f in self.object_facts(x, expr.prop)])
        if isinstance(expr, ObjectCardinality):
            if expr.mode == CardinalityMode.Exact or (expr.mode == CardinalityMode.Max) == positive:
                self._require_closed(x, expr.prop)
            targets = {f.target for f in self.object_facts(x, expr.prop)
                       if expr.filler is None or self.evaluate(f.target, expr.filler, positive)}
            return _count_fits(expr.mode, len(targets), expr.n)
        if isinstance(expr, DataSome):
            return any(in_data_range(f.value, expr.data_range, self.strict) for f in self.data_facts(x, expr.prop))
        if isinstance(expr, DataOnly):
            return all(in_data_range(f.value, expr.data_range, self.strict) for f in self.data_facts(x, expr.prop))
        if isinstance(expr, DataCardinality):
            values = []
            for f in self.data_facts(x, expr.prop):
                if expr.data_range is None or in_data_range(f.value, expr.data_range, self.strict):
                    if not any(literals_equal(f.value, v, self.strict) for v in values):
                        values.append(f.value)
            return _count_fits(expr.mode, len(values), expr.n)
        raise TypeError('Not a class expression: ' + repr(expr))

    def extension(self, expr: ClassExpression) -> Set[str]:
        return {x for x in self.domain if self.evaluate(x, expr)}

    # Facts read while giving expr its value at x, and the properties they were read through
    def why(self, x: str, expr: ClassExpression, value: bool) -> Tuple[List[Axiom], Set[str]]:
        facts = []
        props = set()
        unfolded = set()

        def visit(x: str, expr: ClassExpression, value: bool, positive: bool):
            if isinstance(expr, Named):
                if (x, expr.iri) in unfolded:
                    return
                unfolded.add((x, expr.iri))
                operands = _defining(self.onto, expr)
                if value:
                    operands = [op for op in operands if self.evaluate(x, op, positive)][:1]
                for op in operands:
                    visit(x, op, value, positive)
            elif isinstance(expr, ComplementOf):
                visit(x, expr.operand, not value, not positive)
            elif isinstance(expr, IntersectionOf):
                for op in expr.operands:
                    if value or not self.evaluate(x, op, positive):
                        visit(x, op, value, positive)
            elif isinstance(expr, UnionOf):
                for op in expr.operands:
                    if not value or self.evaluate(x, op, positive):
                        visit(x, op, value, positive)
                        if value:
                            break
            elif isinstance(expr, (ObjectSome, ObjectOnly, ObjectCardinality)):
                props.add(expr.prop)
                for fact in self.object_facts(x, expr.prop):
                    fits = expr.filler is None or self.evaluate(fact.target, expr.filler, positive)
                    if isinstance(expr, ObjectSome) and value and not fits:
                        continue
                    if isinstance(expr, ObjectOnly) and not value and fits:
                        continue
                    facts.append(fact)
                    if expr.filler is not None:
                        visit(fact.target, expr.filler, fits, positive)
                    if isinstance(expr, ObjectSome) and value:
                        break
            elif isinstance(expr, (DataSome, DataOnly, DataCardinality)):
                props.add(expr.prop)
                for fact in self.data_facts(x, expr.prop):
                    fits = expr.data_range is None or in_data_range(fact.value, expr.data_range, self.strict)
                    if isinstance(expr, DataSome) and value and not fits:
                        continue
                    if isinstance(expr, DataOnly) and not value and fits:
                        continue
                    facts.append(fact)
                    if isinstance(expr, DataSome) and value:
                        break

        visit(x, expr, value, True)
        unique = []
        for fact in facts:
            if fact not in unique:
                unique.append(fact)
        return unique, props


def evaluate(ind: Individual, expr: ClassExpression, abox: ABox, onto: Ontology,
             strict_literals: bool = None) -> bool:
    return FiniteModel(onto, abox, strict_literals).evaluate(ind.iri, expr)


def _definitions(onto: Ontology, expr: ClassExpression) -> List[EquivalentClasses]:
    if not isinstance(expr, Named):
        return []
    return [a for a in onto.axioms if isinstance(a, EquivalentClasses) and expr in a.operands]


# Complex class expressions a named class is defined by
def _defining(onto: Ontology, expr: ClassExpression) -> List[ClassExpression]:
    return [op for a in _definitions(onto, expr) for op in a.operands if not isinstance(op, Named)]


def _explain(model: FiniteModel, x: str, gci: Axiom, sub: Optional[ClassExpression], sup: ClassExpression,
             rendering: Ontology) -> Tuple[TraceStep, ...]:
    items = [gci]
    if sub is not None:
        items += _definitions(model.onto, sub)
        items.append(ClassAssertion(sub, x))
    items += _definitions(model.onto, sup)
    facts, props = model.why(x, sup, False)
    items += model.props.linking(props)
    items += facts
    return tuple(TraceStep(item, render_axiom(item, rendering)) for item in items)


def check_compliance(onto: Ontology, abox: ABox, strict_literals: bool = None) -> ComplianceReport:
    model = FiniteModel(onto, abox, strict_literals)
    rendering = merge_ontologies(onto, Ontology(onto.iri, entities=_abox_entities(onto, abox)))
    report = ComplianceReport()

    for gci in onto.axioms:
        if not isinstance(gci, SubClassOf):
            continue
        if not isinstance(gci.sub, Named):
            checker_log.warning('Skipping SubClassOf with a complex left-hand side')
            continue
        for x in model.domain:
            if not model.evaluate(x, gci.sub):
                continue
            if (x, gci.sub.iri) not in report.classifications:
                report.classifications.append((x, gci.sub.iri))
            if not model.evaluate(x, gci.sup):
                report.violations.append(Violation(x, gci, _explain(model, x, gci, gci.sub, gci.sup, rendering)))

    for ind in abox.individuals:
        for cls in ind.asserted_classes:
            if isinstance(cls, Named) or model.evaluate(ind.iri, cls):
                continue
            assertion = ClassAssertion(cls, ind.iri)
            report.violations.append(Violation(ind.iri, assertion,
                                               _explain(model, ind.iri, assertion, None, cls, rendering)))

    checker_log.info('%d classifications, %d violations', len(report.classifications), len(report.violations))
    return report


def _abox_entities(onto: Ontology, abox: ABox):
    known = onto.of_kind(EntityKind.NamedIndividual)
    return frozenset(Entity(EntityKind.NamedIndividual, iri) for iri in abox.iris() if iri not in known)


# A trace replays when its items exist and the violation still holds on the facts it cites
def replay_trace(violation: Violation, onto: Ontology, abox: ABox, strict_literals: bool = None) -> bool:
    if not violation.trace or violation.trace[0].item != violation.gci:
        return False
    known = set(onto.axioms) | set(abox.axioms())
    model = FiniteModel(onto, abox, strict_literals)
    for step in violation.trace:
        if isinstance(step.item, ClassAssertion) and step.item not in known:
            if step.item.individual != violation.individual or \
                    not model.evaluate(step.item.individual, step.item.cls):
                return False
        elif step.item not in known:
            return False

    gci = violation.gci
    sup = gci.sup if isinstance(gci, SubClassOf) else gci.cls
    if isinstance(gci, SubClassOf) and not model.evaluate(violation.individual, gci.sub):
        return False

    cited = {step.item for step in violation.trace}
    ind = abox.get(violation.individual) or Individual(violation.individual)
    kept = replace(ind,
                   object_facts=tuple((p, t) for p, t in ind.object_facts
                                      if ObjectFact(ind.iri, p, t) in cited),
                   data_facts=tuple((p, v) for p, v in ind.data_facts if DataFact(ind.iri, p, v) in cited))
    reduced = ABox(tuple(kept if i.iri == ind.iri else i for i in abox.individuals))
    if abox.get(ind.iri) is None:
        reduced = ABox(reduced.individuals + (kept,))
    replayed = FiniteModel(onto, reduced, model.strict, named=model.named)
    return not any(replayed.evaluate(violation.individual, e) for e in _defining(onto, sup) or [sup])


def format_trace(violation: Violation) -> str:
    return ''.join(str(i) + ') ' + step.sentence + '\n' for i, step in enumerate(violation.trace, start=1))


def load_abox(text: str, onto: Ontology) -> ABox:
    return abox_from_ontology(parse_manchester_subset(text, onto))
