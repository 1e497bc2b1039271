from core import codegen_log, base_iri as configured_base_iri, subject_default as configured_subject_default, \
    requirement_default as configured_requirement_default, terms_path, card_map_path, constr_map_path
from core.enums import SemanticType as T, SemanticRole, Quantifier, EntityKind, PropertyKind, Facet, \
    PREDICATE_TYPES, QUANTIFIER_TYPES
from core.exceptions import ChainCycleException, EmptyRoleSelectionException, UnsupportedConstructException, \
    PIPELINE_EXCEPTIONS
from core.owl_model import Ontology, Entity, Named, ComplementOf, UnionOf, IntersectionOf, ObjectSome, \
    ObjectOnly, ObjectCardinality, DataSome, DataOnly, DataCardinality, Enumeration, FacetRestriction, \
    EquivalentClasses, EquivalentProperties, SubClassOf, ClassExpression, DataRange, make_literal, mint_iri
from core.preprocess import TermRow, TypeRow, RoleRow, preprocess
from core.tsv_ingest import AnnotatedDocument, read_tsv
from core.vocab import CardMap, ConstrMap, TermVocabulary, constr_lookup, resolve_cardinality, \
    load_card_map, load_constr_map, load_term_vocabulary
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Set, Tuple

ENTITY_KINDS = {
    T.Class: EntityKind.Class,
    T.Relation: EntityKind.ObjectProperty,
    T.Property: EntityKind.DataProperty,
}


@dataclass(frozen=True)
class CompilerConfig:
    base_iri: str
    subject_default: Quantifier = Quantifier.SOME
    requirement_default: Quantifier = Quantifier.ONLY
    card: CardMap = field(default_factory=CardMap)
    constr: ConstrMap = field(default_factory=ConstrMap)
    terms: TermVocabulary = field(default_factory=TermVocabulary)


# Build a CompilerConfig from config.ini, letting any argument override it
def load_config(base_iri: str = None, subject_default: str = None, requirement_default: str = None,
                card_map: str = None, constr_map: str = None, terms: str = None) -> CompilerConfig:
    return CompilerConfig(
        base_iri=base_iri or configured_base_iri,
        subject_default=Quantifier(subject_default or configured_subject_default),
        requirement_default=Quantifier(requirement_default or configured_requirement_default),
        card=load_card_map(card_map or card_map_path),
        constr=load_constr_map(constr_map or constr_map_path),
        terms=load_term_vocabulary(terms or terms_path),
    )


@dataclass
class RestrictionPool:
    entries: Dict[int, ClassExpression] = field(default_factory=dict)
    consumed: Set[int] = field(default_factory=set)
    origins: Dict[int, tuple] = field(default_factory=dict)

    def add(self, key: int, expr: ClassExpression, tokens: tuple):
        self.entries[key] = expr
        self.origins[key] = tokens
        self.consumed.discard(key)

    def consume(self, key: int):
        self.entries.pop(key, None)
        self.consumed.add(key)


def mint_iris(types: Sequence[TypeRow], roles: Sequence[RoleRow], base_iri: str) -> Dict[int, str]:
    taken = set()
    iris = {}
    rows = [r for r in types if r.type_tag in ENTITY_KINDS] + list(roles)
    for row in sorted(rows, key=lambda r: r.unit_id):
        iris[row.unit_id] = mint_iri(base_iri, row.surface, taken)
    return iris


def generate_entities(types: Sequence[TypeRow], roles: Sequence[RoleRow], base_iri: str,
                      iris: Dict[int, str] = None) -> Ontology:
    iris = iris or mint_iris(types, roles, base_iri)
    entities = [Entity(ENTITY_KINDS[r.type_tag], iris[r.unit_id], r.surface) for r in types
                if r.type_tag in ENTITY_KINDS]
    entities += [Entity(EntityKind.Class, iris[r.unit_id], r.surface) for r in roles]
    codegen_log.info('Generated %d entities', len(entities))
    return Ontology(base_iri.rstrip('#'), frozenset(entities), (), (('', base_iri.rstrip('#') + '#'),))


def align_terms(terms: Sequence[TermRow], types: Sequence[TypeRow], onto: Ontology, vocabulary: TermVocabulary,
                iris: Dict[int, str]) -> Ontology:
    entities = []
    axioms = []
    for term in terms:
        if not term.term_iri:
            continue
        entry = vocabulary.get(term.term_label)
        declared_kind = entry.kind if entry is not None else None
        matches = [r for r in types if r.type_tag in ENTITY_KINDS and set(term.tokens) <= set(r.tokens)]

        aligned_kind = None
        for row in matches:
            kind = ENTITY_KINDS[row.type_tag]
            if declared_kind is not None and declared_kind != kind:
                codegen_log.warning('KindMismatch: term %s is a %s in the vocabulary but aligns with %s "%s"',
                                    term.term_label, declared_kind.value, kind.value, row.surface)
                continue
            aligned_kind = aligned_kind or kind
            if kind == EntityKind.Class:
                axioms.append(EquivalentClasses((Named(term.term_iri), Named(iris[row.unit_id]))))
            else:
                prop_kind = PropertyKind.object if kind == EntityKind.ObjectProperty else PropertyKind.data
                axioms.append(EquivalentProperties(term.term_iri, iris[row.unit_id], prop_kind))

        kind = declared_kind or aligned_kind or EntityKind.Class
        entities.append(Entity(kind, term.term_iri, term.term_label))

    codegen_log.info('Aligned %d terms with %d axioms', len(terms), len(axioms))
    return onto.with_entities(entities).with_axioms(axioms)


class _Chains:
    """Predicate graph over Class and Literal units, with the wrappers and quantifiers attached to it."""

    def __init__(self, types: Sequence[TypeRow], roles: Sequence[RoleRow]):
        self.rows = {r.unit_id: r for r in types}
        self.roles = roles
        self.predicates = [r for r in types if r.type_tag in PREDICATE_TYPES]
        self.quantifier = {}
        self.comparisons = {}
        self.negated = set()
        self.groups = {}
        for row in types:
            if row.type_tag in QUANTIFIER_TYPES:
                for ref in row.of_refs:
                    self.quantifier.setdefault(ref, row)
            elif row.type_tag == T.Comparison:
                for ref in row.of_refs:
                    self.comparisons.setdefault(ref, []).append(row)
            elif row.type_tag == T.Not:
                self.negated.update(row.of_refs)
            elif row.type_tag == T.Or and len(row.of_refs) > 1:
                group = tuple(sorted(row.of_refs))
                for ref in group:
                    self.groups[ref] = group

        self.domain = {}
        self.range = {}
        for p in self.predicates:
            self.domain[p.unit_id] = self._end(p.unit_id, 'domain', set())
            self.range[p.unit_id] = self._end(p.unit_id, 'range', set())

    def is_predicate(self, unit_id: Optional[int]) -> bool:
        return unit_id in self.rows and self.rows[unit_id].type_tag in PREDICATE_TYPES

    # A Range arrow into predicate q lands on q's domain; a Domain arrow into q lands on q's range
    def _end(self, unit_id: int, side: str, seen: Set[int]) -> Optional[int]:
        if unit_id in seen:
            raise ChainCycleException('Predicates ' + ', '.join(str(u) for u in sorted(seen)) +
                                      ' point at each other')
        seen.add(unit_id)
        row = self.rows[unit_id]
        ref = row.domain_ref if side == 'domain' else row.range_ref
        if ref is None or ref not in self.rows:
            return None
        if self.is_predicate(ref):
            return self._end(ref, 'range' if side == 'domain' else 'domain', seen)
        return ref

    def role_of(self, row: TypeRow) -> Optional[SemanticRole]:
        for role in self.roles:
            if set(row.tokens) <= set(role.tokens):
                return role.role_tag
        return None


def _conjunction(parts: List[ClassExpression]) -> ClassExpression:
    return parts[0] if len(parts) == 1 else IntersectionOf(tuple(parts))


def _data_range(chains: _Chains, literal: TypeRow, constr: ConstrMap) -> DataRange:
    value = make_literal(literal.surface)
    comparisons = chains.comparisons.get(literal.unit_id, [])
    facets = [constr_lookup(constr, c.surface) for c in comparisons]
    if not facets or facets == [Facet.Exact]:
        return Enumeration((value,))
    if Facet.Exact in facets or not value.numeric:
        raise UnsupportedConstructException('Cannot constrain "' + literal.surface + '" with ' +
                                            ' and '.join(c.surface for c in comparisons))
    try:
        return FacetRestriction(value.datatype, tuple((facet, value) for facet in facets))
    except ValueError as e:
        codegen_log.error('Bad interval on "%s": %s', literal.surface, str(e))
        raise UnsupportedConstructException(str(e))


def build_restrictions(types: Sequence[TypeRow], roles: Sequence[RoleRow], card: CardMap, constr: ConstrMap,
                       iris: Dict[int, str], subject_default: Quantifier = Quantifier.SOME,
                       requirement_default: Quantifier = Quantifier.ONLY) -> RestrictionPool:
    chains = _Chains(types, roles)
    rows = chains.rows

    outgoing = {}
    for p in chains.predicates:
        outgoing.setdefault(chains.domain[p.unit_id], []).append(p.unit_id)

    built = {}
    expressions = {}

    def node_expression(unit_id: int) -> ClassExpression:
        if unit_id in expressions:
            return expressions[unit_id]
        parts = [Named(iris[unit_id])] + _attached(unit_id)
        expr = _conjunction(parts)
        if unit_id in chains.negated:
            expr = ComplementOf(expr)
        expressions[unit_id] = expr
        return expr

    def _attached(unit_id: int) -> List[ClassExpression]:
        return [part for _, part in _restrictions_of(unit_id, outgoing, built, chains)]

    def filler(unit_id: int) -> ClassExpression:
        group = chains.groups.get(unit_id)
        if group is not None and not any(chains.is_predicate(g) for g in group):
            return UnionOf(tuple(node_expression(g) for g in group))
        return node_expression(unit_id)

    def quantifier_of(p: TypeRow) -> Tuple[Optional[TypeRow], Quantifier]:
        explicit = chains.quantifier.get(p.unit_id)
        if explicit is not None and explicit.type_tag != T.Number:
            return explicit, Quantifier.SOME if explicit.type_tag == T.Some else Quantifier.ONLY
        role = chains.role_of(p)
        if role == SemanticRole.Requirement:
            return explicit, requirement_default
        if role is None and explicit is None:
            codegen_log.warning('Predicate "%s" lies outside every role, using %s', p.surface,
                                subject_default.value)
        return explicit, subject_default

    def restriction(p: TypeRow) -> Optional[ClassExpression]:
        explicit, quantifier = quantifier_of(p)
        target = chains.range[p.unit_id]
        data = p.type_tag == T.Property
        prop = iris[p.unit_id]

        if target is not None and (rows[target].type_tag == T.Literal) != data:
            codegen_log.warning('Range of "%s" is the %s "%s", skipping', p.surface, rows[target].type_tag.value,
                                rows[target].surface)
            target = None

        if explicit is not None and explicit.type_tag == T.Number:
            mode, n = resolve_cardinality(explicit.surface, card, constr)
            if data:
                rng = _data_range(chains, rows[target], constr) if target is not None else None
                expr = DataCardinality(prop, mode, n, rng)
            else:
                expr = ObjectCardinality(prop, mode, n, filler(target) if target is not None else None)
        elif target is None:
            codegen_log.warning('Predicate "%s" has no usable range, no restriction built', p.surface)
            return None
        elif data:
            rng = _data_range(chains, rows[target], constr)
            expr = DataSome(prop, rng) if quantifier == Quantifier.SOME else DataOnly(prop, rng)
        else:
            fill = filler(target)
            expr = ObjectSome(prop, fill) if quantifier == Quantifier.SOME else ObjectOnly(prop, fill)

        if p.unit_id in chains.negated:
            expr = ComplementOf(expr)
        return expr

    def ready(unit_id: Optional[int]) -> bool:
        if unit_id is None:
            return True
        group = chains.groups.get(unit_id)
        members = group if group is not None and not any(chains.is_predicate(g) for g in group) else (unit_id,)
        return all(q in built for m in members for q in outgoing.get(m, []))

    # Backward induction: a predicate is built once everything hanging off its range is built
    pending = [p.unit_id for p in chains.predicates]
    while pending:
        progress = [p for p in pending if ready(chains.range[p])]
        if not progress:
            raise ChainCycleException('Predicate chain through ' +
                                      ', '.join('"' + rows[p].surface + '"' for p in pending) + ' is cyclic')
        for p in progress:
            built[p] = restriction(rows[p])
        remaining = [p for p in pending if p not in built]
        assert len(remaining) < len(pending)
        pending = remaining

    pool = RestrictionPool()
    ranges = {chains.range[p.unit_id] for p in chains.predicates} - {None}
    for unit_id in ranges:
        pool.consumed.add(unit_id)
    for p in chains.predicates:
        pool.consumed.add(p.unit_id)

    for p in chains.predicates:
        if chains.domain[p.unit_id] is None and built.get(p.unit_id) is not None:
            pool.add(p.unit_id, built[p.unit_id], p.tokens)

    seen_groups = set()
    for row in sorted(rows.values(), key=lambda r: r.unit_id):
        if row.type_tag != T.Class or row.unit_id in ranges:
            continue
        group = chains.groups.get(row.unit_id)
        if group is not None and not any(chains.is_predicate(g) for g in group):
            if group in seen_groups:
                continue
            seen_groups.add(group)
            if any(g in ranges for g in group):
                continue
            pool.add(group[0], filler(row.unit_id), rows[group[0]].tokens)
            for g in group[1:]:
                pool.consume(g)
            continue
        if row.unit_id in chains.negated:
            pool.add(row.unit_id, node_expression(row.unit_id), row.tokens)
            continue
        pool.add(row.unit_id, Named(iris[row.unit_id]), row.tokens)
        for part_key, part in _restrictions_of(row.unit_id, outgoing, built, chains):
            pool.add(part_key, part, rows[part_key].tokens)

    codegen_log.info('Restriction pool holds %d entries, %d units consumed', len(pool.entries), len(pool.consumed))
    return pool


# Restrictions hanging off a class unit, keyed by their predicate; an Or over predicates yields one union
def _restrictions_of(unit_id: int, outgoing: Dict, built: Dict, chains: _Chains):
    seen_groups = set()
    for p in sorted(outgoing.get(unit_id, [])):
        if built.get(p) is None:
            continue
        group = chains.groups.get(p)
        if group is not None and all(chains.is_predicate(g) for g in group):
            if group in seen_groups:
                continue
            seen_groups.add(group)
            members = [built[g] for g in group if built.get(g) is not None]
            yield group[0], members[0] if len(members) == 1 else UnionOf(tuple(members))
        else:
            yield p, built[p]


def build_axioms(roles: Sequence[RoleRow], pool: RestrictionPool, onto: Ontology,
                 iris: Dict[int, str]) -> Ontology:
    axioms = []
    for role in roles:
        selected = [pool.entries[key] for key in sorted(pool.entries)
                    if set(pool.origins[key]) <= set(role.tokens)]
        if not selected:
            raise EmptyRoleSelectionException(role.role_tag.value + ' "' + role.surface +
                                              '" contains no restriction')
        axioms.append(EquivalentClasses((Named(iris[role.unit_id]), _conjunction(selected))))

    by_id = {role.unit_id: role for role in roles}
    for role in roles:
        if role.to_ref is not None and role.to_ref in by_id:
            axioms.append(SubClassOf(Named(iris[role.unit_id]), Named(iris[role.to_ref])))

    codegen_log.info('Built %d role axioms', len(axioms))
    return onto.with_axioms(axioms)


def compile(doc: AnnotatedDocument, config: CompilerConfig) -> Ontology:
    tables = preprocess(doc, config.terms)
    iris = mint_iris(tables.types, tables.roles, config.base_iri)
    onto = generate_entities(tables.types, tables.roles, config.base_iri, iris)
    onto = align_terms(tables.terms, tables.types, onto, config.terms, iris)
    pool = build_restrictions(tables.types, tables.roles, config.card, config.constr, iris,
                              config.subject_default, config.requirement_default)
    return build_axioms(tables.roles, pool, onto, iris)


def compile_file(path: str, config: CompilerConfig) -> Ontology:
    codegen_log.info('Compiling %s', path)
    return compile(read_tsv(path), config)


# Compile every .tsv file of a directory concurrently; input errors are returned, not raised
def compile_directory(directory: str, config: CompilerConfig, workers: int = 4) -> Dict[str, object]:
    paths = sorted(str(p) for p in Path(directory).glob('*.tsv'))

    def run(path: str):
        try:
            return compile_file(path, config)
        except PIPELINE_EXCEPTIONS + (OSError,) as e:
            codegen_log.error('Compilation of %s failed: %s', path, str(e))
            return e

    with ThreadPoolExecutor(max_workers=workers) as executor:
        return dict(zip(paths, executor.map(run, paths)))
