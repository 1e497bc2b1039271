from core import vocab_log
from core.enums import Facet, CardinalityMode, EntityKind
from core.exceptions import UnmappedCardPhraseException, UnmappedConstrPhraseException, \
    MalformedVocabularyException
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Optional, Tuple
import re

numeral = re.compile(r'^\d+$')
whitespace = re.compile(r'\s+')

TERM_KINDS = {kind.value: kind for kind in (EntityKind.Class, EntityKind.ObjectProperty, EntityKind.DataProperty)}


def normalize(phrase: str) -> str:
    return whitespace.sub(' ', phrase.strip().lower())


@dataclass(frozen=True)
class CardMap:
    entries: Mapping[str, int] = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self):
        object.__setattr__(self, 'entries', MappingProxyType(_normalized(self.entries, 'Card')))


@dataclass(frozen=True)
class ConstrMap:
    entries: Mapping[str, Facet] = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self):
        object.__setattr__(self, 'entries', MappingProxyType(_normalized(self.entries, 'Constr')))


@dataclass(frozen=True)
class TermEntry:
    label: str
    iri: str
    kind: Optional[EntityKind] = None


@dataclass(frozen=True)
class TermVocabulary:
    entries: Mapping[str, TermEntry] = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self):
        object.__setattr__(self, 'entries', MappingProxyType(dict(self.entries)))

    def get(self, label: str) -> Optional[TermEntry]:
        return self.entries.get(label)

    def labels(self):
        return set(self.entries)


def _normalized(entries: Mapping, name: str) -> Dict:
    normalized = {}
    for phrase, value in entries.items():
        key = normalize(phrase)
        if key in normalized:
            raise MalformedVocabularyException(name + ' phrase "' + phrase + '" appears twice')
        normalized[key] = value
    return normalized


def card_lookup(card: CardMap, phrase: str) -> int:
    key = normalize(phrase)
    if key in card.entries:
        return card.entries[key]
    if numeral.match(key):
        return int(key)
    raise UnmappedCardPhraseException('No cardinality for phrase "' + phrase + '"')


def constr_lookup(constr: ConstrMap, phrase: str) -> Facet:
    key = normalize(phrase)
    if key not in constr.entries:
        raise UnmappedConstrPhraseException('No facet for phrase "' + phrase + '"')
    return constr.entries[key]


# Split a Number phrase such as "at least two" into a cardinality mode and count
def resolve_cardinality(phrase: str, card: CardMap, constr: ConstrMap) -> Tuple[CardinalityMode, int]:
    key = normalize(phrase)
    prefix = None
    for candidate in sorted(constr.entries, key=len, reverse=True):
        if key == candidate or key.startswith(candidate + ' '):
            prefix = candidate
            break

    if prefix is None:
        return CardinalityMode.Exact, card_lookup(card, key)

    n = card_lookup(card, key[len(prefix):])
    facet = constr.entries[prefix]
    if facet == Facet.MinInclusive:
        return CardinalityMode.Min, n
    if facet == Facet.MinExclusive:
        return CardinalityMode.Min, n + 1
    if facet == Facet.MaxInclusive:
        return CardinalityMode.Max, n
    if facet == Facet.MaxExclusive:
        if n == 0:
            raise UnmappedCardPhraseException('Phrase "' + phrase + '" admits no cardinality')
        return CardinalityMode.Max, n - 1
    return CardinalityMode.Exact, n


def _rows(text: str, name: str) -> Iterable[Tuple[int, list]]:
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        parts = [part.strip() for part in line.rstrip('\r\n').split('\t')]
        if len(parts) < 2 or not parts[0] or not parts[1]:
            raise MalformedVocabularyException(name + ' line ' + str(line_no) + ': expected phrase<TAB>value')
        yield line_no, parts


def parse_card_map(text: str) -> CardMap:
    entries = {}
    for line_no, parts in _rows(text, 'Card'):
        try:
            value = int(parts[1])
        except ValueError:
            raise MalformedVocabularyException('Card line ' + str(line_no) + ': ' + parts[1] + ' is not an integer')
        if value < 0:
            raise MalformedVocabularyException('Card line ' + str(line_no) + ': negative cardinality')
        if normalize(parts[0]) in entries:
            raise MalformedVocabularyException('Card line ' + str(line_no) + ': duplicate phrase ' + parts[0])
        entries[normalize(parts[0])] = value
    return CardMap(entries)


def parse_constr_map(text: str) -> ConstrMap:
    entries = {}
    for line_no, parts in _rows(text, 'Constr'):
        try:
            facet = Facet[parts[1]]
        except KeyError:
            raise MalformedVocabularyException('Constr line ' + str(line_no) + ': unknown facet ' + parts[1])
        if normalize(parts[0]) in entries:
            raise MalformedVocabularyException('Constr line ' + str(line_no) + ': duplicate phrase ' + parts[0])
        entries[normalize(parts[0])] = facet
    return ConstrMap(entries)


def parse_term_vocabulary(text: str) -> TermVocabulary:
    entries = {}
    for line_no, parts in _rows(text, 'Terms'):
        kind = None
        if len(parts) > 2 and parts[2]:
            kind = TERM_KINDS.get(parts[2])
            if kind is None:
                raise MalformedVocabularyException('Terms line ' + str(line_no) + ': unknown kind ' + parts[2])
        if parts[0] in entries:
            raise MalformedVocabularyException('Terms line ' + str(line_no) + ': duplicate label ' + parts[0])
        entries[parts[0]] = TermEntry(parts[0], parts[1], kind)
    return TermVocabulary(entries)


def _read(path: str) -> str:
    try:
        with open(path, encoding='utf-8') as f:
            return f.read()
    except OSError as e:
        vocab_log.error('Cannot read vocabulary file %s: %s', path, e)
        raise


def load_card_map(path: str) -> CardMap:
    card = parse_card_map(_read(path))
    vocab_log.info('Loaded %d Card phrases from %s', len(card.entries), path)
    return card


def load_constr_map(path: str) -> ConstrMap:
    constr = parse_constr_map(_read(path))
    vocab_log.info('Loaded %d Constr phrases from %s', len(constr.entries), path)
    return constr


def load_term_vocabulary(path: str) -> TermVocabulary:
    terms = parse_term_vocabulary(_read(path))
    vocab_log.info('Loaded %d terms from %s', len(terms.entries), path)
    return terms


def dump_card_map(card: CardMap) -> str:
    return ''.join(phrase + '\t' + str(n) + '\n' for phrase, n in sorted(card.entries.items()))


def dump_constr_map(constr: ConstrMap) -> str:
    return ''.join(phrase + '\t' + facet.value + '\n' for phrase, facet in sorted(constr.entries.items()))
