from core import ingest_log
from core.enums import LayerId, SemanticType, SemanticRole, Arrow, LINGUISTIC_ARROWS
from core.exceptions import MissingHeaderException, UnknownLayerException, DanglingReferenceException, \
    IndexGapException, BadCellException
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple
import re

FORMAT_LINE = '#FORMAT=WebAnno TSV 3.3'

TokenRef = Tuple[int, int]
SpanKey = Tuple[LayerId, int]

LAYER_NAMES = {
    'term': LayerId.TERM,
    'terms': LayerId.TERM,
    'semantictype': LayerId.SEMTYPE,
    'semantictypes': LayerId.SEMTYPE,
    'semanticrole': LayerId.SEMROLE,
    'semanticroles': LayerId.SEMROLE,
}

SEMTYPE_TAGS = {t.value for t in SemanticType}
SEMROLE_TAGS = {r.value for r in SemanticRole}

# Which base layer a semantic arrow may live on
ARROW_LAYERS = {
    Arrow.Domain: (LayerId.SEMTYPE,),
    Arrow.Range: (LayerId.SEMTYPE,),
    Arrow.Of: (LayerId.SEMTYPE,),
    Arrow.To: (LayerId.SEMROLE,),
}

token_address = re.compile(r'^(\d+)-(\d+)$')
subtoken_address = re.compile(r'^\d+-\d+\.\d+$')
offsets = re.compile(r'^(\d+)-(\d+)$')
span_cell = re.compile(r'^([^\[\]|_*][^\[\]|]*?)(?:\[(\d+)\])?$')
relation_ref = re.compile(r'^(\d+)-(\d+)(?:\[(\d+)_(\d+)\])?$')


@dataclass(frozen=True)
class Token:
    sentence_index: int
    token_index: int
    char_start: int
    char_end: int
    text: str

    @property
    def ref(self) -> TokenRef:
        return self.sentence_index, self.token_index


@dataclass(frozen=True)
class SpanAnnotation:
    layer_id: LayerId
    tag: str
    span_id: int
    tokens: Tuple[TokenRef, ...]

    @property
    def key(self) -> SpanKey:
        return self.layer_id, self.span_id


@dataclass(frozen=True)
class RelationAnnotation:
    arrow: Arrow
    source: SpanKey
    target: SpanKey


@dataclass(frozen=True)
class AnnotatedDocument:
    source_text: str
    tokens: Tuple[Token, ...] = ()
    spans: Tuple[SpanAnnotation, ...] = ()
    relations: Tuple[RelationAnnotation, ...] = ()

    def span(self, key: SpanKey) -> SpanAnnotation:
        for s in self.spans:
            if s.key == key:
                return s
        raise DanglingReferenceException('No span ' + str(key[1]) + ' in layer ' + key[0].name)

    def token_text(self, ref: TokenRef) -> str:
        for t in self.tokens:
            if t.ref == ref:
                return t.text
        raise DanglingReferenceException('No token ' + format_ref(ref))

    def surface(self, span: SpanAnnotation) -> str:
        by_ref = {t.ref: t.text for t in self.tokens}
        return ' '.join(by_ref[ref] for ref in span.tokens)


@dataclass
class _SpanLayer:
    name: str
    layer_id: LayerId
    features: List[str]


@dataclass
class _RelationLayer:
    name: str
    features: List[str]
    base: str


@dataclass
class _PendingSpan:
    layer_id: LayerId
    tag: str
    span_id: Optional[int]
    tokens: List[TokenRef] = field(default_factory=list)


def format_ref(ref: TokenRef) -> str:
    return str(ref[0]) + '-' + str(ref[1])


def _layer_id(name: str) -> LayerId:
    short = name.rsplit('.', 1)[-1].lower()
    layer_id = LAYER_NAMES.get(short)
    if layer_id is None:
        raise UnknownLayerException('Layer ' + name + ' is not one of Term, SemanticType, SemanticRole')
    return layer_id


def _check_tag(layer_id: LayerId, tag: str, line_no: int):
    if layer_id == LayerId.SEMTYPE and tag not in SEMTYPE_TAGS:
        raise BadCellException('line ' + str(line_no) + ': unknown Semantic Type tag ' + tag)
    if layer_id == LayerId.SEMROLE and tag not in SEMROLE_TAGS:
        raise BadCellException('line ' + str(line_no) + ': unknown Semantic Role tag ' + tag)


def _parse_header(lines: List[str]) -> Tuple[List[_SpanLayer], List[_RelationLayer], int]:
    if not lines or lines[0].lstrip('﻿').strip() != FORMAT_LINE:
        raise MissingHeaderException('Input does not start with ' + FORMAT_LINE)

    span_layers = []
    relation_layers = []
    i = 1
    while i < len(lines) and lines[i].startswith('#T_'):
        line = lines[i].strip()
        kind, _, declaration = line.partition('=')
        parts = declaration.split('|')
        if kind == '#T_SP':
            span_layers.append(_SpanLayer(parts[0], _layer_id(parts[0]), parts[1:]))
        elif kind == '#T_RL':
            if len(parts) < 3 or not parts[-1].startswith('BT_'):
                raise UnknownLayerException('Relation layer ' + parts[0] + ' lacks a BT_ base layer')
            relation_layers.append(_RelationLayer(parts[0], parts[1:-1], parts[-1][3:]))
        else:
            raise UnknownLayerException('Unsupported layer declaration ' + line)
        i += 1

    span_names = {layer.name for layer in span_layers}
    for layer in relation_layers:
        if layer.base not in span_names:
            raise UnknownLayerException('Relation layer ' + layer.name + ' refers to undeclared layer ' + layer.base)

    ingest_log.info('Declared %d span layers and %d relation layers', len(span_layers), len(relation_layers))
    return span_layers, relation_layers, i


def _split_cells(value: str) -> List[str]:
    if value == '_':
        return []
    return value.split('|')


def parse_tsv(text: str) -> AnnotatedDocument:
    lines = text.replace('\r\n', '\n').replace('\r', '\n').split('\n')
    span_layers, relation_layers, i = _parse_header(lines)
    layer_by_name = {layer.name: layer for layer in span_layers}

    width = 3 + sum(len(layer.features) for layer in span_layers) + \
        sum(len(layer.features) + 1 for layer in relation_layers)

    sentences = []
    tokens = []
    pending = {}
    unnumbered = []
    raw_relations = []
    sentence_index = 0
    expected_token = 1
    # Set while the current sentence block has shown #Text= lines but no token rows
    in_text = False

    for line_no in range(i + 1, len(lines) + 1):
        line = lines[line_no - 1]
        if not line.strip():
            in_text = False
            continue
        if line.startswith('#Text='):
            if in_text:
                sentences[-1] += '\n' + line[len('#Text='):]
                continue
            sentences.append(line[len('#Text='):])
            sentence_index += 1
            expected_token = 1
            in_text = True
            continue
        if line.startswith('#'):
            continue

        in_text = False
        cells = line.split('\t')
        if len(cells) == width + 1 and cells[-1] == '':
            cells = cells[:-1]
        if len(cells) != width:
            raise BadCellException('line ' + str(line_no) + ': expected ' + str(width) +
                                   ' columns, found ' + str(len(cells)))

        if subtoken_address.match(cells[0]):
            raise BadCellException('line ' + str(line_no) + ': sub-token rows are not supported')
        address = token_address.match(cells[0])
        if address is None:
            raise BadCellException('line ' + str(line_no) + ': bad token address ' + cells[0])
        ref = (int(address.group(1)), int(address.group(2)))
        if ref[0] != sentence_index or ref[1] != expected_token:
            raise IndexGapException('line ' + str(line_no) + ': expected token ' + str(sentence_index) + '-' +
                                    str(expected_token) + ', found ' + cells[0])
        expected_token += 1

        span = offsets.match(cells[1])
        if span is None:
            raise BadCellException('line ' + str(line_no) + ': bad offsets ' + cells[1])
        start, end = int(span.group(1)), int(span.group(2))
        if start >= end:
            raise BadCellException('line ' + str(line_no) + ': empty token offsets ' + cells[1])
        tokens.append(Token(ref[0], ref[1], start, end, cells[2]))

        column = 3
        for layer in span_layers:
            values = cells[column:column + len(layer.features)]
            column += len(layer.features)
            # The first feature carries the tag
            for item in _split_cells(values[0]) if values else []:
                match = span_cell.match(item)
                if match is None:
                    raise BadCellException('line ' + str(line_no) + ': cannot parse cell ' + item)
                tag = match.group(1)
                _check_tag(layer.layer_id, tag, line_no)
                if match.group(2) is None:
                    unnumbered.append(_PendingSpan(layer.layer_id, tag, None, [ref]))
                    continue
                span_id = int(match.group(2))
                key = (layer.layer_id, span_id)
                current = pending.setdefault(key, _PendingSpan(layer.layer_id, tag, span_id))
                if current.tag != tag:
                    raise BadCellException('line ' + str(line_no) + ': span ' + str(span_id) +
                                           ' carries both ' + current.tag + ' and ' + tag)
                current.tokens.append(ref)

        for layer in relation_layers:
            values = cells[column:column + len(layer.features) + 1]
            column += len(layer.features) + 1
            arrows = _split_cells(values[0]) if layer.features else []
            refs = _split_cells(values[-1])
            if len(arrows) != len(refs):
                raise BadCellException('line ' + str(line_no) + ': relation cells ' + values[0] + ' and ' +
                                       values[-1] + ' do not line up')
            for arrow_name, source in zip(arrows, refs):
                try:
                    arrow = Arrow[arrow_name]
                except KeyError:
                    raise BadCellException('line ' + str(line_no) + ': unknown arrow ' + arrow_name)
                match = relation_ref.match(source)
                if match is None:
                    raise BadCellException('line ' + str(line_no) + ': cannot parse relation cell ' + source)
                base = layer_by_name[layer.base].layer_id
                if arrow not in LINGUISTIC_ARROWS and base not in ARROW_LAYERS[arrow]:
                    raise BadCellException('line ' + str(line_no) + ': arrow ' + arrow.value +
                                           ' is not allowed on layer ' + layer.base)
                source_ref = (int(match.group(1)), int(match.group(2)))
                source_id = int(match.group(3)) if match.group(3) else 0
                target_id = int(match.group(4)) if match.group(4) else 0
                raw_relations.append((line_no, arrow, base, source_ref, source_id, ref, target_id))

    source_text = '\n'.join(sentences)
    for token in tokens:
        if source_text[token.char_start:token.char_end] != token.text:
            raise BadCellException('Offsets ' + str(token.char_start) + '-' + str(token.char_end) +
                                   ' do not slice the text to ' + token.text)

    # Id-less single-token spans get fresh ids after the largest declared one
    next_id = {}
    for layer_id, span_id in pending:
        next_id[layer_id] = max(next_id.get(layer_id, 0), span_id)
    at_token = {}
    for unnamed in unnumbered:
        next_id[unnamed.layer_id] = next_id.get(unnamed.layer_id, 0) + 1
        unnamed.span_id = next_id[unnamed.layer_id]
        pending[(unnamed.layer_id, unnamed.span_id)] = unnamed
        at_token.setdefault((unnamed.layer_id, unnamed.tokens[0]), []).append(unnamed.span_id)

    spans = [SpanAnnotation(p.layer_id, p.tag, p.span_id, tuple(p.tokens)) for p in pending.values()]
    spans.sort(key=lambda s: (s.tokens[0], s.layer_id.value, s.span_id))
    _reject_overlaps(spans)

    known_tokens = {t.ref for t in tokens}

    def resolve(line_no: int, base: LayerId, ref: TokenRef, span_id: int) -> SpanKey:
        if ref not in known_tokens:
            raise DanglingReferenceException('line ' + str(line_no) + ': no token ' + format_ref(ref))
        if span_id:
            if (base, span_id) not in pending:
                raise DanglingReferenceException('line ' + str(line_no) + ': no span with id ' + str(span_id))
            return base, span_id
        candidates = at_token.get((base, ref), [])
        if len(candidates) != 1:
            raise DanglingReferenceException('line ' + str(line_no) + ': no unique single-token span at ' +
                                             format_ref(ref))
        return base, candidates[0]

    relations = []
    for line_no, arrow, base, source_ref, source_id, target_ref, target_id in raw_relations:
        relation = RelationAnnotation(arrow, resolve(line_no, base, source_ref, source_id),
                                      resolve(line_no, base, target_ref, target_id))
        if relation not in relations:
            relations.append(relation)

    ingest_log.info('Parsed %d tokens, %d spans, %d relations', len(tokens), len(spans), len(relations))
    return AnnotatedDocument(source_text, tuple(tokens), tuple(spans), tuple(relations))


def _reject_overlaps(spans: List[SpanAnnotation]):
    seen = {}
    for span in spans:
        for ref in span.tokens:
            key = (span.layer_id, span.tag, ref)
            if key in seen and seen[key] != span.span_id:
                raise BadCellException('Overlapping ' + span.tag + ' spans ' + str(seen[key]) + ' and ' +
                                       str(span.span_id) + ' at token ' + format_ref(ref))
            seen[key] = span.span_id


def read_tsv(path: str) -> AnnotatedDocument:
    with open(path, encoding='utf-8', newline='') as f:
        try:
            text = f.read()
        except UnicodeDecodeError as e:
            raise BadCellException(path + ' is not UTF-8: ' + str(e))
    return parse_tsv(text)


def unknown_term_tags(doc: AnnotatedDocument, labels) -> List[SpanAnnotation]:
    # TERM spans whose tag is absent from the term vocabulary
    return [s for s in doc.spans if s.layer_id == LayerId.TERM and s.tag not in labels]


def layer_counts(doc: AnnotatedDocument) -> Dict[LayerId, int]:
    counts = {layer: 0 for layer in LayerId}
    for s in doc.spans:
        counts[s.layer_id] += 1
    return counts
