import enum


class LayerId(enum.Enum):
    TERM = 1
    SEMTYPE = 2
    SEMROLE = 3


class SemanticType(enum.Enum):
    Literal = 'Literal'
    Class = 'Class'
    Not = 'Not'
    Or = 'Or'
    Relation = 'Relation'
    Property = 'Property'
    Some = 'Some'
    Only = 'Only'
    Number = 'Number'
    Comparison = 'Comparison'


class SemanticRole(enum.Enum):
    Subject = 'Subject'
    Requirement = 'Requirement'


class Arrow(enum.Enum):
    Domain = 'Domain'
    Range = 'Range'
    Of = 'Of'
    To = 'To'
    Concatenation = 'Concatenation'
    Distribution = 'Distribution'
    SelfDistribution = 'SelfDistribution'


LINGUISTIC_ARROWS = (Arrow.Concatenation, Arrow.Distribution, Arrow.SelfDistribution)
PREDICATE_TYPES = (SemanticType.Relation, SemanticType.Property)
QUANTIFIER_TYPES = (SemanticType.Some, SemanticType.Only, SemanticType.Number)


class Facet(enum.Enum):
    MinInclusive = 'MinInclusive'
    MinExclusive = 'MinExclusive'
    MaxInclusive = 'MaxInclusive'
    MaxExclusive = 'MaxExclusive'
    Exact = 'Exact'


# Manchester facet symbols
FacetSymbol = {
    Facet.MinInclusive: '>=',
    Facet.MinExclusive: '>',
    Facet.MaxInclusive: '<=',
    Facet.MaxExclusive: '<',
}


class CardinalityMode(enum.Enum):
    Min = 'min'
    Max = 'max'
    Exact = 'exactly'


class Quantifier(enum.Enum):
    SOME = 'some'
    ONLY = 'only'


class EntityKind(enum.Enum):
    Class = 'Class'
    ObjectProperty = 'ObjectProperty'
    DataProperty = 'DataProperty'
    NamedIndividual = 'Individual'
    Datatype = 'Datatype'


class Datatype(enum.Enum):
    string = 'string'
    integer = 'integer'
    float = 'float'


class PropertyKind(enum.Enum):
    object = 'object'
    data = 'data'


class Severity(enum.Enum):
    Error = 'ERROR'
    Warning = 'WARNING'


class DiagnosticCode(enum.Enum):
    BAD_DOMAIN_START = 1
    BAD_DOMAIN_END = 2
    BAD_RANGE_START = 3
    BAD_RANGE_END = 4
    BAD_OF_START = 5
    BAD_OF_END = 6
    BAD_TO = 7
    MISSING_SUBJECT = 8
    MISSING_REQUIREMENT = 9
    MISSING_OF = 10
    MISSING_DOMAIN = 11
    MISSING_RANGE = 12
    MISSING_QUANTIFIER = 13
    CONFLICTING_QUANTIFIER = 14
    OR_ARITY = 15
    BAD_INTERVAL = 16
    UNRESOLVED_TERM = 17
    UNLINKED_SUBJECT = 18
