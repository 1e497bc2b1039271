class MissingHeaderException(Exception):
    pass


class UnknownLayerException(Exception):
    pass


class DanglingReferenceException(Exception):
    pass


class IndexGapException(Exception):
    pass


class BadCellException(Exception):
    pass


class BranchingConcatenationException(Exception):
    pass


class CyclicArrowsException(Exception):
    pass


class CrossTagArrowException(Exception):
    pass


class DuplicateArrowException(Exception):
    pass


class UnmappedCardPhraseException(Exception):
    pass


class UnmappedConstrPhraseException(Exception):
    pass


class MalformedVocabularyException(Exception):
    pass


class ChainCycleException(Exception):
    pass


class EmptyRoleSelectionException(Exception):
    pass


class ManchesterSyntaxException(Exception):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__('line ' + str(line) + ', column ' + str(column) + ': ' + message)
        self.line = line
        self.column = column


class UnsupportedConstructException(Exception):
    pass


class OpenPropertyException(Exception):
    pass


class UnstratifiedDefinitionException(Exception):
    pass


# Errors a command reports with exit code 2
PIPELINE_EXCEPTIONS = (
    MissingHeaderException, UnknownLayerException, DanglingReferenceException, IndexGapException,
    BadCellException, BranchingConcatenationException, CyclicArrowsException, CrossTagArrowException,
    DuplicateArrowException, UnmappedCardPhraseException, UnmappedConstrPhraseException,
    MalformedVocabularyException, ChainCycleException, EmptyRoleSelectionException,
    ManchesterSyntaxException, UnsupportedConstructException, OpenPropertyException, UnstratifiedDefinitionException
)
