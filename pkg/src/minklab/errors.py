"""Exception hierarchy for minklab."""


class MinklabError(Exception):
    """Base class for all library errors."""


class FieldError(MinklabError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class FieldMismatch(FieldError):
    pass


class BadField(FieldError):
    pass


class ParseError(MinklabError, ValueError):
    pass


class NotSharply3Transitive(MinklabError):
    """Raised when a permutation set fails sharp 3-transitivity.

    ``witness`` holds ``(source_triple, target_triple, count)``: the number of
    members mapping the source onto the target differs from one.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotHyperbolaStructure(MinklabError):
    """A geometric operation needs circles that are graphs (axiom H3)."""


class ParallelPoints(MinklabError):
    def __init__(self, message, pair=None, family=None):
        super().__init__(message)
        self.pair = pair
        self.family = family


class ParallelVertices(ParallelPoints):
    pass


class ParallelCenters(ParallelPoints):
    pass


class PreconditionViolated(MinklabError):
    pass


class TouchingFailure(MinklabError):
    pass


class VertexNotOnCircle(PreconditionViolated):
    pass


class SameCircle(PreconditionViolated):
    pass


class MixedFamilies(PreconditionViolated):
    pass


class BadConfiguration(PreconditionViolated):
    pass


class HypothesisViolated(PreconditionViolated):
    pass


class NotSymmetricPlane(PreconditionViolated):
    pass


class CharTwo(PreconditionViolated):
    pass


class CharNotTwo(PreconditionViolated):
    pass


class ClosureViolation(MinklabError):
    """Composition of two circle permutations is not a circle permutation."""

    def __init__(self, message, pair=None, composite=None):
        super().__init__(message)
        self.pair = pair
        self.composite = composite


class NotACircle(MinklabError):
    pass


class UnknownStatementId(MinklabError, KeyError):
    pass
