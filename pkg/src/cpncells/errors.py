"""Exception hierarchy shared by all modules."""


class CpnCellsError(Exception):
    """Base class for every error raised by this package."""


class InvolutionViolation(CpnCellsError):
    """A gluing table is not a symmetric involution."""


class FaceNotFound(CpnCellsError):
    pass


class ConstructionInconsistency(CpnCellsError):
    """A construction produced a gluing that contradicts its own invariants."""


class CapacityExceeded(CpnCellsError):
    pass


class InvalidFacet(CpnCellsError):
    pass


class NotGood(CpnCellsError):
    """Two vertices in one orbit are joined by an edge."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IllDefinedGluing(CpnCellsError):
    """Members of one orbit disagree on the orbit they are glued to."""


class NotGraded(CpnCellsError):
    """The complex carries no consistent vertex order on its faces."""


class NotIdentityGlued(CpnCellsError):
    pass


class Disconnected(CpnCellsError):
    pass


class ParseError(CpnCellsError):
    def __init__(self, message, line=None, column=None):
        where = "" if line is None else f" (line {line}, column {column})"
        super().__init__(message + where)
        self.line = line
        self.column = column


class MatchingViolation(CpnCellsError):
    """A node appears twice in one colour class, or an arc is a loop."""
