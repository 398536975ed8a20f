"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class QuadDefError(Exception):
    exit_code = 4


class ParseError(QuadDefError):
    exit_code = 1

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ValidationError(QuadDefError):
    exit_code = 2


class DegreeMismatch(ValidationError):
    pass


class NotAComplex(ValidationError):
    pass


class NotAChainMap(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class SymmetryFailure(ValidationError):
    pass


class DescentFailure(ValidationError):
    pass


class Degenerate(ValidationError):
    pass


class FiberRankDrop(ValidationError):
    pass


class NotACocycle(ValidationError):
    pass


class NotGloballyRepresentable(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class UnknownName(ValidationError):
    pass


class Unstable(QuadDefError):
    exit_code = 3

    def __init__(self, message, suggested_window=None):
        self.suggested_window = suggested_window
        super().__init__(message)


class WindowOverflow(QuadDefError):
    exit_code = 3


class NoLift(QuadDefError):
    exit_code = 4


class DescentObstruction(QuadDefError):
    exit_code = 4
