"""Exception types raised across the package."""


class LRCatError(Exception):
    pass


class Inconsistent(LRCatError):
    pass


class NotModular(LRCatError):
    pass


class NotUnitary(LRCatError):
    pass


class UnsupportedFamily(LRCatError):
    pass


class DegenerateForm(LRCatError):
    pass


class MissingBlock(LRCatError):
    pass


class ShapeMismatch(LRCatError):
    pass


class NotClosed(LRCatError):
    pass


class TypeMismatch(LRCatError):
    pass


class UnknownLabel(LRCatError):
    pass


class DiagramSyntaxError(LRCatError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class MissingBraiding(LRCatError):
    pass


class MissingHalfBraiding(LRCatError):
    pass


class ValidationFailed(LRCatError):
    pass


class ClosureOverflow(LRCatError):
    pass


class SearchIncomplete(LRCatError):
    pass


class ParseError(LRCatError):
    pass


class SchemaError(LRCatError):
    pass


class UnknownSuite(LRCatError):
    pass
