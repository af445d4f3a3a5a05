"""Exception types shared across the kernel."""


class RsftError(Exception):
    """Base class for all kernel errors."""


class ContextMismatch(RsftError):
    pass


class InhomogeneousInput(RsftError):
    pass


class DegreeMismatch(RsftError):
    pass


class MasterEquationFails(RsftError):
    pass


class NotOverline(RsftError):
    pass


class NotUnderline(RsftError):
    pass


class NotHat(RsftError):
    pass


class NotMaurerCartan(RsftError):
    pass


class NotChainMap(RsftError):
    pass


class NotAugmentation(RsftError):
    pass


class ZeroFiltration(RsftError):
    pass


class BracketNotZero(RsftError):
    pass


class NonTerminating(RsftError):
    pass


class OddPowerViolation(RsftError):
    pass


class UnknownGenerator(RsftError):
    pass


class DegreeAnnotationMismatch(RsftError):
    pass


class ContextSyntaxError(RsftError):
    """Parse error with a source location."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(message + loc)
