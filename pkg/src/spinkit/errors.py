"""Exception hierarchy.

Every failure that carries a counterexample stores it in ``witness`` so the
verification layer can turn an exception into a report without losing data.
"""


class SpinkitError(Exception):
    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


# numbers
class ConstraintViolation(SpinkitError, ValueError):
    pass


class IncompatibleMode(SpinkitError, ValueError):
    pass


class DivisionByZero(SpinkitError, ZeroDivisionError):
    pass


class NonInvertible(SpinkitError, ArithmeticError):
    pass


# linalg / hadamard
class ShapeMismatch(SpinkitError, ValueError):
    pass


class SizeLimit(SpinkitError, ValueError):
    pass


class BadPrime(SpinkitError, ValueError):
    pass


class ParseError(SpinkitError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where, witness={"line": line, "column": column})
        self.line = line
        self.column = column


# models
class OrderMismatch(SpinkitError, ValueError):
    pass


class AmbiguousZero(SpinkitError, ArithmeticError):
    pass


class IdentityFailed(SpinkitError, AssertionError):
    pass


# schemes
class DefinitionMismatch(SpinkitError, AssertionError):
    pass


class NotClosed(SpinkitError, AssertionError):
    pass


class RuleViolation(SpinkitError, AssertionError):
    pass


class NotAutomorphism(SpinkitError, AssertionError):
    pass


class FusionMismatch(SpinkitError, AssertionError):
    pass


# nomura / verify
class NonInvertibleEntry(SpinkitError, ValueError):
    pass


class AmbiguousEdge(AmbiguousZero):
    pass


class LemmaFailed(SpinkitError, AssertionError):
    pass


class Failed(SpinkitError, AssertionError):
    pass
