"""Exception hierarchy.

``InputError`` subclasses map to CLI exit status 2, ``PreconditionError``
subclasses to exit status 3, and ``InternalMismatch`` to exit status 1.
"""


class NcdxError(Exception):
    exit_code = 1


class InputError(NcdxError):
    exit_code = 2


class PreconditionError(NcdxError):
    exit_code = 3


class SchemaError(InputError):
    pass


class UnknownVariable(InputError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ContextMismatch(InputError, ValueError):
    pass


class ZeroDenominator(PreconditionError, ZeroDivisionError):
    pass


class NotSquare(PreconditionError, ValueError):
    pass


class SingularMatrix(PreconditionError, ValueError):
    pass


class SingularSubmatrix(SingularMatrix):
    pass


class SingularLeadingCoefficient(PreconditionError, ValueError):
    pass


class NonPolynomialCoefficients(PreconditionError, ValueError):
    pass


class DegenerateKernel(PreconditionError, ValueError):
    pass


class NonzeroRemainder(PreconditionError, ValueError):
    pass


class IrrationalSpectrum(PreconditionError, ValueError):
    pass


class NotAnEigenvalue(PreconditionError, ValueError):
    pass


class KernelMismatch(PreconditionError, ValueError):
    pass


class InternalMismatch(NcdxError, AssertionError):
    """Two independent constructions disagreed; always a bug."""
    exit_code = 1
