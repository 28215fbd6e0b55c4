"""Exception hierarchy shared by every module of the package."""


class TypeQError(ValueError):
    """Base class for parameter and precondition failures."""


class NotPrime(TypeQError):
    pass


class TooLarge(TypeQError):
    pass


class EvenCharacteristic(TypeQError):
    pass


class ZeroInverse(TypeQError, ZeroDivisionError):
    pass


class FieldMismatch(TypeQError):
    pass


class BadSubfield(TypeQError):
    pass


class BadModulus(TypeQError):
    pass


class PrimeMismatch(TypeQError):
    pass


class BadOrder(TypeQError):
    pass


class PreconditionViolated(TypeQError):
    pass


class BadM(TypeQError):
    pass


class BadK(TypeQError):
    pass


class BadTSizes(TypeQError):
    pass


class VariantSizeMismatch(TypeQError):
    pass


class EvenC(TypeQError):
    pass


class VariantMismatch(TypeQError):
    pass


class NotClosed(TypeQError):
    pass


class NotProjective(TypeQError):
    pass


class PropertyViolation(AssertionError):
    """A property the construction guarantees did not hold."""


class ParityHypothesisFailed(PropertyViolation):
    pass


class OracleMismatch(PropertyViolation):
    pass


class TableMismatch(PropertyViolation):
    pass
