"""Exception hierarchy shared by every module."""


class WorkbenchError(ValueError):
    """Base class for all input and precondition errors."""


class SingularModel(WorkbenchError):
    pass


class NonMinimalModel(WorkbenchError):
    pass


class NotPrime(WorkbenchError):
    pass


class EvenPrime(WorkbenchError):
    pass


class EqualPrimes(WorkbenchError):
    pass


class NonNegativeDiscriminant(WorkbenchError):
    pass


class NonIntegralEntry(WorkbenchError):
    pass


class BadPrime(WorkbenchError):
    pass


class LevelMismatch(WorkbenchError):
    pass


class NotFiniteOrder(WorkbenchError):
    pass


class InfeasibleSize(WorkbenchError):
    pass


class Malformed(WorkbenchError):
    pass


class ConductorMismatch(WorkbenchError):
    pass


class EmptyDegreeList(WorkbenchError):
    pass


class NotTateAtP(WorkbenchError):
    pass


class SupersingularAp(WorkbenchError):
    pass


class BadReductionClass(WorkbenchError):
    pass
