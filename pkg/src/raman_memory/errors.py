"""Exception hierarchy shared by the simulator modules."""


class RamanMemoryError(Exception):
    """Base class for all errors raised by this package."""


class InvalidQuantumNumbers(RamanMemoryError, ValueError):
    pass


class InvalidParameters(RamanMemoryError, ValueError):
    pass


class WindowTooSmall(RamanMemoryError, ValueError):
    pass


class ZeroEnergyInput(RamanMemoryError, ValueError):
    pass


class RangeMissesResonance(RamanMemoryError, ValueError):
    pass


class ObjectiveAllZero(RamanMemoryError, RuntimeError):
    pass


class UnitMismatch(RamanMemoryError, ValueError):
    pass


class InvalidSqueezing(RamanMemoryError, ValueError):
    pass


class NegativePhotonNumber(RamanMemoryError, ValueError):
    pass


class EfficiencyOutOfRange(RamanMemoryError, ValueError):
    pass
