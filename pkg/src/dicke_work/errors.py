"""Exception hierarchy shared by all modules."""


class DickeError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameters(DickeError, ValueError):
    pass


class ImaginarySpectrum(DickeError, ArithmeticError):
    """A polariton radicand is negative: the point is past the instability
    of the chosen phase branch."""


class NegativeTemperature(DickeError, ValueError):
    pass


class NonNormalizable(DickeError, ValueError):
    pass


class NonSymplecticMatrix(DickeError, ValueError):
    pass


class NegativeDwell(DickeError, ValueError):
    pass


class BasisMismatch(DickeError, ValueError):
    pass


class OpenProtocol(DickeError, ValueError):
    pass


class NonNormalPhase(DickeError, ValueError):
    pass


class ZeroDenominator(DickeError, ZeroDivisionError):
    pass


class UnphysicalCovariance(DickeError, ValueError):
    pass


class ComplexNuMinus(DickeError, ArithmeticError):
    pass


class CutoffTooSmall(DickeError, RuntimeError):
    pass


class ConfigError(DickeError, ValueError):
    pass
