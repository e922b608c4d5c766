"""Exception types shared across the package."""


class SpectrumError(ValueError):
    """Invalid length spectrum input."""


class ParseError(SpectrumError):
    pass


class NonPositiveLength(SpectrumError):
    pass


class NonPositiveMultiplicity(SpectrumError):
    pass


class EmptySpectrum(SpectrumError):
    pass


class SpectrumOverflow(SpectrumError):
    """A generated multiplicity no longer fits a float exactly."""


class DivergentSum(ArithmeticError):
    """The partition sum over an unbounded spectrum does not converge."""


class SimplexError(ValueError):
    pass


class DimensionMismatch(SimplexError):
    pass


class NotOnSimplex(SimplexError):
    pass


class NonPositiveWeight(ValueError):
    pass


class TargetOutOfRange(ValueError):
    pass


class DegenerateSpectrum(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass
