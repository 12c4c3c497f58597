"""Exception hierarchy shared by every lptvinv module."""


class LptvError(Exception):
    """Base class for all errors raised by lptvinv."""


class DimensionError(LptvError, ValueError):
    """Matrices that should be conformable are not."""


class NonSquare(LptvError, ValueError):
    """An inversion request was made for a plant with m != p."""


class StructureViolation(LptvError):
    """A dense matrix has significant entries outside its expected block pattern."""

    def __init__(self, message, row=None, col=None, magnitude=None):
        super().__init__(message)
        self.row = row
        self.col = col
        self.magnitude = magnitude


class FactorizationMismatch(LptvError):
    """The cycled Markov parameter does not factor as shift times block-diagonal."""

    def __init__(self, message, deviation):
        super().__init__(message)
        self.deviation = deviation


class RelativeDegreeMismatch(LptvError):
    """The plant does not have the relative degree an inversion routine needs."""

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


class SingularMarkov(LptvError):
    """A periodic Markov parameter is singular at some phase."""

    def __init__(self, message, phase):
        super().__init__(message)
        self.phase = phase


class UnsupportedStructure(LptvError):
    """Mixed or undetected relative degree; no closed-form inverse is available."""

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


class InsufficientPreview(LptvError, ValueError):
    """The output sequence is too short for the requested horizon plus delay."""


class InsufficientHorizon(LptvError, ValueError):
    """The requested horizon does not cover the inverse delay."""


class SimulationDiverged(LptvError):
    """A recursion produced a non-finite value or left the divergence bound."""

    def __init__(self, message, step):
        super().__init__(message)
        self.step = step


class ParseError(LptvError, ValueError):
    """A system document is malformed."""
