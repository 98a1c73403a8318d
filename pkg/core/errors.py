class GammaEchoError(Exception):
    """Base class for every error raised by the engine"""


class TruncationTooSmall(GammaEchoError):
    """Fock cutoff leaves too much probability outside the basis"""


class InvalidCutoff(GammaEchoError):
    """Requested level does not fit in the truncated basis"""


class InvalidState(GammaEchoError):
    """Amplitudes or matrix entries violate a state invariant"""


class InvalidParams(GammaEchoError):
    """Model constants outside their allowed range"""


class InvalidGrid(GammaEchoError):
    """Time or phase-space sampling grid is malformed"""


class NotPSD(GammaEchoError):
    """Matrix has an eigenvalue below the repair threshold"""


class EmptyInput(GammaEchoError):
    """Operation needs at least one input element"""


class GridTooCoarse(GammaEchoError):
    """Phase-space grid fails its trace-reproduction self-test"""


class DimensionMismatch(GammaEchoError):
    """Operators live on different truncated bases"""


class DegenerateSweep(GammaEchoError):
    """Saturation sweep cannot constrain the fit"""


class ConfigError(GammaEchoError):
    """Experiment configuration could not be resolved"""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")
