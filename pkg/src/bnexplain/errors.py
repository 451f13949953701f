"""Exception types shared across the package."""


class NetworkFormatError(ValueError):
    """A network file could not be parsed (syntax-level failure)."""


class NetworkValidationError(ValueError):
    """Network contents violate a structural constraint (shape, sums, cycles)."""


class ImpossibleEvidenceError(ValueError):
    """A query conditioned on an event of probability zero."""


class StateSpaceError(ValueError):
    """A full-joint enumeration would exceed the configured cell cap."""


class OracleDivergenceError(RuntimeError):
    """Exact inference and the enumeration oracle disagree beyond tolerance."""
