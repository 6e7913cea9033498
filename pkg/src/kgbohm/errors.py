"""Exception types shared across the package."""


class NumericalGuardError(RuntimeError):
    """A runtime guard tripped; results past this point would be unreliable."""


class BoundaryContaminationError(NumericalGuardError):
    """Density reached the edge of the periodic box; wraparound would corrupt fields."""


class EdgeAnchorError(NumericalGuardError):
    """Left-edge density too large for the zero-current anchor of the fast current path."""


class MaskedRegionError(NumericalGuardError):
    """A trajectory entered a region where the velocity field is masked."""


class DomainExitError(NumericalGuardError):
    """A trajectory left the interior of the spatial grid."""


class ConfigError(ValueError):
    """A scenario configuration failed to parse or validate."""
