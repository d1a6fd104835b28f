"""Exception types shared across the package."""


class DephasimError(Exception):
    """Base class for every error raised by this package."""


class BipartitenessError(DephasimError):
    """The requested graph or hopping support is not bipartite."""


class InvalidHoppingError(DephasimError):
    """Hopping matrix is asymmetric, complex, or has a nonzero diagonal."""


class SectorError(DephasimError):
    """A configuration or state does not belong to the requested particle sector."""


class ShapeError(DephasimError):
    """Array dimensions do not match the operation's contract."""


class ConfigError(DephasimError):
    """A site configuration is malformed (duplicates, out of range, wrong length)."""


class DegenerateStateError(DephasimError):
    """Non-unitary evolution collapsed the orbital matrix rank."""


class OverflowGuardError(DephasimError):
    """Accumulated log-scale exceeded the configured cap."""


class SizeError(DephasimError):
    """Problem size exceeds the dense-oracle or enumeration caps."""


class DomainError(DephasimError):
    """Scalar argument outside the mathematical domain of the operation."""


class ExperimentConfigError(DephasimError):
    """Experiment configuration file is malformed or inconsistent."""
