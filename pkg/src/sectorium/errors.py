"""Exception hierarchy shared by every module."""


class SectoriumError(Exception):
    """Base class for all library errors."""


class DomainError(SectoriumError, ValueError):
    """An argument lies outside the domain where a function is defined."""


class BranchError(DomainError):
    """A spectral parameter lies on the cut [0, +inf)."""


class ConvergenceError(SectoriumError, RuntimeError):
    """An iterative or adaptive numerical procedure did not reach its tolerance."""


class ModelError(SectoriumError):
    """A boundary model could not produce a requested quantity."""


class SingularPointError(SectoriumError):
    """The spectral parameter is (numerically) an eigenvalue."""


class UniqueExtensionError(SectoriumError):
    """The operator has a single m-sectorial extension (the Friedrichs one)."""
