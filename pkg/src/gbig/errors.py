"""Exception types shared across the toolkit."""


class GbigError(Exception):
    """Base class for all domain errors."""


class NoPathError(GbigError):
    """Raised when two nodes lie in different connected components."""


class PathBudgetExceededError(GbigError):
    """Raised when a shortest-path set is larger than the caller's budget."""

    def __init__(self, count, budget):
        super().__init__(f"{count} shortest paths exceed budget {budget}")
        self.count = count
        self.budget = budget


class IsolatedNodeError(GbigError):
    """Raised when an operation needs a reachable neighbor but the node is alone."""


class BundleError(GbigError):
    """Base class for on-disk bundle validation errors; names the offending file."""

    def __init__(self, file, message):
        super().__init__(f"{file}: {message}")
        self.file = file


class MissingFileError(BundleError):
    pass


class ShapeMismatchError(BundleError):
    pass


class AsymmetricEdgeError(BundleError):
    pass


class IndexOutOfRangeError(BundleError):
    pass


class OverlappingMasksError(BundleError):
    pass


class DimensionMismatchError(GbigError):
    """Checkpoint layer dimensions do not chain."""


class CorruptFileError(GbigError):
    """Checkpoint or report file cannot be parsed."""
