"""Exception hierarchy shared across the package."""


class AltRoutesError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(AltRoutesError):
    """A caller-supplied value violates a precondition."""


class ExtractParseError(AltRoutesError):
    """Malformed map extract; carries element/line context where known."""

    def __init__(self, message: str, *, context: str | None = None):
        self.context = context
        super().__init__(message if context is None else f"{message} ({context})")


class EmptyNetworkError(AltRoutesError):
    """Parsing or loading produced a network with no vertices."""


class NetworkFormatError(AltRoutesError):
    """Binary network file is corrupt or has an unsupported version."""


class UnknownVertexError(AltRoutesError):
    """A vertex id does not exist in the network."""


class NoRouteError(AltRoutesError):
    """Target is not reachable from the source."""


class OutOfAreaError(AltRoutesError):
    """A query point lies outside the network's bounding rectangle."""


class SimilarityUndefinedError(AltRoutesError):
    """Set similarity requires at least two routes."""


class EmptyCohortError(AltRoutesError):
    """An aggregation filter matched no rating records."""
