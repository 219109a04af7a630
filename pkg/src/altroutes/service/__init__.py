"""Query/rating HTTP service: blinded engine comparison over one network."""

from .blinding import CANONICAL_ORDER, assign_labels
from .config import ServiceConfig, load_config
from .core import QueryService, display_minutes, path_geometry
from .provider import ProviderAdapter, ReplayStubProvider, UnavailableProvider
from .store import RatingStore

__all__ = [
    "CANONICAL_ORDER",
    "assign_labels",
    "ServiceConfig",
    "load_config",
    "QueryService",
    "display_minutes",
    "path_geometry",
    "ProviderAdapter",
    "ReplayStubProvider",
    "UnavailableProvider",
    "RatingStore",
]
