"""Alternative-route planning on road networks with a blinded rating service."""

from .errors import (
    AltRoutesError,
    EmptyCohortError,
    EmptyNetworkError,
    ExtractParseError,
    InvalidInputError,
    NetworkFormatError,
    NoRouteError,
    OutOfAreaError,
    SimilarityUndefinedError,
    UnknownVertexError,
)
from .geo import BoundingRect, GeoPoint, haversine_m
from .network import (
    Edge,
    NetworkBuilder,
    RoadClass,
    RoadNetwork,
    edge_travel_time,
    load_network,
    save_network,
    snap_to_vertex,
)
from .osm import parse_extract
from .sptree import Orientation, Path, ShortestPathTree, build_tree, path_from_trees, shortest_path
from .engines import (
    AlternativeSet,
    DissimilarityConfig,
    EngineDiagnostics,
    PenaltyConfig,
    Plateau,
    PlateauConfig,
    dissimilar_routes,
    engine_names,
    find_plateaus,
    penalty_routes,
    plateau_routes,
    run_engine,
    via_candidates,
)
from .metrics import SimilarityReport, dis, jaccard, overlap_length, set_similarity, validate_route
from .analytics import (
    AggregateRow,
    AnovaResult,
    CategoryBoundaries,
    CohortFilter,
    LengthCategory,
    RatingRecord,
    aggregate,
    categorize,
    rm_anova,
)

__version__ = "0.1.0"
