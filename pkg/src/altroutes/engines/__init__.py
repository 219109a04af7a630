"""Alternative-route engines and their shared result types."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..network import RoadNetwork
from ..sptree import Path


@dataclass
class EngineDiagnostics:
    iterations: int = 0
    rejected: int = 0
    partial: bool = False
    notes: list[str] = field(default_factory=list)
    details: dict[str, object] = field(default_factory=dict)


@dataclass
class AlternativeSet:
    """Ordered routes produced by one engine for one query.

    routes[0] is always the plain shortest path; travel times are computed
    from the original, unpenalized network weights.
    """

    engine: str
    routes: list[Path]
    diagnostics: EngineDiagnostics


from .penalty import PenaltyConfig, penalty_routes  # noqa: E402
from .plateaus import Plateau, PlateauConfig, find_plateaus, plateau_routes  # noqa: E402
from .dissimilarity import DissimilarityConfig, dissimilar_routes, via_candidates  # noqa: E402

EngineFn = Callable[[RoadNetwork, int, int, int], AlternativeSet]


def engine_names() -> tuple[str, ...]:
    return ("penalty", "plateaus", "dissimilarity")


def run_engine(name: str, net: RoadNetwork, s: int, t: int, k: int, **params) -> AlternativeSet:
    """Dispatch by engine identifier with per-engine keyword parameters."""
    if name == "penalty":
        cfg = PenaltyConfig(k=k, penalty_factor=params.get("penalty_factor", 1.4))
        return penalty_routes(net, s, t, cfg)
    if name == "plateaus":
        cfg = PlateauConfig(k=k, stretch_bound=params.get("stretch_bound", 1.4))
        return plateau_routes(net, s, t, cfg)
    if name == "dissimilarity":
        dcfg = DissimilarityConfig(
            k=k,
            theta=params.get("theta", 0.5),
            stretch_bound=params.get("stretch_bound", 1.4),
        )
        return dissimilar_routes(net, s, t, dcfg)
    raise ValueError(f"unknown engine {name!r}")


__all__ = [
    "AlternativeSet",
    "EngineDiagnostics",
    "PenaltyConfig",
    "penalty_routes",
    "Plateau",
    "PlateauConfig",
    "find_plateaus",
    "plateau_routes",
    "DissimilarityConfig",
    "via_candidates",
    "dissimilar_routes",
    "engine_names",
    "run_engine",
]
