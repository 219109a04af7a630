"""Blinded label assignment for route groups."""

from __future__ import annotations

import hashlib
import random
import string

# Display order A, B, C, D for the full engine roster; absent engines
# compact the labels upward.
CANONICAL_ORDER = ("external", "plateaus", "dissimilarity", "penalty")


def assign_labels(
    present_engines: list[str],
    policy: str = "fixed",
    seed: int = 0,
    query_id: str = "",
) -> dict[str, str]:
    """Map labels 'A'.. to engine ids without revealing which is which.

    "fixed" keeps the canonical presentation order; "shuffle" applies a
    per-query permutation reproducible from (seed, query_id).
    """
    ordered = [e for e in CANONICAL_ORDER if e in present_engines]
    ordered += [e for e in present_engines if e not in CANONICAL_ORDER]
    if policy == "shuffle":
        digest = hashlib.sha256(f"{seed}:{query_id}".encode()).digest()
        rng = random.Random(int.from_bytes(digest[:8], "big"))
        rng.shuffle(ordered)
    elif policy != "fixed":
        raise ValueError(f"unknown label policy {policy!r}")
    return {string.ascii_uppercase[i]: engine for i, engine in enumerate(ordered)}
