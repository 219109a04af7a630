"""Rating records, cohort aggregation and one-way repeated-measures ANOVA."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import betainc

from .errors import EmptyCohortError, InvalidInputError
from .geo import GeoPoint


class LengthCategory(Enum):
    SMALL = "small"
    MEDIUM = "medium"
    LONG = "long"


@dataclass(frozen=True)
class CategoryBoundaries:
    """Right-closed minute intervals: (0, small], (small, medium], (medium, long]."""

    small_max: float = 10.0
    medium_max: float = 25.0
    long_max: float = 80.0

    def __post_init__(self) -> None:
        if not (0.0 < self.small_max < self.medium_max < self.long_max):
            raise InvalidInputError("category boundaries must increase from zero")


DEFAULT_BOUNDARIES = CategoryBoundaries()


def categorize(fastest_time: float, boundaries: CategoryBoundaries = DEFAULT_BOUNDARIES) -> LengthCategory:
    """Bucket a fastest travel time (seconds) into a route-length category."""
    minutes = fastest_time / 60.0
    if minutes <= 0:
        raise InvalidInputError(f"fastest time must be positive, got {fastest_time}")
    if minutes <= boundaries.small_max:
        return LengthCategory.SMALL
    if minutes <= boundaries.medium_max:
        return LengthCategory.MEDIUM
    if minutes <= boundaries.long_max:
        return LengthCategory.LONG
    raise InvalidInputError(
        f"fastest time {minutes:.1f} min exceeds the {boundaries.long_max:.0f} min ceiling"
    )


@dataclass(frozen=True)
class RatingRecord:
    response_id: str
    city: str
    query: tuple[GeoPoint, GeoPoint]
    fastest_time: float
    resident: bool
    scores: dict[str, int]
    timestamp: str

    def __post_init__(self) -> None:
        if self.fastest_time <= 0:
            raise InvalidInputError("fastest_time must be positive")
        if not self.scores:
            raise InvalidInputError("record carries no scores")
        for approach, score in self.scores.items():
            if not isinstance(score, int) or not (1 <= score <= 5):
                raise InvalidInputError(f"score for {approach} outside 1..5: {score}")


@dataclass(frozen=True)
class CohortFilter:
    city: str | None = None
    residents_only: bool = False
    category: LengthCategory | None = None
    boundaries: CategoryBoundaries = DEFAULT_BOUNDARIES

    def matches(self, r: RatingRecord) -> bool:
        if self.city is not None and r.city != self.city:
            return False
        if self.residents_only and not r.resident:
            return False
        if self.category is not None and categorize(r.fastest_time, self.boundaries) is not self.category:
            return False
        return True

    def describe(self) -> str:
        parts = []
        if self.city:
            parts.append(self.city)
        parts.append("residents" if self.residents_only else "all")
        if self.category:
            parts.append(f"{self.category.value} routes")
        return ", ".join(parts)


@dataclass(frozen=True)
class AggregateRow:
    cohort: str
    per_approach: dict[str, tuple[float, float]]  # approach -> (mean, sample sd)
    count: int
    flags: tuple[str, ...] = ()


def aggregate(records: list[RatingRecord], cohort: CohortFilter | None = None) -> AggregateRow:
    """Mean and sample (n-1) standard deviation per approach over a cohort."""
    cohort = cohort or CohortFilter()
    picked = [r for r in records if cohort.matches(r)]
    if not picked:
        raise EmptyCohortError(f"no records match cohort: {cohort.describe()}")
    approaches = sorted({a for r in picked for a in r.scores})
    per_approach: dict[str, tuple[float, float]] = {}
    flags: list[str] = []
    for a in approaches:
        values = np.array([r.scores[a] for r in picked if a in r.scores], dtype=float)
        mean = float(values.mean())
        if len(values) > 1:
            sd = float(values.std(ddof=1))
        else:
            sd = 0.0
            if "n=1" not in flags:
                flags.append("n=1")
        per_approach[a] = (mean, sd)
    return AggregateRow(cohort.describe(), per_approach, len(picked), tuple(flags))


@dataclass(frozen=True)
class AnovaResult:
    F: float
    df_between: int
    df_error: int
    p: float
    infinite_f: bool = False


def rm_anova(records: list[RatingRecord]) -> AnovaResult:
    """One-way repeated-measures ANOVA across approaches.

    Each record is one subject rating every approach. The error term is
    the within-subject variation left after removing the per-subject mean
    (SS_error = SS_within - SS_subjects).
    """
    if len(records) < 2:
        raise InvalidInputError("repeated-measures ANOVA needs >= 2 records")
    approaches = sorted(records[0].scores)
    if len(approaches) < 2:
        raise InvalidInputError("need >= 2 approaches")
    for r in records:
        if sorted(r.scores) != approaches:
            raise InvalidInputError(f"record {r.response_id} does not score every approach")

    table = np.array([[float(r.scores[a]) for a in approaches] for r in records])
    n, k = table.shape
    grand = table.mean()
    condition_means = table.mean(axis=0)
    subject_means = table.mean(axis=1)

    ss_conditions = n * float(((condition_means - grand) ** 2).sum())
    ss_subjects = k * float(((subject_means - grand) ** 2).sum())
    ss_within = float(((table - condition_means) ** 2).sum())
    ss_error = ss_within - ss_subjects

    df_between = k - 1
    df_error = df_between * (n - 1)

    if ss_error <= 1e-12 * max(1.0, ss_within):
        if ss_conditions <= 1e-12 * max(1.0, ss_within):
            return AnovaResult(0.0, df_between, df_error, 1.0)
        return AnovaResult(math.inf, df_between, df_error, 0.0, infinite_f=True)

    f_stat = (ss_conditions / df_between) / (ss_error / df_error)
    return AnovaResult(f_stat, df_between, df_error, f_upper_tail(f_stat, df_between, df_error))


def f_upper_tail(f: float, df1: int, df2: int) -> float:
    """P(F >= f) via the regularized incomplete beta function."""
    if f <= 0:
        return 1.0
    if math.isinf(f):
        return 0.0
    x = df2 / (df2 + df1 * f)
    return float(betainc(df2 / 2.0, df1 / 2.0, x))
