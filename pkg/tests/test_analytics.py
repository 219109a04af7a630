import json
import math
from pathlib import Path

import pytest

from altroutes import (
    CategoryBoundaries,
    CohortFilter,
    EmptyCohortError,
    GeoPoint,
    LengthCategory,
    RatingRecord,
    aggregate,
    categorize,
    rm_anova,
)
from altroutes.analytics import f_upper_tail
from altroutes.errors import InvalidInputError

DATA = Path(__file__).parent / "data"

_QUERY = (GeoPoint(0.001, 0.001), GeoPoint(0.002, 0.002))


def record(scores, *, rid="r1", city="testville", fastest=600.0, resident=True):
    return RatingRecord(rid, city, _QUERY, fastest, resident, scores, "2026-01-01T00:00:00Z")


class TestCategorize:
    @pytest.mark.parametrize(
        "seconds,expected",
        [
            (600, LengthCategory.SMALL),     # 10 min, right-closed
            (601, LengthCategory.MEDIUM),
            (1500, LengthCategory.MEDIUM),   # 25 min
            (1501, LengthCategory.LONG),
            (1, LengthCategory.SMALL),
            (4800, LengthCategory.LONG),     # 80 min ceiling included
        ],
    )
    def test_boundaries(self, seconds, expected):
        assert categorize(seconds) is expected

    def test_exact_boundary_belongs_to_lower_interval(self):
        b = CategoryBoundaries()
        for bound, cat in [
            (b.small_max, LengthCategory.SMALL),
            (b.medium_max, LengthCategory.MEDIUM),
            (b.long_max, LengthCategory.LONG),
        ]:
            assert categorize(bound * 60.0, b) is cat

    def test_beyond_ceiling_rejected(self):
        with pytest.raises(InvalidInputError):
            categorize(80 * 60 + 1)

    def test_custom_boundaries(self):
        # the Dhaka-style split: (10,20] and (20,80]
        b = CategoryBoundaries(small_max=10, medium_max=20, long_max=80)
        assert categorize(19 * 60, b) is LengthCategory.MEDIUM
        assert categorize(21 * 60, b) is LengthCategory.LONG


class TestAggregate:
    def test_single_record_flags_n1(self):
        row = aggregate([record({"A": 3, "B": 3, "C": 3, "D": 3})])
        assert row.count == 1
        assert all(mean == 3.0 and sd == 0.0 for mean, sd in row.per_approach.values())
        assert "n=1" in row.flags

    def test_two_record_sample_sd(self):
        rows = [record({"A": 1}, rid="r1"), record({"A": 5}, rid="r2")]
        row = aggregate(rows)
        mean, sd = row.per_approach["A"]
        assert mean == 3.0
        assert sd == pytest.approx(math.sqrt(8))  # 2.828..., n-1 divisor

    def test_empty_cohort(self):
        with pytest.raises(EmptyCohortError):
            aggregate([record({"A": 3})], CohortFilter(city="elsewhere"))

    def test_filters(self):
        rows = [
            record({"A": 5}, rid="r1", city="x", resident=True, fastest=300),
            record({"A": 1}, rid="r2", city="x", resident=False, fastest=300),
            record({"A": 3}, rid="r3", city="y", resident=True, fastest=1200),
        ]
        assert aggregate(rows, CohortFilter(city="x")).count == 2
        assert aggregate(rows, CohortFilter(residents_only=True)).count == 2
        assert aggregate(rows, CohortFilter(category=LengthCategory.MEDIUM)).count == 1
        assert aggregate(rows, CohortFilter(city="x", residents_only=True)).per_approach["A"][0] == 5.0

    def test_permutation_invariant_and_additive_counts(self):
        rows = [
            record({"A": i % 5 + 1}, rid=f"r{i}", resident=(i % 2 == 0)) for i in range(10)
        ]
        full = aggregate(rows)
        reverse = aggregate(rows[::-1])
        assert full.per_approach == reverse.per_approach
        res = aggregate(rows, CohortFilter(residents_only=True)).count
        nonres = sum(1 for r in rows if not r.resident)
        assert res + nonres == full.count

    def test_score_validation(self):
        with pytest.raises(InvalidInputError):
            record({"A": 0})
        with pytest.raises(InvalidInputError):
            record({"A": 6})


class TestRmAnova:
    def test_identical_scores_give_zero_f(self):
        rows = [record({"A": 3, "B": 3, "C": 3, "D": 3}, rid=f"r{i}") for i in range(6)]
        result = rm_anova(rows)
        assert result.F == 0.0
        assert result.p == 1.0

    def test_golden_five_by_four(self):
        golden = json.loads((DATA / "anova_golden.json").read_text())
        rows = [
            record({f"c{j}": v for j, v in enumerate(scores)}, rid=f"s{i}")
            for i, scores in enumerate(golden["table"])
        ]
        result = rm_anova(rows)
        assert result.df_between == golden["df_between"]
        assert result.df_error == golden["df_error"]
        assert result.F == pytest.approx(golden["F"], rel=1e-6)
        assert result.p == pytest.approx(golden["p"], rel=1e-6)

    def test_perfect_separation_flags_infinite_f(self):
        # every subject rates B exactly one point above A
        rows = [record({"A": s, "B": s + 1}, rid=f"r{s}") for s in (1, 2, 3, 4)]
        result = rm_anova(rows)
        assert result.infinite_f
        assert math.isinf(result.F)
        assert result.p == 0.0

    def test_shift_invariance_under_per_subject_constants(self):
        golden = json.loads((DATA / "anova_golden.json").read_text())
        base = [
            record({f"c{j}": v for j, v in enumerate(scores)}, rid=f"s{i}")
            for i, scores in enumerate(golden["table"])
        ]
        # shifting a subject's scores by a constant only moves the subject
        # effect, which the error term absorbs; shifts keep scores in 1..5
        shifts = [-1, 1, -1, 1, -1]
        shifted = [
            record(
                {f"c{j}": v + shifts[i] for j, v in enumerate(scores)},
                rid=f"s{i}",
            )
            for i, scores in enumerate(golden["table"])
        ]
        a = rm_anova(base)
        b = rm_anova(shifted)
        assert b.F == pytest.approx(a.F, rel=1e-9)
        assert b.p == pytest.approx(a.p, rel=1e-9)

    def test_degrees_of_freedom(self):
        rows = [record({"A": 1 + i % 3, "B": 2, "C": 3}, rid=f"r{i}") for i in range(7)]
        result = rm_anova(rows)
        assert result.df_between == 2
        assert result.df_error == 2 * 6

    def test_incomplete_scores_rejected(self):
        rows = [record({"A": 1, "B": 2}), record({"A": 1}, rid="r2")]
        with pytest.raises(InvalidInputError):
            rm_anova(rows)

    def test_p_monotone_in_f(self):
        ps = [f_upper_tail(f, 3, 12) for f in (0.5, 1.0, 2.0, 5.0, 13.0, 50.0)]
        assert all(a > b for a, b in zip(ps, ps[1:]))
        assert f_upper_tail(0.0, 3, 12) == 1.0
