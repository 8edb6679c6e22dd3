from __future__ import annotations

import math
from datetime import timedelta

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spcc.errors import NotFound
from spcc.model import (
    ContextVector,
    DataSeries,
    MeasurementPoint,
    StatusColor,
    Task,
    rollup,
    validate_plan,
    worst_status,
)

from .conftest import day, dt


def task(tid, start, end, budget=0.0, percent=0.0, parent=None, astart=None, aend=None):
    return Task(id=tid, name=tid, planned_start=dt(start), planned_end=dt(end),
                budget=budget, percent_complete=percent, parent=parent,
                actual_start=dt(astart) if astart is not None else None,
                actual_end=dt(aend) if aend is not None else None)


class TestStatusColor:
    def test_total_severity_order(self):
        assert StatusColor.NO_DATA < StatusColor.GREEN < StatusColor.YELLOW < StatusColor.RED

    def test_worst_of_empty_is_no_data(self):
        assert worst_status([]) == StatusColor.NO_DATA


class TestMeasurementPoint:
    @pytest.mark.parametrize("bad", [float("nan"), float("inf"), float("-inf")])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(ValueError):
            MeasurementPoint("m", "e", day(0), bad)

    def test_series_requires_strictly_increasing_timestamps(self):
        p = MeasurementPoint("m", "e", day(0), 1.0)
        with pytest.raises(ValueError):
            DataSeries("m", "e", (p, p))

    def test_series_rejects_foreign_points(self):
        p = MeasurementPoint("other", "e", day(0), 1.0)
        with pytest.raises(ValueError):
            DataSeries("m", "e", (p,))

    def test_truncated_keeps_points_at_or_before(self):
        s = DataSeries("m", "e", tuple(MeasurementPoint("m", "e", day(i), i) for i in range(5)))
        assert [p.value for p in s.truncated(day(2)).points] == [0, 1, 2]


class TestValidatePlan:
    def test_date_inversion(self):
        violations = validate_plan([task("a", 5, 1)])
        assert len(violations) == 1
        assert violations[0].kind == "date inversion"
        assert violations[0].task_id == "a"

    def test_two_task_parent_cycle_reported_once(self):
        plan = [task("a", 0, 1, parent="b"), task("b", 0, 1, parent="a")]
        violations = validate_plan(plan)
        assert len(violations) == 1
        assert violations[0].kind == "parent cycle"
        assert "{a,b}" in violations[0].message

    def test_valid_three_task_tree_is_clean(self):
        plan = [
            task("root", 0, 9, budget=0.0),
            task("x", 0, 4, budget=10.0, percent=0.5, parent="root"),
            task("y", 5, 9, budget=20.0, percent=0.0, parent="root"),
        ]
        assert validate_plan(plan) == []

    def test_negative_budget_and_percent_range(self):
        violations = validate_plan([task("a", 0, 1, budget=-5.0, percent=1.5)])
        kinds = {v.kind for v in violations}
        assert kinds == {"negative budget", "percent out of range"}

    def test_unknown_parent(self):
        violations = validate_plan([task("a", 0, 1, parent="ghost")])
        assert [v.kind for v in violations] == ["unknown parent"]

    def test_duplicate_ids(self):
        violations = validate_plan([task("a", 0, 1), task("a", 2, 3)])
        assert any(v.kind == "duplicate id" for v in violations)


def _oracle_plan_valid(plan) -> bool:
    """Independent invariant evaluation: per-task checks plus bounded
    parent walking for cycle detection."""
    ids = [t.id for t in plan]
    if len(ids) != len(set(ids)):
        return False
    by_id = {t.id: t for t in plan}
    for t in plan:
        if t.planned_start > t.planned_end:
            return False
        if t.actual_start and t.actual_end and t.actual_start > t.actual_end:
            return False
        if t.budget < 0 or not 0 <= t.percent_complete <= 1:
            return False
        if t.parent is not None and t.parent not in by_id:
            return False
    for t in plan:
        cur, steps = t.parent, 0
        while cur is not None:
            steps += 1
            if steps > len(plan):
                return False
            cur = by_id[cur].parent
    return True


@st.composite
def plans(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    tasks = []
    for i in range(n):
        start = draw(st.integers(min_value=0, max_value=30))
        length = draw(st.integers(min_value=-3, max_value=10))
        parent = draw(st.one_of(st.none(), st.integers(min_value=0, max_value=n - 1)))
        tasks.append(task(
            f"t{i}", start, start + length,
            budget=draw(st.floats(min_value=-10, max_value=100, allow_nan=False)),
            percent=draw(st.floats(min_value=-0.5, max_value=1.5, allow_nan=False)),
            parent=f"t{parent}" if parent is not None and parent != i else None,
        ))
    return tasks


@given(plans())
@settings(max_examples=200, deadline=None)
def test_validate_plan_matches_independent_oracle(plan):
    assert (validate_plan(plan) == []) == _oracle_plan_valid(plan)


class TestRollup:
    def test_single_child_identity(self):
        plan = [task("p", 0, 9), task("c", 0, 4, budget=10.0, percent=0.5, parent="p")]
        rolled = rollup(plan, "p")
        assert (rolled.planned_start, rolled.planned_end) == (dt(0), dt(4))
        assert rolled.budget == 10.0
        assert rolled.percent_complete == 0.5

    def test_budget_weighted_percent_and_hull(self):
        plan = [
            task("p", 0, 1),
            task("a", 0, 4, budget=10.0, percent=1.0, parent="p"),
            task("b", 2, 8, budget=30.0, percent=0.0, parent="p"),
        ]
        rolled = rollup(plan, "p")
        assert (rolled.planned_start, rolled.planned_end) == (dt(0), dt(8))
        assert rolled.budget == 40.0
        # (10*1 + 30*0) / 40
        assert rolled.percent_complete == pytest.approx(0.25)

    def test_zero_budget_falls_back_to_unweighted_mean(self):
        plan = [
            task("p", 0, 1),
            task("a", 0, 1, budget=0.0, percent=0.0, parent="p"),
            task("b", 0, 1, budget=0.0, percent=1.0, parent="p"),
        ]
        assert rollup(plan, "p").percent_complete == pytest.approx(0.5)

    def test_leaf_rollup_is_identity(self):
        plan = [task("solo", 3, 7, budget=5.0, percent=0.25)]
        assert rollup(plan, "solo") == plan[0]

    def test_unknown_task(self):
        with pytest.raises(NotFound):
            rollup([task("a", 0, 1)], "nope")

    @given(plans())
    @settings(max_examples=100, deadline=None)
    def test_hull_contains_every_descendant(self, plan):
        if not _oracle_plan_valid(plan):
            return
        by_id = {t.id: t for t in plan}
        for t in plan:
            rolled = rollup(plan, t.id)
            cur = set()
            for other in plan:
                walker = other.parent
                while walker is not None:
                    if walker == t.id:
                        cur.add(other.id)
                        break
                    walker = by_id[walker].parent
            for did in cur:
                d = by_id[did]
                assert rolled.planned_start <= d.planned_start
                assert rolled.planned_end >= d.planned_end


class TestContextVector:
    def test_similarity_is_fraction_of_equal_attributes(self):
        a = ContextVector({"domain": "web", "team": "small", "process": "scrum", "crit": "low"})
        b = ContextVector({"domain": "web", "team": "small", "process": "scrum", "crit": "high"})
        assert a.similarity(b) == pytest.approx(0.75)

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            ContextVector((("a", "1"), ("a", "2")))
