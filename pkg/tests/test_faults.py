from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spcc.faults import CommEdgeStats, component_stats, edge_stats, fault_scene
from spcc.model import TraceEvent, TraceOutcome

from .conftest import day


def event(src, dst, outcome="OK", n=0):
    return TraceEvent(day(n), src, dst, outcome)


class TestEdgeStats:
    def test_counts_and_ratio(self):
        events = [event("A", "B", "FAULT" if i < 2 else "OK", i) for i in range(10)]
        stats = edge_stats(events)
        assert len(stats) == 1
        e = stats[0]
        assert (e.source, e.target, e.total, e.faults) == ("A", "B", 10, 2)
        assert e.ratio == pytest.approx(0.2)

    def test_all_ok_ratio_zero(self):
        assert edge_stats([event("A", "B") for _ in range(5)])[0].ratio == 0.0

    def test_all_fault_ratio_one(self):
        assert edge_stats([event("A", "B", "FAULT") for _ in range(5)])[0].ratio == 1.0

    def test_empty_input(self):
        assert edge_stats([]) == []

    def test_sorted_by_source_target(self):
        events = [event("B", "A"), event("A", "C"), event("A", "B")]
        keys = [(e.source, e.target) for e in edge_stats(events)]
        assert keys == [("A", "B"), ("A", "C"), ("B", "A")]

    def test_directions_kept_separate(self):
        stats = edge_stats([event("A", "B"), event("B", "A", "FAULT")])
        assert len(stats) == 2

    def test_self_communication_rejected_by_default(self):
        with pytest.raises(ValueError):
            TraceEvent.create(day(0), "A", "A", "OK")
        ev = TraceEvent.create(day(0), "A", "A", "OK", allow_self=True)
        assert ev.source == ev.target


class TestComponentStats:
    def test_incident_edge_summation(self):
        edges = [CommEdgeStats("A", "B", 10, 2), CommEdgeStats("C", "A", 30, 0)]
        stats = {c.id: c for c in component_stats(edges)}
        assert stats["A"].total == 40 and stats["A"].faults == 2
        assert stats["A"].ratio == pytest.approx(0.05)

    def test_isolated_component_reports_no_data(self):
        stats = component_stats([], clustering={"lonely": "c1"})
        assert stats[0].total == 0 and stats[0].ratio is None

    def test_symmetric_pair_shares_edge_counts(self):
        edges = [CommEdgeStats("A", "B", 6, 3)]
        stats = {c.id: c for c in component_stats(edges)}
        assert stats["A"].total == stats["B"].total == 6
        assert stats["A"].faults == stats["B"].faults == 3

    def test_unclustered_components_get_singleton_clusters(self):
        stats = component_stats([CommEdgeStats("A", "B", 1, 0)], clustering={"A": "core"})
        by_id = {c.id: c for c in stats}
        assert by_id["A"].cluster == "core"
        assert by_id["B"].cluster == "B"


def random_events(rng: random.Random, n: int):
    comps = [f"c{i}" for i in range(8)]
    events = []
    for i in range(n):
        src, dst = rng.sample(comps, 2)
        events.append(TraceEvent(day(i % 50), src, dst,
                                 "FAULT" if rng.random() < 0.3 else "OK"))
    return events


class TestConservation:
    def test_edge_sums_equal_global_counts_exactly(self):
        rng = random.Random(123)
        events = random_events(rng, 5000)
        stats = edge_stats(events)
        assert sum(e.total for e in stats) == len(events)
        assert sum(e.faults for e in stats) == sum(1 for e in events if e.outcome == TraceOutcome.FAULT)

    def test_order_independence(self):
        rng = random.Random(5)
        events = random_events(rng, 300)
        shuffled = list(events)
        rng.shuffle(shuffled)
        assert edge_stats(events) == edge_stats(shuffled)
        assert component_stats(edge_stats(events)) == component_stats(edge_stats(shuffled))

    def test_node_ratio_within_incident_edge_bounds(self):
        rng = random.Random(9)
        events = random_events(rng, 2000)
        edges = edge_stats(events)
        for comp in component_stats(edges):
            incident = [e.ratio for e in edges if comp.id in (e.source, e.target)]
            if incident:
                assert min(incident) - 1e-12 <= comp.ratio <= max(incident) + 1e-12


class TestFaultScene:
    def test_edge_colors_at_ratio_extremes(self):
        edges = [CommEdgeStats("A", "B", 4, 0), CommEdgeStats("B", "C", 4, 4)]
        scene = fault_scene(component_stats(edges), edges)
        by_pair = {(e["source"], e["target"]): e for e in scene["edges"]}
        assert tuple(by_pair[("A", "B")]["color"]) == (46, 204, 64)
        assert tuple(by_pair[("B", "C")]["color"]) == (255, 65, 54)

    def test_width_is_log1p_of_total(self):
        edges = [CommEdgeStats("A", "B", 1, 0), CommEdgeStats("B", "C", 9, 0),
                 CommEdgeStats("C", "D", 99, 0)]
        scene = fault_scene(component_stats(edges), edges)
        widths = [e["width"] for e in scene["edges"]]
        assert widths == pytest.approx([math.log(2), math.log(10), math.log(100)])

    def test_bidirectional_edges_merged_with_combined_ratio(self):
        edges = [CommEdgeStats("A", "B", 10, 0), CommEdgeStats("B", "A", 10, 10)]
        scene = fault_scene(component_stats(edges), edges)
        assert len(scene["edges"]) == 1
        merged = scene["edges"][0]
        assert merged["width"] == pytest.approx(math.log1p(20))
        from spcc.layouts import color_scale

        assert tuple(merged["color"]) == color_scale(0.5)

    def test_merge_can_be_disabled(self):
        edges = [CommEdgeStats("A", "B", 10, 0), CommEdgeStats("B", "A", 10, 10)]
        scene = fault_scene(component_stats(edges), edges, merge_bidirectional=False)
        assert len(scene["edges"]) == 2

    def test_cluster_opacity_parameter(self):
        edges = [CommEdgeStats("A", "B", 2, 0)]
        scene = fault_scene(component_stats(edges, {"A": "g1", "B": "g1"}), edges, opacity=0.6)
        assert scene["clusters"] == {"g1": 0.6}

    def test_no_data_components_drawn_gray(self):
        scene = fault_scene(component_stats([], clustering={"X": "X"}), [])
        assert tuple(scene["nodes"][0]["color"]) == (128, 128, 128)
