"""Communication-fault statistics and the clustered fault graph inputs.

Counting is an order-independent fold over trace events; node faultiness
is communication-count-weighted (sum counts over incident edges, then
divide), not a mean of edge ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .layouts.colors import color_scale
from .model import TraceEvent, TraceOutcome


@dataclass(frozen=True)
class CommEdgeStats:
    source: str
    target: str
    total: int
    faults: int

    def __post_init__(self):
        if self.faults > self.total or self.total < 0 or self.faults < 0:
            raise ValueError(f"edge {self.source}->{self.target}: bad counts {self.faults}/{self.total}")

    @property
    def ratio(self) -> float:
        if self.total == 0:
            raise ValueError("ratio undefined for total=0")
        return self.faults / self.total

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "total": self.total,
            "faults": self.faults,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class ComponentStats:
    id: str
    total: int
    faults: int
    cluster: str

    @property
    def ratio(self) -> Optional[float]:
        """Faultiness over all incident communication; None when isolated."""
        if self.total == 0:
            return None
        return self.faults / self.total

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "total": self.total,
            "faults": self.faults,
            "ratio": self.ratio,
            "cluster": self.cluster,
        }


def edge_stats(events: Sequence[TraceEvent]) -> list:
    """Exact counts per observed ordered (source, target) pair, sorted."""
    counts: dict = {}
    for e in events:
        key = (e.source, e.target)
        total, faults = counts.get(key, (0, 0))
        counts[key] = (total + 1, faults + (1 if e.outcome == TraceOutcome.FAULT else 0))
    return [CommEdgeStats(s, t, total, faults)
            for (s, t), (total, faults) in sorted(counts.items())]


def component_stats(edges: Sequence[CommEdgeStats],
                    clustering: Optional[Mapping[str, str]] = None) -> list:
    """Per-component sums over all incident edges (in and out).

    Components missing from `clustering` get singleton clusters named
    after themselves. Isolated components (declared in clustering but on
    no edge) report total 0 and an undefined ratio.
    """
    clustering = dict(clustering or {})
    totals: dict = {c: [0, 0] for c in clustering}
    for e in edges:
        for comp in {e.source, e.target}:  # a self-loop is one incident edge
            acc = totals.setdefault(comp, [0, 0])
            acc[0] += e.total
            acc[1] += e.faults
    return [ComponentStats(comp, total, faults, clustering.get(comp, comp))
            for comp, (total, faults) in sorted(totals.items())]


def fault_scene(components: Sequence[ComponentStats], edges: Sequence[CommEdgeStats],
                opacity: float = 0.25, merge_bidirectional: bool = True) -> dict:
    """Force-layout inputs: nodes colored by component fault ratio, edges
    colored by edge fault ratio with width log(1+total), cluster hulls at
    the given opacity.

    By default opposite directions of the same pair are merged into one
    drawn edge colored by their combined ratio (stats stay directed).
    Components with no data are drawn gray.
    """
    if not 0.0 <= opacity <= 1.0:
        raise ValueError(f"opacity {opacity} outside [0,1]")
    nodes = []
    for c in components:
        color = (128, 128, 128) if c.ratio is None else color_scale(c.ratio)
        nodes.append({"id": c.id, "color": color, "cluster": c.cluster})

    drawn: dict = {}
    for e in edges:
        key = tuple(sorted((e.source, e.target))) if merge_bidirectional else (e.source, e.target)
        total, faults = drawn.get(key, (0, 0))
        drawn[key] = (total + e.total, faults + e.faults)
    scene_edges = []
    for (a, b), (total, faults) in sorted(drawn.items()):
        scene_edges.append({
            "source": a,
            "target": b,
            "color": color_scale(faults / total) if total else (128, 128, 128),
            "width": math.log1p(total),
        })

    clusters = {c.cluster: opacity for c in components}
    return {"nodes": nodes, "edges": scene_edges, "clusters": clusters}
