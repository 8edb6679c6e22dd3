"""Scene documents: the engine <-> cockpit wire contract.

A SceneDocument is pure geometry plus colors; the UI renders it without
recomputing anything. Field order is fixed so identical scenes serialize
to identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from ..serialization import canonical_json


class SceneKind:
    GANTT = "GANTT"
    TREEMAP3D = "TREEMAP3D"
    BUBBLE = "BUBBLE"
    GRAPH3D = "GRAPH3D"
    TIMESERIES = "TIMESERIES"
    TABLE = "TABLE"

    ALL = (GANTT, TREEMAP3D, BUBBLE, GRAPH3D, TIMESERIES, TABLE)
    FLAT = (GANTT, BUBBLE, TIMESERIES, TABLE)  # 2D kinds, SVG-exportable


def _check_rgb(color) -> list:
    r, g, b = color
    for c in (r, g, b):
        if not (isinstance(c, int) and 0 <= c <= 255):
            raise ValueError(f"color channel {c!r} not an 8-bit integer")
    return [r, g, b]


def _check_finite(label: str, *values: float):
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{label}: non-finite coordinate {v!r}")


@dataclass(frozen=True)
class Cuboid:
    """Axis-aligned box on the unit square with normalized height."""

    entity: str
    x: float
    y: float
    w: float
    d: float
    h: float
    color: tuple

    def __post_init__(self):
        _check_finite(f"cuboid {self.entity}", self.x, self.y, self.w, self.d, self.h)
        if self.w <= 0 or self.d <= 0:
            raise ValueError(f"cuboid {self.entity}: base must have positive extent")
        eps = 1e-9
        if self.x < -eps or self.y < -eps or self.x + self.w > 1 + eps or self.y + self.d > 1 + eps:
            raise ValueError(f"cuboid {self.entity}: base outside unit square")
        if not 0.0 <= self.h <= 1.0:
            raise ValueError(f"cuboid {self.entity}: height {self.h} outside [0,1]")
        object.__setattr__(self, "color", tuple(_check_rgb(self.color)))

    def to_item(self) -> dict:
        return {
            "entity": self.entity,
            "x": self.x,
            "y": self.y,
            "w": self.w,
            "d": self.d,
            "h": self.h,
            "color": list(self.color),
            "actions": [],
        }


BUBBLE_R_MAX = 0.08


@dataclass(frozen=True)
class BubbleItem:
    risk: str
    x: float
    y: float
    r: float
    color: tuple
    quadrant: str

    def __post_init__(self):
        _check_finite(f"bubble {self.risk}", self.x, self.y, self.r)
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0):
            raise ValueError(f"bubble {self.risk}: center outside unit square")
        if not 0.0 <= self.r <= BUBBLE_R_MAX + 1e-12:
            raise ValueError(f"bubble {self.risk}: radius {self.r} outside [0, {BUBBLE_R_MAX}]")
        object.__setattr__(self, "color", tuple(_check_rgb(self.color)))

    def to_item(self) -> dict:
        return {
            "risk": self.risk,
            "x": self.x,
            "y": self.y,
            "r": self.r,
            "color": list(self.color),
            "quadrant": self.quadrant,
            "actions": [],
        }


@dataclass(frozen=True)
class GraphScene:
    """3D node-link scene with cluster hulls."""

    nodes: tuple  # dicts: id, position [x,y,z], color, cluster
    edges: tuple  # dicts: source, target, color, width
    clusters: tuple  # dicts: id, hull (point list), opacity

    def __post_init__(self):
        for n in self.nodes:
            _check_finite(f"graph node {n['id']}", *n["position"])
            _check_rgb(n["color"])
        for e in self.edges:
            _check_rgb(e["color"])
        for c in self.clusters:
            if not 0.0 <= c["opacity"] <= 1.0:
                raise ValueError(f"cluster {c['id']}: opacity {c['opacity']} outside [0,1]")
            for p in c["hull"]:
                _check_finite(f"cluster {c['id']} hull", *p)
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "clusters", tuple(self.clusters))

    def to_dict(self) -> dict:
        return {
            "nodes": [dict(n) for n in self.nodes],
            "edges": [dict(e) for e in self.edges],
            "clusters": [dict(c) for c in self.clusters],
        }


@dataclass(frozen=True)
class SceneDocument:
    """Serialized geometry + color payload for one view.

    `items` is the kind-specific geometry list; GRAPH3D scenes additionally
    carry `edges` and `clusters`. `meta` records the generating node and
    as_of plus kind-specific framing (e.g. the gantt date window).
    """

    kind: str
    items: tuple
    legend: dict
    meta: dict
    edges: tuple = ()
    clusters: tuple = ()

    def __post_init__(self):
        if self.kind not in SceneKind.ALL:
            raise ValueError(f"unknown scene kind {self.kind!r}")
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "clusters", tuple(self.clusters))

    def to_dict(self) -> dict:
        doc = {"kind": self.kind, "items": [dict(i) for i in self.items]}
        if self.kind == SceneKind.GRAPH3D:
            doc["edges"] = [dict(e) for e in self.edges]
            doc["clusters"] = [dict(c) for c in self.clusters]
        doc["legend"] = self.legend
        doc["meta"] = self.meta
        return doc

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    @staticmethod
    def from_dict(doc: dict) -> "SceneDocument":
        return SceneDocument(
            kind=doc["kind"],
            items=tuple(doc["items"]),
            legend=doc["legend"],
            meta=doc["meta"],
            edges=tuple(doc.get("edges", ())),
            clusters=tuple(doc.get("clusters", ())),
        )
