"""Builds serialized scene documents from executed view states.

Every scene carries the execution id and catena version that produced it,
so a rendered picture is always traceable back to its inputs.
"""

from __future__ import annotations

from .catena import ViewState
from .faults import CommEdgeStats, ComponentStats, fault_scene
from .layouts import (
    ForceParams,
    SceneDocument,
    SceneKind,
    bubble_portfolio,
    force_layout,
    gantt_layout,
    legend,
    treemap3d,
)
from .model import Risk, StatusColor
from .serialization import parse_day

STATUS_RGB = {
    "GREEN": (46, 204, 64),
    "YELLOW": (255, 220, 0),
    "RED": (255, 65, 54),
    "NO_DATA": (128, 128, 128),
}

NEUTRAL_RGB = (70, 130, 180)


def build_scene(state: ViewState, execution_id: str, catena_version: str, as_of: str) -> SceneDocument:
    """Turn one view state into its kind's scene document."""
    meta = {
        "node": state.view,
        "as_of": as_of,
        "execution_id": execution_id,
        "catena_version": catena_version,
        "status": state.status.name,
    }
    payload = state.payload
    kind = state.kind

    if kind == SceneKind.GANTT:
        from .store import _task_from_dict

        plan = [_task_from_dict(t) for t in payload.get("plan", ())]
        return gantt_layout(plan, parse_day(payload["today"]), meta)

    if kind == SceneKind.TREEMAP3D:
        tree = payload.get("tree", {"entity": "empty", "children": []})
        if not tree.get("children"):
            return SceneDocument(SceneKind.TREEMAP3D, (), legend(), meta)
        return treemap3d(tree, payload.get("algo", "SQUARIFIED"), meta)

    if kind == SceneKind.BUBBLE:
        risks = [Risk(r["id"], r["name"], r["probability"], r["importance"], r["damage"])
                 for r in payload.get("risks", ())]
        threshold = float(payload.get("options", {}).get("quadrant_threshold", 0.5))
        return bubble_portfolio(risks, meta, threshold)

    if kind == SceneKind.GRAPH3D:
        edges = [CommEdgeStats(e["source"], e["target"], e["total"], e["faults"])
                 for e in payload.get("edges", ())]
        components = [ComponentStats(c["id"], c["total"], c["faults"], c["cluster"])
                      for c in payload.get("components", ())]
        options = payload.get("options", {})
        if not components:
            return SceneDocument(SceneKind.GRAPH3D, (), legend("fault ratio"), meta)
        inputs = fault_scene(components, edges, float(options.get("opacity", 0.25)))
        graph = force_layout(
            inputs["nodes"], inputs["edges"], inputs["clusters"],
            ForceParams(
                spring_len=float(options.get("spring_len", 1.0)),
                iterations=int(options.get("iterations", 200)),
                cooling=float(options.get("cooling", 0.97)),
                cluster_gravity=float(options.get("cluster_gravity", 0.5)),
                seed=int(options.get("seed", 7)),
            ))
        return SceneDocument(
            kind=SceneKind.GRAPH3D,
            items=graph.nodes,
            edges=graph.edges,
            clusters=graph.clusters,
            legend=legend("fault ratio"),
            meta=meta,
        )

    if kind == SceneKind.TIMESERIES:
        items = []
        for entry in payload.get("series", ()):
            color = STATUS_RGB.get(entry.get("status"), NEUTRAL_RGB)
            items.append({
                "name": entry["name"],
                "points": list(entry["series"]["points"]),
                "color": list(color),
                "actions": [],
            })
        return SceneDocument(SceneKind.TIMESERIES, tuple(items), legend(), meta)

    if kind == SceneKind.TABLE:
        items = []
        for row in payload.get("rows", ()):
            items.append({
                "node": row["node"],
                "name": row["name"],
                "status": row["status"],
                "value": row["value"],
                "explanation": row["explanation"],
                "color": list(STATUS_RGB[row["status"]]),
                "actions": [],
            })
        return SceneDocument(SceneKind.TABLE, tuple(items), legend(), meta)

    raise ValueError(f"no scene builder for view kind {kind!r}")
