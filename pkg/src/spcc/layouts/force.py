"""3D force-directed layout for clustered graphs.

Spring-electrical model: every node pair repels with k^2/d, every edge
attracts with d^2/k (k = desired spring length), and each node is pulled
toward its cluster centroid scaled by `cluster_gravity`. Displacements are
damped and capped by a geometric cooling schedule, which keeps the system
energy non-increasing once the temperature is low. Fully deterministic for
a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import LayoutDiverged
from .scene import GraphScene

DEFAULT_OPACITY = 0.25
_EPS = 1e-9
_STEP_GAIN = 0.1  # gradient damping; keeps the late, small-step phase stable


@dataclass(frozen=True)
class ForceParams:
    spring_len: float = 1.0
    iterations: int = 300
    cooling: float = 0.97
    cluster_gravity: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.spring_len <= 0 or self.iterations <= 0 or not 0 < self.cooling < 1:
            raise ValueError("force layout parameters must be positive (cooling in (0,1))")
        if self.cluster_gravity < 0:
            raise ValueError("cluster_gravity must be >= 0")


def layout_energy(positions: np.ndarray, edge_index: np.ndarray, k: float) -> float:
    """Sum of spring and repulsion potentials (gradient = applied forces)."""
    n = len(positions)
    energy = 0.0
    if n > 1:
        diff = positions[:, None, :] - positions[None, :, :]
        dist = np.sqrt((diff ** 2).sum(axis=2))
        iu = np.triu_indices(n, k=1)
        energy -= float((k * k * np.log(np.maximum(dist[iu], _EPS))).sum())
    if len(edge_index):
        d = np.linalg.norm(positions[edge_index[:, 0]] - positions[edge_index[:, 1]], axis=1)
        energy += float((d ** 3).sum() / (3.0 * k))
    return energy


def force_layout(nodes, edges, clusters=None, params: ForceParams = ForceParams(),
                 energy_log: list | None = None) -> GraphScene:
    """Lay out `nodes` (dicts with id and optional color/cluster) and
    `edges` (dicts with source/target and optional color/width) in 3D.

    `clusters` maps cluster id to hull opacity (default 0.25 for clusters
    appearing on nodes). Raises LayoutDiverged if positions go non-finite.
    """
    nodes = list(nodes)
    if not nodes:
        raise ValueError("graph is empty")
    ids = [n["id"] for n in nodes]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate node ids")
    index = {nid: i for i, nid in enumerate(ids)}
    n = len(nodes)
    k = params.spring_len

    edge_list = list(edges)
    edge_index = np.array(
        [[index[e["source"]], index[e["target"]]] for e in edge_list], dtype=int
    ).reshape(-1, 2)

    node_cluster = [nd.get("cluster") for nd in nodes]
    cluster_ids = sorted({c for c in node_cluster if c is not None}, key=str)
    cluster_groups = [np.array([i for i, c in enumerate(node_cluster) if c == cid], dtype=int)
                      for cid in cluster_ids]

    rng = np.random.default_rng(params.seed)
    if n == 1:
        positions = np.zeros((1, 3))
    else:
        scale = k * max(1.0, n ** (1.0 / 3.0))
        positions = rng.uniform(-0.5, 0.5, size=(n, 3)) * scale

    temperature = k * max(1.0, n ** (1.0 / 3.0))
    for iteration in range(params.iterations):
        force = np.zeros((n, 3))
        if n > 1:
            diff = positions[:, None, :] - positions[None, :, :]
            dist = np.sqrt((diff ** 2).sum(axis=2))
            np.fill_diagonal(dist, 1.0)
            rep = (k * k) / np.maximum(dist, _EPS) ** 2  # magnitude/dist folded in below
            np.fill_diagonal(rep, 0.0)
            force += (diff * rep[:, :, None]).sum(axis=1)
        for (a, b) in edge_index:
            d_vec = positions[a] - positions[b]
            d = max(float(np.linalg.norm(d_vec)), _EPS)
            pull = (d / k) * d_vec  # magnitude d^2/k along the unit vector
            force[a] -= pull
            force[b] += pull
        if params.cluster_gravity > 0:
            for members in cluster_groups:
                pts = positions[members]
                c = pts.mean(axis=0)
                to_c = c - pts
                d = np.linalg.norm(to_c, axis=1)
                mag = params.cluster_gravity * d / k  # force d^2/k, direction folded in
                force[members] += to_c * mag[:, None]

        if not np.isfinite(force).all():
            raise LayoutDiverged(iteration)
        norms = np.linalg.norm(force, axis=1)
        step = np.minimum(_STEP_GAIN * norms, temperature)
        moving = norms > _EPS
        positions[moving] += force[moving] / norms[moving, None] * step[moving, None]
        if not np.isfinite(positions).all():
            raise LayoutDiverged(iteration)
        if energy_log is not None:
            energy_log.append(layout_energy(positions, edge_index, k))
        temperature *= params.cooling

    opacities = dict(clusters or {})
    scene_nodes = []
    for i, nd in enumerate(nodes):
        scene_nodes.append({
            "id": nd["id"],
            "position": [float(positions[i, 0]), float(positions[i, 1]), float(positions[i, 2])],
            "color": list(nd.get("color", (128, 128, 128))),
            "cluster": node_cluster[i],
        })
    scene_edges = [{
        "source": e["source"],
        "target": e["target"],
        "color": list(e.get("color", (128, 128, 128))),
        "width": float(e.get("width", 1.0)),
    } for e in edge_list]
    scene_clusters = []
    for cid, members in zip(cluster_ids, cluster_groups):
        scene_clusters.append({
            "id": cid,
            "hull": _hull_points(positions[members]),
            "opacity": float(opacities.get(cid, DEFAULT_OPACITY)),
        })
    return GraphScene(tuple(scene_nodes), tuple(scene_edges), tuple(scene_clusters))


def _hull_points(points: np.ndarray) -> list:
    """Convex hull vertices; degenerate member sets fall back to all points."""
    if len(points) >= 4:
        try:
            from scipy.spatial import ConvexHull

            hull = ConvexHull(points)
            chosen = points[np.sort(hull.vertices)]
        except Exception:
            chosen = points
    else:
        chosen = points
    return [[float(p[0]), float(p[1]), float(p[2])] for p in chosen]
