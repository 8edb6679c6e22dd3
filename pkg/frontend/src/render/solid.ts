// 3D renderers: pure functions from scene documents to three.js groups.
// Geometry parameters, positions, heights, and colors are taken verbatim
// from the document (heights get one presentational scale factor so flat
// maps stay readable). The shell adds camera, lights, and orbit controls.

import * as THREE from "three";

import type {
  CuboidItem,
  GraphClusterItem,
  GraphEdgeItem,
  GraphNodeItem,
  RGB,
  SceneDocument,
} from "../types.js";

export const TREEMAP_HEIGHT_SCALE = 0.5;
export const GRAPH_NODE_RADIUS = 0.08;

function toColor(rgb: RGB): THREE.Color {
  return new THREE.Color(rgb[0] / 255, rgb[1] / 255, rgb[2] / 255);
}

/** One box per cuboid, base on the XZ plane, unit square centered at the
 * origin so orbiting starts sensible. */
export function renderTreemap3d(doc: SceneDocument): THREE.Group {
  const group = new THREE.Group();
  group.name = "treemap3d";
  for (const item of doc.items as CuboidItem[]) {
    const height = item.h * TREEMAP_HEIGHT_SCALE;
    const geometry = new THREE.BoxGeometry(item.w, Math.max(height, 1e-4), item.d);
    const material = new THREE.MeshLambertMaterial({ color: toColor(item.color) });
    const mesh = new THREE.Mesh(geometry, material);
    mesh.position.set(item.x + item.w / 2 - 0.5, height / 2, item.y + item.d / 2 - 0.5);
    mesh.name = item.entity;
    mesh.userData = { item, hover: `${item.entity} h=${item.h}`, actions: item.actions };
    group.add(mesh);
  }
  return group;
}

/** Nodes as spheres at the document's 3D positions, edges as straight
 * line segments, cluster hulls as translucent point clouds. */
export function renderGraph3d(doc: SceneDocument): THREE.Group {
  const group = new THREE.Group();
  group.name = "graph3d";
  const nodes = doc.items as GraphNodeItem[];
  const position = new Map<string, [number, number, number]>();

  const nodeGroup = new THREE.Group();
  nodeGroup.name = "nodes";
  for (const node of nodes) {
    position.set(node.id, node.position);
    const mesh = new THREE.Mesh(
      new THREE.SphereGeometry(GRAPH_NODE_RADIUS, 16, 12),
      new THREE.MeshLambertMaterial({ color: toColor(node.color) }),
    );
    mesh.position.set(node.position[0], node.position[1], node.position[2]);
    mesh.name = node.id;
    mesh.userData = { item: node, hover: `${node.id} (${node.cluster ?? "unclustered"})` };
    nodeGroup.add(mesh);
  }
  group.add(nodeGroup);

  const edgeGroup = new THREE.Group();
  edgeGroup.name = "edges";
  for (const edge of (doc.edges ?? []) as GraphEdgeItem[]) {
    const a = position.get(edge.source);
    const b = position.get(edge.target);
    if (!a || !b) continue;
    const geometry = new THREE.BufferGeometry().setFromPoints([
      new THREE.Vector3(...a),
      new THREE.Vector3(...b),
    ]);
    const line = new THREE.Line(
      geometry,
      new THREE.LineBasicMaterial({ color: toColor(edge.color), linewidth: edge.width }),
    );
    line.name = `${edge.source}->${edge.target}`;
    line.userData = { item: edge, hover: `${edge.source} -> ${edge.target}` };
    edgeGroup.add(line);
  }
  group.add(edgeGroup);

  const clusterGroup = new THREE.Group();
  clusterGroup.name = "clusters";
  for (const cluster of (doc.clusters ?? []) as GraphClusterItem[]) {
    const geometry = new THREE.BufferGeometry().setFromPoints(
      cluster.hull.map((p) => new THREE.Vector3(p[0], p[1], p[2])),
    );
    const points = new THREE.Points(
      geometry,
      new THREE.PointsMaterial({
        size: GRAPH_NODE_RADIUS * 4,
        transparent: true,
        opacity: cluster.opacity,
        color: new THREE.Color(0.6, 0.6, 0.6),
      }),
    );
    points.name = cluster.id;
    points.userData = { item: cluster };
    clusterGroup.add(points);
  }
  group.add(clusterGroup);
  return group;
}
