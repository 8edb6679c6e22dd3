// Scene fidelity: rendering a golden document produced by the engine must
// surface exactly the items, colors, positions, and heights in the
// document. The only transformations allowed are the exported
// presentational scale factors.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import * as THREE from "three";
import { describe, expect, it } from "vitest";

import {
  BUBBLE_PAD,
  BUBBLE_SIZE,
  GANTT_LABEL_WIDTH,
  GANTT_PX_PER_DAY,
  GRAPH_NODE_RADIUS,
  TREEMAP_HEIGHT_SCALE,
  renderScene,
} from "../src/render/index.js";
import type {
  BubbleDocItem,
  CuboidItem,
  GanttRow,
  GraphClusterItem,
  GraphNodeItem,
  SceneDocument,
  SeriesItem,
  TableRowItem,
} from "../src/types.js";
import { rgbCss } from "../src/types.js";

const fixturesDir = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

function fixture(name: string): SceneDocument {
  return JSON.parse(readFileSync(join(fixturesDir, `${name}.json`), "utf-8"));
}

describe("treemap fidelity", () => {
  const doc = fixture("treemap");

  it("renders exactly one box per cuboid with the document's geometry and color", () => {
    const rendered = renderScene(doc);
    expect(rendered.mode).toBe("three");
    if (rendered.mode !== "three") return;
    const items = doc.items as CuboidItem[];
    const meshes = rendered.group.children as THREE.Mesh[];
    expect(meshes.length).toBe(items.length);
    for (const item of items) {
      const mesh = meshes.find((m) => m.name === item.entity)!;
      expect(mesh, item.entity).toBeTruthy();
      const geometry = mesh.geometry as THREE.BoxGeometry;
      expect(geometry.parameters.width).toBe(item.w);
      expect(geometry.parameters.depth).toBe(item.d);
      expect(geometry.parameters.height).toBe(Math.max(item.h * TREEMAP_HEIGHT_SCALE, 1e-4));
      const color = (mesh.material as THREE.MeshLambertMaterial).color;
      expect(color.r).toBeCloseTo(item.color[0] / 255, 10);
      expect(color.g).toBeCloseTo(item.color[1] / 255, 10);
      expect(color.b).toBeCloseTo(item.color[2] / 255, 10);
      expect(mesh.position.x).toBeCloseTo(item.x + item.w / 2 - 0.5, 10);
      expect(mesh.position.z).toBeCloseTo(item.y + item.d / 2 - 0.5, 10);
      expect(mesh.userData.item).toEqual(item);
      expect(mesh.userData.hover).toContain(item.entity);
    }
  });
});

describe("graph fidelity", () => {
  const doc = fixture("graph");

  it("places nodes at the document positions with the document colors", () => {
    const rendered = renderScene(doc);
    expect(rendered.mode).toBe("three");
    if (rendered.mode !== "three") return;
    const nodeGroup = rendered.group.getObjectByName("nodes") as THREE.Group;
    const items = doc.items as GraphNodeItem[];
    expect(nodeGroup.children.length).toBe(items.length);
    for (const item of items) {
      const mesh = nodeGroup.getObjectByName(item.id) as THREE.Mesh;
      expect(mesh.position.toArray()).toEqual(item.position);
      const color = (mesh.material as THREE.MeshLambertMaterial).color;
      expect(Math.round(color.r * 255)).toBe(item.color[0]);
      expect(Math.round(color.g * 255)).toBe(item.color[1]);
      expect(Math.round(color.b * 255)).toBe(item.color[2]);
      const geometry = mesh.geometry as THREE.SphereGeometry;
      expect(geometry.parameters.radius).toBe(GRAPH_NODE_RADIUS);
    }
  });

  it("draws every edge between its endpoints and every cluster at its opacity", () => {
    const rendered = renderScene(doc);
    if (rendered.mode !== "three") throw new Error("expected three");
    const edgeGroup = rendered.group.getObjectByName("edges") as THREE.Group;
    expect(edgeGroup.children.length).toBe(doc.edges!.length);
    const clusterGroup = rendered.group.getObjectByName("clusters") as THREE.Group;
    const clusters = doc.clusters as GraphClusterItem[];
    expect(clusterGroup.children.length).toBe(clusters.length);
    for (const cluster of clusters) {
      const points = clusterGroup.getObjectByName(cluster.id) as THREE.Points;
      expect((points.material as THREE.PointsMaterial).opacity).toBe(cluster.opacity);
      const positions = points.geometry.getAttribute("position");
      expect(positions.count).toBe(cluster.hull.length);
    }
  });
});

describe("gantt fidelity", () => {
  const doc = fixture("gantt");

  it("renders one bar per row at document coordinates and colors", () => {
    const rendered = renderScene(doc);
    expect(rendered.mode).toBe("svg");
    if (rendered.mode !== "svg") return;
    const rows = doc.items as GanttRow[];
    for (const row of rows) {
      const x = GANTT_LABEL_WIDTH + row.bar_start * GANTT_PX_PER_DAY;
      const w = row.bar_days * GANTT_PX_PER_DAY;
      expect(rendered.markup).toContain(
        `<rect x="${x}" y="${10 + row.row * 22}" width="${w}" height="14" fill="${rgbCss(row.color)}" fill-opacity="0.35"/>`,
      );
      expect(rendered.markup).toContain(`width="${w * row.progress}"`);
      expect(rendered.markup).toContain(`>${row.name}</text>`);
      expect(rendered.markup).toContain(`data-entity="${row.id}"`);
    }
    expect(rendered.markup).toContain(`data-today="${doc.meta.window!.today}"`);
    const barCount = (rendered.markup.match(/fill-opacity="0.35"/g) ?? []).length;
    expect(barCount).toBe(rows.length);
  });

  it("shows entity and metric values on hover titles", () => {
    const rendered = renderScene(doc);
    if (rendered.mode !== "svg") throw new Error("expected svg");
    for (const row of doc.items as GanttRow[]) {
      expect(rendered.markup).toContain(
        `<title>${row.id}: ${row.planned_start} to ${row.planned_end}`,
      );
    }
  });
});

describe("bubble fidelity", () => {
  const doc = fixture("bubble");

  it("renders every risk at document coordinates with quadrant colors", () => {
    const rendered = renderScene(doc);
    expect(rendered.mode).toBe("svg");
    if (rendered.mode !== "svg") return;
    const span = BUBBLE_SIZE - 2 * BUBBLE_PAD;
    const items = doc.items as BubbleDocItem[];
    const circles = (rendered.markup.match(/<circle /g) ?? []).length;
    expect(circles).toBe(items.length);
    for (const item of items) {
      const cx = BUBBLE_PAD + item.x * span;
      const cy = BUBBLE_SIZE - BUBBLE_PAD - item.y * span;
      expect(rendered.markup).toContain(
        `<circle cx="${cx}" cy="${cy}" r="${Math.max(2, item.r * span)}" fill="${rgbCss(item.color)}"`,
      );
      expect(rendered.markup).toContain(`(${item.quadrant})`);
    }
  });
});

describe("timeseries and table fidelity", () => {
  it("draws one polyline per series in the document color", () => {
    const doc = fixture("timeseries");
    const rendered = renderScene(doc);
    expect(rendered.mode).toBe("svg");
    if (rendered.mode !== "svg") return;
    for (const series of doc.items as SeriesItem[]) {
      expect(rendered.markup).toContain(`stroke="${rgbCss(series.color)}"`);
      expect(rendered.markup).toContain(`<title>${series.name}: ${series.points.length} points</title>`);
    }
  });

  it("renders table rows verbatim with status swatches", () => {
    const doc = fixture("table");
    const rendered = renderScene(doc);
    expect(rendered.mode).toBe("html");
    if (rendered.mode !== "html") return;
    const escape = (text: string) =>
      text.replaceAll("&", "&amp;").replaceAll("<", "&lt;").replaceAll(">", "&gt;");
    for (const row of doc.items as TableRowItem[]) {
      expect(rendered.markup).toContain(escape(row.explanation));
      expect(rendered.markup).toContain(`background:${rgbCss(row.color)}`);
      expect(rendered.markup).toContain(`<td>${row.status}</td>`);
    }
  });
});

describe("schema rejection", () => {
  it("renders an error panel with the reason, never a blank screen", () => {
    const rendered = renderScene({ kind: "GANTT", items: [{ id: "x" }], legend: { label: "", stops: [] }, meta: { node: "v", as_of: null } } as unknown as SceneDocument);
    expect(rendered.mode).toBe("error");
    if (rendered.mode !== "error") return;
    expect(rendered.markup).toContain("scene rejected by schema validation");
    expect(rendered.markup).toContain("missing field");
    expect(rendered.markup.length).toBeGreaterThan(40);
  });

  it("rejects unknown kinds", () => {
    const rendered = renderScene({ kind: "HOLOGRAM", items: [], legend: {}, meta: {} } as unknown as SceneDocument);
    expect(rendered.mode).toBe("error");
  });
});
