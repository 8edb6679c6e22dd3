// Scene schema validation: a document that does not match the published
// schema renders as an error panel with the reason, never a blank screen.

import type { SceneDocument } from "../types.js";

const KINDS = new Set(["GANTT", "TREEMAP3D", "BUBBLE", "GRAPH3D", "TIMESERIES", "TABLE"]);

const REQUIRED_ITEM_FIELDS: Record<string, string[]> = {
  GANTT: ["id", "name", "row", "depth", "bar_start", "bar_days", "progress", "color"],
  TREEMAP3D: ["entity", "x", "y", "w", "d", "h", "color"],
  BUBBLE: ["risk", "x", "y", "r", "color", "quadrant"],
  GRAPH3D: ["id", "position", "color"],
  TIMESERIES: ["name", "points", "color"],
  TABLE: ["node", "name", "status", "explanation", "color"],
};

function isRgb(value: unknown): boolean {
  return (
    Array.isArray(value) &&
    value.length === 3 &&
    value.every((c) => Number.isInteger(c) && c >= 0 && c <= 255)
  );
}

export function validateScene(doc: unknown): string[] {
  const problems: string[] = [];
  if (typeof doc !== "object" || doc === null) {
    return ["scene document is not an object"];
  }
  const scene = doc as Partial<SceneDocument>;
  if (!scene.kind || !KINDS.has(scene.kind)) {
    problems.push(`unknown scene kind ${JSON.stringify(scene.kind)}`);
    return problems;
  }
  if (!Array.isArray(scene.items)) {
    problems.push("items is not a list");
    return problems;
  }
  if (!scene.meta || typeof scene.meta !== "object") {
    problems.push("meta missing");
  }
  const required = REQUIRED_ITEM_FIELDS[scene.kind];
  scene.items.forEach((item, index) => {
    const record = item as Record<string, unknown>;
    for (const field of required) {
      if (!(field in record)) {
        problems.push(`item ${index}: missing field ${field}`);
      }
    }
    if ("color" in record && !isRgb(record.color)) {
      problems.push(`item ${index}: color is not an 8-bit RGB triple`);
    }
  });
  if (scene.kind === "GANTT" && !(scene.meta as Record<string, unknown>)?.window) {
    problems.push("gantt scene has no window in meta");
  }
  if (scene.kind === "GRAPH3D") {
    if (!Array.isArray(scene.edges)) problems.push("graph scene has no edges list");
    if (!Array.isArray(scene.clusters)) problems.push("graph scene has no clusters list");
  }
  return problems;
}
