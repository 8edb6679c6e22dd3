// renderScene: validate, then dispatch to the kind's renderer. A document
// failing validation renders as an error panel with the reasons, never a
// blank screen.

import type * as THREE from "three";

import type { SceneDocument } from "../types.js";
import { renderBubble, renderGantt, renderTable, renderTimeseries } from "./flat.js";
import { renderGraph3d, renderTreemap3d } from "./solid.js";
import { validateScene } from "./validate.js";

export type Rendered =
  | { mode: "svg"; markup: string }
  | { mode: "html"; markup: string }
  | { mode: "three"; group: THREE.Group }
  | { mode: "error"; markup: string; problems: string[] };

function escapeHtml(text: string): string {
  return text.replaceAll("&", "&amp;").replaceAll("<", "&lt;").replaceAll(">", "&gt;");
}

export function errorPanel(problems: string[]): string {
  const list = problems.map((p) => `<li>${escapeHtml(p)}</li>`).join("");
  return `<div class="error-panel"><strong>scene rejected by schema validation</strong><ul>${list}</ul></div>`;
}

export function renderScene(doc: SceneDocument): Rendered {
  const problems = validateScene(doc);
  if (problems.length) {
    return { mode: "error", markup: errorPanel(problems), problems };
  }
  switch (doc.kind) {
    case "GANTT":
      return { mode: "svg", markup: renderGantt(doc) };
    case "BUBBLE":
      return { mode: "svg", markup: renderBubble(doc) };
    case "TIMESERIES":
      return { mode: "svg", markup: renderTimeseries(doc) };
    case "TABLE":
      return { mode: "html", markup: renderTable(doc) };
    case "TREEMAP3D":
      return { mode: "three", group: renderTreemap3d(doc) };
    case "GRAPH3D":
      return { mode: "three", group: renderGraph3d(doc) };
  }
}

export { validateScene } from "./validate.js";
export {
  renderBubble,
  renderGantt,
  renderTable,
  renderTimeseries,
  GANTT_LABEL_WIDTH,
  GANTT_PX_PER_DAY,
  GANTT_ROW_HEIGHT,
  BUBBLE_PAD,
  BUBBLE_SIZE,
} from "./flat.js";
export {
  renderGraph3d,
  renderTreemap3d,
  GRAPH_NODE_RADIUS,
  TREEMAP_HEIGHT_SCALE,
} from "./solid.js";
