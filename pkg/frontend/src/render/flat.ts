// 2D renderers: pure functions from scene documents to SVG/HTML markup.
// Only presentational scaling happens here; every color, coordinate, and
// size is read from the document. Hover tooltips come from <title>
// elements; per-item actions are carried in data-actions attributes for
// the shell's context menu.

import type {
  BubbleDocItem,
  GanttRow,
  SceneDocument,
  SeriesItem,
  TableRowItem,
} from "../types.js";
import { rgbCss } from "../types.js";

export const GANTT_PX_PER_DAY = 12;
export const GANTT_ROW_HEIGHT = 22;
export const GANTT_LABEL_WIDTH = 180;

function escapeXml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function actionsAttr(actions: string[] | undefined): string {
  return ` data-actions="${escapeXml(JSON.stringify(actions ?? []))}"`;
}

function svgOpen(width: number, height: number): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="11">`
  );
}

export function renderGantt(doc: SceneDocument): string {
  const rows = doc.items as GanttRow[];
  const window = doc.meta.window!;
  const width = GANTT_LABEL_WIDTH + window.days * GANTT_PX_PER_DAY + 20;
  const height = 20 + rows.length * GANTT_ROW_HEIGHT;
  const parts = [svgOpen(width, height)];
  for (const row of rows) {
    const y = 10 + row.row * GANTT_ROW_HEIGHT;
    const x = GANTT_LABEL_WIDTH + row.bar_start * GANTT_PX_PER_DAY;
    const w = row.bar_days * GANTT_PX_PER_DAY;
    const weight = row.is_parent ? ' font-weight="bold"' : "";
    parts.push(
      `<text x="${10 + row.depth * 12}" y="${y + 14}"${weight}>${escapeXml(row.name)}</text>`,
    );
    parts.push(
      `<g data-entity="${escapeXml(row.id)}"${actionsAttr(row.actions)}>` +
        `<title>${escapeXml(row.id)}: ${row.planned_start} to ${row.planned_end}, ` +
        `${Math.round(row.progress * 100)}% complete</title>` +
        `<rect x="${x}" y="${y}" width="${w}" height="${GANTT_ROW_HEIGHT - 8}" ` +
        `fill="${rgbCss(row.color)}" fill-opacity="0.35"/>` +
        `<rect x="${x}" y="${y}" width="${w * row.progress}" height="${GANTT_ROW_HEIGHT - 8}" ` +
        `fill="${rgbCss(row.color)}"/>` +
        (row.actual_bar_start !== null && row.actual_color
          ? `<rect x="${GANTT_LABEL_WIDTH + row.actual_bar_start * GANTT_PX_PER_DAY}" ` +
            `y="${y + GANTT_ROW_HEIGHT - 12}" ` +
            `width="${(row.actual_bar_days ?? 1) * GANTT_PX_PER_DAY}" height="4" ` +
            `fill="${rgbCss(row.actual_color)}"/>`
          : "") +
        `</g>`,
    );
  }
  const todayX = GANTT_LABEL_WIDTH + window.today_offset * GANTT_PX_PER_DAY;
  parts.push(
    `<line x1="${todayX}" y1="4" x2="${todayX}" y2="${height - 4}" ` +
      `stroke="rgb(255,65,54)" stroke-dasharray="4,3" data-today="${window.today}"/>`,
  );
  parts.push("</svg>");
  return parts.join("\n");
}

export const BUBBLE_SIZE = 560;
export const BUBBLE_PAD = 40;

export function renderBubble(doc: SceneDocument): string {
  const items = doc.items as BubbleDocItem[];
  const span = BUBBLE_SIZE - 2 * BUBBLE_PAD;
  const sx = (v: number) => BUBBLE_PAD + v * span;
  const sy = (v: number) => BUBBLE_SIZE - BUBBLE_PAD - v * span;
  const threshold = (doc.meta.quadrant_threshold as number | undefined) ?? 0.5;
  const parts = [
    svgOpen(BUBBLE_SIZE, BUBBLE_SIZE),
    `<rect x="${BUBBLE_PAD}" y="${BUBBLE_PAD}" width="${span}" height="${span}" fill="none" stroke="#999"/>`,
    `<line x1="${sx(threshold)}" y1="${BUBBLE_PAD}" x2="${sx(threshold)}" y2="${BUBBLE_SIZE - BUBBLE_PAD}" stroke="#ccc"/>`,
    `<line x1="${BUBBLE_PAD}" y1="${sy(threshold)}" x2="${BUBBLE_SIZE - BUBBLE_PAD}" y2="${sy(threshold)}" stroke="#ccc"/>`,
    `<text x="${BUBBLE_SIZE / 2}" y="${BUBBLE_SIZE - 8}" text-anchor="middle">probability</text>`,
  ];
  for (const item of items) {
    parts.push(
      `<g data-entity="${escapeXml(item.risk)}"${actionsAttr(item.actions)}>` +
        `<title>${escapeXml(item.risk)} (${item.quadrant}): p=${item.x}, importance=${item.y}</title>` +
        `<circle cx="${sx(item.x)}" cy="${sy(item.y)}" r="${Math.max(2, item.r * span)}" ` +
        `fill="${rgbCss(item.color)}" fill-opacity="0.7" stroke="${rgbCss(item.color)}"/>` +
        `</g>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

export const TS_WIDTH = 880;
export const TS_HEIGHT = 320;
export const TS_PAD = 40;

export function renderTimeseries(doc: SceneDocument): string {
  const items = doc.items as SeriesItem[];
  const all = items.flatMap((s) => s.points.map((p) => [Date.parse(p.t), p.v] as const));
  const parts = [
    svgOpen(TS_WIDTH, TS_HEIGHT),
    `<rect x="${TS_PAD}" y="${TS_PAD}" width="${TS_WIDTH - 2 * TS_PAD}" height="${TS_HEIGHT - 2 * TS_PAD}" fill="none" stroke="#999"/>`,
  ];
  if (all.length) {
    const tLo = Math.min(...all.map(([t]) => t));
    const tHi = Math.max(...all.map(([t]) => t));
    const vLo = Math.min(...all.map(([, v]) => v));
    const vHi = Math.max(...all.map(([, v]) => v));
    const tSpan = tHi - tLo || 1;
    const vSpan = vHi - vLo || 1;
    const px = (t: number) => TS_PAD + ((t - tLo) / tSpan) * (TS_WIDTH - 2 * TS_PAD);
    const py = (v: number) => TS_HEIGHT - TS_PAD - ((v - vLo) / vSpan) * (TS_HEIGHT - 2 * TS_PAD);
    items.forEach((series, index) => {
      const points = series.points
        .map((p) => `${px(Date.parse(p.t)).toFixed(1)},${py(p.v).toFixed(1)}`)
        .join(" ");
      parts.push(
        `<g data-entity="${escapeXml(series.name)}"${actionsAttr(series.actions)}>` +
          `<title>${escapeXml(series.name)}: ${series.points.length} points</title>` +
          `<polyline points="${points}" fill="none" stroke="${rgbCss(series.color)}" stroke-width="2"/>` +
          `</g>`,
      );
      parts.push(
        `<text x="${TS_PAD + 4}" y="${TS_PAD + 14 + index * 14}" fill="${rgbCss(series.color)}">` +
          `${escapeXml(series.name)}</text>`,
      );
    });
  } else {
    parts.push(
      `<text x="${TS_WIDTH / 2}" y="${TS_HEIGHT / 2}" text-anchor="middle">no data yet</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

export function renderTable(doc: SceneDocument): string {
  const rows = doc.items as TableRowItem[];
  if (!rows.length) {
    return `<table class="indicator-table"><tbody><tr><td>no indicators</td></tr></tbody></table>`;
  }
  const body = rows
    .map(
      (row) =>
        `<tr data-entity="${escapeXml(row.node)}"${actionsAttr(row.actions)} title="${escapeXml(row.explanation)}">` +
        `<td><span class="swatch" style="background:${rgbCss(row.color)}"></span></td>` +
        `<td>${escapeXml(row.name)}</td>` +
        `<td>${escapeXml(row.status)}</td>` +
        `<td>${row.value === null ? "" : String(row.value)}</td>` +
        `<td>${escapeXml(row.explanation)}</td></tr>`,
    )
    .join("");
  return (
    `<table class="indicator-table"><thead><tr>` +
    `<th></th><th>indicator</th><th>status</th><th>value</th><th>explanation</th>` +
    `</tr></thead><tbody>${body}</tbody></table>`
  );
}
