// Wire types mirroring the service's published scene and API schemas.
// The cockpit never interprets numbers: every color, position, and size
// used for drawing comes straight from these documents.

export type RGB = [number, number, number];

export type SceneKind =
  | "GANTT"
  | "TREEMAP3D"
  | "BUBBLE"
  | "GRAPH3D"
  | "TIMESERIES"
  | "TABLE";

export interface LegendStop {
  x: number;
  rgb: RGB;
}

export interface Legend {
  label: string;
  stops: LegendStop[];
}

export interface GanttWindow {
  start: string;
  end: string;
  days: number;
  today: string;
  today_offset: number;
}

export interface SceneMeta {
  node: string;
  as_of: string | null;
  execution_id?: string;
  catena_version?: string;
  status?: string;
  window?: GanttWindow;
  algo?: string;
  quadrant_threshold?: number;
  [key: string]: unknown;
}

export interface GanttRow {
  id: string;
  name: string;
  row: number;
  depth: number;
  is_parent: boolean;
  planned_start: string;
  planned_end: string;
  bar_start: number;
  bar_days: number;
  progress: number;
  color: RGB;
  actual_start: string | null;
  actual_end: string | null;
  actual_bar_start: number | null;
  actual_bar_days: number | null;
  actual_color: RGB | null;
  actions: string[];
}

export interface CuboidItem {
  entity: string;
  x: number;
  y: number;
  w: number;
  d: number;
  h: number;
  color: RGB;
  actions: string[];
}

export interface BubbleDocItem {
  risk: string;
  x: number;
  y: number;
  r: number;
  color: RGB;
  quadrant: "WATCH" | "PREVENT" | "ACCEPT" | "MITIGATE";
  actions: string[];
}

export interface GraphNodeItem {
  id: string;
  position: [number, number, number];
  color: RGB;
  cluster: string | null;
}

export interface GraphEdgeItem {
  source: string;
  target: string;
  color: RGB;
  width: number;
}

export interface GraphClusterItem {
  id: string;
  hull: [number, number, number][];
  opacity: number;
}

export interface SeriesPoint {
  t: string;
  v: number;
}

export interface SeriesItem {
  name: string;
  points: SeriesPoint[];
  color: RGB;
  actions: string[];
}

export interface TableRowItem {
  node: string;
  name: string;
  status: string;
  value: number | null;
  explanation: string;
  color: RGB;
  actions: string[];
}

export interface SceneDocument {
  kind: SceneKind;
  items: unknown[];
  edges?: GraphEdgeItem[];
  clusters?: GraphClusterItem[];
  legend: Legend;
  meta: SceneMeta;
}

// -- API payloads -----------------------------------------------------------

export interface ViewSummary {
  view: string;
  kind: SceneKind;
  status: "NO_DATA" | "GREEN" | "YELLOW" | "RED";
  contributing: string[];
}

export interface Deviation {
  id: string;
  node: string;
  timestamp: string;
  severity: "YELLOW" | "RED";
  message: string;
  acknowledged: boolean;
  acknowledged_by: string | null;
}

export interface IndicatorOut {
  node: string;
  name: string;
  status: string;
  explanation: string;
}

export interface ExecuteResponse {
  execution_id: string;
  catena_version: string;
  as_of: string;
  worst_status: string;
  indicators: IndicatorOut[];
  new_deviations: Deviation[];
  recoveries: string[][];
}

export interface ComposeResponse {
  catena_version: number;
  catena_hash: string;
  bindings: number;
  functions: number;
  views: number;
  traceability: Record<string, string>;
  role_assignments: Record<string, string[]>;
}

export const SEVERITY_ORDER = ["NO_DATA", "GREEN", "YELLOW", "RED"] as const;

export function severityRank(status: string): number {
  const index = SEVERITY_ORDER.indexOf(status as (typeof SEVERITY_ORDER)[number]);
  return index < 0 ? 0 : index;
}

export function rgbCss(color: RGB): string {
  return `rgb(${color[0]},${color[1]},${color[2]})`;
}
