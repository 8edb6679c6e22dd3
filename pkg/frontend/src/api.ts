// Typed client over the documented endpoints. All cockpit state changes go
// through this module; there are no hidden channels.

import type {
  ComposeResponse,
  Deviation,
  ExecuteResponse,
  SceneDocument,
  ViewSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export class SpccApi {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown, raw = false): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      if (typeof body === "string") {
        init.body = body;
        (init.headers as Record<string, string>)["content-type"] = "text/csv";
      } else {
        init.body = JSON.stringify(body);
        (init.headers as Record<string, string>)["content-type"] = "application/json";
      }
    }
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let code = "error";
      let message = `${response.status}`;
      try {
        const detail = (await response.json()).detail;
        if (typeof detail === "string") message = detail;
        else if (detail) {
          code = detail.code ?? code;
          message = detail.message ?? JSON.stringify(detail);
        }
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, code, message);
    }
    return (raw ? response.text() : response.json()) as Promise<T>;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }

  createProject(body: {
    id: string;
    name: string;
    context?: Record<string, string>;
    roles?: { id: string; name: string }[];
  }): Promise<{ id: string }> {
    return this.request("POST", "/projects", body);
  }

  uploadPlan(project: string, tasks: unknown[]): Promise<{ tasks: number }> {
    return this.request("POST", `/projects/${project}/plan`, { tasks });
  }

  ingestCsv(project: string, csv: string): Promise<{ accepted: number; rejected: unknown[] }> {
    return this.request("POST", `/projects/${project}/data`, csv);
  }

  addGoal(project: string, goal: {
    id: string;
    object: string;
    purpose: string;
    quality_focus: string[];
    viewpoint: string;
    context?: Record<string, string>;
  }): Promise<{ id: string }> {
    return this.request("POST", `/projects/${project}/goals`, goal);
  }

  addQuestion(project: string, question: {
    id: string;
    goal: string;
    text?: string;
    metrics: string[];
  }): Promise<{ id: string }> {
    return this.request("POST", `/projects/${project}/questions`, question);
  }

  compose(project: string): Promise<ComposeResponse> {
    return this.request("POST", `/projects/${project}/compose`);
  }

  getCatena(project: string): Promise<{ catena_version: number; catena: { functions: { id: string; technique: string; parameters: Record<string, unknown> }[]; views: { id: string; kind: string; options: Record<string, unknown> }[] } }> {
    return this.request("GET", `/projects/${project}/catena`);
  }

  execute(project: string, asOf: string, catenaVersion?: number): Promise<ExecuteResponse> {
    const body = catenaVersion === undefined ? undefined : { catena_version: catenaVersion };
    return this.request("POST", `/projects/${project}/execute?as_of=${encodeURIComponent(asOf)}`, body);
  }

  roleViews(project: string, role: string, asOf?: string): Promise<{ views: ViewSummary[] }> {
    const query = asOf ? `?as_of=${encodeURIComponent(asOf)}` : "";
    return this.request("GET", `/projects/${project}/roles/${role}/views${query}`);
  }

  scene(project: string, view: string, asOf?: string): Promise<SceneDocument> {
    const query = asOf ? `?as_of=${encodeURIComponent(asOf)}` : "";
    return this.request("GET", `/projects/${project}/scenes/${view}${query}`);
  }

  deviations(project: string, since?: string): Promise<{ deviations: Deviation[] }> {
    const query = since ? `?since=${encodeURIComponent(since)}` : "";
    return this.request("GET", `/projects/${project}/deviations${query}`);
  }

  ack(deviationId: string, role: string): Promise<Deviation> {
    return this.request("POST", `/deviations/${deviationId}/ack`, { role });
  }

  setFunctionParams(project: string, functionId: string, params: Record<string, unknown>): Promise<{
    function: string;
    params: Record<string, unknown>;
    catena_version: number;
    reexecution_required: boolean;
  }> {
    return this.request("PUT", `/projects/${project}/functions/${functionId}/params`, { params });
  }

  setViewOptions(project: string, viewId: string, params: Record<string, unknown>): Promise<{
    view: string;
    options: Record<string, unknown>;
    catena_version: number;
    reexecution_required: boolean;
  }> {
    return this.request("PUT", `/projects/${project}/views/${viewId}/options`, { params });
  }
}
