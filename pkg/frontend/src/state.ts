// Dashboard state: the role-oriented session, view list with severity
// badges, a scene cache keyed by (view, as_of), pending parameter edits,
// and the polling loop. Pure of DOM concerns so it is testable headless.

import { ApiError, SpccApi } from "./api.js";
import type { Deviation, ExecuteResponse, SceneDocument, ViewSummary } from "./types.js";

export interface Session {
  project: string;
  role: string;
}

export type SteerEdit =
  | { type: "param"; functionId: string; params: Record<string, unknown> }
  | { type: "view-option"; viewId: string; params: Record<string, unknown> }
  | { type: "ack"; deviationId: string }
  | { type: "re-execute"; asOf: string };

export interface PendingEdit {
  key: string;
  edit: SteerEdit;
}

const POLL_INTERVAL_MS = 5000;

export class Dashboard {
  views: ViewSummary[] = [];
  deviations: Deviation[] = [];
  selected: string | null = null;
  lastExecution: ExecuteResponse | null = null;
  asOf: string | null = null;
  staleCatena = false;
  pendingEdits: PendingEdit[] = [];
  onChange: (() => void) | null = null;

  private sceneCache = new Map<string, SceneDocument>();
  private inflight = new Map<string, Promise<SceneDocument>>();
  private pollTimer: ReturnType<typeof setInterval> | null = null;
  private lastSeen: string | undefined;

  constructor(
    public api: SpccApi,
    public session: Session,
  ) {}

  private changed(): void {
    this.onChange?.();
  }

  /** Role switching is a filter, not a login: instant, then refresh. */
  async switchRole(role: string): Promise<void> {
    this.session = { ...this.session, role };
    await this.refreshViews();
  }

  async refreshViews(): Promise<void> {
    const { views } = await this.api.roleViews(
      this.session.project,
      this.session.role,
      this.asOf ?? undefined,
    );
    this.views = views;
    if (this.selected && !views.some((v) => v.view === this.selected)) {
      this.selected = views.length ? views[0].view : null;
    }
    this.changed();
  }

  private cacheKey(view: string): string {
    return `${view}@${this.asOf ?? "latest"}`;
  }

  /** Fetch a scene document; concurrent requests for the same (view,
   * as_of) are de-duplicated and results cached. */
  async openScene(view: string): Promise<SceneDocument> {
    this.selected = view;
    const key = this.cacheKey(view);
    const cached = this.sceneCache.get(key);
    if (cached) return cached;
    const running = this.inflight.get(key);
    if (running) return running;
    const promise = this.api
      .scene(this.session.project, view, this.asOf ?? undefined)
      .then((doc) => {
        this.sceneCache.set(key, doc);
        this.inflight.delete(key);
        this.changed();
        return doc;
      })
      .catch((error) => {
        this.inflight.delete(key);
        throw error;
      });
    this.inflight.set(key, promise);
    return promise;
  }

  invalidateScenes(): void {
    this.sceneCache.clear();
    this.inflight.clear();
  }

  cachedSceneCount(): number {
    return this.sceneCache.size;
  }

  /** Apply a steering edit optimistically: it shows as pending until the
   * server confirms (2xx); a stale-catena conflict raises the reload
   * prompt instead of failing silently. */
  async steer(edit: SteerEdit): Promise<void> {
    const key = JSON.stringify(edit);
    this.pendingEdits.push({ key, edit });
    this.changed();
    try {
      if (edit.type === "param") {
        await this.api.setFunctionParams(this.session.project, edit.functionId, edit.params);
        this.invalidateScenes();
      } else if (edit.type === "view-option") {
        await this.api.setViewOptions(this.session.project, edit.viewId, edit.params);
        this.invalidateScenes();
      } else if (edit.type === "ack") {
        await this.api.ack(edit.deviationId, this.session.role);
        await this.pollDeviations();
      } else {
        this.lastExecution = await this.api.execute(this.session.project, edit.asOf);
        this.asOf = this.lastExecution.as_of;
        this.invalidateScenes();
        await this.refreshViews();
        await this.pollDeviations();
      }
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.staleCatena = true;
        this.changed();
      }
      throw error;
    } finally {
      this.pendingEdits = this.pendingEdits.filter((p) => p.key !== key);
      this.changed();
    }
  }

  async pollDeviations(): Promise<void> {
    const { deviations } = await this.api.deviations(this.session.project);
    this.deviations = deviations;
    if (deviations.length) {
      this.lastSeen = deviations[deviations.length - 1].timestamp;
    }
    this.changed();
  }

  startPolling(intervalMs: number = POLL_INTERVAL_MS): void {
    this.stopPolling();
    this.pollTimer = setInterval(() => {
      void this.pollDeviations().catch(() => {
        /* transient polling failure; next tick retries */
      });
    }, intervalMs);
  }

  stopPolling(): void {
    if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }
}
