// Dashboard state logic against a stubbed API: caching, de-duplication,
// optimistic pending edits, stale-catena detection, role switching.

import { describe, expect, it, vi } from "vitest";

import { ApiError, SpccApi } from "../src/api.js";
import { Dashboard } from "../src/state.js";
import type { SceneDocument, ViewSummary } from "../src/types.js";

function sceneDoc(view: string): SceneDocument {
  return {
    kind: "TABLE",
    items: [],
    legend: { label: "", stops: [] },
    meta: { node: view, as_of: null },
  };
}

function stubApi(overrides: Partial<Record<keyof SpccApi, unknown>> = {}): SpccApi {
  const base = {
    roleViews: vi.fn(async () => ({
      views: [
        { view: "v-red", kind: "TABLE", status: "RED", contributing: [] },
        { view: "v-green", kind: "TABLE", status: "GREEN", contributing: [] },
      ] as ViewSummary[],
    })),
    scene: vi.fn(async (_p: string, view: string) => sceneDoc(view)),
    deviations: vi.fn(async () => ({ deviations: [] })),
    ack: vi.fn(async () => ({})),
    execute: vi.fn(async () => ({
      execution_id: "exec-x",
      catena_version: "hash",
      as_of: "2024-01-05T00:00:00Z",
      worst_status: "GREEN",
      indicators: [],
      new_deviations: [],
      recoveries: [],
    })),
    setFunctionParams: vi.fn(async () => ({})),
    setViewOptions: vi.fn(async () => ({})),
  };
  return Object.assign(Object.create(SpccApi.prototype), base, overrides) as SpccApi;
}

describe("scene cache", () => {
  it("caches by (view, as_of) and de-duplicates concurrent fetches", async () => {
    const api = stubApi();
    const dash = new Dashboard(api, { project: "p", role: "pm" });
    const [a, b] = await Promise.all([dash.openScene("v-red"), dash.openScene("v-red")]);
    expect(a).toBe(b);
    expect((api.scene as ReturnType<typeof vi.fn>).mock.calls.length).toBe(1);
    await dash.openScene("v-red");
    expect((api.scene as ReturnType<typeof vi.fn>).mock.calls.length).toBe(1);

    dash.asOf = "2024-01-02T00:00:00Z";
    await dash.openScene("v-red");
    expect((api.scene as ReturnType<typeof vi.fn>).mock.calls.length).toBe(2);
  });

  it("parameter edits invalidate cached scenes", async () => {
    const api = stubApi();
    const dash = new Dashboard(api, { project: "p", role: "pm" });
    await dash.openScene("v-red");
    expect(dash.cachedSceneCount()).toBe(1);
    await dash.steer({ type: "param", functionId: "f1", params: { tol: 0.05 } });
    expect(dash.cachedSceneCount()).toBe(0);
  });
});

describe("steering", () => {
  it("marks edits pending until the server confirms", async () => {
    let resolveCall: (v: unknown) => void = () => {};
    const api = stubApi({
      setFunctionParams: vi.fn(
        () => new Promise((resolve) => (resolveCall = resolve)),
      ),
    });
    const dash = new Dashboard(api, { project: "p", role: "pm" });
    const seen: number[] = [];
    dash.onChange = () => seen.push(dash.pendingEdits.length);
    const steering = dash.steer({ type: "param", functionId: "f1", params: { tol: 0.2 } });
    expect(dash.pendingEdits.length).toBe(1);
    resolveCall({});
    await steering;
    expect(dash.pendingEdits.length).toBe(0);
    expect(seen[0]).toBe(1);
    expect(seen[seen.length - 1]).toBe(0);
  });

  it("a 409 conflict raises the stale-catena prompt", async () => {
    const api = stubApi({
      execute: vi.fn(async () => {
        throw new ApiError(409, "stale_catena", "catena changed");
      }),
    });
    const dash = new Dashboard(api, { project: "p", role: "pm" });
    await expect(
      dash.steer({ type: "re-execute", asOf: "2024-01-05T00:00:00Z" }),
    ).rejects.toThrow("catena changed");
    expect(dash.staleCatena).toBe(true);
    expect(dash.pendingEdits.length).toBe(0);
  });

  it("acknowledging refreshes the deviation list with the session role", async () => {
    const api = stubApi();
    const dash = new Dashboard(api, { project: "p", role: "qa_manager" });
    await dash.steer({ type: "ack", deviationId: "p:f:t" });
    expect((api.ack as ReturnType<typeof vi.fn>).mock.calls[0]).toEqual(["p:f:t", "qa_manager"]);
    expect((api.deviations as ReturnType<typeof vi.fn>).mock.calls.length).toBe(1);
  });

  it("re-execution refreshes views and pins as_of", async () => {
    const api = stubApi();
    const dash = new Dashboard(api, { project: "p", role: "pm" });
    await dash.steer({ type: "re-execute", asOf: "2024-01-05T00:00:00Z" });
    expect(dash.asOf).toBe("2024-01-05T00:00:00Z");
    expect(dash.lastExecution?.execution_id).toBe("exec-x");
    expect(dash.views.length).toBe(2);
  });
});

describe("roles and polling", () => {
  it("switching roles refetches views instantly", async () => {
    const api = stubApi();
    const dash = new Dashboard(api, { project: "p", role: "pm" });
    await dash.switchRole("qa_manager");
    expect(dash.session.role).toBe("qa_manager");
    const call = (api.roleViews as ReturnType<typeof vi.fn>).mock.calls[0];
    expect(call[1]).toBe("qa_manager");
  });

  it("polls deviations on the configured interval", async () => {
    vi.useFakeTimers();
    try {
      const api = stubApi();
      const dash = new Dashboard(api, { project: "p", role: "pm" });
      dash.startPolling(5000);
      await vi.advanceTimersByTimeAsync(15_500);
      dash.stopPolling();
      expect((api.deviations as ReturnType<typeof vi.fn>).mock.calls.length).toBe(3);
      await vi.advanceTimersByTimeAsync(10_000);
      expect((api.deviations as ReturnType<typeof vi.fn>).mock.calls.length).toBe(3);
    } finally {
      vi.useRealTimers();
    }
  });
});
