// The steering loop against a live primary instance: edit a tolerance via
// the dashboard, re-execute, and observe the changed band in the
// indicator explanation. Spawns the Python service as a child process.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, SpccApi } from "../src/api.js";
import { Dashboard } from "../src/state.js";

const PORT = 8941;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let dataDir: string;
const api = new SpccApi(BASE);

function iso(day: number): string {
  return `2024-01-${String(day).padStart(2, "0")}T00:00:00Z`;
}

async function waitForHealth(): Promise<void> {
  for (let attempt = 0; attempt < 60; attempt++) {
    try {
      await api.health();
      return;
    } catch {
      await new Promise((resolve) => setTimeout(resolve, 500));
    }
  }
  throw new Error("primary service did not come up");
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "spcc-ui-"));
  server = spawn("python3", ["-m", "spcc.cli", "--data-dir", dataDir, "serve",
                             "--port", String(PORT)], { stdio: "ignore" });
  await waitForHealth();

  await api.createProject({
    id: "ui",
    name: "UI loop",
    context: { domain: "web" },
    roles: [{ id: "project_manager", name: "PM" }],
  });
  await api.uploadPlan("ui", [
    { id: "build", planned_start: "2024-01-01", planned_end: "2024-02-01", budget: 4000 },
  ]);
  const rows = ["metric,entity,timestamp,value"];
  for (let day = 1; day <= 10; day++) {
    const cost = day >= 8 ? 130 : 100; // 30% overrun from day 8
    rows.push(`cost,ui,${iso(day)},${cost}`);
    rows.push(`planned_cost,ui,${iso(day)},100`);
  }
  await api.ingestCsv("ui", rows.join("\n") + "\n");
  await api.addGoal("ui", {
    id: "g1",
    object: "development project",
    purpose: "CONTROL",
    quality_focus: ["cost"],
    viewpoint: "project_manager",
  });
  await api.addQuestion("ui", { id: "q1", goal: "g1", metrics: ["cost", "planned_cost"] });
  await api.compose("ui");
}, 90_000);

afterAll(() => {
  server?.kill();
  if (dataDir) rmSync(dataDir, { recursive: true, force: true });
});

describe("steering loop against the live primary", () => {
  it("tol edit -> re-execute -> changed band in the indicator explanation", async () => {
    const dashboard = new Dashboard(api, { project: "ui", role: "project_manager" });

    await dashboard.steer({ type: "re-execute", asOf: iso(5) });
    const before = dashboard.lastExecution!.indicators.find((i) => i.name.includes("tolerance"))!;
    expect(before.explanation).toContain("green d<=0.1");
    expect(dashboard.views.length).toBeGreaterThan(0);

    const catena = await api.getCatena("ui");
    const fn = catena.catena.functions.find((f) => f.technique === "tolerance")!;
    await dashboard.steer({ type: "param", functionId: fn.id, params: { tol: 0.05 } });
    await dashboard.steer({ type: "re-execute", asOf: iso(5) });

    const after = dashboard.lastExecution!.indicators.find((i) => i.name.includes("tolerance"))!;
    expect(after.explanation).toContain("green d<=0.05");
    expect(after.explanation).not.toContain("green d<=0.1,");
  });

  it("scenes carry provenance and re-fetch after steering", async () => {
    const dashboard = new Dashboard(api, { project: "ui", role: "project_manager" });
    await dashboard.steer({ type: "re-execute", asOf: iso(6) });
    const view = dashboard.views[0].view;
    const doc = await dashboard.openScene(view);
    expect(doc.meta.execution_id).toContain("exec-");
    expect(doc.meta.catena_version).toBeTruthy();
    expect(dashboard.cachedSceneCount()).toBe(1);
    await dashboard.steer({ type: "re-execute", asOf: iso(6) });
    expect(dashboard.cachedSceneCount()).toBe(0); // steering invalidates the cache
  });

  it("deviation appears after the overrun and can be acknowledged from the UI", async () => {
    const dashboard = new Dashboard(api, { project: "ui", role: "project_manager" });
    await dashboard.steer({ type: "re-execute", asOf: iso(7) });
    await dashboard.steer({ type: "re-execute", asOf: iso(8) });
    expect(dashboard.deviations.length).toBeGreaterThan(0);
    const event = dashboard.deviations.find((d) => !d.acknowledged)!;
    await dashboard.steer({ type: "ack", deviationId: event.id });
    const updated = dashboard.deviations.find((d) => d.id === event.id)!;
    expect(updated.acknowledged).toBe(true);
    expect(updated.acknowledged_by).toBe("project_manager");
  });

  it("stale catena version surfaces as a 409 conflict", async () => {
    const current = (await api.getCatena("ui")).catena_version;
    await expect(api.execute("ui", iso(9), current + 10)).rejects.toThrowError(ApiError);
    try {
      await api.execute("ui", iso(9), current + 10);
    } catch (error) {
      expect((error as ApiError).status).toBe(409);
    }
  });
});
