// Browser shell: wires the dashboard state to the DOM, renders scenes
// (SVG/HTML inline, 3D through a three.js canvas with orbit controls),
// polls deviations, and sends steering edits through the API client.

import * as THREE from "three";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";

import { SpccApi } from "./api.js";
import { renderScene } from "./render/index.js";
import { Dashboard } from "./state.js";
import type { SceneDocument } from "./types.js";
import { severityRank } from "./types.js";

const BADGE_COLOR: Record<string, string> = {
  NO_DATA: "#888",
  GREEN: "rgb(46,204,64)",
  YELLOW: "rgb(255,220,0)",
  RED: "rgb(255,65,54)",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text) node.textContent = text;
  return node;
}

class ThreeViewport {
  renderer: THREE.WebGLRenderer;
  scene = new THREE.Scene();
  camera: THREE.PerspectiveCamera;
  controls: OrbitControls;
  private current: THREE.Group | null = null;

  constructor(private container: HTMLElement) {
    const width = container.clientWidth || 800;
    const height = 480;
    this.renderer = new THREE.WebGLRenderer({ antialias: true });
    this.renderer.setSize(width, height);
    this.camera = new THREE.PerspectiveCamera(50, width / height, 0.01, 100);
    this.camera.position.set(1.2, 1.2, 1.8);
    this.controls = new OrbitControls(this.camera, this.renderer.domElement);
    this.scene.background = new THREE.Color(0xf4f4f4);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.7));
    const sun = new THREE.DirectionalLight(0xffffff, 0.8);
    sun.position.set(2, 4, 3);
    this.scene.add(sun);
    container.appendChild(this.renderer.domElement);
    this.renderer.setAnimationLoop(() => {
      this.controls.update();
      this.renderer.render(this.scene, this.camera);
    });
    this.bindHover();
  }

  show(group: THREE.Group): void {
    if (this.current) this.scene.remove(this.current);
    this.current = group;
    this.scene.add(group);
  }

  private bindHover(): void {
    const raycaster = new THREE.Raycaster();
    const pointer = new THREE.Vector2();
    const tooltip = el("div", { class: "tooltip", style: "display:none" });
    this.container.appendChild(tooltip);
    this.renderer.domElement.addEventListener("mousemove", (event) => {
      const rect = this.renderer.domElement.getBoundingClientRect();
      pointer.x = ((event.clientX - rect.left) / rect.width) * 2 - 1;
      pointer.y = -((event.clientY - rect.top) / rect.height) * 2 + 1;
      raycaster.setFromCamera(pointer, this.camera);
      const hits = this.current ? raycaster.intersectObjects(this.current.children, true) : [];
      const hover = hits.find((h) => h.object.userData?.hover)?.object.userData?.hover;
      if (hover) {
        tooltip.textContent = hover;
        tooltip.style.display = "block";
        tooltip.style.left = `${event.clientX - rect.left + 12}px`;
        tooltip.style.top = `${event.clientY - rect.top + 12}px`;
      } else {
        tooltip.style.display = "none";
      }
    });
  }

  dispose(): void {
    this.renderer.setAnimationLoop(null);
    this.renderer.dispose();
    this.container.innerHTML = "";
  }
}

class App {
  dashboard: Dashboard | null = null;
  viewport: ThreeViewport | null = null;

  constructor(private root: HTMLElement) {
    this.renderShell();
  }

  private $(id: string): HTMLElement {
    return this.root.querySelector(`#${id}`) as HTMLElement;
  }

  private renderShell(): void {
    this.root.innerHTML = `
      <header>
        <strong>spcc cockpit</strong>
        <label>server <input id="server" value="http://127.0.0.1:8000"></label>
        <label>project <input id="project" value="demo"></label>
        <label>role <select id="role"></select></label>
        <label>as of <input id="asof" placeholder="latest"></label>
        <button id="connect">connect</button>
        <span id="provenance"></span>
      </header>
      <div class="columns">
        <nav><h3>views</h3><ul id="views"></ul>
          <h3>deviations</h3><ul id="deviations"></ul>
        </nav>
        <main>
          <div id="stale" class="stale" style="display:none">
            catena changed on the server.
            <button id="reload-compose">reload composition</button>
          </div>
          <div id="pending"></div>
          <div id="scene"></div>
          <section id="steering">
            <h3>steering</h3>
            <label>function <select id="fn"></select></label>
            <label>tol <input id="tol" size="6"></label>
            <button id="apply-tol">apply</button>
            <label>hull opacity <input id="opacity" type="range" min="0" max="1" step="0.05"></label>
            <button id="apply-opacity">apply to view</button>
            <label>re-execute as of <input id="rerun-asof" size="22"></label>
            <button id="rerun">run</button>
          </section>
        </main>
      </div>
      <div id="context-menu" class="context-menu" style="display:none"></div>`;
    (this.$("connect") as HTMLButtonElement).onclick = () => void this.connect();
  }

  private async connect(): Promise<void> {
    const server = (this.$("server") as HTMLInputElement).value;
    const project = (this.$("project") as HTMLInputElement).value;
    const api = new SpccApi(server);
    const dashboard = new Dashboard(api, { project, role: "project_manager" });
    this.dashboard = dashboard;
    dashboard.onChange = () => this.sync();
    const info = (await fetch(`${server}/projects/${project}`).then((r) => r.json())) as {
      roles: { id: string; name: string }[];
    };
    const roleSelect = this.$("role") as HTMLSelectElement;
    roleSelect.innerHTML = "";
    for (const role of info.roles) {
      roleSelect.appendChild(el("option", { value: role.id }, role.name));
    }
    roleSelect.onchange = () => void dashboard.switchRole(roleSelect.value);
    if (info.roles.length) dashboard.session.role = info.roles[0].id;
    const asOf = (this.$("asof") as HTMLInputElement).value.trim();
    dashboard.asOf = asOf || null;
    await dashboard.refreshViews();
    await dashboard.pollDeviations();
    dashboard.startPolling();
    await this.populateSteering();
  }

  private async populateSteering(): Promise<void> {
    const dashboard = this.dashboard!;
    const catena = await dashboard.api.getCatena(dashboard.session.project).catch(() => null);
    const fnSelect = this.$("fn") as HTMLSelectElement;
    fnSelect.innerHTML = "";
    for (const fn of catena?.catena.functions ?? []) {
      fnSelect.appendChild(el("option", { value: fn.id }, fn.id));
    }
    (this.$("apply-tol") as HTMLButtonElement).onclick = () => {
      const tol = Number((this.$("tol") as HTMLInputElement).value);
      void dashboard.steer({ type: "param", functionId: fnSelect.value, params: { tol } });
    };
    (this.$("apply-opacity") as HTMLButtonElement).onclick = () => {
      if (!dashboard.selected) return;
      const opacity = Number((this.$("opacity") as HTMLInputElement).value);
      void dashboard
        .steer({ type: "view-option", viewId: dashboard.selected, params: { opacity } })
        .then(() => this.openSelected());
    };
    (this.$("rerun") as HTMLButtonElement).onclick = () => {
      const asOf = (this.$("rerun-asof") as HTMLInputElement).value.trim();
      if (asOf) void dashboard.steer({ type: "re-execute", asOf });
    };
  }

  private sync(): void {
    const dashboard = this.dashboard;
    if (!dashboard) return;
    const viewList = this.$("views");
    viewList.innerHTML = "";
    const sorted = [...dashboard.views].sort(
      (a, b) => severityRank(b.status) - severityRank(a.status) || a.view.localeCompare(b.view),
    );
    for (const view of sorted) {
      const li = el("li");
      const badge = el("span", { class: "badge" });
      badge.style.background = BADGE_COLOR[view.status];
      li.appendChild(badge);
      li.appendChild(el("span", {}, ` ${view.view} (${view.kind})`));
      li.onclick = () => void this.open(view.view);
      if (view.view === dashboard.selected) li.classList.add("selected");
      viewList.appendChild(li);
    }

    const deviations = this.$("deviations");
    deviations.innerHTML = "";
    for (const event of dashboard.deviations) {
      const li = el("li");
      const badge = el("span", { class: "badge" });
      badge.style.background = BADGE_COLOR[event.severity];
      li.appendChild(badge);
      li.appendChild(el("span", {}, ` ${event.timestamp} ${event.node}`));
      if (event.acknowledged) {
        li.appendChild(el("em", {}, ` ack by ${event.acknowledged_by}`));
      } else {
        const button = el("button", {}, "ack");
        button.onclick = () =>
          void dashboard.steer({ type: "ack", deviationId: event.id });
        li.appendChild(button);
      }
      deviations.appendChild(li);
    }

    this.$("stale").style.display = dashboard.staleCatena ? "block" : "none";
    this.$("pending").textContent = dashboard.pendingEdits.length
      ? `pending: ${dashboard.pendingEdits.map((p) => p.edit.type).join(", ")}`
      : "";
  }

  private openSelected(): void {
    if (this.dashboard?.selected) void this.open(this.dashboard.selected);
  }

  private async open(view: string): Promise<void> {
    const dashboard = this.dashboard!;
    const doc = await dashboard.openScene(view);
    this.showScene(doc);
    this.sync();
  }

  private showScene(doc: SceneDocument): void {
    const container = this.$("scene");
    const rendered = renderScene(doc);
    this.viewport?.dispose();
    this.viewport = null;
    if (rendered.mode === "three") {
      container.innerHTML = "";
      this.viewport = new ThreeViewport(container);
      this.viewport.show(rendered.group);
    } else {
      container.innerHTML = rendered.markup;
      this.bindContextMenus(container);
    }
    this.$("provenance").textContent =
      `execution ${doc.meta.execution_id ?? "?"} · catena ${doc.meta.catena_version ?? "?"}`;
  }

  private bindContextMenus(container: HTMLElement): void {
    const menu = this.$("context-menu");
    container.querySelectorAll<HTMLElement>("[data-actions]").forEach((node) => {
      node.addEventListener("contextmenu", (event) => {
        event.preventDefault();
        const actions = JSON.parse(node.dataset.actions ?? "[]") as string[];
        menu.innerHTML = "";
        const entries = actions.length ? actions : ["(no actions configured)"];
        for (const action of entries) menu.appendChild(el("div", {}, action));
        menu.style.display = "block";
        menu.style.left = `${(event as MouseEvent).pageX}px`;
        menu.style.top = `${(event as MouseEvent).pageY}px`;
      });
    });
    document.addEventListener("click", () => (menu.style.display = "none"), { once: true });
  }
}

declare global {
  interface Window {
    spccApp: App;
  }
}

window.addEventListener("DOMContentLoaded", () => {
  window.spccApp = new App(document.getElementById("app")!);
});
