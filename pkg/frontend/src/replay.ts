// 3D replay of the selected event: stick figure on a ground grid with one
// arrow per body variable, drawn on a plain canvas with a hand-rolled
// orbit camera. The scrubber and the detail heatmap share one cursor
// frame, so both views always point at the same moment.

import { Store } from "./state.js";
import { replayModel } from "./viewmodels.js";
import type { ReplayModel } from "./viewmodels.js";

const SKELETON_EDGES: [string, string][] = [
  ["pelvis", "neck"],
  ["pelvis", "left_hip"],
  ["pelvis", "right_hip"],
  ["neck", "left_hand"],
  ["neck", "right_hand"],
  ["left_hip", "left_foot"],
  ["right_hip", "right_foot"],
];

interface Camera {
  yaw: number;
  pitch: number;
  dist: number;
  target: [number, number, number];
}

type Vec3 = [number, number, number];

function project(
  p: Vec3,
  cam: Camera,
  w: number,
  h: number,
): [number, number] | null {
  const dx = p[0] - cam.target[0];
  const dy = p[1] - cam.target[1];
  const dz = p[2] - cam.target[2];
  const cy = Math.cos(cam.yaw);
  const sy = Math.sin(cam.yaw);
  const x1 = cy * dx - sy * dz;
  const z1 = sy * dx + cy * dz;
  const cp = Math.cos(cam.pitch);
  const sp = Math.sin(cam.pitch);
  const y2 = cp * dy - sp * z1;
  const z2 = sp * dy + cp * z1;
  const depth = cam.dist - z2;
  if (depth < 0.1) return null;
  const f = 0.9 * Math.min(w, h);
  return [w / 2 + (f * x1) / depth, h / 2 - (f * y2) / depth];
}

export class ReplayPanel {
  private readonly store: Store;
  private readonly canvas: HTMLCanvasElement;
  private readonly scrub: HTMLInputElement;
  private readonly frameLabel: HTMLSpanElement;
  private readonly cam: Camera = { yaw: 0.6, pitch: 0.35, dist: 4.5, target: [0, 0.9, 0] };
  private dragging = false;
  private lastX = 0;
  private lastY = 0;

  constructor(root: HTMLElement, store: Store) {
    this.store = store;

    const heading = document.createElement("h2");
    heading.textContent = "Replay";
    root.appendChild(heading);

    this.canvas = document.createElement("canvas");
    this.canvas.width = 480;
    this.canvas.height = 360;
    this.canvas.className = "replay-canvas";
    root.appendChild(this.canvas);

    const controls = document.createElement("div");
    controls.className = "replay-controls";
    this.scrub = document.createElement("input");
    this.scrub.type = "range";
    this.scrub.className = "replay-scrub";
    this.scrub.addEventListener("input", () => {
      this.store.scrubTo(Number(this.scrub.value));
    });
    this.frameLabel = document.createElement("span");
    this.frameLabel.className = "replay-frame";
    controls.append(this.scrub, this.frameLabel);
    root.appendChild(controls);

    this.bindOrbit();
    store.subscribe(() => this.render());
    this.render();
  }

  private bindOrbit(): void {
    const c = this.canvas;
    c.addEventListener("pointerdown", (e) => {
      this.dragging = true;
      this.lastX = e.clientX;
      this.lastY = e.clientY;
      c.setPointerCapture?.(e.pointerId);
    });
    c.addEventListener("pointermove", (e) => {
      if (!this.dragging) return;
      this.cam.yaw += (e.clientX - this.lastX) * 0.01;
      this.cam.pitch = Math.min(
        1.4,
        Math.max(-1.4, this.cam.pitch + (e.clientY - this.lastY) * 0.01),
      );
      this.lastX = e.clientX;
      this.lastY = e.clientY;
      this.render();
    });
    c.addEventListener("pointerup", () => {
      this.dragging = false;
    });
    c.addEventListener("wheel", (e) => {
      e.preventDefault();
      this.cam.dist = Math.min(12, Math.max(1.2, this.cam.dist * Math.exp(e.deltaY * 0.001)));
      this.render();
    });
  }

  private render(): void {
    const model = replayModel(this.store.state);
    const range = this.store.state.localRange;
    if (range) {
      this.scrub.min = String(range[0]);
      this.scrub.max = String(range[1]);
    }
    if (model.frame !== null) {
      this.scrub.value = String(model.frame);
      this.frameLabel.textContent = `frame ${model.frame}`;
    } else {
      this.frameLabel.textContent = "no selection";
    }
    this.scrub.disabled = !model.available;
    this.paint(model);
  }

  private paint(model: ReplayModel): void {
    let ctx: CanvasRenderingContext2D | null;
    try {
      ctx = this.canvas.getContext("2d");
    } catch {
      return;
    }
    if (!ctx) return;
    const w = this.canvas.width;
    const h = this.canvas.height;
    ctx.clearRect(0, 0, w, h);
    ctx.fillStyle = "#131722";
    ctx.fillRect(0, 0, w, h);

    // ground grid, 0.5 m pitch
    ctx.strokeStyle = "rgba(140, 150, 170, 0.35)";
    ctx.lineWidth = 1;
    for (let i = -4; i <= 4; i++) {
      const u = i * 0.5;
      this.line(ctx, [u, 0, -2], [u, 0, 2], w, h);
      this.line(ctx, [-2, 0, u], [2, 0, u], w, h);
    }

    const pose = model.pose;
    if (!pose) {
      ctx.fillStyle = "#8b93a7";
      ctx.font = "13px sans-serif";
      ctx.fillText("select an event to replay", 16, 24);
      return;
    }

    const at = new Map(model.joints.map((j, i) => [j, pose.positions[i]] as const));
    ctx.strokeStyle = pose.valid ? "#e8ecf4" : "#6a7182";
    ctx.lineWidth = 2.5;
    for (const [a, b] of SKELETON_EDGES) {
      const pa = at.get(a);
      const pb = at.get(b);
      if (pa && pb) this.line(ctx, pa, pb, w, h);
    }
    ctx.fillStyle = "#ffffff";
    for (const p of pose.positions) {
      if (!p) continue;
      const q = project(p, this.cam, w, h);
      if (!q) continue;
      ctx.beginPath();
      ctx.arc(q[0], q[1], 2.5, 0, Math.PI * 2);
      ctx.fill();
    }

    for (const arrow of model.arrows) {
      const bounds = this.store.state.rampBounds[
        arrow.variable === "weight" ? "weight_l" : arrow.variable
      ];
      const ceil = bounds && bounds[1] > 0 ? bounds[1] : 1;
      const len = 0.45 * Math.min(1, arrow.magnitude / ceil);
      const tip: Vec3 = [
        arrow.origin[0] + arrow.direction[0] * len,
        arrow.origin[1] + arrow.direction[1] * len,
        arrow.origin[2] + arrow.direction[2] * len,
      ];
      ctx.strokeStyle = arrow.color;
      ctx.lineWidth = 2;
      this.line(ctx, arrow.origin, tip, w, h);
      const head = project(tip, this.cam, w, h);
      if (head) {
        ctx.fillStyle = arrow.color;
        ctx.beginPath();
        ctx.arc(head[0], head[1], 3, 0, Math.PI * 2);
        ctx.fill();
      }
    }
  }

  private line(
    ctx: CanvasRenderingContext2D,
    a: Vec3,
    b: Vec3,
    w: number,
    h: number,
  ): void {
    const pa = project(a, this.cam, w, h);
    const pb = project(b, this.cam, w, h);
    if (!pa || !pb) return;
    ctx.beginPath();
    ctx.moveTo(pa[0], pa[1]);
    ctx.lineTo(pb[0], pb[1]);
    ctx.stroke();
  }
}
