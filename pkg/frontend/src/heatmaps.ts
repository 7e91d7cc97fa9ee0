// Event heatmaps: filter controls, per-variable legends with live ramp
// sliders, and one block per matching event with a color strip for every
// enabled variable. Ramp slider changes repaint from cached series; they
// never trigger a request.

import { Store } from "./state.js";
import { heatmapGridModel, legendModels } from "./viewmodels.js";
import type { EventHeatModel, HeatRowModel, LegendModel } from "./viewmodels.js";

const STRIP_W = 960;
const STRIP_H = 14;

const FILTER_CHOICES: [string, string][] = [
  ["potential_freezes", "Potential freezes"],
  ["high_trunk", "High trunk lean"],
  ["imbalanced_arm", "Imbalanced arm use"],
  ["imbalanced_weight", "Imbalanced weight"],
];

function context2d(canvas: HTMLCanvasElement): CanvasRenderingContext2D | null {
  try {
    return canvas.getContext("2d");
  } catch {
    return null; // test DOM has no canvas backend
  }
}

export function paintStrip(canvas: HTMLCanvasElement, row: HeatRowModel): void {
  const ctx = context2d(canvas);
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const h = canvas.height;
  for (const cell of row.cells) {
    const x = cell.x0 * canvas.width;
    const w = Math.max(0.5, (cell.x1 - cell.x0) * canvas.width);
    ctx.fillStyle = cell.color;
    ctx.fillRect(x, 0, w, h);
    if (cell.outlier) {
      ctx.fillStyle = "rgba(20, 20, 20, 0.85)";
      ctx.fillRect(x, h - 3, w, 3);
    }
  }
}

export class HeatmapPanel {
  private readonly root: HTMLElement;
  private readonly store: Store;
  private lastKey = "";
  private minDuration = 5;

  constructor(root: HTMLElement, store: Store) {
    this.root = root;
    this.store = store;
    store.subscribe(() => this.render());
    this.render();
  }

  private renderKey(): string {
    const s = this.store.state;
    return [
      s.selectedAction,
      s.activeFilters.join(","),
      s.enabledVariables.join(","),
      Object.values(s.rampMax)
        .map((v) => v.toFixed(4))
        .join(","),
      s.simplified,
      s.selectedEvent,
      (s.events ?? []).map((e) => e.event_id).join(","),
      Object.keys(s.seriesByEvent).length,
      s.freezes?.length ?? 0,
    ].join("#");
  }

  private render(): void {
    const key = this.renderKey();
    if (key === this.lastKey) return;
    this.lastKey = key;

    this.root.textContent = "";
    const heading = document.createElement("h2");
    heading.textContent = "Event heatmaps";
    this.root.appendChild(heading);
    this.root.appendChild(this.buildControls());
    this.root.appendChild(this.buildLegends());

    const model = heatmapGridModel(this.store.state);
    if (model.message) {
      const msg = document.createElement("p");
      msg.className = "empty-state";
      msg.textContent = model.message;
      this.root.appendChild(msg);
      return;
    }
    const grid = document.createElement("div");
    grid.className = "heat-grid";
    for (const ev of model.events) grid.appendChild(this.buildEventBlock(ev));
    this.root.appendChild(grid);
  }

  private buildControls(): HTMLElement {
    const s = this.store.state;
    const bar = document.createElement("div");
    bar.className = "filter-bar";

    for (const [value, label] of FILTER_CHOICES) {
      const chip = document.createElement("button");
      chip.type = "button";
      chip.className = "chip" + (s.activeFilters.includes(value) ? " on" : "");
      chip.dataset.filter = value;
      chip.textContent = label;
      chip.addEventListener("click", () => void this.store.toggleFilter(value));
      bar.appendChild(chip);
    }

    // numeric filter: events at least this many seconds long
    const minWrap = document.createElement("label");
    minWrap.className = "chip chip-input";
    const minActive = s.activeFilters.some((f) => f.startsWith("min_duration="));
    if (minActive) minWrap.classList.add("on");
    const minBox = document.createElement("input");
    minBox.type = "checkbox";
    minBox.checked = minActive;
    const minText = document.createElement("span");
    minText.textContent = "Min duration";
    const minValue = document.createElement("input");
    minValue.type = "number";
    minValue.min = "0";
    minValue.step = "1";
    minValue.value = String(this.minDuration);
    const applyMin = () => {
      const next = s.activeFilters.filter((f) => !f.startsWith("min_duration="));
      if (minBox.checked) next.push(`min_duration=${this.minDuration}`);
      void this.store.setFilters(next);
    };
    minBox.addEventListener("change", applyMin);
    minValue.addEventListener("change", () => {
      this.minDuration = Number(minValue.value) || 0;
      if (minBox.checked) applyMin();
    });
    minWrap.append(minBox, minText, minValue, document.createTextNode("s"));
    bar.appendChild(minWrap);

    const simplify = document.createElement("label");
    simplify.className = "chip" + (s.simplified ? " on" : "");
    const simplifyBox = document.createElement("input");
    simplifyBox.type = "checkbox";
    simplifyBox.checked = s.simplified;
    simplifyBox.addEventListener("change", () => void this.store.toggleSimplified());
    simplify.append(simplifyBox, document.createTextNode("Sigma bins"));
    bar.appendChild(simplify);

    const vars = document.createElement("div");
    vars.className = "variable-toggles";
    for (const variable of this.store.state.meta?.variables ?? []) {
      const chip = document.createElement("button");
      chip.type = "button";
      chip.className =
        "chip var-chip" + (s.enabledVariables.includes(variable) ? " on" : "");
      chip.dataset.variable = variable;
      chip.textContent = variable;
      chip.addEventListener("click", () => this.store.toggleVariable(variable));
      vars.appendChild(chip);
    }
    bar.appendChild(vars);
    return bar;
  }

  private buildLegends(): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "legends";
    for (const legend of legendModels(this.store.state)) {
      wrap.appendChild(this.buildLegend(legend));
    }
    return wrap;
  }

  private buildLegend(legend: LegendModel): HTMLElement {
    const box = document.createElement("div");
    box.className = "legend";
    box.dataset.variable = legend.variable;

    const name = document.createElement("span");
    name.className = "legend-name";
    name.style.color = legend.color;
    name.textContent = legend.variable;
    box.appendChild(name);

    const strip = document.createElement("div");
    strip.className = "legend-ramp";
    strip.style.background = `linear-gradient(to right, ${legend.gradientStops.join(", ")})`;
    // distribution curves sit on top of the ramp, left side dotted
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", "0 0 100 28");
    svg.setAttribute("preserveAspectRatio", "none");
    for (const curve of legend.curves) {
      const path = document.createElementNS("http://www.w3.org/2000/svg", "path");
      const d = curve.points
        .map(([x, y], i) => `${i === 0 ? "M" : "L"}${(x * 100).toFixed(2)},${(28 - y * 26).toFixed(2)}`)
        .join(" ");
      path.setAttribute("d", d);
      path.setAttribute("fill", "none");
      path.setAttribute("stroke", curve.color);
      path.setAttribute("stroke-width", "1.6");
      path.dataset.variable = curve.variable;
      if (curve.dotted) path.setAttribute("stroke-dasharray", "3 3");
      svg.appendChild(path);
    }
    strip.appendChild(svg);
    box.appendChild(strip);

    const slider = document.createElement("input");
    slider.type = "range";
    slider.className = "ramp-slider";
    slider.min = String(legend.bounds[0]);
    slider.max = String(legend.bounds[1]);
    slider.step = String((legend.bounds[1] - legend.bounds[0]) / 200 || 0.01);
    slider.value = String(legend.rampMax);
    slider.addEventListener("input", () => {
      this.store.setRampMax(legend.variable, Number(slider.value));
    });
    box.appendChild(slider);

    const readout = document.createElement("span");
    readout.className = "legend-max";
    readout.textContent = legend.rampMax.toPrecision(3);
    box.appendChild(readout);
    return box;
  }

  private buildEventBlock(ev: EventHeatModel): HTMLElement {
    const block = document.createElement("div");
    block.className = "heat-event" + (ev.selected ? " selected" : "");
    block.dataset.eventId = ev.eventId;

    const head = document.createElement("div");
    head.className = "heat-head";
    const dot = document.createElement("span");
    dot.className = "action-dot";
    dot.style.background = ev.color;
    const title = document.createElement("span");
    title.textContent = ev.title;
    const extra = document.createElement("span");
    extra.className = "heat-extra";
    extra.textContent =
      ev.durationText + (ev.freezeCount > 0 ? ` · ${ev.freezeCount} freezes` : "");
    head.append(dot, title, extra);
    block.appendChild(head);
    block.addEventListener("click", () => void this.store.selectEvent(ev.eventId));

    const body = document.createElement("div");
    body.className = "heat-body";
    if (!ev.loaded) {
      const note = document.createElement("p");
      note.className = "loading-note";
      note.textContent = "Loading series...";
      body.appendChild(note);
    }
    for (const row of ev.rows) {
      const line = document.createElement("div");
      line.className = "heat-row";
      const tag = document.createElement("span");
      tag.className = "heat-tag";
      tag.style.color = row.color;
      tag.textContent = row.variable;
      const canvas = document.createElement("canvas");
      canvas.width = STRIP_W;
      canvas.height = STRIP_H;
      canvas.className = "heat-strip";
      canvas.dataset.variable = row.variable;
      paintStrip(canvas, row);
      line.append(tag, canvas);
      body.appendChild(line);
    }
    // freeze intervals overlay the strip column as hatched spans
    if (ev.freezeSpans.length > 0) {
      const layer = document.createElement("div");
      layer.className = "freeze-layer";
      for (const span of ev.freezeSpans) {
        const mark = document.createElement("div");
        mark.className = "freeze-span";
        mark.style.left = `${(span.x0 * 100).toFixed(3)}%`;
        mark.style.width = `${Math.max(0.2, (span.x1 - span.x0) * 100).toFixed(3)}%`;
        mark.title = `freeze · ${span.durationText}`;
        layer.appendChild(mark);
      }
      body.appendChild(layer);
    }
    block.appendChild(body);
    return block;
  }
}
