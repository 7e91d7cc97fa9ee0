// Selected-event drilldown: zoomed heatmap with a shared cursor, a
// whole-day position bar, a local range that can only narrow within the
// event, and the stats panel. Numbers shown here come straight from the
// event stats endpoint.

import { Store } from "./state.js";
import { detailModel } from "./viewmodels.js";
import { paintStrip } from "./heatmaps.js";
import type { DetailModel } from "./viewmodels.js";

const ZOOM_W = 960;
const ZOOM_H = 26;

export class DetailPanel {
  private readonly root: HTMLElement;
  private readonly store: Store;
  private lastKey = "";
  private cursorEl: HTMLElement | null = null;
  private playBtn: HTMLButtonElement | null = null;

  constructor(root: HTMLElement, store: Store) {
    this.root = root;
    this.store = store;
    store.subscribe(() => this.render());
    this.render();
  }

  private structureKey(model: DetailModel | null): string {
    if (!model) return "empty";
    return [
      model.eventId,
      model.loaded,
      model.localRange.join("-"),
      model.rows.length,
      model.rows.reduce((n, r) => n + r.cells.length, 0),
      model.rows
        .flatMap((r) => r.cells.slice(0, 3).map((c) => c.color))
        .join(","),
      model.statLines.map((l) => l.value).join("|"),
    ].join("#");
  }

  private render(): void {
    const model = detailModel(this.store.state);
    const key = this.structureKey(model);
    if (key === this.lastKey) {
      // fast path: playback only moves the cursor and flips play state
      if (model && this.cursorEl && model.cursorFrac !== null) {
        this.cursorEl.style.left = `${(model.cursorFrac * 100).toFixed(3)}%`;
      }
      if (model && this.playBtn) {
        this.playBtn.textContent = model.playing ? "Pause" : "Play";
      }
      return;
    }
    this.lastKey = key;

    this.root.textContent = "";
    const heading = document.createElement("h2");
    heading.textContent = "Event detail";
    this.root.appendChild(heading);

    if (!model) {
      const hint = document.createElement("p");
      hint.className = "empty-state";
      hint.textContent = "Select an event to inspect it.";
      this.root.appendChild(hint);
      this.cursorEl = null;
      this.playBtn = null;
      return;
    }

    const title = document.createElement("p");
    title.className = "detail-title";
    title.textContent = model.title;
    this.root.appendChild(title);

    this.root.appendChild(this.buildStats(model));
    this.root.appendChild(this.buildZoom(model));
    this.root.appendChild(this.buildGlobalBar(model));
    this.root.appendChild(this.buildLocalSliders(model));
  }

  private buildStats(model: DetailModel): HTMLElement {
    const panel = document.createElement("div");
    panel.className = "stats-panel";
    if (!model.loaded) {
      const note = document.createElement("p");
      note.className = "loading-note";
      note.textContent = "Loading stats...";
      panel.appendChild(note);
      return panel;
    }
    const dl = document.createElement("dl");
    for (const line of model.statLines) {
      const dt = document.createElement("dt");
      dt.textContent = line.label;
      const dd = document.createElement("dd");
      dd.dataset.stat = line.label.toLowerCase().split(" ").join("-");
      dd.textContent = line.value;
      dl.append(dt, dd);
    }
    panel.appendChild(dl);

    if (model.variableStats.length > 0) {
      const table = document.createElement("table");
      table.className = "var-stats";
      const head = table.insertRow();
      for (const text of ["variable", "min", "mean", "max"]) {
        const th = document.createElement("th");
        th.textContent = text;
        head.appendChild(th);
      }
      for (const row of model.variableStats) {
        const tr = table.insertRow();
        tr.insertCell().textContent = row.variable;
        tr.insertCell().textContent = row.min;
        tr.insertCell().textContent = row.mean;
        tr.insertCell().textContent = row.max;
      }
      panel.appendChild(table);
    }
    return panel;
  }

  private buildZoom(model: DetailModel): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "zoom-wrap";
    for (const row of model.rows) {
      const line = document.createElement("div");
      line.className = "heat-row";
      const tag = document.createElement("span");
      tag.className = "heat-tag";
      tag.style.color = row.color;
      tag.textContent = row.variable;
      const canvas = document.createElement("canvas");
      canvas.width = ZOOM_W;
      canvas.height = ZOOM_H;
      canvas.className = "heat-strip zoom-strip";
      canvas.dataset.variable = row.variable;
      paintStrip(canvas, row);
      line.append(tag, canvas);
      wrap.appendChild(line);
    }
    const layer = document.createElement("div");
    layer.className = "freeze-layer";
    for (const span of model.freezeSpans) {
      const mark = document.createElement("div");
      mark.className = "freeze-span";
      mark.style.left = `${(span.x0 * 100).toFixed(3)}%`;
      mark.style.width = `${Math.max(0.2, (span.x1 - span.x0) * 100).toFixed(3)}%`;
      mark.title = `freeze · ${span.durationText}`;
      layer.appendChild(mark);
    }
    wrap.appendChild(layer);

    const cursorLayer = document.createElement("div");
    cursorLayer.className = "cursor-layer";
    const cursor = document.createElement("div");
    cursor.className = "cursor-line";
    if (model.cursorFrac !== null) {
      cursor.style.left = `${(model.cursorFrac * 100).toFixed(3)}%`;
    }
    cursorLayer.appendChild(cursor);
    wrap.appendChild(cursorLayer);
    this.cursorEl = cursor;

    // click anywhere on the zoom strip scrubs the shared cursor
    wrap.addEventListener("click", (e) => {
      const rect = wrap.getBoundingClientRect();
      const usable = rect.width - 72; // strip column starts after the tag
      if (usable <= 0) return;
      const frac = Math.min(1, Math.max(0, (e.clientX - rect.left - 72) / usable));
      const [lo, hi] = model.localRange;
      this.store.scrubTo(lo + frac * (hi - lo));
    });
    return wrap;
  }

  private buildGlobalBar(model: DetailModel): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "global-bar";
    wrap.title = "position of this event in the recorded day";
    const marker = document.createElement("div");
    marker.className = "global-marker";
    marker.style.left = `${(model.globalWindow.x0 * 100).toFixed(3)}%`;
    marker.style.width = `${Math.max(0.3, (model.globalWindow.x1 - model.globalWindow.x0) * 100).toFixed(3)}%`;
    wrap.appendChild(marker);
    return wrap;
  }

  private buildLocalSliders(model: DetailModel): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "local-sliders";
    const [evLo, evHi] = model.eventBounds;

    const label = document.createElement("span");
    label.className = "slider-label";
    label.textContent = `frames ${model.localRange[0]}-${model.localRange[1]}`;
    const lo = document.createElement("input");
    const hi = document.createElement("input");
    for (const el of [lo, hi]) {
      el.type = "range";
      el.min = String(evLo);
      el.max = String(evHi);
      el.step = "1";
    }
    lo.className = "local-lo";
    hi.className = "local-hi";
    lo.value = String(model.localRange[0]);
    hi.value = String(model.localRange[1]);
    const apply = () => {
      let a = Number(lo.value);
      let b = Number(hi.value);
      if (a > b) [a, b] = [b, a];
      this.store.setLocalRange([a, b]);
    };
    lo.addEventListener("change", apply);
    hi.addEventListener("change", apply);

    const play = document.createElement("button");
    play.type = "button";
    play.className = "play-btn";
    play.textContent = model.playing ? "Pause" : "Play";
    play.addEventListener("click", () => this.store.togglePlay());
    this.playBtn = play;

    wrap.append(label, lo, hi, play);
    return wrap;
  }
}
