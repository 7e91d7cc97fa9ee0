// Daily overview: one summary bar per action plus a chronological strip
// where overlapping events stack into lanes. Clicking either form of a
// bar selects that action for the heatmap view below.

import { Store } from "./state.js";
import { overviewModel } from "./viewmodels.js";
import type { OverviewModel } from "./viewmodels.js";

export class OverviewPanel {
  private readonly root: HTMLElement;
  private readonly store: Store;
  private lastKey = "";

  constructor(root: HTMLElement, store: Store) {
    this.root = root;
    this.store = store;
    store.subscribe(() => this.render());
    this.render();
  }

  private renderKey(model: OverviewModel): string {
    return [
      model.datasetId,
      model.bars.map((b) => `${b.action}:${b.totalS}:${b.selected}`).join("|"),
      model.blocks.length,
      model.blocks.filter((b) => b.selected).length,
    ].join("#");
  }

  private render(): void {
    const model = overviewModel(this.store.state);
    const key = this.renderKey(model);
    if (key === this.lastKey) return;
    this.lastKey = key;

    this.root.textContent = "";
    const heading = document.createElement("h2");
    heading.textContent = "Day overview";
    this.root.appendChild(heading);

    if (model.empty) {
      const msg = document.createElement("p");
      msg.className = "empty-state";
      msg.textContent = model.emptyMessage;
      this.root.appendChild(msg);
      return;
    }

    const summary = document.createElement("p");
    summary.className = "overview-meta";
    summary.textContent =
      `${model.datasetId} · ${model.spanText} recorded` +
      (model.percentSittingText ? ` · ${model.percentSittingText} sitting` : "");
    this.root.appendChild(summary);

    const list = document.createElement("div");
    list.className = "action-bars";
    for (const bar of model.bars) {
      const row = document.createElement("button");
      row.type = "button";
      row.className = "action-bar" + (bar.selected ? " selected" : "");
      row.dataset.action = bar.action;
      row.addEventListener("click", () => {
        void this.store.selectAction(bar.selected ? null : bar.action);
      });

      const label = document.createElement("span");
      label.className = "action-label";
      label.textContent = bar.label;

      const track = document.createElement("span");
      track.className = "bar-track";
      const fill = document.createElement("span");
      fill.className = "bar-fill";
      fill.style.width = `${(bar.widthFrac * 100).toFixed(2)}%`;
      fill.style.background = bar.color;
      track.appendChild(fill);

      const value = document.createElement("span");
      value.className = "bar-value";
      value.textContent = `${bar.durationText} · ${bar.eventCount} events`;

      row.append(label, track, value);
      list.appendChild(row);
    }
    this.root.appendChild(list);

    const strip = document.createElement("div");
    strip.className = "timeline";
    strip.style.height = `${model.laneCount * 18 + 6}px`;
    for (const block of model.blocks) {
      const el = document.createElement("div");
      el.className = "timeline-block" + (block.selected ? " highlighted" : "");
      el.style.left = `${(block.x0 * 100).toFixed(3)}%`;
      el.style.width = `${Math.max(0.15, (block.x1 - block.x0) * 100).toFixed(3)}%`;
      el.style.top = `${block.lane * 18 + 3}px`;
      el.style.background = block.color;
      el.title = `${block.action} (${block.eventId})`;
      el.addEventListener("click", () => {
        void this.store.selectAction(block.action);
      });
      strip.appendChild(el);
    }
    this.root.appendChild(strip);
  }
}
