import { ApiClient } from "./api.js";
import { Store } from "./state.js";
import { OverviewPanel } from "./overview.js";
import { HeatmapPanel } from "./heatmaps.js";
import { DetailPanel } from "./detail.js";
import { ReplayPanel } from "./replay.js";

function mount(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id} container`);
  return el;
}

const store = new Store(new ApiClient());

new OverviewPanel(mount("overview"), store);
new HeatmapPanel(mount("heatmaps"), store);
new DetailPanel(mount("detail"), store);
new ReplayPanel(mount("replay"), store);

store.subscribe((state) => {
  const banner = mount("error-banner");
  banner.textContent = state.error ?? "";
  banner.style.display = state.error ? "block" : "none";
});

void store.load();

// single playback clock; advances the shared cursor at the capture fps
let last = performance.now();
function frame(now: number): void {
  store.tick(now - last);
  last = now;
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
