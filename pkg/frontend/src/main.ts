// Browser bootstrap: wires store updates into the page and DOM events
// back into the store. All markup comes from the pure renderers.

import { ApiClient } from "./api.js";
import { renderClusters, renderControls, renderEntityPicker, renderSummary } from "./render.js";
import { Polarity, SummaryStore } from "./state.js";

function mount(): void {
  const api = new ApiClient("");
  const store = new SummaryStore(api);

  const $ = (id: string): HTMLElement => {
    const el = document.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el;
  };
  const picker = $("picker");
  const controls = $("controls");
  const summary = $("summary");
  const clusters = $("clusters");

  store.subscribe((state) => {
    picker.innerHTML = renderEntityPicker(state.entities, state.selectedEntity);
    controls.innerHTML = renderControls(state);
    summary.innerHTML = renderSummary(state);
    clusters.innerHTML = renderClusters(state.response);
  });

  picker.addEventListener("click", (ev) => {
    const li = (ev.target as HTMLElement).closest<HTMLElement>("[data-entity]");
    if (li?.dataset.entity) store.selectEntity(li.dataset.entity);
  });

  controls.addEventListener("click", (ev) => {
    const target = ev.target as HTMLElement;
    const chip = target.closest<HTMLElement>("[data-aspect]");
    if (chip?.dataset.aspect) store.toggleAspect(chip.dataset.aspect);
    const pol = target.closest<HTMLElement>("[data-polarity]");
    if (pol?.dataset.polarity) store.setPolarity(pol.dataset.polarity as Polarity);
  });

  controls.addEventListener("input", (ev) => {
    const input = ev.target as HTMLInputElement;
    const value = Number(input.value);
    if (input.id === "k") store.setK(value);
    else if (input.id === "theta") store.setTheta(value);
    else if (input.id === "beam") store.setBeamSize(value);
    else if (input.id === "maxlen") store.setMaxLen(value);
  });

  void store.init();
}

mount();
