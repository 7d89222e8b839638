// Pure HTML renderers over the store state. No data is invented here:
// every phrase, size, and label comes straight out of a service response.

import { ClusterInfo, EntityInfo, SummarizeResponse } from "./api.js";
import { Polarity, UiState } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderEntityPicker(entities: EntityInfo[], selected: string | null): string {
  if (entities.length === 0) {
    return `<p class="empty">No entities loaded. Is the service running?</p>`;
  }
  const rows = entities
    .map((e) => {
      const cls = e.entity_id === selected ? "entity selected" : "entity";
      return (
        `<li class="${cls}" data-entity="${escapeHtml(e.entity_id)}">` +
        `${escapeHtml(e.entity_id)} <span class="count">${e.review_count} reviews</span></li>`
      );
    })
    .join("");
  return `<ul class="entity-list">${rows}</ul>`;
}

const POLARITIES: Polarity[] = ["all", "positive", "negative"];

export function renderControls(state: UiState): string {
  const chips = state.aspects
    .map((a) => {
      const on = state.activeAspects.includes(a) ? " on" : "";
      return `<button class="chip${on}" data-aspect="${escapeHtml(a)}">${escapeHtml(a)}</button>`;
    })
    .join("");
  const polarity = POLARITIES.map((p) => {
    const on = state.polarity === p ? " on" : "";
    return `<button class="pol${on}" data-polarity="${p}">${p}</button>`;
  }).join("");
  return `
  <div class="controls">
    <div class="row aspects">${chips}</div>
    <div class="row polarity">${polarity}</div>
    <label>top-k <input type="range" id="k" min="1" max="30" step="1" value="${state.k}">
      <span id="k-value">${state.k}</span></label>
    <label>merge threshold <input type="range" id="theta" min="0.05" max="1" step="0.05"
      value="${state.theta}"><span id="theta-value">${state.theta.toFixed(2)}</span></label>
    <label>beam <input type="range" id="beam" min="1" max="10" step="1" value="${state.beamSize}">
      <span id="beam-value">${state.beamSize}</span></label>
    <label>max length <input type="range" id="maxlen" min="10" max="200" step="10"
      value="${state.maxLen}"><span id="maxlen-value">${state.maxLen}</span></label>
  </div>`;
}

export function renderSummary(state: UiState): string {
  if (state.error) {
    return `<div class="banner error">${escapeHtml(state.error)}</div>`;
  }
  if (!state.selectedEntity) {
    return `<p class="empty">Pick an entity to summarize.</p>`;
  }
  if (state.inFlight && !state.response) {
    return `<p class="empty">Summarizing&hellip;</p>`;
  }
  const r = state.response;
  if (!r) {
    return "";
  }
  if (r.status === "empty_selection") {
    return `<div class="banner">No opinions match the current filters.</div>`;
  }
  const stale = state.inFlight ? " stale" : "";
  return `<blockquote class="summary${stale}">${escapeHtml(r.summary)}</blockquote>`;
}

function renderCluster(c: ClusterInfo): string {
  const members = c.members
    .map(
      (m) =>
        `<li>${escapeHtml(m.phrase)} <span class="prov">${escapeHtml(m.review_id)}</span></li>`,
    )
    .join("");
  return `
  <details class="cluster">
    <summary>
      <span class="size">x${c.size}</span>
      <span class="repr">${escapeHtml(c.representative)}</span>
      <span class="tag aspect">${escapeHtml(c.aspect)}</span>
      <span class="tag polarity ${escapeHtml(c.polarity)}">${escapeHtml(c.polarity)}</span>
    </summary>
    <ul class="members">${members}</ul>
  </details>`;
}

export function renderClusters(response: SummarizeResponse | null): string {
  if (!response || response.status !== "ok") {
    return "";
  }
  // service order is size-descending; keep it untouched
  return response.clusters.map(renderCluster).join("");
}
