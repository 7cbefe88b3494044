/**
 * HTML rendering. Pure string builders so the same code is exercised by
 * the contract tests and the browser.
 */

import { formatScore } from "./format.js";
import type { CaseListEntry, CasePayload, PrioritisationPlan } from "./types.js";
import type { ExplorerState, NodeView, TreeNode, WhatifView } from "./viewmodel.js";
import { nodeViews, topConfidence } from "./viewmodel.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Validity -> visually distinct colour class. */
export const VALIDITY_CLASS: Record<string, string> = {
  SUPPORTED: "validity-supported",
  UNSUPPORTED: "validity-unsupported",
  FALSE: "validity-false",
};

function badge(view: NodeView | undefined): string {
  if (!view) return "";
  const cls = VALIDITY_CLASS[view.validity] ?? "validity-unknown";
  const conf = view.confidence === null ? "" :
    `<span class="confidence">${view.confidence}</span>`;
  const defeaters = view.defeaters
    .map((d) =>
      `<span class="defeater-badge defeater-${d.status}" data-defeater="${escapeHtml(d.id)}">` +
      `${escapeHtml(d.id)}</span>`)
    .join("");
  return `<span class="badge ${cls}" data-validity="${view.validity}">${view.validity}</span>${conf}${defeaters}`;
}

function renderNode(
  node: TreeNode,
  views: Map<string, NodeView>,
  selected: string | null,
): string {
  const cls = node.id === selected ? "node selected" : "node";
  const parts = [
    `<li class="${cls} kind-${node.kind}" data-node="${escapeHtml(node.id)}">`,
    `<span class="node-id">${escapeHtml(node.id)}</span> `,
    `<span class="node-label">${escapeHtml(node.label)}</span> `,
    badge(views.get(node.id)),
  ];
  const nested: string[] = [];
  if (node.warrant) {
    nested.push(renderNode(node.warrant, views, selected));
  }
  for (const child of node.children) {
    nested.push(renderNode(child, views, selected));
  }
  if (nested.length) {
    parts.push(`<ul>${nested.join("")}</ul>`);
  }
  parts.push("</li>");
  return parts.join("");
}

export function renderTree(
  tree: TreeNode,
  payload: CasePayload,
  selected: string | null = null,
): string {
  return `<ul class="argument-tree">${renderNode(tree, nodeViews(payload), selected)}</ul>`;
}

export function renderSummaryPanel(payload: CasePayload, svgUrl: string): string {
  const top = payload.case.case.top_claim;
  const conf = topConfidence(payload);
  const method = payload.valuation?.method ?? "-";
  const state = payload.validity[top] ?? "SUPPORTED";
  const confLine = conf === null
    ? `<p class="valuation-missing">No valuation: ${escapeHtml(payload.valuation_error ?? "unassigned case")}</p>`
    : `<p class="top-confidence">Top-level confidence <strong>${conf}</strong> (${escapeHtml(method)})</p>`;
  const caveat = state === "SUPPORTED" ? "" :
    `<p class="caveat">Top claim is ${state}; confidence is for what-if exploration only.</p>`;
  return [
    `<h2>${escapeHtml(payload.case.case.title)}</h2>`,
    `<p class="claim">${escapeHtml(getClaimText(payload, top))}</p>`,
    confLine,
    caveat,
    `<img class="summary-figure" alt="multi-factor summary" src="${svgUrl}">`,
  ].join("\n");
}

function getClaimText(payload: CasePayload, claimId: string): string {
  return payload.case.claims.find((c) => c.id === claimId)?.statement ?? claimId;
}

export function renderWhatifBanner(view: WhatifView | null): string {
  if (!view) {
    return `<div class="whatif-banner idle">Move a slider to explore.</div>`;
  }
  return (
    `<div class="whatif-banner active">What-if top confidence ` +
    `<strong>${view.topText}</strong> ` +
    `<span class="delta">${view.deltaText}</span> vs baseline</div>`
  );
}

export function renderWhatifControls(state: ExplorerState): string {
  const assignments = state.payload.case.assignments;
  const rows: string[] = [];
  const sections: Array<[string, Record<string, number>]> = [
    ["posterior", assignments.posterior],
    ["warrant_conf", assignments.warrant_conf],
  ];
  for (const [section, table] of sections) {
    for (const [node, value] of Object.entries(table)) {
      const current = state.whatif?.overrides[node] ?? value;
      rows.push(
        `<label class="whatif-row" data-section="${section}">` +
        `<span>${escapeHtml(node)}</span>` +
        `<input type="range" min="0" max="1" step="0.01" value="${current}" ` +
        `data-override="${escapeHtml(node)}">` +
        `<output>${current.toFixed(2)}</output></label>`,
      );
    }
  }
  return `<div class="whatif-controls">${rows.join("")}</div>`;
}

export function renderDetailPanel(state: ExplorerState, nodeId: string | null): string {
  if (!nodeId) {
    return `<div class="detail empty">Select a node.</div>`;
  }
  const payload = state.payload;
  const views = nodeViews(payload);
  const view = views.get(nodeId);
  const lines = [`<h3>${escapeHtml(nodeId)}</h3>`];
  if (view) {
    lines.push(`<p>Validity: ${badgeText(view)}</p>`);
    if (view.confidence !== null) {
      lines.push(`<p>Confidence (service): ${view.confidence}</p>`);
    }
    if (view.flags.length) {
      lines.push(`<p>Flags: ${escapeHtml(view.flags.join(", "))}</p>`);
    }
  }
  for (const defeater of payload.case.defeaters.filter((d) => d.target === nodeId)) {
    const pinned = state.pinnedImpacts[defeater.id];
    lines.push(
      `<div class="defeater" data-defeater="${escapeHtml(defeater.id)}">` +
      `<strong>${escapeHtml(defeater.id)}</strong> (${defeater.status}) ` +
      `${escapeHtml(defeater.text)}` +
      (pinned ? ` <span class="pinned-impact">impact ${pinned}</span>` : "") +
      (defeater.status === "unresolved"
        ? ` <button data-resolve="${escapeHtml(defeater.id)}" data-verdict="refuted">refute</button>` +
          ` <button data-resolve="${escapeHtml(defeater.id)}" data-verdict="sustained">sustain</button>` +
          ` <button data-pin="${escapeHtml(defeater.id)}">apply as refutation impact</button>`
        : "") +
      `</div>`,
    );
  }
  return `<div class="detail">${lines.join("")}</div>`;
}

function badgeText(view: NodeView): string {
  const cls = VALIDITY_CLASS[view.validity] ?? "validity-unknown";
  return `<span class="badge ${cls}" data-validity="${view.validity}">${view.validity}</span>`;
}

export function renderPrioritisation(plan: PrioritisationPlan): string {
  const rows = plan.stage3
    .map((entry) =>
      `<tr data-defeater="${escapeHtml(entry.id)}"><td>${escapeHtml(entry.id)}</td>` +
      `<td>${entry.probability}</td><td>${entry.impact}</td>` +
      `<td>${entry.effort}</td><td>${formatScore(entry.score)}</td></tr>`)
    .join("");
  const stage1 = plan.stage1.map(escapeHtml).join(", ") || "none";
  const stage2 = plan.stage2.map(escapeHtml).join(", ") || "none";
  const unscoreable = plan.unscoreable
    .map((u) => `${escapeHtml(u.id)} (${escapeHtml(u.reason)})`)
    .join(", ") || "none";
  return [
    `<p class="assumptions">${escapeHtml(plan.assumptions)}</p>`,
    `<p>Stage 1 (reasoning steps): ${stage1}</p>`,
    `<p>Stage 2 (restructuring): ${stage2}</p>`,
    `<table class="prioritisation"><thead><tr>` +
    `<th>defeater</th><th>probability</th><th>impact</th><th>effort</th><th>score</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`,
    `<p>Unscoreable: ${unscoreable}</p>`,
  ].join("\n");
}

export function renderCaseList(cases: CaseListEntry[]): string {
  if (!cases.length) {
    return `<div class="empty-state">No cases loaded. Upload one with ` +
      `<code>PUT /cases/&lt;id&gt;</code> or start the service with --cases-dir.</div>`;
  }
  const items = cases
    .map((c) =>
      `<li><a href="#/cases/${encodeURIComponent(c.id)}">${escapeHtml(c.id)}</a> ` +
      `${escapeHtml(c.title)} <span class="version">v${c.version}</span></li>`)
    .join("");
  return `<ul class="case-list">${items}</ul>`;
}

export function renderUnreachable(detail: string): string {
  return `<div class="banner unreachable">Service unreachable: ${escapeHtml(detail)}</div>`;
}

export function renderNotFound(caseId: string): string {
  return `<div class="not-found"><h2>404</h2><p>No case named ` +
    `<code>${escapeHtml(caseId)}</code>.</p><p><a href="#/">Back to the case list.</a></p></div>`;
}

export function renderClampWarning(node: string): string {
  return `<div class="banner clamp-warning">Value for ${escapeHtml(node)} was out of ` +
    `range and has been clamped to [0, 1].</div>`;
}
