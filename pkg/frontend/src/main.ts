/**
 * DOM wiring: hash routing, event handling, debounced what-if requests.
 *
 * Every state change waits for the service's response (and its new version
 * id) before re-rendering; there is no optimistic update path.
 */

import { ApiClient, CaseNotFound, RequestRejected } from "./api.js";
import { clampOverride, debounce } from "./format.js";
import {
  renderCaseList,
  renderClampWarning,
  renderDetailPanel,
  renderNotFound,
  renderPrioritisation,
  renderSummaryPanel,
  renderTree,
  renderUnreachable,
  renderWhatifBanner,
  renderWhatifControls,
} from "./render.js";
import {
  ExplorerState,
  applyResolution,
  buildTree,
  initialState,
  pinImpact,
  whatifView,
} from "./viewmodel.js";

const api = new ApiClient("");
const root = document.getElementById("app") as HTMLElement;

let state: ExplorerState | null = null;
let selectedNode: string | null = null;
let currentCaseId: string | null = null;
let overrides: Record<string, number> = {};

function el(id: string): HTMLElement {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element ${id}`);
  return found;
}

async function showCaseList(): Promise<void> {
  try {
    const cases = await api.listCases();
    root.innerHTML = renderCaseList(cases);
  } catch (err) {
    root.innerHTML = renderUnreachable(String(err));
  }
}

function redraw(): void {
  if (!state || !currentCaseId) return;
  const tree = buildTree(state.payload.case);
  el("tree").innerHTML = renderTree(tree, state.payload, selectedNode);
  el("summary").innerHTML = renderSummaryPanel(
    state.payload, api.summarySvgUrl(currentCaseId, 3, 3, 3),
  );
  el("detail").innerHTML = renderDetailPanel(state, selectedNode);
  el("whatif-banner").innerHTML = renderWhatifBanner(state.whatif);
  el("whatif-controls").innerHTML = renderWhatifControls(state);
}

const requestWhatif = debounce(async () => {
  if (!state || !currentCaseId) return;
  if (Object.keys(overrides).length === 0) {
    state = { ...state, whatif: null };
    redraw();
    return;
  }
  try {
    const response = await api.whatif(currentCaseId, overrides);
    state = { ...state, whatif: whatifView(overrides, response) };
  } catch (err) {
    el("messages").innerHTML = renderUnreachable(String(err));
  }
  redraw();
}, 250);

async function showCase(caseId: string): Promise<void> {
  currentCaseId = caseId;
  overrides = {};
  selectedNode = null;
  root.innerHTML = [
    `<div id="messages"></div>`,
    `<section id="summary"></section>`,
    `<div id="whatif-banner"></div>`,
    `<div class="columns">`,
    `<section id="tree"></section>`,
    `<aside id="side"><div id="detail"></div>`,
    `<h3>What-if</h3><div id="whatif-controls"></div>`,
    `<button id="whatif-reset">reset</button>`,
    `<h3>Prioritisation</h3><div id="prioritisation"></div></aside>`,
    `</div>`,
  ].join("");
  try {
    state = initialState(await api.getCase(caseId));
  } catch (err) {
    if (err instanceof CaseNotFound) {
      root.innerHTML = renderNotFound(caseId);
    } else {
      root.innerHTML = renderUnreachable(String(err));
    }
    return;
  }
  redraw();
  try {
    const prioritisation = await api.prioritisation(caseId);
    el("prioritisation").innerHTML = renderPrioritisation(prioritisation.plan);
  } catch (err) {
    el("prioritisation").innerHTML = renderUnreachable(String(err));
  }
}

async function onResolve(defeaterId: string, verdict: "sustained" | "refuted") {
  if (!state || !currentCaseId) return;
  try {
    const response = await api.resolveDefeater(currentCaseId, defeaterId, verdict);
    state = applyResolution(state, response);
    redraw();
  } catch (err) {
    if (err instanceof RequestRejected && err.status === 409) {
      el("messages").innerHTML = renderUnreachable(`already resolved: ${defeaterId}`);
    } else {
      el("messages").innerHTML = renderUnreachable(String(err));
    }
  }
}

root.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  const resolve = target.getAttribute("data-resolve");
  if (resolve) {
    const verdict = target.getAttribute("data-verdict") as "sustained" | "refuted";
    void onResolve(resolve, verdict);
    return;
  }
  const pin = target.getAttribute("data-pin");
  if (pin && state?.whatif) {
    state = pinImpact(state, pin, state.whatif.deltaText);
    redraw();
    return;
  }
  if (target.id === "whatif-reset") {
    overrides = {};
    requestWhatif();
    return;
  }
  const nodeEl = target.closest("[data-node]");
  if (nodeEl) {
    selectedNode = nodeEl.getAttribute("data-node");
    redraw();
    event.stopPropagation();
  }
});

root.addEventListener("input", (event) => {
  const target = event.target as HTMLInputElement;
  const node = target.getAttribute("data-override");
  if (!node) return;
  const { value, warned } = clampOverride(Number(target.value));
  if (warned) {
    el("messages").innerHTML = renderClampWarning(node);
  }
  overrides = { ...overrides, [node]: value };
  const output = target.parentElement?.querySelector("output");
  if (output) output.textContent = value.toFixed(2);
  requestWhatif();
});

function route(): void {
  const hash = window.location.hash || "#/";
  const match = hash.match(/^#\/cases\/(.+)$/);
  if (match && match[1]) {
    void showCase(decodeURIComponent(match[1]));
  } else {
    void showCaseList();
  }
}

window.addEventListener("hashchange", route);
route();
