/**
 * Pure transforms from service payloads to what the explorer shows.
 *
 * Confidences and validity states are copied from the payload, never
 * recomputed; the only processing is tree shaping, badge lookup and
 * formatting. State changes are version-gated: a mutation response is
 * applied only once the service has handed back the new version id.
 */

import { formatConfidence, formatDelta } from "./format.js";
import type {
  CaseDocument,
  CasePayload,
  DefeaterDoc,
  ResolveResponse,
  ValidityState,
  WhatifResponse,
} from "./types.js";

export type NodeKind = "claim" | "warrant" | "evidence" | "block";

export interface TreeNode {
  id: string;
  kind: NodeKind;
  blockKind?: string;
  label: string;
  warrant?: TreeNode;
  children: TreeNode[];
}

/** Shape the case document into a tree rooted at the top-level claim. */
export function buildTree(doc: CaseDocument): TreeNode {
  const claims = new Map(doc.claims.map((c) => [c.id, c]));
  const evidence = new Map(doc.evidence.map((e) => [e.id, e]));
  const blockByParent = new Map(doc.blocks.map((b) => [b.parent_claim, b]));

  const claimNode = (id: string): TreeNode => {
    const claim = claims.get(id);
    const node: TreeNode = {
      id,
      kind: claim?.is_side_claim ? "warrant" : "claim",
      label: claim?.statement ?? id,
      children: [],
    };
    const block = blockByParent.get(id);
    if (block) {
      const blockNode: TreeNode = {
        id: block.id,
        kind: "block",
        blockKind: block.kind,
        label: block.kind.replace(/_/g, " "),
        children: [],
      };
      if (block.warrant) {
        blockNode.warrant = claimNode(block.warrant);
      }
      for (const child of block.children) {
        if (evidence.has(child)) {
          blockNode.children.push({
            id: child,
            kind: "evidence",
            label: evidence.get(child)?.description ?? child,
            children: [],
          });
        } else {
          blockNode.children.push(claimNode(child));
        }
      }
      node.children.push(blockNode);
    }
    return node;
  };

  return claimNode(doc.case.top_claim);
}

export interface DefeaterBadge {
  id: string;
  status: DefeaterDoc["status"];
}

/** Per-node display data: validity, service confidence (formatted), defeaters. */
export interface NodeView {
  validity: ValidityState;
  confidence: string | null;
  flags: string[];
  defeaters: DefeaterBadge[];
}

export function nodeViews(payload: CasePayload): Map<string, NodeView> {
  const views = new Map<string, NodeView>();
  const byTarget = new Map<string, DefeaterBadge[]>();
  for (const d of payload.case.defeaters) {
    const list = byTarget.get(d.target) ?? [];
    list.push({ id: d.id, status: d.status });
    byTarget.set(d.target, list);
  }
  for (const [node, validity] of Object.entries(payload.validity)) {
    const confidence = payload.valuation?.per_node[node];
    views.set(node, {
      validity,
      confidence: confidence === undefined ? null : formatConfidence(confidence),
      flags: payload.valuation?.flags[node] ?? [],
      defeaters: byTarget.get(node) ?? [],
    });
  }
  return views;
}

/** Nodes currently carrying a non-SUPPORTED badge. */
export function flaggedNodes(validity: Record<string, ValidityState>): Set<string> {
  return new Set(
    Object.entries(validity)
      .filter(([, state]) => state !== "SUPPORTED")
      .map(([node]) => node),
  );
}

/** Top-level confidence exactly as the service reported it, formatted. */
export function topConfidence(payload: CasePayload): string | null {
  const top = payload.case.case.top_claim;
  const value = payload.valuation?.per_node[top];
  return value === undefined ? null : formatConfidence(value);
}

export interface WhatifView {
  deltaText: string;
  topText: string;
  overrides: Record<string, number>;
}

export function whatifView(
  overrides: Record<string, number>,
  response: WhatifResponse,
): WhatifView {
  return {
    deltaText: formatDelta(response.delta),
    topText: response.top.toFixed(2),
    overrides,
  };
}

export interface ExplorerState {
  payload: CasePayload;
  whatif: WhatifView | null;
  /** Refutation impacts the analyst pinned from what-if exploration. */
  pinnedImpacts: Record<string, string>;
}

export function initialState(payload: CasePayload): ExplorerState {
  return { payload, whatif: null, pinnedImpacts: {} };
}

/**
 * Fold a defeater-resolution response into the state.
 *
 * Optimistic updates are forbidden: the response must carry a strictly
 * newer version id or it is ignored and the state returned unchanged.
 */
export function applyResolution(
  state: ExplorerState,
  response: ResolveResponse,
): ExplorerState {
  if (response.version <= state.payload.version) {
    return state;
  }
  const defeaters = state.payload.case.defeaters.map((d) =>
    d.id === response.defeater
      ? { ...d, status: response.verdict as DefeaterDoc["status"] }
      : d,
  );
  return {
    ...state,
    payload: {
      ...state.payload,
      version: response.version,
      validity: response.validity,
      case: { ...state.payload.case, defeaters },
    },
  };
}

/** Record a what-if delta as the pinned refutation impact of a defeater. */
export function pinImpact(
  state: ExplorerState,
  defeaterId: string,
  deltaText: string,
): ExplorerState {
  return {
    ...state,
    pinnedImpacts: { ...state.pinnedImpacts, [defeaterId]: deltaText },
  };
}
