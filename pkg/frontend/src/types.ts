/**
 * Payload types of the caseconf HTTP API.
 *
 * The client never recomputes confidences or validity: everything rendered
 * comes straight from these payloads.
 */

export type ValidityState = "SUPPORTED" | "UNSUPPORTED" | "FALSE";

export type BlockKind = "decomposition" | "substitution" | "evidence_incorporation";

export interface ClaimDoc {
  id: string;
  statement: string;
  is_top_level: boolean;
  is_side_claim: boolean;
}

export interface EvidenceDoc {
  id: string;
  description: string;
  provenance: string;
}

export interface BlockDoc {
  id: string;
  kind: BlockKind;
  parent_claim: string;
  children: string[];
  warrant?: string;
  comment?: string;
}

export interface DefeaterDoc {
  id: string;
  text: string;
  target: string;
  defeater_type: string;
  class: string;
  status: "unresolved" | "sustained" | "refuted";
  provenance: string;
  prior_sustain_probability?: number;
  effort?: number;
  refuted_posterior?: Record<string, number>;
  requires_restructuring: boolean;
  challenges_reasoning_step: boolean;
}

export interface ResidualDoubtDoc {
  id: string;
  category: string;
  description: string;
  severity?: string;
  likelihood?: number | string;
  accepted: boolean;
  acceptance_rationale: string;
}

export interface CaseDocument {
  case: { id: string; title: string; top_claim: string };
  claims: ClaimDoc[];
  evidence: EvidenceDoc[];
  blocks: BlockDoc[];
  defeaters: DefeaterDoc[];
  residual_doubts: ResidualDoubtDoc[];
  assignments: {
    posterior: Record<string, number>;
    warrant_conf: Record<string, number>;
  };
}

export interface Valuation {
  method: string;
  per_node: Record<string, number>;
  raw_per_node: Record<string, number>;
  adjustments_applied: Array<Record<string, unknown>>;
  flags: Record<string, string[]>;
}

export interface CasePayload {
  version: number;
  case: CaseDocument;
  validity: Record<string, ValidityState>;
  findings: Array<{ severity: string; node: string; code: string; message: string }>;
  valuation: Valuation | null;
  valuation_error: string | null;
}

export interface CaseListEntry {
  id: string;
  title: string;
  version: number;
}

export interface WhatifResponse {
  version: number;
  method: string;
  top: number;
  delta: number;
  top_raw: number;
  baseline_top_raw: number;
  valuation: Valuation;
}

export interface ResolveResponse {
  id: string;
  defeater: string;
  verdict: string;
  version: number;
  validity: Record<string, ValidityState>;
}

export interface ScoredDefeater {
  id: string;
  probability: number;
  impact: number;
  effort: number;
  score: number;
}

export interface PrioritisationPlan {
  assumptions: string;
  weights: { w_probability: number; w_impact: number; w_effort: number };
  stage1: string[];
  stage2: string[];
  stage3: ScoredDefeater[];
  unscoreable: Array<{ id: string; reason: string }>;
  rationale: Record<string, string>;
}

export interface PrioritisationResponse {
  version: number;
  method: string;
  plan: PrioritisationPlan;
}
