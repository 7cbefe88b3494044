import { readFileSync } from "node:fs";

import type {
  CaseListEntry,
  CasePayload,
  PrioritisationResponse,
  ResolveResponse,
  WhatifResponse,
} from "../src/types.js";

function load<T>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

/** Recorded service responses; regenerate with scripts/record_fixtures.py. */
export const fixtures = {
  cases: () => load<CaseListEntry[]>("cases.json"),
  caseV1: () => load<CasePayload>("case_v1.json"),
  caseV2: () => load<CasePayload>("case_v2.json"),
  whatif085: () => load<WhatifResponse>("whatif_085.json"),
  resolveD1: () => load<ResolveResponse>("resolve_d1.json"),
  prioritisation: () => load<PrioritisationResponse>("prioritisation.json"),
};
