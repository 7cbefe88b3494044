/**
 * Thin fetch client for the caseconf service.
 *
 * Errors are split into the three cases the UI renders differently:
 * unreachable service (banner), unknown case (404 page), and request
 * rejections (inline message).
 */

import type {
  CaseListEntry,
  CasePayload,
  PrioritisationResponse,
  ResolveResponse,
  WhatifResponse,
} from "./types.js";

export class ServiceUnreachable extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${String(cause)}`);
    this.name = "ServiceUnreachable";
  }
}

export class CaseNotFound extends Error {
  constructor(public readonly caseId: string) {
    super(`unknown case: ${caseId}`);
    this.name = "CaseNotFound";
  }
}

export class RequestRejected extends Error {
  constructor(public readonly status: number, detail: string) {
    super(detail);
    this.name = "RequestRejected";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ServiceUnreachable(err);
    }
    if (response.status === 404) {
      throw new CaseNotFound(path);
    }
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const body = (await response.json()) as { detail?: unknown };
        if (body.detail !== undefined) detail = String(body.detail);
      } catch {
        /* keep the bare status */
      }
      throw new RequestRejected(response.status, detail);
    }
    return (await response.json()) as T;
  }

  listCases(): Promise<CaseListEntry[]> {
    return this.request<CaseListEntry[]>("/cases");
  }

  getCase(caseId: string, method = "product", version?: number): Promise<CasePayload> {
    const params = new URLSearchParams({ method });
    if (version !== undefined) params.set("version", String(version));
    return this.request<CasePayload>(
      `/cases/${encodeURIComponent(caseId)}?${params.toString()}`,
    );
  }

  resolveDefeater(
    caseId: string,
    defeaterId: string,
    verdict: "sustained" | "refuted",
  ): Promise<ResolveResponse> {
    return this.request<ResolveResponse>(
      `/cases/${encodeURIComponent(caseId)}/defeaters/${encodeURIComponent(defeaterId)}/resolve`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ verdict }),
      },
    );
  }

  whatif(
    caseId: string,
    overrides: Record<string, number>,
    method = "product",
  ): Promise<WhatifResponse> {
    return this.request<WhatifResponse>(
      `/cases/${encodeURIComponent(caseId)}/whatif`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ overrides, method }),
      },
    );
  }

  prioritisation(caseId: string): Promise<PrioritisationResponse> {
    return this.request<PrioritisationResponse>(
      `/cases/${encodeURIComponent(caseId)}/prioritisation`,
    );
  }

  summarySvgUrl(caseId: string, eq: number, aq: number, sa: number): string {
    const params = new URLSearchParams({
      eq: String(eq),
      aq: String(aq),
      sa: String(sa),
    });
    return `${this.baseUrl}/cases/${encodeURIComponent(caseId)}/report/summary.svg?${params}`;
  }
}
