import { describe, expect, it } from "vitest";

import {
  VALIDITY_CLASS,
  escapeHtml,
  renderCaseList,
  renderNotFound,
  renderPrioritisation,
  renderTree,
  renderUnreachable,
  renderWhatifBanner,
} from "../src/render.js";
import { buildTree } from "../src/viewmodel.js";
import { fixtures } from "./helpers.js";

describe("validity colouring", () => {
  it("assigns three visually distinct classes", () => {
    const classes = Object.values(VALIDITY_CLASS);
    expect(new Set(classes).size).toBe(3);
  });

  it("tags every badge with its validity state", () => {
    const payload = fixtures.caseV1();
    const html = renderTree(buildTree(payload.case), payload, null);
    expect(html).toContain('class="badge validity-unsupported"');
    expect(html).toContain('class="badge validity-supported"');
    expect(html).toContain('data-defeater="D1"');
  });
});

describe("escaping", () => {
  it("escapes markup in labels", () => {
    expect(escapeHtml('<b>&"')).toBe("&lt;b&gt;&amp;&quot;");
    const payload = fixtures.caseV1();
    payload.case.claims[0]!.statement = 'x < 7 & "done"';
    const html = renderTree(buildTree(payload.case), payload, null);
    expect(html).not.toContain('x < 7 & "done"');
    expect(html).toContain("x &lt; 7 &amp; &quot;done&quot;");
  });
});

describe("screens", () => {
  it("shows an empty state when the store has no cases", () => {
    expect(renderCaseList([])).toContain("No cases loaded");
    expect(renderCaseList(fixtures.cases())).toContain("cyber-novel-attack-response");
  });

  it("renders the unreachable banner and the 404 page", () => {
    expect(renderUnreachable("connection refused")).toContain("Service unreachable");
    const notFound = renderNotFound("missing-case");
    expect(notFound).toContain("404");
    expect(notFound).toContain("missing-case");
  });

  it("renders an idle what-if banner before any override", () => {
    expect(renderWhatifBanner(null)).toContain("Move a slider");
  });
});

describe("prioritisation table", () => {
  it("lists the staged defeaters with scores from the service", () => {
    const plan = fixtures.prioritisation().plan;
    const html = renderPrioritisation(plan);
    expect(html.indexOf('data-defeater="D1"')).toBeLessThan(
      html.indexOf('data-defeater="D2"'),
    );
    expect(html).toContain("1.38");
    expect(html).toContain("0.85");
    expect(html).toContain("mutually independent");
  });
});
