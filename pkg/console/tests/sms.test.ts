// The segment and recipient indicators echo the preview endpoint; dispatch
// progress rows echo the job payload.

import { describe, expect, it } from "vitest";

import { renderSms } from "../src/views/sms.js";
import preview161 from "./fixtures/preview_161.json";
import { makeCtx, mount, stubFetch, waitFor } from "./helpers.js";

const job = {
  job_id: "JOB-000001",
  message: "x".repeat(161),
  created_by: "sec1",
  created_at: "2017-01-15T08:00:00+00:00",
  recipients: [
    { resident_id: "000001", phone: "+639170000101", status: "sent",
      attempts: 1, idempotency_key: "JOB-000001:+639170000101" },
    { resident_id: "000002", phone: "+639170000102", status: "failed",
      attempts: 3, idempotency_key: "JOB-000001:+639170000102" },
  ],
  segments: 2,
};

function routes() {
  return stubFetch([
    { method: "GET", path: /\/api\/health-check$/,
      json: { status: "ok", gateway_configured: true } },
    { method: "POST", path: /\/api\/broadcasts\/preview$/, json: preview161 },
    { method: "POST", path: /\/api\/broadcasts$/, json: job, status: 201 },
    { method: "POST", path: /\/api\/broadcasts\/[^/]+\/dispatch$/, json: job },
    { method: "GET", path: /\/api\/broadcasts\/[^/]+$/, json: job },
  ]);
}

describe("sms console", () => {
  it("shows the API's segment and recipient counts while typing", async () => {
    const intercepted = routes();
    const root = mount();
    renderSms(root, makeCtx());
    const box = root.querySelector("textarea") as HTMLTextAreaElement;
    box.value = "x".repeat(161);
    box.dispatchEvent(new Event("input", { bubbles: true }));
    await waitFor(() =>
      (root.querySelector(".segment-count")!.textContent ?? "") !== "");

    const payload = intercepted.find((i) =>
      i.url.endsWith("/api/broadcasts/preview"))!.payload as typeof preview161;
    expect(root.querySelector(".segment-count")!.textContent).toBe(
      `${payload.segments} segment(s)`);
    expect(root.querySelector(".recipient-count")!.textContent).toBe(
      `${payload.recipients} recipient(s)`);
    expect(payload.segments).toBe(2); // 161 chars -> 2 segments
  });

  it("renders per-recipient status from the dispatched job payload", async () => {
    const intercepted = routes();
    const root = mount();
    renderSms(root, makeCtx());
    const box = root.querySelector("textarea") as HTMLTextAreaElement;
    box.value = job.message;
    box.dispatchEvent(new Event("input", { bubbles: true }));
    const form = root.querySelector("form") as HTMLFormElement;
    form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
    await waitFor(() =>
      root.querySelectorAll(".recipient-table tbody tr").length > 0
      && root.querySelector(".progress .total")!.textContent!.includes("final"));

    const payload = intercepted.find((i) =>
      /\/api\/broadcasts\/[^/]+\/dispatch$/.test(i.url))!.payload as typeof job;
    const rows = Array.from(root.querySelectorAll(".recipient-table tbody tr"));
    expect(rows).toHaveLength(payload.recipients.length);
    rows.forEach((row, i) => {
      const cells = Array.from(row.querySelectorAll("td")).map(
        (td) => td.textContent);
      expect(cells[0]).toBe(payload.recipients[i].resident_id);
      expect(cells[1]).toBe(payload.recipients[i].phone);
      expect(cells[2]).toBe(payload.recipients[i].status);
      expect(cells[3]).toBe(String(payload.recipients[i].attempts));
    });
  });

  it("warns up front when no gateway is configured", async () => {
    stubFetch([
      { method: "GET", path: /\/api\/health-check$/,
        json: { status: "ok", gateway_configured: false } },
    ]);
    const root = mount();
    renderSms(root, makeCtx());
    await waitFor(() => root.querySelector(".gateway-warning") !== null);
    expect(root.querySelector(".gateway-warning")!.textContent).toContain(
      "No SMS gateway");
  });
});
