import { BroadcastJob } from "../api.js";
import { Ctx } from "../ctx.js";
import { bindDraft } from "../state.js";
import { clear, errorBanner, h, table } from "../dom.js";

const POLL_MS = 2000;

function audienceFrom(draft: Record<string, string>): Record<string, unknown> {
  if (draft.audience === "zone") {
    return { kind: "zone", zone_id: Number(draft.zone_id ?? "1") };
  }
  if (draft.audience === "residents") {
    return {
      kind: "residents",
      resident_ids: (draft.resident_ids ?? "").split(";").map((s) => s.trim()).filter(Boolean),
    };
  }
  return { kind: "all" };
}

export function renderSms(root: HTMLElement, ctx: Ctx): void {
  clear(root);
  const draft = ctx.state.draftFor("sms");
  const status = h("div", { class: "status" });
  const preview = h("div", { class: "compose-preview" },
    h("span", { class: "segment-count" }, ""),
    h("span", { class: "recipient-count" }, ""));
  const progress = h("div", { class: "progress" });
  let pollTimer: number | null = null;

  void ctx.api.healthCheck().then((info) => {
    if (!info.gateway_configured) {
      status.append(h("div", { class: "banner warning gateway-warning" },
        "No SMS gateway is configured; dispatch will be refused."));
    }
  }).catch(() => { /* health check is advisory here */ });

  const message = h("textarea", { name: "message", rows: 4, maxLength: 2000 });
  bindDraft(message, draft, "message");
  const audience = h("select", { name: "audience" },
    h("option", { value: "all" }, "all residents"),
    h("option", { value: "zone" }, "one zone"),
    h("option", { value: "residents" }, "specific residents"));
  audience.value = draft.audience ?? "all";
  audience.addEventListener("input", () => { draft.audience = audience.value; });
  const zoneId = h("input", { name: "zone_id", type: "number", min: "1", max: "7" });
  bindDraft(zoneId, draft, "zone_id", "1");
  const residentIds = h("input", { name: "resident_ids", placeholder: "000001;000002" });
  bindDraft(residentIds, draft, "resident_ids");

  let previewTimer: number | null = null;
  async function updatePreview(): Promise<void> {
    const text = message.value;
    const seg = preview.querySelector(".segment-count")!;
    const rec = preview.querySelector(".recipient-count")!;
    if (!text) {
      seg.textContent = "";
      rec.textContent = "";
      return;
    }
    try {
      const info = await ctx.api.previewBroadcast(text, audienceFrom(draft));
      seg.textContent = `${info.segments} segment(s)`;
      rec.textContent = `${info.recipients} recipient(s)`;
    } catch (err) {
      seg.textContent = (err as Error).message;
      rec.textContent = "";
    }
  }
  function schedulePreview(): void {
    if (previewTimer !== null) window.clearTimeout(previewTimer);
    previewTimer = window.setTimeout(() => void updatePreview(), 250);
  }
  message.addEventListener("input", schedulePreview);
  audience.addEventListener("input", schedulePreview);
  zoneId.addEventListener("input", schedulePreview);
  residentIds.addEventListener("input", schedulePreview);

  function renderJob(job: BroadcastJob): void {
    clear(progress);
    const pending = job.recipients.filter((r) => r.status === "pending").length;
    progress.append(
      h("h4", {}, `Broadcast ${job.job_id}`),
      table(["Resident", "Phone", "Status", "Attempts"],
        job.recipients.map((r) => [
          r.resident_id, r.phone,
          h("span", { class: `status-${r.status}` }, r.status),
          String(r.attempts),
        ]),
        { class: "recipient-table" }),
      h("p", { class: "total" },
        pending ? `${pending} pending…` : "All recipients final."),
    );
  }

  function pollUntilDone(jobId: string): void {
    if (pollTimer !== null) window.clearInterval(pollTimer);
    pollTimer = window.setInterval(async () => {
      try {
        const job = await ctx.api.getBroadcast(jobId);
        renderJob(job);
        if (!job.recipients.some((r) => r.status === "pending")) {
          if (pollTimer !== null) window.clearInterval(pollTimer);
          pollTimer = null;
        }
      } catch {
        // keep polling; transient fetch errors surface once dispatch returns
      }
    }, POLL_MS);
  }

  const form = h("form", {
    onsubmit: async (ev: Event) => {
      ev.preventDefault();
      clear(status);
      try {
        const job = await ctx.api.createBroadcast(message.value, audienceFrom(draft));
        renderJob(job);
        pollUntilDone(job.job_id);
        const done = await ctx.api.dispatchBroadcast(job.job_id);
        if (pollTimer !== null) window.clearInterval(pollTimer);
        pollTimer = null;
        renderJob(done);
        ctx.state.clearDraft("sms");
      } catch (err) {
        if (pollTimer !== null) window.clearInterval(pollTimer);
        pollTimer = null;
        status.append(errorBanner((err as Error).message));
      }
    },
  },
    h("h3", {}, "Compose advisory"),
    h("label", {}, "Message", message),
    preview,
    h("label", {}, "Audience", audience),
    h("label", {}, "Zone", zoneId),
    h("label", {}, "Resident ids", residentIds),
    h("button", { type: "submit" }, "Send broadcast"),
  );

  root.append(h("h2", {}, "SMS notification"), status, form, progress);
  if (draft.message) void updatePreview();
}
