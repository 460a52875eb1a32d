import { BlotterCase, Resident } from "../api.js";
import { Ctx } from "../ctx.js";
import { bindDraft, roleAllows } from "../state.js";
import { clear, errorBanner, h, table } from "../dom.js";

export function renderClearance(root: HTMLElement, ctx: Ctx): void {
  clear(root);
  const draft = ctx.state.draftFor("clearance");
  const results = h("div", { class: "results" });
  const workbench = h("div", { class: "workbench" });

  const query = h("input", { name: "q", placeholder: "Find resident" });
  bindDraft(query, draft, "q");

  async function verify(resident: Resident): Promise<void> {
    clear(workbench);
    const canOverride = roleAllows(ctx.api.role, "clearance.override");
    let blocking: BlotterCase[] = [];
    try {
      blocking = (await ctx.api.listCases({
        status: "open",
        respondent_id: resident.resident_id,
      })).cases;
    } catch (err) {
      workbench.append(errorBanner((err as Error).message));
      return;
    }

    const outcome = h("div", { class: "outcome" });
    const purpose = h("input", { name: "purpose", placeholder: "Purpose" });
    bindDraft(purpose, draft, "purpose");
    const kind = h("select", { name: "kind" },
      h("option", { value: "clearance" }, "clearance"),
      h("option", { value: "certification" }, "certification"));
    const overrideBox = h("input", { type: "checkbox", name: "override" });

    const blocked = blocking.length > 0;
    const issueButton = h("button", { type: "submit" }, "Issue");
    // the gate: a blocked resident can only be issued via secretary override
    if (blocked && !canOverride) issueButton.disabled = true;

    const banner = blocked
      ? h("div", { class: "banner warning blocking" },
          h("strong", {}, "Open blotter case(s): "),
          h("span", { class: "blocking-cases" },
            blocking.map((c) => c.case_number).join(", ")))
      : h("div", { class: "banner ok" }, "No open cases on record.");

    const form = h("form", {
      class: "clearance-form",
      onsubmit: async (ev: Event) => {
        ev.preventDefault();
        clear(outcome);
        try {
          const cert = await ctx.api.issueClearance({
            resident_id: resident.resident_id,
            kind: kind.value,
            purpose: purpose.value,
            override: overrideBox.checked,
          });
          if (cert.outcome === "issued") {
            ctx.state.clearDraft("clearance");
            outcome.append(
              h("div", { class: "banner ok" }, `Issued ${cert.certificate_id}`),
              h("pre", { class: "certificate" }, cert.document ?? ""),
              h("button", { onclick: () => window.print() }, "Print"),
            );
          } else {
            outcome.append(
              h("div", { class: "banner error denial" },
                `Denied: ${cert.denial_reason ?? ""}`),
            );
          }
        } catch (err) {
          outcome.append(errorBanner((err as Error).message));
        }
      },
    },
      h("label", {}, "Kind", kind),
      h("label", {}, "Purpose", purpose),
      canOverride
        ? h("label", { class: "override-control" }, overrideBox,
            " Override the open-case gate (recorded)")
        : null,
      issueButton,
    );

    workbench.append(
      h("h3", {}, `${resident.last_name}, ${resident.first_name}`),
      banner,
      form,
      outcome,
    );

    try {
      const { certificates } = await ctx.api.clearanceHistory(resident.resident_id);
      workbench.append(
        h("h4", {}, `Previous requests (${certificates.length})`),
        certificates.length
          ? table(["When", "Kind", "Purpose", "Outcome"],
              certificates.map((c) => [c.issued_at, c.kind, c.purpose, c.outcome]))
          : h("p", { class: "empty" }, "None."),
      );
    } catch (err) {
      workbench.append(errorBanner((err as Error).message));
    }
  }

  async function search(): Promise<void> {
    clear(results);
    try {
      const { residents } = await ctx.api.listResidents(query.value.trim());
      results.append(table(
        ["Lastname", "Firstname", ""],
        residents.map((r) => [
          r.last_name,
          r.first_name,
          h("button", { onclick: () => void verify(r) }, "VERIFY"),
        ]),
      ));
    } catch (err) {
      results.append(errorBanner((err as Error).message));
    }
  }

  root.append(
    h("h2", {}, "Clearance and certificates"),
    h("form", {
      class: "toolbar",
      onsubmit: (ev: Event) => {
        ev.preventDefault();
        void search();
      },
    }, query, h("button", { type: "submit" }, "Search")),
    results,
    workbench,
  );
}
