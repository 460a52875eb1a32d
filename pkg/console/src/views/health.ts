import { Ctx } from "../ctx.js";
import { bindDraft } from "../state.js";
import { clear, errorBanner, h, table } from "../dom.js";

export function renderHealth(root: HTMLElement, ctx: Ctx): void {
  clear(root);
  const draft = ctx.state.draftFor("health");
  const status = h("div", { class: "status" });
  const childList = h("div", { class: "results" });
  const summaryBox = h("div", { class: "results" });

  async function refreshChildren(): Promise<void> {
    clear(childList);
    try {
      const { children } = await ctx.api.listChildren();
      childList.append(table(
        ["Name of Child", "Birthdate", "Gender"],
        children.map((c) => [
          `${c.last_name}, ${c.first_name}, ${c.middle_name}`,
          String(c.birthdate),
          String(c.gender),
        ]),
      ));
    } catch (err) {
      childList.append(errorBanner((err as Error).message));
    }
  }

  const groupBy = h("select", { name: "group_by" },
    h("option", { value: "zone" }, "by zone"),
    h("option", { value: "condition" }, "by condition"));

  async function refreshSummary(): Promise<void> {
    clear(summaryBox);
    try {
      const { summary } = await ctx.api.healthSummary(groupBy.value);
      summaryBox.append(table(
        [groupBy.value, "cases"],
        Object.entries(summary).map(([key, count]) => [key, String(count)]),
        { class: "summary-table" },
      ));
    } catch (err) {
      summaryBox.append(errorBanner((err as Error).message));
    }
  }
  groupBy.addEventListener("change", () => void refreshSummary());

  const childLast = h("input", { name: "last_name" });
  const childFirst = h("input", { name: "first_name" });
  const childMiddle = h("input", { name: "middle_name" });
  const childBirth = h("input", { name: "birthdate", type: "date" });
  const childGender = h("select", { name: "gender" },
    h("option", { value: "male" }, "male"),
    h("option", { value: "female" }, "female"));
  for (const [input, key] of [
    [childLast, "child_last"], [childFirst, "child_first"],
    [childMiddle, "child_middle"], [childBirth, "child_birth"],
  ] as const) {
    bindDraft(input, draft, key);
  }

  const childForm = h("form", {
    onsubmit: async (ev: Event) => {
      ev.preventDefault();
      clear(status);
      try {
        await ctx.api.registerChild({
          last_name: childLast.value,
          first_name: childFirst.value,
          middle_name: childMiddle.value,
          birthdate: childBirth.value,
          gender: childGender.value,
        });
        ctx.state.clearDraft("health");
        await refreshChildren();
      } catch (err) {
        status.append(errorBanner((err as Error).message));
      }
    },
  },
    h("h3", {}, "Register child"),
    h("label", {}, "Last name", childLast),
    h("label", {}, "First name", childFirst),
    h("label", {}, "Middle name", childMiddle),
    h("label", {}, "Birthdate", childBirth),
    h("label", {}, "Gender", childGender),
    h("button", { type: "submit" }, "Save"),
  );

  const subjectKind = h("select", { name: "subject_kind" },
    h("option", { value: "resident" }, "resident"),
    h("option", { value: "child" }, "child"));
  const subjectId = h("input", { name: "subject_id", placeholder: "000001 or CH-000001" });
  const condition = h("input", { name: "condition", placeholder: "condition" });
  const lat = h("input", { name: "lat", placeholder: "latitude" });
  const lon = h("input", { name: "lon", placeholder: "longitude" });
  bindDraft(subjectId, draft, "subject_id");
  bindDraft(condition, draft, "condition");

  const caseForm = h("form", {
    onsubmit: async (ev: Event) => {
      ev.preventDefault();
      clear(status);
      try {
        const { health_case_id } = await ctx.api.recordHealthCase({
          subject_kind: subjectKind.value,
          subject_id: subjectId.value,
          condition: condition.value,
          notes: "",
          lat: Number(lat.value),
          lon: Number(lon.value),
        });
        status.append(h("div", { class: "banner ok" },
          `Recorded ${health_case_id}`));
        await refreshSummary();
      } catch (err) {
        status.append(errorBanner((err as Error).message));
      }
    },
  },
    h("h3", {}, "Record health case"),
    h("label", {}, "Subject", subjectKind),
    h("label", {}, "Subject id", subjectId),
    h("label", {}, "Condition", condition),
    h("div", { class: "pair" }, h("label", {}, "Lat", lat), h("label", {}, "Lon", lon)),
    h("button", { type: "submit" }, "Save"),
  );

  root.append(
    h("h2", {}, "Community health records"),
    h("div", { class: "columns" },
      h("section", {}, h("h3", {}, "Children"), childList, childForm),
      h("section", {}, h("h3", {}, "Summary"), groupBy, summaryBox, caseForm),
    ),
    status,
  );
  void refreshChildren();
  void refreshSummary();
}
