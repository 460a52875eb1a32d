import { Ctx } from "../ctx.js";
import { roleAllows } from "../state.js";
import { clear, errorBanner, h, table } from "../dom.js";

export function renderAnalytics(root: HTMLElement, ctx: Ctx): void {
  clear(root);
  const chartBox = h("div", { class: "chart" });
  const reportBox = h("div", { class: "report" });
  const status = h("div", { class: "status" });

  const groupBy = h("select", { name: "group_by" },
    ...["offense_type", "zone", "month", "residency_status"].map((g) =>
      h("option", { value: g }, g)));

  async function loadChart(): Promise<void> {
    clear(chartBox);
    try {
      const { counts } = await ctx.api.chart(groupBy.value);
      const entries = Object.entries(counts);
      const max = Math.max(1, ...entries.map(([, v]) => v));
      chartBox.append(h("h3", {}, "Crime chart"));
      for (const [key, value] of entries) {
        chartBox.append(h("div", { class: "bar-row" },
          h("span", { class: "bar-label" }, key),
          h("span", {
            class: "bar",
            style: `width:${(value / max) * 320}px`,
          }),
          h("span", { class: "bar-value" }, String(value)),
        ));
      }
      if (!entries.length) {
        chartBox.append(h("p", { class: "empty" }, "No cases in the window."));
      }
    } catch (err) {
      chartBox.append(errorBanner((err as Error).message));
    }
  }
  groupBy.addEventListener("change", () => void loadChart());

  const task = h("select", { name: "task" },
    h("option", { value: "offend_by_residency" }, "offending by residency"),
    h("option", { value: "reoffend" }, "reoffense likelihood"));

  async function loadReport(): Promise<void> {
    clear(reportBox);
    try {
      const report = await ctx.api.report(task.value);
      if (report.groups) {
        reportBox.append(
          h("h3", {}, "Likelihood by residency"),
          table(["Group", "Records", "Offenders", "P(offend)"],
            Object.entries(report.groups as Record<string, any>).map(
              ([group, info]) => [
                group,
                String(info.records),
                String(info.offenders),
                info.offend_probability.toFixed(3),
              ])),
        );
      } else {
        const rows = (report.profiles as any[]).slice(0, 12);
        reportBox.append(
          h("h3", {}, `Reoffense likelihood (${report.total_records} records)`),
          table(["Records", "Reoffenders", "P(reoffend)", "Profile"],
            rows.map((row) => [
              String(row.records),
              String(row.reoffenders),
              row.reoffend_probability.toFixed(3),
              Object.entries(row.profile)
                .filter(([, v]) => v !== "unknown")
                .map(([k, v]) => `${k}=${v}`)
                .join(" "),
            ])),
        );
      }
    } catch (err) {
      reportBox.append(errorBanner((err as Error).message));
    }
  }
  task.addEventListener("change", () => void loadReport());

  const trainControls = h("div", { class: "train" });
  if (roleAllows(ctx.api.role, "analytics.train")) {
    const learner = h("select", { name: "learner" },
      h("option", { value: "nb" }, "naive bayes"),
      h("option", { value: "tree" }, "decision tree"));
    trainControls.append(
      h("h3", {}, "Cross-validated evaluation"),
      h("label", {}, "Learner", learner),
      h("button", {
        onclick: async () => {
          clear(status);
          try {
            const result = await ctx.api.train({
              task: task.value, learner: learner.value, k: 5,
            });
            const evaluation = result.evaluation;
            status.append(h("p", { class: "total eval-line" },
              `k=${evaluation.k} overall accuracy ` +
              `${evaluation.overall_accuracy.toFixed(3)} ` +
              `(per fold: ${evaluation.fold_accuracies
                .map((a: number) => a.toFixed(2)).join(", ")})`));
          } catch (err) {
            status.append(errorBanner((err as Error).message));
          }
        },
      }, "Evaluate"),
    );
  }

  root.append(
    h("h2", {}, "Crime statistics and prediction"),
    h("div", { class: "toolbar" }, h("label", {}, "Group by", groupBy),
      h("label", {}, "Task", task)),
    chartBox,
    reportBox,
    trainControls,
    status,
  );
  void loadChart();
  void loadReport();
}
