import { Advisory } from "../api.js";
import { Ctx } from "../ctx.js";
import { roleAllows } from "../state.js";
import { clear, errorBanner, h } from "../dom.js";

const ADVISORY_POLL_MS = 2000;

export function renderOpendata(root: HTMLElement, ctx: Ctx): void {
  clear(root);
  const catalog = h("div", { class: "dataset-cards" });
  const feed = h("div", { class: "advisory-feed" });
  const status = h("div", { class: "status" });

  async function loadCatalog(): Promise<void> {
    clear(catalog);
    try {
      const { datasets } = await ctx.api.datasets();
      for (const ds of datasets) {
        catalog.append(h("div", { class: "card", dataset: { datasetId: ds.dataset_id } },
          h("h3", {}, ds.title),
          h("p", {}, ds.description),
          h("p", { class: "columns-note" }, `Columns: ${ds.columns.join(", ")}`),
          h("button", {
            class: "download",
            onclick: async () => {
              try {
                const bytes = await ctx.api.downloadDataset(ds.dataset_id);
                const blob = new Blob([bytes], { type: "text/csv" });
                const link = h("a", {
                  href: URL.createObjectURL(blob),
                  download: `${ds.dataset_id}.csv`,
                });
                document.body.append(link);
                link.click();
                link.remove();
              } catch (err) {
                status.replaceChildren(errorBanner((err as Error).message));
              }
            },
          }, "Download CSV"),
        ));
      }
    } catch (err) {
      catalog.append(errorBanner((err as Error).message));
    }
  }

  let lastRendered = "";
  async function loadAdvisories(): Promise<void> {
    let advisories: Advisory[];
    try {
      advisories = (await ctx.api.advisories()).advisories;
    } catch {
      return; // transient fetch failure; next poll retries
    }
    const fingerprint = advisories.map((a) => a.advisory_id).join(",");
    if (fingerprint === lastRendered) return;
    lastRendered = fingerprint;
    clear(feed);
    feed.append(h("h3", {}, "Programs and advisories"));
    if (!advisories.length) {
      feed.append(h("p", { class: "empty" }, "No advisories published yet."));
    }
    for (const a of advisories) {
      feed.append(h("article", { class: "advisory" },
        h("h4", {}, a.title),
        h("p", { class: "when" }, a.published_at),
        h("p", {}, a.body),
      ));
    }
  }

  const publishBox = h("div", { class: "publish" });
  if (roleAllows(ctx.api.role, "advisory.publish")) {
    const title = h("input", { name: "title", placeholder: "Title" });
    const body = h("textarea", { name: "body", rows: 3 });
    publishBox.append(h("form", {
      onsubmit: async (ev: Event) => {
        ev.preventDefault();
        try {
          await ctx.api.publishAdvisory(title.value, body.value);
          title.value = "";
          body.value = "";
          await loadAdvisories();
        } catch (err) {
          status.replaceChildren(errorBanner((err as Error).message));
        }
      },
    },
      h("h3", {}, "Publish advisory"),
      h("label", {}, "Title", title),
      h("label", {}, "Body", body),
      h("button", { type: "submit" }, "Publish"),
    ));
  }

  root.append(
    h("h2", {}, "Open data for residents and LGUs"),
    status,
    catalog,
    feed,
    publishBox,
  );
  void loadCatalog();
  void loadAdvisories();
  window.setInterval(() => void loadAdvisories(), ADVISORY_POLL_MS);
}
