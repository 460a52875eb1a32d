import { Ctx } from "../ctx.js";
import { bindDraft } from "../state.js";
import { clear, errorBanner, h, table } from "../dom.js";

export function renderBlotter(root: HTMLElement, ctx: Ctx): void {
  clear(root);
  const draft = ctx.state.draftFor("blotter");
  const listing = h("div", { class: "results" });
  const status = h("div", { class: "status" });

  async function refresh(): Promise<void> {
    clear(listing);
    try {
      const { cases } = await ctx.api.listCases();
      listing.append(table(
        ["Date Filed", "Case#", "Offense", "Status", "Zone", ""],
        cases.map((c) => [
          c.date_filed,
          c.case_number,
          c.offense_type,
          c.status,
          String(c.zone_id),
          c.status === "open"
            ? h("span", {},
                ...["settled", "referred", "dismissed"].map((target) =>
                  h("button", {
                    class: "small",
                    onclick: async () => {
                      try {
                        await ctx.api.updateCase(c.case_number, target);
                        await refresh();
                      } catch (err) {
                        status.replaceChildren(errorBanner((err as Error).message));
                      }
                    },
                  }, target)))
            : "",
        ]),
        { class: "blotter-table" },
      ));
    } catch (err) {
      listing.append(errorBanner((err as Error).message));
    }
  }

  const complainants = h("input", { name: "complainants", placeholder: "000001;000002" });
  const respondents = h("input", { name: "respondents", placeholder: "000003" });
  const offense = h("input", { name: "offense", placeholder: "offense type" });
  const dateFiled = h("input", { name: "date_filed", type: "date" });
  const lat = h("input", { name: "lat", placeholder: "latitude" });
  const lon = h("input", { name: "lon", placeholder: "longitude" });
  const narrative = h("textarea", { name: "narrative", rows: 3 });
  for (const [input, key] of [
    [complainants, "complainants"], [respondents, "respondents"],
    [offense, "offense"], [dateFiled, "date_filed"], [lat, "lat"],
    [lon, "lon"], [narrative, "narrative"],
  ] as const) {
    bindDraft(input, draft, key);
  }

  const form = h("form", {
    class: "blotter-form",
    onsubmit: async (ev: Event) => {
      ev.preventDefault();
      clear(status);
      try {
        const { case_number } = await ctx.api.fileBlotter({
          complainant_ids: complainants.value.split(";").map((s) => s.trim()).filter(Boolean),
          respondent_ids: respondents.value.split(";").map((s) => s.trim()).filter(Boolean),
          offense_type: offense.value,
          narrative: narrative.value,
          date_filed: dateFiled.value,
          lat: Number(lat.value),
          lon: Number(lon.value),
        });
        ctx.state.clearDraft("blotter");
        for (const input of [complainants, respondents, offense, dateFiled,
                             lat, lon, narrative]) {
          input.value = "";
        }
        status.append(h("div", { class: "banner ok" },
          `Recorded with incident report number ${case_number}`));
        await refresh();
      } catch (err) {
        status.append(errorBanner((err as Error).message));
      }
    },
  },
    h("h3", {}, "File a complaint"),
    h("label", {}, "Complainant ids (;-separated)", complainants),
    h("label", {}, "Respondent ids (;-separated)", respondents),
    h("label", {}, "Offense type", offense),
    h("label", {}, "Date filed", dateFiled),
    h("div", { class: "pair" }, h("label", {}, "Lat", lat), h("label", {}, "Lon", lon)),
    h("label", {}, "Narrative", narrative),
    h("button", { type: "submit" }, "Record case"),
  );

  root.append(h("h2", {}, "Blotter and complaints"), listing, form, status);
  void refresh();
}
