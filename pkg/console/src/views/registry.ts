import { Resident, TransactionEntry } from "../api.js";
import { Ctx } from "../ctx.js";
import { bindDraft } from "../state.js";
import { clear, errorBanner, h, table } from "../dom.js";

function transactionRows(transactions: TransactionEntry[]): string[][] {
  return transactions.map((t) => [t.occurred_at, t.kind, t.reference_id]);
}

export function renderRegistry(root: HTMLElement, ctx: Ctx): void {
  clear(root);
  const draft = ctx.state.draftFor("registry");
  const results = h("div", { class: "results" });
  const detail = h("div", { class: "detail" });

  const query = h("input", {
    name: "q",
    placeholder: "Search by any name fragment",
  });
  bindDraft(query, draft, "q");

  async function openProfile(resident: Resident): Promise<void> {
    clear(detail);
    try {
      const { resident: full, transactions } = await ctx.api.getHistory(
        resident.resident_id,
      );
      detail.append(
        h("h3", {}, `${full.last_name}, ${full.first_name} ${full.middle_name}`),
        h("dl", {},
          h("dt", {}, "Resident ID"), h("dd", {}, full.resident_id),
          h("dt", {}, "Birthdate"), h("dd", {}, full.birthdate),
          h("dt", {}, "Gender"), h("dd", {}, full.gender),
          h("dt", {}, "Occupation"), h("dd", {}, full.occupation),
          h("dt", {}, "Residency"), h("dd", {}, full.residency_status),
          h("dt", {}, "Zone"), h("dd", {}, String(full.zone_id)),
          h("dt", {}, "Address"), h("dd", {}, full.address),
          h("dt", {}, "Mobile"), h("dd", {}, full.mobile_number ?? "—"),
        ),
        h("h4", {}, `Transactions (${transactions.length})`),
        transactions.length
          ? table(["When", "Kind", "Reference"], transactionRows(transactions))
          : h("p", { class: "empty" }, "No transactions yet."),
      );
    } catch (err) {
      detail.append(errorBanner((err as Error).message));
    }
  }

  async function search(): Promise<void> {
    clear(results);
    try {
      const { total, residents } = await ctx.api.listResidents(query.value.trim());
      if (!residents.length) {
        results.append(h("p", { class: "empty" }, "No residents match."));
        return;
      }
      const rows = residents.map((r) => [
        r.last_name,
        r.first_name,
        r.middle_name,
        h("button", {
          class: "view-profile",
          dataset: { residentId: r.resident_id },
          onclick: () => void openProfile(r),
        }, "VIEW"),
      ]);
      results.append(
        h("p", { class: "total" }, `${total} resident(s)`),
        table(["Lastname", "Firstname", "Middlename", "Profile"], rows,
          { class: "registry-table" }),
      );
    } catch (err) {
      results.append(errorBanner((err as Error).message));
    }
  }

  root.append(
    h("h2", {}, "Registration / Records"),
    h("form", {
      class: "toolbar",
      onsubmit: (ev: Event) => {
        ev.preventDefault();
        void search();
      },
    }, query, h("button", { type: "submit" }, "Search")),
    results,
    detail,
  );
  void search();
}
