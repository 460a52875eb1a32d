import { ApiClient } from "./api.js";
import { Ctx } from "./ctx.js";
import { clear, h } from "./dom.js";
import { PROTECTED_VIEWS, VIEW_ACTIONS, ViewName, ViewState, roleAllows } from "./state.js";
import { renderAnalytics } from "./views/analytics.js";
import { renderBlotter } from "./views/blotter.js";
import { renderClearance } from "./views/clearance.js";
import { renderHealth } from "./views/health.js";
import { renderLogin } from "./views/login.js";
import { renderMap } from "./views/map.js";
import { renderOpendata } from "./views/opendata.js";
import { renderRegistry } from "./views/registry.js";
import { renderSms } from "./views/sms.js";

const VIEWS: Record<ViewName, (root: HTMLElement, ctx: Ctx) => void> = {
  login: renderLogin,
  registry: renderRegistry,
  clearance: renderClearance,
  blotter: renderBlotter,
  health: renderHealth,
  map: renderMap,
  sms: renderSms,
  opendata: renderOpendata,
  analytics: renderAnalytics,
};

const LABELS: Record<ViewName, string> = {
  registry: "Registry",
  clearance: "Clearance",
  blotter: "Blotter",
  health: "Health",
  map: "Map",
  sms: "SMS",
  analytics: "Statistics",
  opendata: "Open data",
  login: "Sign in",
};

export interface AppOptions {
  apiBase?: string;
  tileTemplate?: string;
}

export function startApp(mount: HTMLElement, options: AppOptions = {}): Ctx {
  const api = new ApiClient(options.apiBase ?? "");
  const state = new ViewState();
  const nav = h("nav", { class: "topnav" });
  const content = h("main", { class: "content" });
  mount.append(h("header", { class: "masthead" },
    h("h1", {}, "Barangay Information Console"), nav), content);

  const ctx: Ctx = {
    api,
    state,
    tileTemplate:
      options.tileTemplate ?? "https://tile.openstreetmap.org/{z}/{x}/{y}.png",
    navigate(view: ViewName) {
      // protected views are unreachable without a live session
      if (PROTECTED_VIEWS.includes(view) && !api.session) view = "login";
      state.activeView = view;
      window.location.hash = `#/${view}`;
      renderNav();
      clear(content);
      VIEWS[view](content, ctx);
    },
  };

  api.onUnauthorized = () => ctx.navigate("login");

  function renderNav(): void {
    clear(nav);
    const role = api.role;
    const views: ViewName[] = ["registry", "clearance", "blotter", "health",
      "map", "sms", "analytics", "opendata"];
    for (const view of views) {
      if (!roleAllows(role, VIEW_ACTIONS[view]) && VIEW_ACTIONS[view] !== null) {
        continue;
      }
      nav.append(h("button", {
        class: state.activeView === view ? "navlink active" : "navlink",
        dataset: { view },
        onclick: () => ctx.navigate(view),
      }, LABELS[view]));
    }
    if (api.session) {
      nav.append(h("button", {
        class: "navlink session",
        onclick: () => {
          api.signOut();
          ctx.navigate("opendata");
        },
      }, `Sign out (${api.session.username})`));
    } else {
      nav.append(h("button", {
        class: "navlink session",
        onclick: () => ctx.navigate("login"),
      }, "Sign in"));
    }
  }

  const fromHash = window.location.hash.replace(/^#\//, "") as ViewName;
  ctx.navigate(fromHash in VIEWS ? fromHash : "opendata");
  return ctx;
}

declare global {
  interface Window {
    BGIS_API_BASE?: string;
    BGIS_TILE_TEMPLATE?: string;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  startApp(document.getElementById("app")!, {
    apiBase: window.BGIS_API_BASE ?? "",
    tileTemplate: window.BGIS_TILE_TEMPLATE,
  });
}
