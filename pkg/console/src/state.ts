// View state: active view, per-view form drafts, map viewport. Drafts are
// never auto-submitted; they only prefill inputs when a view re-renders.

export type ViewName =
  | "registry"
  | "clearance"
  | "blotter"
  | "health"
  | "map"
  | "sms"
  | "opendata"
  | "analytics"
  | "login";

export const PROTECTED_VIEWS: ViewName[] = [
  "registry", "clearance", "blotter", "health", "map", "sms", "analytics",
];

// minimum role grants mirrored from the service's matrix, used only to hide
// navigation entries; the service enforces the real decisions
export const VIEW_ACTIONS: Record<ViewName, string | null> = {
  registry: "registry.read",
  clearance: "clearance.issue",
  blotter: "blotter.read",
  health: "health.read",
  map: "geo.read",
  sms: "sms.send",
  analytics: "stats.read",
  opendata: null,
  login: null,
};

export const ROLE_ACTIONS: Record<string, string[]> = {
  secretary: [
    "registry.read", "registry.write", "blotter.read", "blotter.write",
    "case.update", "clearance.read", "clearance.issue", "clearance.override",
    "health.read", "health.write", "geo.read", "stats.read",
    "analytics.train", "sms.send", "advisory.publish", "opendata.read",
  ],
  treasurer: ["registry.read", "blotter.read", "clearance.read",
    "clearance.issue", "opendata.read"],
  health_worker: ["registry.read", "health.read", "health.write", "geo.read",
    "stats.read", "opendata.read"],
  lgu: ["opendata.read", "stats.read", "geo.read", "advisory.publish"],
  resident_public: ["opendata.read"],
};

export function roleAllows(role: string | null, action: string | null): boolean {
  if (action === null) return true;
  if (role === null) return false;
  return (ROLE_ACTIONS[role] ?? []).includes(action);
}

export interface MapViewport {
  centerLat: number;
  centerLon: number;
  zoom: number;
}

export class ViewState {
  activeView: ViewName = "opendata";
  drafts = new Map<string, Record<string, string>>();
  viewport: MapViewport = { centerLat: 14.561, centerLon: 121.034, zoom: 15 };

  draftFor(view: string): Record<string, string> {
    let draft = this.drafts.get(view);
    if (!draft) {
      draft = {};
      this.drafts.set(view, draft);
    }
    return draft;
  }

  clearDraft(view: string): void {
    this.drafts.delete(view);
  }
}

// binds an input to the draft store so navigation keeps what was typed
export function bindDraft(
  input: HTMLInputElement | HTMLTextAreaElement | HTMLSelectElement,
  draft: Record<string, string>,
  key: string,
  fallback = "",
): void {
  input.value = draft[key] ?? fallback;
  input.addEventListener("input", () => {
    draft[key] = input.value;
  });
}
