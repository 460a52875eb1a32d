// Test harness: a scriptable fetch stub that records every payload it
// serves, so assertions can compare rendered DOM values against the exact
// intercepted API responses.

import { ApiClient } from "../src/api.js";
import { Ctx } from "../src/ctx.js";
import { ViewState } from "../src/state.js";
import session from "./fixtures/session.json";

export interface Route {
  method: string;
  path: RegExp;
  status?: number;
  json?: unknown;
  bytes?: Uint8Array;
  handler?: (url: string, init?: RequestInit) => { status?: number; json?: unknown; bytes?: Uint8Array };
}

export interface Intercepted {
  method: string;
  url: string;
  body: unknown;
  payload: unknown;
}

export function stubFetch(routes: Route[]): Intercepted[] {
  const intercepted: Intercepted[] = [];
  globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = (init?.method ?? "GET").toUpperCase();
    for (const route of routes) {
      if (route.method !== method || !route.path.test(url)) continue;
      const out = route.handler ? route.handler(url, init) : route;
      const status = out.status ?? 200;
      const requestBody = init?.body ? JSON.parse(String(init.body)) : undefined;
      if (out.bytes !== undefined) {
        intercepted.push({ method, url, body: requestBody, payload: out.bytes });
        const copy = new Uint8Array(out.bytes).buffer as ArrayBuffer;
        return new Response(copy, {
          status, headers: { "Content-Type": "text/csv" },
        });
      }
      intercepted.push({ method, url, body: requestBody, payload: out.json });
      return new Response(JSON.stringify(out.json ?? {}), {
        status, headers: { "Content-Type": "application/json" },
      });
    }
    throw new Error(`no stub route for ${method} ${url}`);
  }) as typeof fetch;
  return intercepted;
}

export function makeCtx(role = "secretary"): Ctx {
  sessionStorage.clear();
  const api = new ApiClient("");
  api.setSession({ ...session, role });
  const state = new ViewState();
  const navigations: string[] = [];
  const ctx: Ctx = {
    api,
    state,
    tileTemplate: "tiles/{z}/{x}/{y}.png",
    navigate: (view) => navigations.push(view),
  };
  (ctx as Ctx & { navigations: string[] }).navigations = navigations;
  return ctx;
}

export function mount(): HTMLElement {
  document.body.replaceChildren();
  const root = document.createElement("div");
  document.body.append(root);
  return root;
}

export async function waitFor(
  predicate: () => boolean,
  timeoutMs = 2000,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (predicate()) return;
    await new Promise((resolve) => setTimeout(resolve, 10));
  }
  throw new Error("waitFor timed out");
}

export function texts(root: ParentNode, selector: string): string[] {
  return Array.from(root.querySelectorAll(selector)).map(
    (el) => el.textContent ?? "");
}
