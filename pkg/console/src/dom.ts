// Small DOM helpers; no framework, the views build elements directly.

type Child = Node | string | null | undefined;

export function h<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, unknown> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const el = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (value == null) continue;
    if (key === "class") el.className = String(value);
    else if (key === "dataset") {
      for (const [k, v] of Object.entries(value as Record<string, string>)) {
        el.dataset[k] = v;
      }
    } else if (key.startsWith("on") && typeof value === "function") {
      el.addEventListener(key.slice(2), value as EventListener);
    } else if (key in el) {
      (el as unknown as Record<string, unknown>)[key] = value;
    } else {
      el.setAttribute(key, String(value));
    }
  }
  for (const child of children) {
    if (child == null) continue;
    el.append(child instanceof Node ? child : document.createTextNode(child));
  }
  return el;
}

export function svgEl(tag: string, attrs: Record<string, string | number>): SVGElement {
  const el = document.createElementNS("http://www.w3.org/2000/svg", tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

export function clear(el: HTMLElement): HTMLElement {
  el.replaceChildren();
  return el;
}

export function table(headers: string[], rows: Child[][], attrs: Record<string, unknown> = {}): HTMLTableElement {
  const head = h("tr", {});
  for (const text of headers) head.append(h("th", {}, text));
  const t = h("table", attrs, h("thead", {}, head));
  const body = h("tbody", {});
  for (const cells of rows) {
    const tr = h("tr", {});
    for (const cell of cells) {
      tr.append(h("td", {}, cell));
    }
    body.append(tr);
  }
  t.append(body);
  return t;
}

export function errorBanner(message: string): HTMLElement {
  return h("div", { class: "banner error", role: "alert" }, message);
}
