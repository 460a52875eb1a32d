import { HotspotGridPayload, MarkerPayload, ZonePolygon } from "../api.js";
import { Ctx } from "../ctx.js";
import { bindDraft } from "../state.js";
import { clear, errorBanner, h, svgEl, table } from "../dom.js";
import { makeProjector, tileUrl } from "../mercator.js";

const BAND_FILL: Record<string, string> = {
  low: "rgba(255, 204, 0, 0.45)",
  medium: "rgba(255, 199, 44, 0.8)",
  high: "rgba(216, 42, 42, 0.75)",
};

const MAP_W = 720;
const MAP_H = 480;

function cellDegreeBounds(
  grid: HotspotGridPayload,
  row: number,
  col: number,
): [number, number, number, number] {
  const [lat0, lon0] = grid.origin;
  const dlat = grid.cell_size_m / 111_320;
  const dlon = grid.cell_size_m / (111_320 * Math.cos((lat0 * Math.PI) / 180));
  return [lat0 + row * dlat, lon0 + col * dlon, lat0 + (row + 1) * dlat, lon0 + (col + 1) * dlon];
}

export function renderMap(root: HTMLElement, ctx: Ctx): void {
  clear(root);
  const draft = ctx.state.draftFor("map");
  const canvas = h("div", { class: "map-canvas", style: `width:${MAP_W}px;height:${MAP_H}px` });
  const incidentPanel = h("div", { class: "incident-panel" });
  const status = h("div", { class: "status" });

  const kind = h("select", { name: "kind" },
    h("option", { value: "crime" }, "crime"),
    h("option", { value: "health" }, "health"));
  const from = h("input", { name: "from", type: "date" });
  const to = h("input", { name: "to", type: "date" });
  const cell = h("input", { name: "cell", type: "number", min: "10", step: "10" });
  const topK = h("input", { name: "k", type: "number", min: "1" });
  kind.value = draft.kind ?? "crime";
  kind.addEventListener("input", () => { draft.kind = kind.value; });
  bindDraft(from, draft, "from");
  bindDraft(to, draft, "to");
  bindDraft(cell, draft, "cell", "150");
  bindDraft(topK, draft, "k", "5");

  function showIncidents(gridCell: { row: number; col: number; count: number },
                         grid: HotspotGridPayload, markers: MarkerPayload[]): void {
    clear(incidentPanel);
    const [south, west, north, east] = cellDegreeBounds(grid, gridCell.row, gridCell.col);
    const inside = markers.filter((m) =>
      m.lat >= south && m.lat < north && m.lon >= west && m.lon < east);
    incidentPanel.append(
      h("h4", {}, `Cell (${gridCell.row}, ${gridCell.col}) — ${gridCell.count} incident(s)`),
      table(["When", "Label", "Reference"],
        inside.map((m) => [m.at, m.label, m.source_id])),
    );
  }

  async function refresh(): Promise<void> {
    clear(status);
    clear(canvas);
    let zones: ZonePolygon[];
    let markers: MarkerPayload[];
    let grid: HotspotGridPayload;
    try {
      zones = (await ctx.api.zones()).zones;
      markers = (await ctx.api.markers(kind.value, from.value, to.value)).markers;
      grid = await ctx.api.hotspots(kind.value, Number(cell.value),
        Number(topK.value), from.value, to.value);
    } catch (err) {
      status.append(
        errorBanner(`Could not load geodata: ${(err as Error).message}`),
        h("button", { onclick: () => void refresh() }, "Retry"),
      );
      return;
    }

    const viewport = ctx.state.viewport;
    const lats = zones.flatMap((z) => z.boundary.map((v) => v[0]));
    const lons = zones.flatMap((z) => z.boundary.map((v) => v[1]));
    viewport.centerLat = (Math.min(...lats) + Math.max(...lats)) / 2;
    viewport.centerLon = (Math.min(...lons) + Math.max(...lons)) / 2;
    const projector = makeProjector(viewport.centerLat, viewport.centerLon,
      viewport.zoom, MAP_W, MAP_H);

    for (const tile of projector.tiles) {
      canvas.append(h("img", {
        class: "tile",
        src: tileUrl(ctx.tileTemplate, tile.x, tile.y, tile.z),
        style: `left:${tile.left}px;top:${tile.top}px`,
        alt: "",
      }));
    }

    const overlay = svgEl("svg", {
      width: MAP_W, height: MAP_H, class: "overlay",
      viewBox: `0 0 ${MAP_W} ${MAP_H}`,
    });

    for (const zone of zones) {
      const points = zone.boundary
        .map(([lat, lon]) => projector.toScreen(lat, lon).join(","))
        .join(" ");
      overlay.append(svgEl("polygon", {
        points, class: "zone-polygon", "data-zone": zone.zone_id,
      }));
    }

    for (let r = 0; r < grid.rows; r++) {
      for (let c = 0; c < grid.cols; c++) {
        const count = grid.counts[r][c];
        if (count === 0) continue;
        const band = grid.bands[r][c];
        const [south, west, north, east] = cellDegreeBounds(grid, r, c);
        const [x0, y0] = projector.toScreen(north, west);
        const [x1, y1] = projector.toScreen(south, east);
        const rect = svgEl("rect", {
          x: x0, y: y0, width: x1 - x0, height: y1 - y0,
          fill: BAND_FILL[band] ?? "transparent",
          class: `hotspot-cell band-${band}`,
          "data-row": r, "data-col": c, "data-count": count,
        });
        rect.addEventListener("click", () =>
          showIncidents({ row: r, col: c, count }, grid, markers));
        overlay.append(rect);
        const label = svgEl("text", {
          x: (x0 + x1) / 2, y: (y0 + y1) / 2 + 4,
          class: "cell-count", "text-anchor": "middle",
        });
        label.textContent = String(count);
        overlay.append(label);
      }
    }

    for (const m of markers) {
      const [x, y] = projector.toScreen(m.lat, m.lon);
      const dot = svgEl("circle", {
        cx: x, cy: y, r: 4, class: `marker marker-${m.kind}`,
      });
      dot.append(svgEl("title", {}));
      dot.querySelector("title")!.textContent = `${m.label} (${m.at})`;
      overlay.append(dot);
    }

    canvas.append(overlay);
    status.append(h("p", { class: "total" },
      `${markers.length} ${kind.value} marker(s); top cells: ` +
      grid.top.map((t) => `${t.count}@(${t.row},${t.col})`).join("  ")));
  }

  const zoomIn = h("button", { onclick: () => { ctx.state.viewport.zoom++; void refresh(); } }, "+");
  const zoomOut = h("button", { onclick: () => { ctx.state.viewport.zoom--; void refresh(); } }, "−");

  root.append(
    h("h2", {}, "Geo-based map"),
    h("form", {
      class: "toolbar",
      onsubmit: (ev: Event) => { ev.preventDefault(); void refresh(); },
    },
      h("label", {}, "Layer", kind),
      h("label", {}, "From", from),
      h("label", {}, "To", to),
      h("label", {}, "Cell (m)", cell),
      h("label", {}, "Top-k", topK),
      h("button", { type: "submit" }, "Apply"),
      zoomIn, zoomOut,
    ),
    canvas,
    status,
    incidentPanel,
  );
  void refresh();
}
