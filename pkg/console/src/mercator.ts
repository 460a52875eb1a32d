// Web Mercator math for the slippy-tile map view.

export const TILE_SIZE = 256;

export function lonToWorldX(lon: number, zoom: number): number {
  return ((lon + 180) / 360) * TILE_SIZE * Math.pow(2, zoom);
}

export function latToWorldY(lat: number, zoom: number): number {
  const rad = (lat * Math.PI) / 180;
  const merc = Math.log(Math.tan(Math.PI / 4 + rad / 2));
  return ((1 - merc / Math.PI) / 2) * TILE_SIZE * Math.pow(2, zoom);
}

export interface Projector {
  toScreen(lat: number, lon: number): [number, number];
  widthPx: number;
  heightPx: number;
  tiles: { x: number; y: number; z: number; left: number; top: number }[];
}

export function makeProjector(
  centerLat: number,
  centerLon: number,
  zoom: number,
  widthPx: number,
  heightPx: number,
): Projector {
  const cx = lonToWorldX(centerLon, zoom);
  const cy = latToWorldY(centerLat, zoom);
  const left = cx - widthPx / 2;
  const top = cy - heightPx / 2;

  const tiles: Projector["tiles"] = [];
  const maxTile = Math.pow(2, zoom);
  const x0 = Math.floor(left / TILE_SIZE);
  const y0 = Math.floor(top / TILE_SIZE);
  const x1 = Math.floor((left + widthPx) / TILE_SIZE);
  const y1 = Math.floor((top + heightPx) / TILE_SIZE);
  for (let ty = y0; ty <= y1; ty++) {
    for (let tx = x0; tx <= x1; tx++) {
      if (ty < 0 || ty >= maxTile) continue;
      tiles.push({
        x: ((tx % maxTile) + maxTile) % maxTile,
        y: ty,
        z: zoom,
        left: tx * TILE_SIZE - left,
        top: ty * TILE_SIZE - top,
      });
    }
  }

  return {
    widthPx,
    heightPx,
    tiles,
    toScreen(lat: number, lon: number): [number, number] {
      return [lonToWorldX(lon, zoom) - left, latToWorldY(lat, zoom) - top];
    },
  };
}

export function tileUrl(template: string, x: number, y: number, z: number): string {
  return template
    .replace("{x}", String(x))
    .replace("{y}", String(y))
    .replace("{z}", String(z));
}
