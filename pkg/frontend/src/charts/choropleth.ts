/** Choropleth of per-region prevalence on a diverging scale centered on the
 * England mean; region polygons come from a static GeoJSON asset keyed by
 * region code. */

import { escapeHtml } from "../format.js";
import type { GeoCollection } from "../types.js";

export interface RegionDisplay {
  name: string;
  rateText: string;
  deltaText: string;
  zText: string;
  zDisplay: number;
  selected: boolean;
}

function channel(a: number, b: number, t: number): number {
  return Math.round(a + (b - a) * t);
}

/** Piecewise-linear blue -> neutral -> red over display z in [-2, +2]. */
export function divergingColor(zDisplay: number): string {
  const clamped = Math.max(-2, Math.min(2, zDisplay));
  const neutral: [number, number, number] = [246, 244, 240];
  const blue: [number, number, number] = [33, 102, 172];
  const red: [number, number, number] = [178, 24, 43];
  const t = Math.abs(clamped) / 2;
  const end = clamped < 0 ? blue : red;
  const rgb = [0, 1, 2].map((i) => channel(neutral[i]!, end[i]!, t));
  return `rgb(${rgb[0]}, ${rgb[1]}, ${rgb[2]})`;
}

export function renderChoropleth(
  geo: GeoCollection,
  regions: Map<string, RegionDisplay>,
): string {
  const allPoints = geo.features.flatMap((f) => f.geometry.coordinates[0] ?? []);
  const lons = allPoints.map((p) => p[0] ?? 0);
  const lats = allPoints.map((p) => p[1] ?? 0);
  const minLon = Math.min(...lons);
  const maxLon = Math.max(...lons);
  const minLat = Math.min(...lats);
  const maxLat = Math.max(...lats);
  const width = 420;
  const height = 520;
  const sx = (width - 20) / (maxLon - minLon);
  const sy = (height - 20) / (maxLat - minLat);
  const project = ([lon, lat]: number[]): string => {
    const x = 10 + ((lon ?? 0) - minLon) * sx;
    const y = 10 + (maxLat - (lat ?? 0)) * sy;
    return `${x.toFixed(1)},${y.toFixed(1)}`;
  };
  const paths = geo.features
    .map((feature) => {
      const code = feature.properties.code;
      const display = regions.get(code);
      const fill = display ? divergingColor(display.zDisplay) : "var(--zone-idle)";
      const ring = feature.geometry.coordinates[0] ?? [];
      const points = ring.map(project).join(" ");
      const title = display
        ? `${display.name}\nrate ${display.rateText} (delta ${display.deltaText}, z ${display.zText})`
        : feature.properties.name;
      const selected = display?.selected ? " selected" : "";
      return (
        `<g class="region${selected}" data-code="${escapeHtml(code)}">` +
        `<title>${escapeHtml(title)}</title>` +
        `<polygon points="${points}" fill="${fill}"></polygon>` +
        `<text x="${project(centroid(ring)).split(",")[0]}" y="${project(centroid(ring)).split(",")[1]}" class="region-label">${escapeHtml(display?.name ?? code)}</text>` +
        `</g>`
      );
    })
    .join("");
  return `<svg class="choropleth" viewBox="0 0 ${width} ${height}" role="img" aria-label="prevalence map">${paths}</svg>`;
}

function centroid(ring: number[][]): number[] {
  const n = ring.length || 1;
  const lon = ring.reduce((sum, p) => sum + (p[0] ?? 0), 0) / n;
  const lat = ring.reduce((sum, p) => sum + (p[1] ?? 0), 0) / n;
  return [lon, lat];
}

/** Legend bar: diverging ramp with the England mean pinned at the neutral
 * midpoint. */
export function renderLegend(meanText: string): string {
  const stops = [-2, -1, 0, 1, 2]
    .map(
      (z) =>
        `<stop offset="${((z + 2) / 4) * 100}%" stop-color="${divergingColor(z)}"></stop>`,
    )
    .join("");
  return (
    `<div class="map-legend"><svg viewBox="0 0 240 34" aria-hidden="true">` +
    `<defs><linearGradient id="diverging">${stops}</linearGradient></defs>` +
    `<rect x="10" y="4" width="220" height="12" fill="url(#diverging)"></rect>` +
    `<line x1="120" y1="2" x2="120" y2="20" class="stroke"></line>` +
    `<text x="120" y="31" text-anchor="middle" class="legend-text">England mean (${escapeHtml(meanText)})</text>` +
    `</svg></div>`
  );
}
