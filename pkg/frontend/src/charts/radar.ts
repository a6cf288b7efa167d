/** Radar charts comparing up to four regions across the England-relative
 * axes (prevalence, population, density, deprivation). */

import { escapeHtml } from "../format.js";
import type { ComparePayload } from "../types.js";

export const REGION_COLORS = ["#2f6fb2", "#2e9e63", "#c77d2b", "#8d5fb0"] as const;

const CENTER = 130;
const RADIUS = 95;

function axisPoint(axisIndex: number, axisCount: number, zDisplay: number): [number, number] {
  const angle = -Math.PI / 2 + (2 * Math.PI * axisIndex) / axisCount;
  // display z in [-2, +2] maps to 12%..100% of the radius
  const t = (Math.max(-2, Math.min(2, zDisplay)) + 2) / 4;
  const r = RADIUS * (0.12 + 0.88 * t);
  return [CENTER + r * Math.cos(angle), CENTER + r * Math.sin(angle)];
}

export function renderRadar(
  payload: ComparePayload,
  regionNames: Record<string, string>,
  zTexts: Map<string, Map<string, string>>,
): string {
  const axes = payload.axis_order;
  const rings = [-2, -1, 0, 1, 2]
    .map((z) => {
      const t = (z + 2) / 4;
      const r = RADIUS * (0.12 + 0.88 * t);
      const cls = z === 0 ? "ring mean-ring" : "ring";
      return `<circle cx="${CENTER}" cy="${CENTER}" r="${r.toFixed(1)}" class="${cls}"></circle>`;
    })
    .join("");
  const spokes = axes
    .map((axis, i) => {
      const [x, y] = axisPoint(i, axes.length, 2);
      const [lx, ly] = [CENTER + (x - CENTER) * 1.18, CENTER + (y - CENTER) * 1.18];
      return (
        `<line x1="${CENTER}" y1="${CENTER}" x2="${x.toFixed(1)}" y2="${y.toFixed(1)}" class="spoke"></line>` +
        `<text x="${lx.toFixed(1)}" y="${ly.toFixed(1)}" text-anchor="middle" class="axis-label">${escapeHtml(axis)}</text>`
      );
    })
    .join("");
  const polygons = payload.regions
    .map((region, index) => {
      const color = REGION_COLORS[index % REGION_COLORS.length];
      const points = axes
        .map((axis, i) => {
          const value = region.axes[axis]?.z_display ?? 0;
          const [x, y] = axisPoint(i, axes.length, value);
          return `${x.toFixed(1)},${y.toFixed(1)}`;
        })
        .join(" ");
      const detail = axes
        .map((axis) => `${axis} z ${zTexts.get(region.code)?.get(axis) ?? ""}`)
        .join("\n");
      const name = regionNames[region.code] ?? region.code;
      return (
        `<g class="radar-region" data-code="${escapeHtml(region.code)}">` +
        `<title>${escapeHtml(`${name}\n${detail}`)}</title>` +
        `<polygon points="${points}" fill="${color}22" stroke="${color}"></polygon>` +
        `</g>`
      );
    })
    .join("");
  const legend = payload.regions
    .map((region, index) => {
      const color = REGION_COLORS[index % REGION_COLORS.length];
      const name = regionNames[region.code] ?? region.code;
      return `<li><span class="chip" style="background:${color}"></span>${escapeHtml(name)}</li>`;
    })
    .join("");
  return (
    `<div class="radar-wrap">` +
    `<svg viewBox="0 0 260 260" class="radar" role="img" aria-label="region comparison">` +
    rings +
    spokes +
    polygons +
    `</svg><ul class="radar-legend">${legend}</ul></div>`
  );
}
