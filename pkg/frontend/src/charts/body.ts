/** Zoned 2D body figure with heat shading per zone weight. Zone ids come
 * from the body dictionary the engine was built with; unknown zones are
 * ignored so lexicon edits cannot break the figure. */

import { escapeHtml } from "../format.js";

export interface BodyZoneDatum {
  zoneId: string;
  weight: number;
  weightText: string;
}

interface ZoneShape {
  id: string;
  label: string;
  shapes: string; // svg fragments without fill
}

const ZONES: ZoneShape[] = [
  { id: "skin", label: "skin", shapes: `<rect x="30" y="6" width="140" height="380" rx="46"/>` },
  { id: "back", label: "back", shapes: `<rect x="94" y="96" width="12" height="112" rx="5"/>` },
  { id: "head", label: "head", shapes: `<circle cx="100" cy="45" r="32"/>` },
  { id: "eyes", label: "eyes", shapes: `<circle cx="88" cy="38" r="5"/><circle cx="112" cy="38" r="5"/>` },
  { id: "ears", label: "ears", shapes: `<circle cx="66" cy="45" r="6"/><circle cx="134" cy="45" r="6"/>` },
  { id: "mouth", label: "mouth", shapes: `<ellipse cx="100" cy="60" rx="11" ry="5"/>` },
  { id: "throat", label: "throat", shapes: `<rect x="90" y="78" width="20" height="18" rx="6"/>` },
  { id: "chest", label: "chest", shapes: `<rect x="62" y="96" width="76" height="54" rx="14"/>` },
  { id: "lungs", label: "lungs", shapes: `<ellipse cx="79" cy="116" rx="11" ry="17"/><ellipse cx="121" cy="116" rx="11" ry="17"/>` },
  { id: "heart", label: "heart", shapes: `<circle cx="100" cy="122" r="9"/>` },
  { id: "stomach", label: "stomach", shapes: `<ellipse cx="100" cy="166" rx="26" ry="15"/>` },
  { id: "gut", label: "gut", shapes: `<ellipse cx="100" cy="197" rx="30" ry="16"/>` },
  { id: "arms", label: "arms", shapes: `<rect x="36" y="100" width="18" height="92" rx="9"/><rect x="146" y="100" width="18" height="92" rx="9"/>` },
  { id: "hands", label: "hands", shapes: `<circle cx="45" cy="206" r="11"/><circle cx="155" cy="206" r="11"/>` },
  { id: "legs", label: "legs", shapes: `<rect x="72" y="228" width="22" height="124" rx="11"/><rect x="106" y="228" width="22" height="124" rx="11"/>` },
  { id: "feet", label: "feet", shapes: `<ellipse cx="80" cy="366" rx="15" ry="9"/><ellipse cx="120" cy="366" rx="15" ry="9"/>` },
  {
    id: "joints",
    label: "joints",
    shapes: [
      [62, 102], [138, 102], [45, 148], [155, 148], [83, 228], [117, 228], [83, 300], [117, 300],
    ]
      .map(([x, y]) => `<circle cx="${x}" cy="${y}" r="6"/>`)
      .join(""),
  },
];

export function heatAlpha(weight: number, maxWeight: number): number {
  if (maxWeight <= 0 || weight <= 0) return 0;
  return 0.15 + 0.8 * (weight / maxWeight);
}

export function renderBodyMap(zones: BodyZoneDatum[]): string {
  const byZone = new Map(zones.map((z) => [z.zoneId, z]));
  const maxWeight = Math.max(0, ...zones.map((z) => z.weight));
  const fragments = ZONES.map((shape) => {
    const datum = byZone.get(shape.id);
    const alpha = datum ? heatAlpha(datum.weight, maxWeight) : 0;
    const fill = alpha > 0 ? `rgba(193, 39, 45, ${alpha.toFixed(3)})` : "var(--zone-idle)";
    const title = datum
      ? `${shape.label}: ${datum.weightText}`
      : `${shape.label}: not mentioned`;
    return (
      `<g class="zone" data-zone="${shape.id}" data-weight="${datum ? escapeHtml(datum.weightText) : ""}">` +
      `<title>${escapeHtml(title)}</title>` +
      shape.shapes.replace(/\/>/g, ` fill="${fill}"/>`) +
      `</g>`
    );
  }).join("");
  return `<svg class="body-figure" viewBox="0 0 200 392" role="img" aria-label="body map">${fragments}</svg>`;
}
