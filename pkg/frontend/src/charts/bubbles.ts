/** Packed bubble chart as an SVG string. Blue bubbles carry the expected
 * concepts, green the emerging ones; bubble area is proportional to the
 * served weight and hovering reveals the full associated-condition list. */

import { escapeHtml } from "../format.js";

export interface BubbleDatum {
  conceptId: string;
  name: string;
  weight: number;
  weightText: string;
  count: number;
  df: number;
  conditions: string[];
  label: "expected" | "emerging";
}

export interface PlacedBubble extends BubbleDatum {
  x: number;
  y: number;
  r: number;
}

/** Deterministic spiral packing: circles sorted by size then id, each placed
 * at the first collision-free spot on an outward spiral. */
export function packBubbles(data: BubbleDatum[], targetRadius = 150): PlacedBubble[] {
  if (data.length === 0) return [];
  const totalWeight = data.reduce((sum, d) => sum + d.weight, 0);
  // area budget: bubbles fill roughly 60% of the target disc
  const scale = Math.sqrt((0.6 * targetRadius * targetRadius) / totalWeight);
  const sorted = [...data].sort(
    (a, b) => b.weight - a.weight || (a.conceptId < b.conceptId ? -1 : 1),
  );
  const placed: PlacedBubble[] = [];
  for (const datum of sorted) {
    const r = Math.max(4, scale * Math.sqrt(datum.weight));
    let x = 0;
    let y = 0;
    if (placed.length > 0) {
      for (let step = 0; ; step += 1) {
        const angle = step * 0.37;
        const radius = 2 + angle * 2.2;
        x = radius * Math.cos(angle);
        y = radius * Math.sin(angle);
        const collides = placed.some(
          (other) => Math.hypot(other.x - x, other.y - y) < other.r + r + 1.5,
        );
        if (!collides) break;
      }
    }
    placed.push({ ...datum, x, y, r });
  }
  return placed;
}

function tooltip(bubble: BubbleDatum, conditionNames: Record<string, string>): string {
  const others = bubble.conditions
    .map((cid) => conditionNames[cid] ?? cid)
    .join(", ");
  return (
    `${bubble.name}\nweight ${bubble.weightText} · ${bubble.count} mentions\n` +
    `appears in ${bubble.df} condition${bubble.df === 1 ? "" : "s"}: ${others}`
  );
}

export function renderBubbleChart(
  title: string,
  data: BubbleDatum[],
  conditionNames: Record<string, string>,
): string {
  const placed = packBubbles(data);
  if (placed.length === 0) {
    return `<div class="bubble-chart empty"><h4>${escapeHtml(title)}</h4><p class="empty-note">no mentions</p></div>`;
  }
  const pad = 8;
  const minX = Math.min(...placed.map((b) => b.x - b.r)) - pad;
  const minY = Math.min(...placed.map((b) => b.y - b.r)) - pad;
  const maxX = Math.max(...placed.map((b) => b.x + b.r)) + pad;
  const maxY = Math.max(...placed.map((b) => b.y + b.r)) + pad;
  const groups = placed
    .map((bubble) => {
      const label =
        bubble.r >= 18
          ? `<text x="${bubble.x.toFixed(1)}" y="${bubble.y.toFixed(1)}" class="bubble-label">${escapeHtml(
              bubble.name.length > 14 ? bubble.name.slice(0, 13) + "…" : bubble.name,
            )}</text>`
          : "";
      return (
        `<g class="bubble ${bubble.label}" data-concept="${escapeHtml(bubble.conceptId)}" data-weight="${escapeHtml(bubble.weightText)}">` +
        `<title>${escapeHtml(tooltip(bubble, conditionNames))}</title>` +
        `<circle cx="${bubble.x.toFixed(1)}" cy="${bubble.y.toFixed(1)}" r="${bubble.r.toFixed(1)}"></circle>` +
        label +
        `</g>`
      );
    })
    .join("");
  const viewBox = `${minX.toFixed(1)} ${minY.toFixed(1)} ${(maxX - minX).toFixed(1)} ${(maxY - minY).toFixed(1)}`;
  return (
    `<div class="bubble-chart"><h4>${escapeHtml(title)}</h4>` +
    `<svg viewBox="${viewBox}" role="img" aria-label="${escapeHtml(title)}">${groups}</svg></div>`
  );
}
