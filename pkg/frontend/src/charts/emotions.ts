/** Ranked emotion list with plain pictographic glyphs (inline SVG faces, no
 * external emoji assets, so rendering is deterministic everywhere). */

import { escapeHtml } from "../format.js";

const FACE = `<circle cx="16" cy="16" r="14" class="face"/>`;
const EYES = `<circle cx="11" cy="13" r="1.8"/><circle cx="21" cy="13" r="1.8"/>`;

const GLYPHS: Record<string, string> = {
  anger: `${FACE}<path d="M7 9 L14 12 M25 9 L18 12" class="stroke"/>${EYES}<path d="M10 23 Q16 19 22 23" class="stroke"/>`,
  joy: `${FACE}${EYES}<path d="M9 19 Q16 26 23 19" class="stroke"/>`,
  disgust: `${FACE}${EYES}<path d="M10 22 Q13 20 16 22 Q19 24 22 22" class="stroke"/>`,
  fear: `${FACE}<path d="M8 9 Q11 7 14 9 M18 9 Q21 7 24 9" class="stroke"/>${EYES}<ellipse cx="16" cy="22" rx="3.5" ry="4.5" class="hole"/>`,
  anticipation: `${FACE}${EYES}<path d="M10 21 Q16 23 22 20" class="stroke"/><path d="M24 8 L27 5 M26 11 L29 9" class="stroke"/>`,
  trust: `${FACE}${EYES}<path d="M10 21 L22 21" class="stroke"/><path d="M22 14 L25 17 L29 11" class="stroke check"/>`,
  sadness: `${FACE}${EYES}<path d="M10 23 Q16 18 22 23" class="stroke"/><circle cx="22" cy="18" r="1.6" class="tear"/>`,
  surprise: `${FACE}<path d="M8 8 Q11 6 14 8 M18 8 Q21 6 24 8" class="stroke"/>${EYES}<circle cx="16" cy="22" r="3.5" class="hole"/>`,
};

export interface EmotionDatum {
  category: string;
  scoreText: string;
}

/** Ordered ranking; `order` is exactly the API's `rank` array (all
 * categories, no client-side re-sorting). */
export function renderEmotionRanking(order: string[], scores: Map<string, string>): string {
  const items = order
    .map((category, index) => {
      const glyph = GLYPHS[category] ?? FACE + EYES;
      const score = scores.get(category) ?? "";
      return (
        `<li class="emotion" data-category="${escapeHtml(category)}">` +
        `<span class="emotion-rank">${index + 1}</span>` +
        `<svg viewBox="0 0 32 32" class="emotion-glyph" role="img" aria-label="${escapeHtml(category)}">${glyph}</svg>` +
        `<span class="emotion-name">${escapeHtml(category)}</span>` +
        `<span class="emotion-score" title="association score">${escapeHtml(score)}</span>` +
        `</li>`
      );
    })
    .join("");
  return `<ol class="emotion-ranking">${items}</ol>`;
}
