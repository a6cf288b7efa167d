/** View state and its permalink encoding (`?c=<condition>&l=<layer>&r=a,b`).
 *
 * The URL is the share mechanism: encode/decode must round-trip every valid
 * state exactly, and decoding is the only way to enter a layer out of scroll
 * order.
 */

export const LAYERS = [
  "intro",
  "bio",
  "psycho_bubbles",
  "psycho_body",
  "social_map",
  "social_compare",
] as const;

export type Layer = (typeof LAYERS)[number];

export const MAX_REGIONS = 4;

export interface ViewState {
  condition: string | null;
  layer: Layer;
  regions: string[];
}

export const INITIAL_STATE: ViewState = { condition: null, layer: "intro", regions: [] };

export function isLayer(value: string): value is Layer {
  return (LAYERS as readonly string[]).includes(value);
}

export function isValidState(state: ViewState): boolean {
  if (state.layer !== "intro" && state.condition === null) return false;
  if (state.regions.length > MAX_REGIONS) return false;
  if (new Set(state.regions).size !== state.regions.length) return false;
  return true;
}

/** Canonical query string for a state (`?c=<condition>&l=<layer>&r=a,b`);
 * the inverse of `decodeState`. Built by hand so the region separator stays
 * a literal comma. */
export function encodeState(state: ViewState): string {
  const parts: string[] = [];
  if (state.condition !== null) parts.push(`c=${encodeURIComponent(state.condition)}`);
  if (state.layer !== "intro") parts.push(`l=${state.layer}`);
  if (state.regions.length > 0) {
    parts.push(`r=${state.regions.map(encodeURIComponent).join(",")}`);
  }
  return parts.length > 0 ? `?${parts.join("&")}` : "";
}

/** Parse a query string back into a state; malformed parts fall back to the
 * intro so an invalid permalink can never jump the Martini Glass order. */
export function decodeState(query: string): ViewState {
  const params = new URLSearchParams(query.startsWith("?") ? query.slice(1) : query);
  const condition = params.get("c");
  const rawLayer = params.get("l") ?? "intro";
  const rawRegions = params.get("r") ?? "";
  const regions: string[] = [];
  for (const code of rawRegions.split(",")) {
    if (code && !regions.includes(code) && regions.length < MAX_REGIONS) {
      regions.push(code);
    }
  }
  let layer: Layer = isLayer(rawLayer) ? rawLayer : "intro";
  if (condition === null) layer = "intro";
  return { condition, layer, regions };
}
