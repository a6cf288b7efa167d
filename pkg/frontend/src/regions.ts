/** Region comparison selection, capped at four. The cap is enforced here so
 * no UI path can produce a fifth selection (the API would 400 anyway). */

import { MAX_REGIONS } from "./state.js";

export function canSelectMore(selected: readonly string[]): boolean {
  return selected.length < MAX_REGIONS;
}

/** Toggle a region in/out of the comparison; adding beyond the cap is a
 * no-op that returns the selection unchanged. */
export function toggleRegion(selected: readonly string[], code: string): string[] {
  if (selected.includes(code)) {
    return selected.filter((existing) => existing !== code);
  }
  if (!canSelectMore(selected)) {
    return [...selected];
  }
  return [...selected, code];
}
