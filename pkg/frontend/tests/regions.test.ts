import { describe, expect, it } from "vitest";

import { canSelectMore, toggleRegion } from "../src/regions.js";
import { MAX_REGIONS } from "../src/state.js";

describe("region selection cap", () => {
  it("adds regions up to four", () => {
    let selected: string[] = [];
    for (const code of ["a", "b", "c", "d"]) {
      selected = toggleRegion(selected, code);
    }
    expect(selected).toEqual(["a", "b", "c", "d"]);
    expect(canSelectMore(selected)).toBe(false);
  });

  it("a fifth selection is unreachable", () => {
    const four = ["a", "b", "c", "d"];
    expect(toggleRegion(four, "e")).toEqual(four);
    // exhaustive: whatever code is clicked, length never exceeds the cap
    let selected: string[] = [];
    for (const code of ["r1", "r2", "r3", "r4", "r5", "r6", "r7"]) {
      selected = toggleRegion(selected, code);
      expect(selected.length).toBeLessThanOrEqual(MAX_REGIONS);
    }
  });

  it("toggling an already-selected region removes it", () => {
    expect(toggleRegion(["a", "b"], "a")).toEqual(["b"]);
  });

  it("a full selection can still be reduced and refilled", () => {
    let selected = ["a", "b", "c", "d"];
    selected = toggleRegion(selected, "b");
    expect(selected).toEqual(["a", "c", "d"]);
    selected = toggleRegion(selected, "e");
    expect(selected).toEqual(["a", "c", "d", "e"]);
  });
});
